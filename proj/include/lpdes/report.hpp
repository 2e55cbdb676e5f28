#pragma once

// Machine-readable output of the harness: benchmark reports as JSON and CSV,
// and the files written for an instance (program, completion, metadata).
// The JSON layout is described in docs/report_schema.md.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "lpdes/attack.hpp"
#include "lpdes/program_text.hpp"
#include "lpdes/translate.hpp"

namespace lpdes {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json to_json(const TrialRecord& t) {
    nlohmann::json j{
        {"encoding", to_string(t.encoding)},
        {"rounds", t.rounds},
        {"blocks", t.blocks},
        {"seed", t.seed},
        {"time_s", t.time_s},
        {"preprocess_s", t.preprocess_s},
        {"branches", t.branches},
        {"conflicts", t.conflicts},
        {"success", t.success},
        {"recovered_key", t.recovered_key ? nlohmann::json(*t.recovered_key) : nlohmann::json(nullptr)},
    };
    if (!t.error.empty()) j["error"] = t.error;
    return j;
}

inline nlohmann::json to_json(const BenchReport& r) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : r.trials) trials.push_back(to_json(t));
    return nlohmann::json{
        {"schema_version", kReportSchemaVersion},
        {"master_seed", r.master_seed},
        {"trials", trials},
        {"aggregate",
         {{"count", r.trials.size()},
          {"mean_time_s", r.mean_time_s},
          {"mean_preprocess_s", r.mean_preprocess_s},
          {"mean_branches", r.mean_branches},
          {"mean_conflicts", r.mean_conflicts},
          {"success_rate", r.success_rate}}},
        {"environment",
         {{"jobs", r.jobs},
          {"hardware_threads", std::thread::hardware_concurrency()},
          {"compiler", __VERSION__},
          {"prng", "splitmix64"}}},
    };
}

inline const char* kCsvHeader = "encoding,rounds,blocks,seed,time_s,branches,conflicts,success";

inline std::string to_csv(const BenchReport& r) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& t : r.trials)
        os << to_string(t.encoding) << ',' << t.rounds << ',' << t.blocks << ',' << t.seed << ',' << t.time_s << ','
           << t.branches << ',' << t.conflicts << ',' << (t.success ? 1 : 0) << '\n';
    return os.str();
}

inline nlohmann::json instance_json(const AttackInstance& inst, bool reveal_key) {
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.plaintexts.size(); ++i)
        pairs.push_back({{"plaintext", inst.plaintexts[i].to_hex()}, {"ciphertext", inst.ciphertexts[i].to_hex()}});
    nlohmann::json j{{"rounds", inst.rounds}, {"blocks", inst.blocks()}, {"seed", inst.seed}, {"pairs", pairs}};
    if (reveal_key) j["hidden_key"] = inst.hidden_key.to_hex();
    return j;
}

inline AttackInstance instance_from_json(const nlohmann::json& j) {
    AttackInstance inst;
    inst.rounds = j.at("rounds").get<int>();
    inst.seed = j.value("seed", std::uint64_t{0});
    for (const auto& p : j.at("pairs")) {
        inst.plaintexts.push_back(BitBlock::from_hex(p.at("plaintext").get<std::string>()));
        inst.ciphertexts.push_back(BitBlock::from_hex(p.at("ciphertext").get<std::string>()));
    }
    if (j.contains("hidden_key")) inst.hidden_key = BitBlock::from_hex(j.at("hidden_key").get<std::string>());
    return inst;
}

inline Program attack_program(const AttackInstance& inst, Encoding enc) {
    if (enc == Encoding::Direct) return instantiate(direct_attack_instance(inst));
    return emit_program(optimized_equivalences(optimized_attack_instance(inst))).program;
}

struct ArtifactPaths {
    std::filesystem::path program, cnf, metadata;
};

// Writes <name>.lp, <name>.cnf and <name>.json into out_dir (created if missing).
inline ArtifactPaths emit_artifacts(const AttackInstance& inst, Encoding enc, const std::filesystem::path& out_dir,
                                    const std::string& name, bool reveal_key = false) {
    std::filesystem::create_directories(out_dir);
    const Program pr = attack_program(inst, enc);
    ArtifactPaths paths{out_dir / (name + ".lp"), out_dir / (name + ".cnf"), out_dir / (name + ".json")};
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream os(p, std::ios::binary);
        if (!os) throw Error("cannot write " + p.string());
        os << text;
        if (!os) throw Error("write failed: " + p.string());
    };
    const std::string text = program_to_text(pr);
    write(paths.program, text);
    // number variables as a reader of the .lp file would, so emit-dimacs reproduces this file
    write(paths.cnf, emit_dimacs(completion(parse_program(text))));
    auto meta = instance_json(inst, reveal_key);
    meta["encoding"] = to_string(enc);
    meta["rules"] = pr.size();
    meta["atoms"] = pr.atom_count();
    write(paths.metadata, meta.dump(2) + "\n");
    return paths;
}

} // namespace lpdes

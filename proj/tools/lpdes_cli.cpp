#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpdes.hpp"
#include "lpdes/report.hpp"

using namespace lpdes;
namespace fs = std::filesystem;

namespace {

fs::path default_out_dir() {
    if (const char* env = std::getenv("LPDES_OUT_DIR"); env && *env) return env;
    return "out";
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write " + path);
    os << text;
}

struct SolverFlags {
    bool no_backjump = false;
    bool no_lookahead = false;
    bool failed_literals = false;
    bool verify = false;
    std::uint64_t max_branches = 1'000'000;
    double time_limit = 600.0;

    void add(CLI::App* app) {
        app->add_flag("--no-backjump", no_backjump, "Backtrack chronologically");
        app->add_flag("--no-lookahead", no_lookahead, "Decide on the lowest unassigned atom");
        app->add_flag("--failed-literals", failed_literals, "Assert complements of failed lookahead literals");
        app->add_flag("--verify", verify, "Check each model against the definition");
        app->add_option("--max-branches", max_branches, "Branch cap per search");
        app->add_option("--time-limit", time_limit, "Seconds per search");
    }
    SolverConfig config() const {
        SolverConfig c;
        c.backjumping = !no_backjump;
        c.lookahead = !no_lookahead;
        c.failed_literals = failed_literals;
        c.verify = verify;
        c.max_branches = max_branches;
        c.time_limit_s = time_limit;
        return c;
    }
};

nlohmann::json stats_json(const SearchStats& s) {
    return {{"branches", s.branches},
            {"conflicts", s.conflicts},
            {"propagations", s.propagations},
            {"failed_literals", s.failed_literals},
            {"models", s.models},
            {"time_s", s.wall_time_s}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable-model encodings of DES and a small solver for them"};
    app.require_subcommand(1);

    int cipher_rounds = 16, rounds = 1;
    std::string key_hex, pt_hex, ct_hex;
    bool via_program = false;
    auto* enc = app.add_subcommand("encrypt", "Encrypt one block");
    enc->add_option("--key", key_hex, "Key, 16 hex digits")->required();
    enc->add_option("--pt", pt_hex, "Plaintext, 16 hex digits")->required();
    enc->add_option("--rounds", cipher_rounds, "Rounds (1-16)")->check(CLI::Range(1, 16));
    enc->add_flag("--via-program", via_program, "Compute through the direct encoding and the solver");

    auto* dec = app.add_subcommand("decrypt", "Decrypt one block");
    dec->add_option("--key", key_hex, "Key, 16 hex digits")->required();
    dec->add_option("--ct", ct_hex, "Ciphertext, 16 hex digits")->required();
    dec->add_option("--rounds", cipher_rounds, "Rounds (1-16)")->check(CLI::Range(1, 16));
    dec->add_flag("--via-program", via_program, "Compute through the direct encoding and the solver");

    int blocks = 1;
    std::uint64_t seed = 1;
    std::string mode = "direct", out_dir, name = "instance";
    bool reveal_key = false;
    auto* encode = app.add_subcommand("encode", "Write program, completion and metadata of a random attack instance");
    encode->add_option("--mode", mode, "direct or optimized");
    encode->add_option("--rounds", rounds, "Rounds (1-16)")->check(CLI::Range(1, 16));
    encode->add_option("--blocks", blocks, "Plaintext/ciphertext pairs")->check(CLI::PositiveNumber);
    encode->add_option("--seed", seed, "Instance seed");
    encode->add_option("--out", out_dir, "Output directory (default $LPDES_OUT_DIR or ./out)");
    encode->add_option("--name", name, "Base name of the written files");
    encode->add_flag("--reveal-key", reveal_key, "Store the hidden key in the metadata");

    std::string program_file;
    std::size_t models = 1;
    bool json_out = false, trace = false;
    SolverFlags sflags;
    auto* solve_cmd = app.add_subcommand("solve", "Find stable models of a program file");
    solve_cmd->add_option("program", program_file, "Program text, '-' for stdin")->required();
    solve_cmd->add_option("-n,--models", models, "Models to list, 0 for all");
    solve_cmd->add_flag("--json", json_out, "Print JSON");
    solve_cmd->add_flag("--trace", trace, "Print decisions and conflicts to stderr");
    sflags.add(solve_cmd);

    std::string encoding = "direct";
    auto* attack = app.add_subcommand("attack", "Recover the key of a random instance");
    attack->add_option("--rounds", rounds, "Rounds (1-16)")->check(CLI::Range(1, 16));
    attack->add_option("--blocks", blocks, "Plaintext/ciphertext pairs")->check(CLI::PositiveNumber);
    attack->add_option("--encoding", encoding, "direct or optimized");
    attack->add_option("--seed", seed, "Instance seed");
    attack->add_flag("--json", json_out, "Print JSON");
    sflags.add(attack);

    int trials = 10;
    unsigned jobs = 1;
    std::string json_file, csv_file;
    auto* bench = app.add_subcommand("bench", "Repeated attacks with per-trial seeds from a master seed");
    bench->add_option("--rounds", rounds, "Rounds (1-16)")->check(CLI::Range(1, 16));
    bench->add_option("--blocks", blocks, "Plaintext/ciphertext pairs")->check(CLI::PositiveNumber);
    bench->add_option("--encoding", encoding, "direct or optimized");
    bench->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
    bench->add_option("--jobs", jobs, "Trials run at once");
    bench->add_option("--seed", seed, "Master seed");
    bench->add_option("--json", json_file, "Write the JSON report here ('-' for stdout)");
    bench->add_option("--csv", csv_file, "Write the CSV table here ('-' for stdout)");
    sflags.add(bench);

    std::string dimacs_out;
    auto* dimacs = app.add_subcommand("emit-dimacs", "Clark completion of a tight program in DIMACS form");
    dimacs->add_option("program", program_file, "Program text, '-' for stdin")->required();
    dimacs->add_option("-o,--out", dimacs_out, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enc || *dec) {
            const bool is_enc = static_cast<bool>(*enc);
            const BitBlock key = BitBlock::from_hex(key_hex);
            const BitBlock in = BitBlock::from_hex(is_enc ? pt_hex : ct_hex);
            if (!via_program) {
                std::cout << (is_enc ? encrypt(in, key, cipher_rounds) : decrypt(in, key, cipher_rounds)).to_hex() << '\n';
                return 0;
            }
            DirectInstance d;
            d.rounds = cipher_rounds;
            d.mode = is_enc ? DirectMode::Encrypt : DirectMode::Decrypt;
            d.key = key;
            (is_enc ? d.plaintexts : d.ciphertexts).push_back(in);
            const Program p = instantiate(d);
            const auto res = solve(p);
            if (!res.satisfiable) throw Error("encoding has no stable model");
            const BitBlock out = is_enc ? cipher_from_model(p, res.model, 1) : plaintext_from_model(p, res.model, 1);
            std::cout << out.to_hex() << '\n';
            return 0;
        }
        if (*encode) {
            const auto inst = gen_instance(rounds, blocks, seed);
            const auto paths =
                emit_artifacts(inst, parse_encoding(mode), out_dir.empty() ? default_out_dir() : fs::path(out_dir), name, reveal_key);
            std::cout << paths.program.string() << '\n' << paths.cnf.string() << '\n' << paths.metadata.string() << '\n';
            return 0;
        }
        if (*solve_cmd) {
            const Program p = parse_program(slurp(program_file));
            SolverConfig cfg = sflags.config();
            if (trace) cfg.trace = &std::cerr;
            const auto res = enumerate_with_stats(p, models, {}, cfg);
            if (json_out) {
                nlohmann::json ms = nlohmann::json::array();
                for (const auto& m : res.models) {
                    nlohmann::json atoms = nlohmann::json::array();
                    for (AtomId a : m) atoms.push_back(p.atom_name(a));
                    ms.push_back(atoms);
                }
                std::cout << nlohmann::json{{"satisfiable", !res.models.empty()}, {"models", ms}, {"stats", stats_json(res.stats)}}.dump(2)
                          << '\n';
            } else {
                if (res.models.empty()) std::cout << "UNSATISFIABLE\n";
                for (std::size_t i = 0; i < res.models.size(); ++i) {
                    std::cout << "Answer " << i + 1 << ':';
                    for (AtomId a : res.models[i]) std::cout << ' ' << p.atom_name(a);
                    std::cout << '\n';
                }
                const auto& s = res.stats;
                std::cout << "branches " << s.branches << " conflicts " << s.conflicts << " propagations "
                          << s.propagations << " time " << s.wall_time_s << "s\n";
            }
            return res.models.empty() ? 20 : 10;
        }
        if (*attack) {
            const auto inst = gen_instance(rounds, blocks, seed);
            const auto out = run_attack(inst, parse_encoding(encoding), sflags.config());
            if (json_out) {
                std::cout << nlohmann::json{{"instance", instance_json(inst, false)},
                                            {"encoding", to_string(parse_encoding(encoding))},
                                            {"recovered_key", out.key.to_hex()},
                                            {"rules", out.rules},
                                            {"atoms", out.atoms},
                                            {"preprocess_s", out.preprocess_s},
                                            {"stats", stats_json(out.stats)}}
                                 .dump(2)
                          << '\n';
            } else {
                std::cout << "key " << out.key.to_hex() << " (re-encrypts all " << inst.blocks() << " pairs)\n"
                          << "rules " << out.rules << " atoms " << out.atoms << '\n'
                          << "branches " << out.stats.branches << " conflicts " << out.stats.conflicts << " time "
                          << out.stats.wall_time_s << "s\n";
            }
            return 0;
        }
        if (*bench) {
            const auto rep = benchmark(rounds, blocks, trials, parse_encoding(encoding), seed, jobs, sflags.config());
            if (!json_file.empty()) write_text(json_file, to_json(rep).dump(2) + "\n");
            if (!csv_file.empty()) write_text(csv_file, to_csv(rep));
            if (json_file.empty() && csv_file.empty()) {
                std::cout << "trials " << rep.trials.size() << " success " << rep.success_rate << " mean branches "
                          << rep.mean_branches << " mean time " << rep.mean_time_s << "s\n";
            }
            return rep.success_rate == 1.0 ? 0 : 1;
        }
        if (*dimacs) {
            write_text(dimacs_out, emit_dimacs(completion(parse_program(slurp(program_file)))));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

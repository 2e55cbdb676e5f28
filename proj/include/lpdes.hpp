#pragma once

// Everything except the JSON report writer (lpdes/report.hpp), which needs
// nlohmann/json.

#include "lpdes/attack.hpp"
#include "lpdes/bitblock.hpp"
#include "lpdes/bool_expr.hpp"
#include "lpdes/cnf.hpp"
#include "lpdes/des.hpp"
#include "lpdes/des_tables.hpp"
#include "lpdes/encode_direct.hpp"
#include "lpdes/encode_optimized.hpp"
#include "lpdes/errors.hpp"
#include "lpdes/logic_program.hpp"
#include "lpdes/minimize.hpp"
#include "lpdes/program_text.hpp"
#include "lpdes/rng.hpp"
#include "lpdes/simplify.hpp"
#include "lpdes/solver.hpp"
#include "lpdes/tight.hpp"
#include "lpdes/translate.hpp"

#pragma once

#include <string>

#include "volhedge/models.hpp"
#include "volhedge/smile.hpp"

namespace volhedge {

// Smile CSV: header exactly "strike,implied_vol", one quote per row, plus a
// sidecar JSON {"spot": .., "t": .., "T": ..}. Parsing is strict: NaN,
// non-positive values, extra columns, or unknown JSON keys are rejected and
// errors carry the offending row number.
MarketSmile load_smile_csv(const std::string& csv_path,
                           const std::string& meta_path);
void save_smile_csv(const MarketSmile& smile, const std::string& csv_path,
                    const std::string& meta_path);

// Model spec JSON, e.g.
//   {"model":"heston","kappa":2,"theta":0.04,"xi":0.5,"v0":0.04,
//    "rho":-0.7,"spot":100}
// Variants: "heston", "lognormal_sabr" (alpha, sigma0), "three_halves".
// Unknown keys are rejected.
SvModelSpec parse_model_spec_json(const std::string& text);
SvModelSpec load_model_spec(const std::string& path);
std::string model_spec_to_json_string(const SvModelSpec& spec, int indent = 2);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace volhedge

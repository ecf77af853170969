#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "projangles/error.hpp"

namespace pa {

inline constexpr const char* kToolName = "projangles";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Deterministic serialization: object keys sorted, numbers in decimal with 12
// significant digits, non-finite doubles as null.
std::string json_to_text(const nlohmann::json& j);
std::string format_double(double v);  // %.12g

// Standalone SVG line plot: one polyline for the series, labelled axes,
// byte-deterministic for fixed input. Needs at least two points.
std::string emit_plot(const std::vector<std::pair<double, double>>& series,
                      const std::string& x_label, const std::string& y_label);

struct RunOutput {
    int exit_code = 0;   // 0 success, 2 domain/parse/io error, 3 non-convergence
    std::string report;  // JSON (or CSV for mgon-sweep); error JSON on failure
};

// Executes one subcommand configuration:
//   {"subcommand": "spectra", "graph": "g.txt", "r": 5, "out": "rep.json", ...}
// Writes report/plot files atomically when paths are configured and returns
// the report text. Throws pa::Error on any failure.
RunOutput run(const nlohmann::json& config);

// Same, but maps errors onto exit codes and machine-readable error JSON.
RunOutput run_config_text(const std::string& config_json_text);

}  // namespace pa

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtsp/annealing.hpp"
#include "qtsp/elastic_net.hpp"
#include "qtsp/refiner.hpp"
#include "qtsp/tunneling.hpp"

#include "json.hpp"

namespace qtsp {

// JSON (de)serialization for every run-parameter record. Parsing starts from
// the record's defaults, applies the keys present, and rejects anything it
// does not know (ParseError) — a typo'd key never silently reverts to a
// default. beta = infinity is represented as JSON null.

nlohmann::json to_json(const EnParams& p);
EnParams en_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TunnelParams& p);
TunnelParams tunnel_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RefinerConfig& c);
RefinerConfig refiner_config_from_json(const nlohmann::json& j);

// Benchmark harness configuration: seeded random instances, the methods to
// compare, and one work budget (in elementary distance/kernel terms) that
// every base solver gets. Refined methods re-run their base phase with the
// same derived seed and then add refiner work on top, so "x+refine" is never
// worse than "x" row-for-row; their extra evaluations are reported.
struct BenchConfig {
    int instances = 10;
    int n = 30;
    std::uint64_t seed = 1;
    std::vector<std::string> methods = {"en", "sa", "en+refine", "sa+refine"};
    long long budget = 20000000;
    EnParams en{};
    double sa_t0 = 1.0;     // geometric schedule from sa_t0 ...
    double sa_t_end = 1e-3; // ... down to sa_t_end across the budgeted steps
    RefinerConfig refiner{};
    long trace_stride = 1000;

    void validate() const;  // throws std::invalid_argument
};

nlohmann::json to_json(const BenchConfig& c);
BenchConfig bench_config_from_json(const nlohmann::json& j);

// Parse text as JSON, mapping syntax errors to ParseError.
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

}  // namespace qtsp

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtsp/config.hpp"

#include "json.hpp"

namespace qtsp {

// One (instance, method) cell of the comparison harness.
struct BenchRow {
    std::string instance;
    std::uint64_t seed;       // seed the instance was generated from
    std::string method;       // en | sa | en+refine | sa+refine
    double length;
    std::optional<double> gap;  // (length - optimum) / optimum, when n <= 11
    long long evals;            // elementary distance/kernel terms spent
    double tau_total;           // simulated tunneling time (refined methods)
    double wall_ms;             // measured, reported on stderr only — never
                                // serialized, so output files stay
                                // byte-identical across runs
};

struct BenchReport {
    std::vector<BenchRow> rows;                      // instance-major, method order as configured
    std::vector<std::pair<std::string, double>> median_length;  // per method, config order
    // Per-instance win/tie/loss of the first method against the second,
    // for (en, sa) and (en+refine, sa+refine) when both sides ran.
    struct Comparison {
        std::string first, second;
        int wins = 0, ties = 0, losses = 0;
    };
    std::vector<Comparison> comparisons;
};

// Runs every configured method on every seeded instance. Base solvers (en,
// sa) each get cfg.budget elementary terms. A refined method starts from the
// tour its base phase produces under the same derived seed — so its starting
// tour equals the base row's tour and it can never report a worse length —
// and adds refiner work on top; rows report actual terms spent.
// Deterministic: same config, same report.
BenchReport bench_compare(const BenchConfig& cfg);

// instance,seed,method,length,gap,evals,tau_total — gap empty when unknown.
std::string bench_csv(const BenchReport& report);
nlohmann::json bench_json(const BenchReport& report);

}  // namespace qtsp

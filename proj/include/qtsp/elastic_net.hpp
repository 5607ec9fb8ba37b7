#pragma once

#include <cstdint>
#include <vector>

#include "qtsp/instances.hpp"

namespace qtsp {

// Elastic-net tour construction: a closed string of M > n beads is attracted
// to the cities and smoothed by tension, while the interaction scale K is
// annealed downward until every city has captured a bead.

struct EnParams {
    double alpha = 0.2;    // city-attraction weight
    double beta = 2.0;     // tension weight
    double m_ratio = 2.5;  // beads per city
    double k0 = 0.2;       // initial scale K
    double k_decay = 0.99; // multiplicative K factor
    int k_period = 25;     // iterations between K updates
    double k_min = 0.01;   // stop once K falls to/below this
    long max_iters = 100000;
    // The standard kernel exponent is -|x-y|^2 / 2k^2. The unsquared variant
    // -|x-y| / 2k^2 is kept for comparison runs; no quality target is tied
    // to it.
    bool squared_exponent = true;

    void validate() const;  // throws std::invalid_argument
};

// Ring of beads plus the current scale. Index M wraps to 0.
struct ElasticString {
    std::vector<Point2> beads;
    double k = 0.2;

    int m() const { return static_cast<int>(beads.size()); }
    void validate() const;  // M >= 3, k > 0, finite coordinates
};

struct EnTraceRow {
    long iter;
    double k;
    double free_energy;
    double max_city_dist;  // max over cities of distance to nearest bead
};

struct EnRunResult {
    ElasticString string;  // beads mapped back to instance coordinates
    std::vector<EnTraceRow> trace;
    long iterations = 0;
    // Work accounting in city-bead kernel terms: `kernel_terms` covers the
    // dynamics (en_step), `diagnostic_terms` the trace-row evaluations.
    long long kernel_terms = 0;
    long long diagnostic_terms = 0;
};

// F = -alpha k^2 sum_i ln sum_j exp(-|x_i - y_j|^2 / 2k^2)
//     + (beta k / 2) sum_j |y_{j+1} - y_j|^2      (second sum over the ring)
// Evaluated with log-sum-exp so large exponents never produce inf/nan.
// The beta/2 matches the update-rule convention (the derivative's factor 2 is
// absorbed into beta there), making en_step exact gradient descent on F:
// that is what the fixed-k monotone-descent guarantee rests on.
double free_energy(const TspInstance& inst, const ElasticString& s, const EnParams& p);

// One synchronous (Jacobi) update of every bead:
//   dy_j = alpha sum_i w_ij (x_i - y_j) + beta k (y_{j+1} - 2 y_j + y_{j-1})
// with w_ij the softmax of kernel exponents over beads (rows sum to 1).
// Throws NumericError naming the first bead index that went non-finite.
ElasticString en_step(const TspInstance& inst, const ElasticString& s, const EnParams& p);

// Full anneal. Beads start on a circle of radius 0.1 at the city centroid
// with a seeded angular offset; k shrinks by k_decay every k_period
// iterations until k <= k_min or max_iters. Internally the instance is
// mapped to the unit square (the defaults assume unit scale); the returned
// beads are mapped back to instance coordinates while trace rows (iter, k,
// F, max city-bead distance) stay in the solver's unit frame.
//
// trace_stride thins the trace (rows at iter 0, every stride-th iteration,
// and the final iteration); term_budget >= 0 stops the run once the next
// step would exceed that many kernel terms.
EnRunResult run_elastic_net(const TspInstance& inst, const EnParams& p, std::uint64_t seed,
                            long trace_stride = 1, long long term_budget = -1);

// Largest distance from any city to its nearest bead; the convergence
// figure of merit recorded in trace rows.
double max_city_bead_distance(const TspInstance& inst, const ElasticString& s);

// Converged-or-not string -> tour: cities claim their nearest bead (ties to
// the lower bead index), then sort by (bead index, projection of the city
// onto the bead's outgoing ring segment, city index). Always a permutation.
Tour extract_tour(const TspInstance& inst, const ElasticString& s);

namespace serial {
// Plain-loop reference implementations used to cross-check the OpenMP
// kernels; expected to agree bitwise (fixed reduction order on both sides).
double free_energy(const TspInstance& inst, const ElasticString& s, const EnParams& p);
ElasticString en_step(const TspInstance& inst, const ElasticString& s, const EnParams& p);
}  // namespace serial

}  // namespace qtsp

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qtsp/instances.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

// Cooling schedule. The logarithmic law T(step) = D / ln(step + offset) is the
// slow schedule that makes annealing across a barrier of scale D cost
// exp(A/T) steps; geometric is the practical default.
struct Schedule {
    enum class Kind { geometric, logarithmic, constant };

    Kind kind = Kind::geometric;
    double t0 = 1.0;
    double ratio = 0.99;
    double d = 1.0;
    int offset = 1;
    double t_const = 1.0;

    static Schedule geometric(double t0, double ratio);
    static Schedule logarithmic(double d, int offset = 1);
    static Schedule constant(double t);

    // step >= 1
    double temperature_at(long step) const;
};

// 1-D grid of energies with a +-1 proposal (out-of-range proposals stay put).
struct DiscreteChain {
    std::vector<double> energies;
    double temperature = 1.0;
    std::vector<double> coords;  // grid coordinates when built from a potential
    int left_min = -1;
    int right_min = -1;
    int barrier_top = -1;

    int size() const { return static_cast<int>(energies.size()); }
    double barrier_height() const;  // E[barrier_top] - E[left_min]
};

// E_i = h*(q^2-1)^2 + s*q on m uniform grid points q in [-half_width, half_width].
// Locates the two interior minima and the barrier top between them.
DiscreteChain build_double_well_chain(double h, double s, double half_width, int m);

// One Metropolis proposal/acceptance on the chain; returns the next state.
int metropolis_chain_step(const DiscreteChain& chain, int state, Rng& rng);

// Row-stochastic one-step matrix (size m*m, row-major) at chain.temperature.
std::vector<double> transition_matrix(const DiscreteChain& chain);

// Expected Metropolis steps to first reach `to` from `from`, via the dense
// linear hitting-time system over transient states.
double exact_hitting_time(const DiscreteChain& chain, int from, int to);

struct SaTraceRow {
    long step;
    double temperature;
    double energy_current;
    double energy_best;
};

// Adapts a DiscreteChain to the landscape-style interface used by run_sa.
struct ChainView {
    using State = int;
    const DiscreteChain* chain;

    double energy(int s) const { return chain->energies[static_cast<std::size_t>(s)]; }
    int propose(int s, Rng& rng) const;
};

template <class L>
struct SaRunResult {
    typename L::State best_state;
    double best_energy = 0.0;
    std::vector<SaTraceRow> trace;
};

// Metropolis annealing over any landscape providing energy() and propose().
// Deterministic per seed; best-so-far is tracked across the whole run.
template <class L>
SaRunResult<L> run_sa(const L& landscape, typename L::State start, const Schedule& schedule,
                      long steps, std::uint64_t seed, long trace_stride = 1) {
    if (steps < 1) throw std::invalid_argument("run_sa: steps must be >= 1");
    if (trace_stride < 1) trace_stride = 1;
    Rng rng = Rng::derive(seed, 0x5a5a);

    SaRunResult<L> result;
    typename L::State current = start;
    double e_current = landscape.energy(current);
    result.best_state = current;
    result.best_energy = e_current;

    for (long step = 1; step <= steps; ++step) {
        const double t = schedule.temperature_at(step);
        typename L::State cand = landscape.propose(current, rng);
        const double e_cand = landscape.energy(cand);
        const double delta = e_cand - e_current;
        if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
            current = std::move(cand);
            e_current = e_cand;
            if (e_current < result.best_energy) {
                result.best_energy = e_current;
                result.best_state = current;
            }
        }
        if (step % trace_stride == 0 || step == steps) {
            result.trace.push_back({step, t, e_current, result.best_energy});
        }
    }
    return result;
}

// 2-opt simulated annealing on tours with O(1) move evaluation. The move set
// is the same n(n-3)/2 segment reversals the tour landscape enumerates.
struct SaTourResult {
    Tour best;
    std::vector<SaTraceRow> trace;
    long long proposals = 0;
    long long distance_terms = 0;  // 4 per proposal + n for the initial tour
};

SaTourResult sa_solve_tour(const TspInstance& inst, const Schedule& schedule, long steps,
                           std::uint64_t seed, const std::vector<int>* start_order = nullptr,
                           long trace_stride = 1000);

}  // namespace qtsp

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtsp/landscapes.hpp"
#include "qtsp/rng.hpp"
#include "qtsp/tunneling.hpp"

namespace qtsp {

// Zero-temperature barrier-hopping refiner: from a local minimum, look for a
// strictly lower state a few elementary moves away (a "width-k" hop), take
// the first width that offers one, descend, repeat. Each hop is billed a
// simulated tunneling time tau(k) = hbar / rate(k) with the rate's damping
// exponent scaled by k^2, so wider hops are exponentially slower — the run
// reports that cost model, it never waits on it.
//
// This is a classical simulation of a quantum-inspired move set; nothing here
// escapes the exponential cost of wide barriers, it only accounts for it.

struct RefinerConfig;
double hop_time_cost(int k, const RefinerConfig& config);

struct RefinerConfig {
    int max_width = 4;           // scan hop widths 2..max_width
    int samples_per_width = 400; // random width-k draws per width per round
    // Width-2 hops are enumerated exactly instead of sampled when the
    // two-move ball fits in min(enum_budget, samples_per_width) trials.
    int enum_budget = 400;
    TunnelParams rate_params{};  // template for tau(k); d is overwritten by k
    std::uint64_t seed = 1;
    int max_hops = 1000;

    // Throws std::invalid_argument on bad bounds; also rejects rate
    // parameters whose tau(k) fails to increase on 2..max_width while
    // sigma < omega (wider barriers must cost more time there).
    void validate() const {
        if (max_width < 2) throw std::invalid_argument("RefinerConfig: max_width must be >= 2");
        if (samples_per_width < 1)
            throw std::invalid_argument("RefinerConfig: samples_per_width must be >= 1");
        if (enum_budget < 0) throw std::invalid_argument("RefinerConfig: enum_budget must be >= 0");
        if (max_hops < 0) throw std::invalid_argument("RefinerConfig: max_hops must be >= 0");
        rate_params.validate();
        if (rate_params.sigma < rate_params.omega) {
            for (int k = 2; k < max_width; ++k) {
                if (!(hop_time_cost(k, *this) < hop_time_cost(k + 1, *this)))
                    throw std::invalid_argument(
                        "RefinerConfig: tau(k) not strictly increasing at width " +
                        std::to_string(k + 1));
            }
        }
    }
};

// Simulated time for one width-k hop: tau = hbar / rate_forward with the
// barrier width parameter set to k (damping exponent then scales as k^2).
inline double hop_time_cost(int k, const RefinerConfig& config) {
    if (k < 1) throw std::invalid_argument("hop_time_cost: width must be >= 1");
    TunnelParams p = config.rate_params;
    p.d = static_cast<double>(k);
    return transition_time(rate_forward(p), p.hbar);
}

struct HopRecord {
    double e_from;  // local minimum left behind
    double e_to;    // local minimum reached after descent (strictly lower)
    int width;      // k of the hop that escaped e_from
    double tau;     // simulated tunneling time charged for the hop
    long long trials;  // candidate evaluations spent finding this hop
};

template <class L>
struct RefineResult {
    typename L::State state;
    double energy = 0.0;
    std::vector<HopRecord> hops;
    long long trial_evals = 0;    // all width-scan candidate evaluations
    long long descent_evals = 0;  // neighbor evaluations inside greedy descents
    double total_tau = 0.0;

    // Rates of the hop sequence seen as a one-way chain of minima, with the
    // energy already descended as the (strictly increasing) progress
    // coordinate; feeding this to mean_first_passage_analytic reproduces
    // total_tau. Only a valid chain when at least one hop was taken.
    MinimaChain induced_chain() const {
        MinimaChain chain;
        chain.positions.resize(hops.size() + 1);
        for (std::size_t i = 0; i < hops.size(); ++i) {
            chain.positions[i] = -hops[i].e_from;
            chain.forward_rates.push_back(1.0 / hops[i].tau);
            chain.backward_rates.push_back(0.0);
        }
        if (!hops.empty()) chain.positions.back() = -hops.back().e_to;
        return chain;
    }
};

namespace detail {

// Candidates equal to the origin or inside its elementary neighborhood are
// not hops (width-1 escapes cannot exist at a local minimum, and sampled
// multi-move walks can fall back that close).
template <class State>
bool in_sorted(const std::vector<State>& sorted, const State& s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
}

}  // namespace detail

// Lowest-energy strictly improving state at hop width k from local minimum s,
// or nullopt. Width 2 enumerates the two-move ball when it fits the
// configured budget; otherwise `samples` random width-k draws are screened.
// Ties go to the smaller state. Throws std::invalid_argument if s is not a
// local minimum. `evals`, when given, counts candidate energy evaluations.
template <class L>
std::optional<typename L::State> find_improving_at_width(const L& l, const typename L::State& s,
                                                         int k, const RefinerConfig& config,
                                                         Rng& rng, long long* evals = nullptr) {
    using State = typename L::State;
    if (k < 2) throw std::invalid_argument("find_improving_at_width: width must be >= 2");
    if (l.best_improving_neighbor(s).has_value())
        throw std::invalid_argument("find_improving_at_width: state is not a local minimum");

    const double e0 = l.energy(s);
    std::vector<State> ring1 = l.elementary_neighbors(s);
    std::sort(ring1.begin(), ring1.end());

    std::optional<State> best;
    double best_e = e0;
    auto consider = [&](const State& cand) {
        if (cand == s || detail::in_sorted(ring1, cand)) return;
        if (evals != nullptr) ++*evals;
        const double e = l.energy(cand);
        if (e < best_e || (e == best_e && best.has_value() && cand < *best)) {
            best = cand;
            best_e = e;
        }
    };

    const long long ball_bound =
        static_cast<long long>(ring1.size()) * static_cast<long long>(ring1.size());
    const long long budget = std::min<long long>(config.enum_budget, config.samples_per_width);
    if (k == 2 && ball_bound <= budget) {
        for (const State& mid : ring1) {
            for (const State& cand : l.elementary_neighbors(mid)) consider(cand);
        }
    } else {
        for (int t = 0; t < config.samples_per_width; ++t)
            consider(l.random_neighbor_at_width(s, k, rng));
    }
    return best;
}

// Descend to a local minimum, then repeat: scan widths 2..max_width in
// order, hop to the best improving state at the first width that has one,
// descend again, and log the hop with its tau cost. Stops when no width
// helps or max_hops is reached. The visited minima strictly decrease in
// energy; the result is never worse than the input.
template <class L>
RefineResult<L> tunnel_refine(const L& l, typename L::State start, const RefinerConfig& config) {
    config.validate();
    RefineResult<L> out;
    Rng rng = Rng::derive(config.seed, 0x5ef1);

    typename L::State s = greedy_descent(l, std::move(start), &out.descent_evals);
    double e = l.energy(s);

    while (static_cast<int>(out.hops.size()) < config.max_hops) {
        std::optional<typename L::State> target;
        int used_width = 0;
        long long trials_before = out.trial_evals;
        for (int k = 2; k <= config.max_width; ++k) {
            target = find_improving_at_width(l, s, k, config, rng, &out.trial_evals);
            if (target.has_value()) {
                used_width = k;
                break;
            }
        }
        if (!target.has_value()) break;

        typename L::State next = greedy_descent(l, std::move(*target), &out.descent_evals);
        const double e_next = l.energy(next);
        if (!(e_next < e))
            throw std::logic_error("tunnel_refine: hop failed to lower the energy");
        const double tau = hop_time_cost(used_width, config);
        out.hops.push_back({e, e_next, used_width, tau, out.trial_evals - trials_before});
        out.total_tau += tau;
        s = std::move(next);
        e = e_next;
    }

    const long long trial_cap = static_cast<long long>(config.max_hops) *
                                static_cast<long long>(config.max_width) *
                                static_cast<long long>(config.samples_per_width);
    if (config.max_hops > 0 && out.trial_evals > trial_cap)
        throw std::logic_error("tunnel_refine: trial budget overrun");

    out.state = std::move(s);
    out.energy = e;
    return out;
}

}  // namespace qtsp

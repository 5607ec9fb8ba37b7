#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qtsp/instances.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

// Landscape contract shared by annealing, the census, and the refiner
// (duck-typed; every concrete landscape provides):
//   using State = ...;                 // equality-comparable and totally ordered
//   double energy(const State&) const;
//   std::vector<State> elementary_neighbors(const State&) const;  // width-1, symmetric
//   State propose(const State&, Rng&) const;                      // uniform width-1 move
//   State random_neighbor_at_width(const State&, int k, Rng&) const;
//   std::optional<State> best_improving_neighbor(const State&) const;
//   long long neighbor_count(const State&) const;
//   State random_state(Rng&) const;
// Enumerable landscapes additionally provide all_states() (sorted ascending).

// Tour space under 2-opt segment reversals. States are canonical orders:
// city 0 first, second city below last. Width-k moves are k successive
// reversals that never immediately undo the previous one.
class TourLandscape {
public:
    using State = std::vector<int>;

    struct Move {
        int p;  // cut edges (p, p+1) and (q, q+1) of the current order
        int q;
    };

    explicit TourLandscape(const TspInstance& inst) : inst_(&inst) {}

    const TspInstance& instance() const { return *inst_; }
    int n() const { return inst_->n(); }

    static State canonical(State order);

    double energy(const State& s) const { return tour_length(*inst_, s); }

    std::vector<Move> moves() const;
    static State apply(const State& s, Move m);  // result is canonical

    std::vector<State> elementary_neighbors(const State& s) const;
    State propose(const State& s, Rng& rng) const;
    State random_neighbor_at_width(const State& s, int k, Rng& rng) const;
    std::optional<State> best_improving_neighbor(const State& s) const;
    long long neighbor_count(const State&) const {
        const long long n = inst_->n();
        return n * (n - 3) / 2;
    }
    State random_state(Rng& rng) const;

    // All canonical tours, ascending lexicographically; n <= 9.
    std::vector<State> all_states() const;

private:
    Move draw_move(Rng& rng) const;
    const TspInstance* inst_;
};

// Ising-form energy over n binary spins, H(x) = -(1/2) sum_{i != j} w_ij x_i x_j
// with symmetric zero-diagonal weights. State bit i set means spin +1.
// Elementary move: flip one spin.
class BitLandscape {
public:
    using State = std::uint64_t;

    int n() const { return n_; }
    const std::vector<double>& weights() const { return w_; }
    double weight(int i, int j) const { return w_[static_cast<std::size_t>(i) * n_ + j]; }

    double energy(State s) const;
    double flip_delta(State s, int bit) const;

    std::vector<State> elementary_neighbors(State s) const;
    State propose(State s, Rng& rng) const;
    State random_neighbor_at_width(State s, int k, Rng& rng) const;
    std::optional<State> best_improving_neighbor(State s) const;
    long long neighbor_count(State) const { return n_; }
    State random_state(Rng& rng) const;

    // All 2^n states ascending; n <= 20.
    std::vector<State> all_states() const;

    State mask_of(const std::vector<int>& spins) const;
    std::vector<int> spins_of(State s) const;

protected:
    BitLandscape(int n, std::vector<double> w);

    int n_;
    std::vector<double> w_;  // n*n row-major
};

// Hebbian associative memory: w_ij = (1/n) sum_mu xi_i^mu xi_j^mu.
class HopfieldNet : public BitLandscape {
public:
    static HopfieldNet from_patterns(const std::vector<std::vector<int>>& patterns);
    static std::vector<std::vector<int>> random_patterns(int n, int p, std::uint64_t seed);

    int pattern_count() const { return static_cast<int>(patterns_.size()); }
    const std::vector<std::vector<int>>& patterns() const { return patterns_; }
    State pattern_state(int mu) const { return mask_of(patterns_[static_cast<std::size_t>(mu)]); }

private:
    HopfieldNet(int n, std::vector<double> w, std::vector<std::vector<int>> patterns)
        : BitLandscape(n, std::move(w)), patterns_(std::move(patterns)) {}

    std::vector<std::vector<int>> patterns_;
};

// Symmetric couplings drawn i.i.d. standard normal (seeded).
class SpinGlass : public BitLandscape {
public:
    static SpinGlass random(int n, std::uint64_t seed);

private:
    SpinGlass(int n, std::vector<double> w) : BitLandscape(n, std::move(w)) {}
};

// Steepest descent to the lowest-energy elementary neighbor while strictly
// improving; ties resolved toward the smallest state. Returns the first state
// with no strictly improving neighbor. `evals`, when given, is incremented by
// the number of neighbor evaluations performed.
template <class L>
typename L::State greedy_descent(const L& l, typename L::State s, long long* evals = nullptr) {
    while (true) {
        if (evals != nullptr) *evals += l.neighbor_count(s);
        std::optional<typename L::State> next = l.best_improving_neighbor(s);
        if (!next.has_value()) return s;
        s = std::move(*next);
    }
}

template <class L>
struct Census {
    // (state, energy), ascending by state
    std::vector<std::pair<typename L::State, double>> minima;
};

template <class L>
struct SampledCensus {
    std::map<typename L::State, long> hits;  // minimum -> times discovered
    std::map<typename L::State, double> energies;
    long starts = 0;
    double coverage_estimate = 1.0;  // Good-Turing: 1 - (singletons / starts)
};

namespace detail {

template <class L>
Census<L> census_from_flags(const L& l, const std::vector<typename L::State>& states,
                            const std::vector<char>& is_min) {
    Census<L> census;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (is_min[i]) census.minima.emplace_back(states[i], l.energy(states[i]));
    }
    return census;
}

}  // namespace detail

// Exact local-minima census over an enumerable landscape.
template <class L>
Census<L> census_brute_force(const L& l) {
    const std::vector<typename L::State> states = l.all_states();
    std::vector<char> is_min(states.size(), 0);
    const long long count = static_cast<long long>(states.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        is_min[static_cast<std::size_t>(i)] =
            !l.best_improving_neighbor(states[static_cast<std::size_t>(i)]).has_value();
    }
    return detail::census_from_flags(l, states, is_min);
}

// Descents from seeded random starts. Chunked by start index so the merged
// result is independent of the thread count.
template <class L>
SampledCensus<L> census_sampled(const L& l, long starts, std::uint64_t seed) {
    if (starts < 1) throw std::invalid_argument("census_sampled: starts must be >= 1");
    constexpr long chunk = 256;
    const long n_chunks = (starts + chunk - 1) / chunk;
    std::vector<std::map<typename L::State, long>> partial(static_cast<std::size_t>(n_chunks));

#pragma omp parallel for schedule(static)
    for (long c = 0; c < n_chunks; ++c) {
        auto& local = partial[static_cast<std::size_t>(c)];
        const long lo = c * chunk;
        const long hi = std::min(starts, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
            typename L::State minimum = greedy_descent(l, l.random_state(rng));
            ++local[minimum];
        }
    }

    SampledCensus<L> result;
    result.starts = starts;
    for (const auto& local : partial) {
        for (const auto& [state, count] : local) result.hits[state] += count;
    }
    long singletons = 0;
    for (const auto& [state, count] : result.hits) {
        result.energies[state] = l.energy(state);
        if (count == 1) ++singletons;
    }
    result.coverage_estimate = 1.0 - static_cast<double>(singletons) / static_cast<double>(starts);
    return result;
}

namespace serial {

template <class L>
Census<L> census_brute_force(const L& l) {
    const std::vector<typename L::State> states = l.all_states();
    std::vector<char> is_min(states.size(), 0);
    for (std::size_t i = 0; i < states.size(); ++i) {
        is_min[i] = !l.best_improving_neighbor(states[i]).has_value();
    }
    return detail::census_from_flags(l, states, is_min);
}

template <class L>
SampledCensus<L> census_sampled(const L& l, long starts, std::uint64_t seed) {
    if (starts < 1) throw std::invalid_argument("census_sampled: starts must be >= 1");
    SampledCensus<L> result;
    result.starts = starts;
    for (long i = 0; i < starts; ++i) {
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
        ++result.hits[greedy_descent(l, l.random_state(rng))];
    }
    long singletons = 0;
    for (const auto& [state, count] : result.hits) {
        result.energies[state] = l.energy(state);
        if (count == 1) ++singletons;
    }
    result.coverage_estimate = 1.0 - static_cast<double>(singletons) / static_cast<double>(starts);
    return result;
}

}  // namespace serial

}  // namespace qtsp

#include "qtsp/landscapes.hpp"

#include <algorithm>
#include <numeric>

#include "qtsp/errors.hpp"

namespace qtsp {

TourLandscape::State TourLandscape::canonical(State order) {
    const std::size_t n = order.size();
    auto zero = std::find(order.begin(), order.end(), 0);
    if (zero == order.end()) throw InvalidTour("canonical: city 0 missing");
    std::rotate(order.begin(), zero, order.end());
    if (n >= 3 && order[1] > order[n - 1]) std::reverse(order.begin() + 1, order.end());
    return order;
}

std::vector<TourLandscape::Move> TourLandscape::moves() const {
    const int n = inst_->n();
    std::vector<Move> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 3) / 2);
    for (int p = 0; p < n; ++p) {
        for (int q = p + 2; q < n; ++q) {
            if (p == 0 && q == n - 1) continue;  // adjacent edges on the cycle
            out.push_back({p, q});
        }
    }
    return out;
}

TourLandscape::State TourLandscape::apply(const State& s, Move m) {
    State next = s;
    std::reverse(next.begin() + m.p + 1, next.begin() + m.q + 1);
    return canonical(std::move(next));
}

std::vector<TourLandscape::State> TourLandscape::elementary_neighbors(const State& s) const {
    std::vector<State> out;
    for (const Move m : moves()) out.push_back(apply(s, m));
    return out;
}

TourLandscape::Move TourLandscape::draw_move(Rng& rng) const {
    const int n = inst_->n();
    while (true) {
        int p = static_cast<int>(rng.uniform_int(0, n - 1));
        int q = static_cast<int>(rng.uniform_int(0, n - 1));
        if (p == q) continue;
        if (p > q) std::swap(p, q);
        if (q == p + 1) continue;
        if (p == 0 && q == n - 1) continue;
        return {p, q};
    }
}

TourLandscape::State TourLandscape::propose(const State& s, Rng& rng) const {
    return apply(s, draw_move(rng));
}

TourLandscape::State TourLandscape::random_neighbor_at_width(const State& s, int k, Rng& rng) const {
    if (k < 1) throw std::invalid_argument("random_neighbor_at_width: k must be >= 1");
    State cur = s;
    int last_p = -1, last_q = -1;
    for (int step = 0; step < k; ++step) {
        Move m = draw_move(rng);
        while (m.p == last_p && m.q == last_q) m = draw_move(rng);  // no immediate undo
        std::reverse(cur.begin() + m.p + 1, cur.begin() + m.q + 1);
        last_p = m.p;
        last_q = m.q;
    }
    return canonical(std::move(cur));
}

std::optional<TourLandscape::State> TourLandscape::best_improving_neighbor(const State& s) const {
    const int n = inst_->n();
    auto at = [&](int idx) { return inst_->city(s[static_cast<std::size_t>(idx)]); };
    double best_delta = 0.0;
    std::vector<Move> best_moves;
    for (const Move m : moves()) {
        const int pn = m.p + 1;
        const int qn = (m.q + 1) % n;
        const double delta = dist(at(m.p), at(m.q)) + dist(at(pn), at(qn)) -
                             dist(at(m.p), at(pn)) - dist(at(m.q), at(qn));
        if (delta < best_delta) {
            best_delta = delta;
            best_moves.assign(1, m);
        } else if (delta == best_delta && best_delta < 0.0) {
            best_moves.push_back(m);
        }
    }
    if (best_moves.empty()) return std::nullopt;
    State best = apply(s, best_moves.front());
    for (std::size_t i = 1; i < best_moves.size(); ++i) {
        State cand = apply(s, best_moves[i]);
        if (cand < best) best = std::move(cand);
    }
    return best;
}

TourLandscape::State TourLandscape::random_state(Rng& rng) const {
    const int n = inst_->n();
    State order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_int(0, i));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    return canonical(std::move(order));
}

std::vector<TourLandscape::State> TourLandscape::all_states() const {
    const int n = inst_->n();
    if (n > 9) throw InstanceTooLarge("TourLandscape::all_states: n=" + std::to_string(n) +
                                      " exceeds enumeration cap 9");
    std::vector<int> rest(static_cast<std::size_t>(n - 1));
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<State> states;
    State order(static_cast<std::size_t>(n));
    order[0] = 0;
    do {
        if (rest.front() > rest.back()) continue;
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        states.push_back(order);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return states;  // next_permutation emits ascending order
}

BitLandscape::BitLandscape(int n, std::vector<double> w) : n_(n), w_(std::move(w)) {
    if (n_ < 2 || n_ > 63) throw std::invalid_argument("BitLandscape: n must be in [2, 63]");
    if (w_.size() != static_cast<std::size_t>(n_) * n_)
        throw std::invalid_argument("BitLandscape: weight matrix must be n*n");
    for (int i = 0; i < n_; ++i) {
        if (weight(i, i) != 0.0) throw std::invalid_argument("BitLandscape: diagonal must be zero");
        for (int j = i + 1; j < n_; ++j) {
            if (weight(i, j) != weight(j, i))
                throw std::invalid_argument("BitLandscape: weights must be symmetric");
        }
    }
}

double BitLandscape::energy(State s) const {
    double total = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double si = (s >> i) & 1U ? 1.0 : -1.0;
        for (int j = i + 1; j < n_; ++j) {
            const double sj = (s >> j) & 1U ? 1.0 : -1.0;
            total += weight(i, j) * si * sj;
        }
    }
    return -total;
}

double BitLandscape::flip_delta(State s, int bit) const {
    const double si = (s >> bit) & 1U ? 1.0 : -1.0;
    double field = 0.0;
    for (int j = 0; j < n_; ++j) {
        if (j == bit) continue;
        field += weight(bit, j) * ((s >> j) & 1U ? 1.0 : -1.0);
    }
    return 2.0 * si * field;
}

std::vector<BitLandscape::State> BitLandscape::elementary_neighbors(State s) const {
    std::vector<State> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out.push_back(s ^ (State{1} << i));
    return out;
}

BitLandscape::State BitLandscape::propose(State s, Rng& rng) const {
    return s ^ (State{1} << rng.uniform_int(0, n_ - 1));
}

BitLandscape::State BitLandscape::random_neighbor_at_width(State s, int k, Rng& rng) const {
    if (k < 1) throw std::invalid_argument("random_neighbor_at_width: k must be >= 1");
    int last = -1;
    for (int step = 0; step < k; ++step) {
        int bit = static_cast<int>(rng.uniform_int(0, n_ - 1));
        while (bit == last) bit = static_cast<int>(rng.uniform_int(0, n_ - 1));
        s ^= State{1} << bit;
        last = bit;
    }
    return s;
}

std::optional<BitLandscape::State> BitLandscape::best_improving_neighbor(State s) const {
    double best_delta = 0.0;
    State best = s;
    bool found = false;
    for (int i = 0; i < n_; ++i) {
        const double delta = flip_delta(s, i);
        if (delta < best_delta) {
            best_delta = delta;
            best = s ^ (State{1} << i);
            found = true;
        } else if (found && delta == best_delta) {
            const State cand = s ^ (State{1} << i);
            if (cand < best) best = cand;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

BitLandscape::State BitLandscape::random_state(Rng& rng) const {
    const State mask = n_ == 63 ? (~State{0} >> 1) : ((State{1} << n_) - 1);
    return rng.next_u64() & mask;
}

std::vector<BitLandscape::State> BitLandscape::all_states() const {
    if (n_ > 20) throw InstanceTooLarge("BitLandscape::all_states: n=" + std::to_string(n_) +
                                        " exceeds enumeration cap 20");
    std::vector<State> states(std::size_t{1} << n_);
    std::iota(states.begin(), states.end(), State{0});
    return states;
}

BitLandscape::State BitLandscape::mask_of(const std::vector<int>& spins) const {
    if (static_cast<int>(spins.size()) != n_)
        throw std::invalid_argument("mask_of: spin vector has wrong length");
    State s = 0;
    for (int i = 0; i < n_; ++i) {
        if (spins[static_cast<std::size_t>(i)] == 1) {
            s |= State{1} << i;
        } else if (spins[static_cast<std::size_t>(i)] != -1) {
            throw std::invalid_argument("mask_of: entries must be +1 or -1");
        }
    }
    return s;
}

std::vector<int> BitLandscape::spins_of(State s) const {
    std::vector<int> spins(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) spins[static_cast<std::size_t>(i)] = (s >> i) & 1U ? 1 : -1;
    return spins;
}

HopfieldNet HopfieldNet::from_patterns(const std::vector<std::vector<int>>& patterns) {
    if (patterns.empty()) throw std::invalid_argument("from_patterns: need at least one pattern");
    const int n = static_cast<int>(patterns.front().size());
    if (n < 2) throw std::invalid_argument("from_patterns: patterns must have length >= 2");
    for (const auto& xi : patterns) {
        if (static_cast<int>(xi.size()) != n)
            throw std::invalid_argument("from_patterns: patterns must have equal length");
        for (int v : xi) {
            if (v != 1 && v != -1)
                throw std::invalid_argument("from_patterns: pattern entries must be +1 or -1");
        }
    }
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double sum = 0.0;
            for (const auto& xi : patterns)
                sum += static_cast<double>(xi[static_cast<std::size_t>(i)] *
                                           xi[static_cast<std::size_t>(j)]);
            w[static_cast<std::size_t>(i) * n + j] = sum / static_cast<double>(n);
        }
    }
    return HopfieldNet(n, std::move(w), patterns);
}

std::vector<std::vector<int>> HopfieldNet::random_patterns(int n, int p, std::uint64_t seed) {
    if (n < 2 || p < 1) throw std::invalid_argument("random_patterns: need n >= 2, p >= 1");
    Rng rng = Rng::derive(seed, 0x40f);
    std::vector<std::vector<int>> patterns(static_cast<std::size_t>(p));
    for (auto& xi : patterns) {
        xi.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : -1;
    }
    return patterns;
}

SpinGlass SpinGlass::random(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("SpinGlass::random: n must be >= 2");
    Rng rng = Rng::derive(seed, 0x515);
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double coupling = rng.normal();
            w[static_cast<std::size_t>(i) * n + j] = coupling;
            w[static_cast<std::size_t>(j) * n + i] = coupling;
        }
    }
    return SpinGlass(n, std::move(w));
}

}  // namespace qtsp

#include "qtsp/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qtsp/errors.hpp"
#include "qtsp/linalg.hpp"

namespace qtsp {

Schedule Schedule::geometric(double t0, double ratio) {
    if (t0 <= 0.0) throw std::invalid_argument("Schedule: T0 must be positive");
    if (ratio <= 0.0 || ratio >= 1.0) throw std::invalid_argument("Schedule: ratio must be in (0,1)");
    Schedule s;
    s.kind = Kind::geometric;
    s.t0 = t0;
    s.ratio = ratio;
    return s;
}

Schedule Schedule::logarithmic(double d, int offset) {
    if (d <= 0.0) throw std::invalid_argument("Schedule: D must be positive");
    if (offset < 1) throw std::invalid_argument("Schedule: offset must be >= 1");
    Schedule s;
    s.kind = Kind::logarithmic;
    s.d = d;
    s.offset = offset;
    return s;
}

Schedule Schedule::constant(double t) {
    if (t <= 0.0) throw std::invalid_argument("Schedule: T must be positive");
    Schedule s;
    s.kind = Kind::constant;
    s.t_const = t;
    return s;
}

double Schedule::temperature_at(long step) const {
    if (step < 1) throw std::invalid_argument("temperature_at: step must be >= 1");
    switch (kind) {
        case Kind::geometric:
            return t0 * std::pow(ratio, static_cast<double>(step - 1));
        case Kind::logarithmic:
            return d / std::log(static_cast<double>(step + offset));
        case Kind::constant:
            return t_const;
    }
    return t_const;
}

double DiscreteChain::barrier_height() const {
    if (barrier_top < 0 || left_min < 0) throw std::invalid_argument("chain has no recorded wells");
    return energies[static_cast<std::size_t>(barrier_top)] -
           energies[static_cast<std::size_t>(left_min)];
}

DiscreteChain build_double_well_chain(double h, double s, double half_width, int m) {
    if (m < 5) throw std::invalid_argument("build_double_well_chain: need m >= 5 grid points");
    if (h <= 0.0) throw std::invalid_argument("build_double_well_chain: h must be positive");
    if (half_width <= 0.0) throw std::invalid_argument("build_double_well_chain: half_width must be positive");

    DiscreteChain chain;
    chain.energies.resize(static_cast<std::size_t>(m));
    chain.coords.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double q = -half_width + 2.0 * half_width * i / (m - 1);
        chain.coords[static_cast<std::size_t>(i)] = q;
        chain.energies[static_cast<std::size_t>(i)] = h * (q * q - 1.0) * (q * q - 1.0) + s * q;
    }

    std::vector<int> minima;
    for (int i = 1; i + 1 < m; ++i) {
        const double e = chain.energies[static_cast<std::size_t>(i)];
        if (e < chain.energies[static_cast<std::size_t>(i - 1)] &&
            e < chain.energies[static_cast<std::size_t>(i + 1)]) {
            minima.push_back(i);
        }
    }
    if (minima.size() != 2)
        throw std::invalid_argument("build_double_well_chain: parameters do not give two interior minima");
    chain.left_min = minima[0];
    chain.right_min = minima[1];

    int top = chain.left_min;
    for (int i = chain.left_min; i <= chain.right_min; ++i) {
        if (chain.energies[static_cast<std::size_t>(i)] >
            chain.energies[static_cast<std::size_t>(top)])
            top = i;
    }
    chain.barrier_top = top;
    return chain;
}

int metropolis_chain_step(const DiscreteChain& chain, int state, Rng& rng) {
    if (chain.temperature <= 0.0)
        throw std::invalid_argument("metropolis_chain_step: temperature must be positive");
    const int dir = rng.bernoulli(0.5) ? 1 : -1;
    const int target = state + dir;
    if (target < 0 || target >= chain.size()) return state;
    const double delta = chain.energies[static_cast<std::size_t>(target)] -
                         chain.energies[static_cast<std::size_t>(state)];
    if (delta <= 0.0) return target;
    if (rng.uniform() < std::exp(-delta / chain.temperature)) return target;
    return state;
}

int ChainView::propose(int s, Rng& rng) const {
    const int dir = rng.bernoulli(0.5) ? 1 : -1;
    const int target = s + dir;
    if (target < 0 || target >= chain->size()) return s;
    return target;
}

std::vector<double> transition_matrix(const DiscreteChain& chain) {
    if (chain.temperature <= 0.0)
        throw std::invalid_argument("transition_matrix: temperature must be positive");
    const int m = chain.size();
    std::vector<double> p(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        double stay = 1.0;
        for (int dir : {-1, 1}) {
            const int j = i + dir;
            if (j < 0 || j >= m) continue;  // proposal rejected, mass stays
            const double delta = chain.energies[static_cast<std::size_t>(j)] -
                                 chain.energies[static_cast<std::size_t>(i)];
            const double accept = delta <= 0.0 ? 1.0 : std::exp(-delta / chain.temperature);
            const double prob = 0.5 * accept;
            p[static_cast<std::size_t>(i) * m + j] = prob;
            stay -= prob;
        }
        p[static_cast<std::size_t>(i) * m + i] = stay;
    }
    return p;
}

double exact_hitting_time(const DiscreteChain& chain, int from, int to) {
    const int m = chain.size();
    if (from < 0 || from >= m || to < 0 || to >= m)
        throw std::invalid_argument("exact_hitting_time: state index out of range");
    if (from == to) return 0.0;
    const std::vector<double> p = transition_matrix(chain);

    // h_i = 1 + sum_j P_ij h_j over transient states (everything except `to`).
    std::vector<int> transient;
    std::vector<int> pos(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        if (i == to) continue;
        pos[static_cast<std::size_t>(i)] = static_cast<int>(transient.size());
        transient.push_back(i);
    }
    const std::size_t k = transient.size();
    std::vector<double> a(k * k, 0.0);
    std::vector<double> b(k, 1.0);
    for (std::size_t r = 0; r < k; ++r) {
        const int i = transient[r];
        for (std::size_t c = 0; c < k; ++c) {
            const int j = transient[c];
            const double pij = p[static_cast<std::size_t>(i) * m + j];
            a[r * k + c] = (r == c ? 1.0 : 0.0) - pij;
        }
    }
    std::vector<double> h = solve_dense(std::move(a), std::move(b));
    return h[static_cast<std::size_t>(pos[static_cast<std::size_t>(from)])];
}

namespace {

struct TwoOptMove {
    int p;  // edge index, cut edges (p, p+1) and (q, q+1)
    int q;
};

// Uniform draw over the n(n-3)/2 distinct 2-opt moves.
TwoOptMove draw_two_opt(int n, Rng& rng) {
    while (true) {
        int p = static_cast<int>(rng.uniform_int(0, n - 1));
        int q = static_cast<int>(rng.uniform_int(0, n - 1));
        if (p == q) continue;
        if (p > q) std::swap(p, q);
        if (q == p + 1) continue;
        if (p == 0 && q == n - 1) continue;  // same pair of edges as (n-1, 0)
        return {p, q};
    }
}

}  // namespace

SaTourResult sa_solve_tour(const TspInstance& inst, const Schedule& schedule, long steps,
                           std::uint64_t seed, const std::vector<int>* start_order,
                           long trace_stride) {
    if (steps < 1) throw std::invalid_argument("sa_solve_tour: steps must be >= 1");
    if (trace_stride < 1) trace_stride = 1;
    const int n = inst.n();
    Rng rng = Rng::derive(seed, 0x5a70);

    std::vector<int> order;
    if (start_order != nullptr) {
        if (!validate_tour(inst, *start_order)) throw InvalidTour("sa_solve_tour: bad start tour");
        order = *start_order;
    } else {
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_int(0, i));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
    }

    SaTourResult result;
    double e_current = tour_length(inst, order);
    result.distance_terms = n;
    std::vector<int> best_order = order;
    double e_best = e_current;

    auto at = [&](int idx) { return inst.city(order[static_cast<std::size_t>(idx)]); };

    for (long step = 1; step <= steps; ++step) {
        const double t = schedule.temperature_at(step);
        const TwoOptMove mv = draw_two_opt(n, rng);
        const int pn = mv.p + 1;
        const int qn = (mv.q + 1) % n;
        const double delta = dist(at(mv.p), at(mv.q)) + dist(at(pn), at(qn)) -
                             dist(at(mv.p), at(pn)) - dist(at(mv.q), at(qn));
        ++result.proposals;
        result.distance_terms += 4;
        if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
            std::reverse(order.begin() + pn, order.begin() + mv.q + 1);
            e_current += delta;
            if (e_current < e_best) {
                e_best = e_current;
                best_order = order;
            }
        }
        if (step % trace_stride == 0 || step == steps) {
            result.trace.push_back({step, t, e_current, e_best});
        }
    }

    // canonical orientation: city 0 first, second city below last
    auto zero = std::find(best_order.begin(), best_order.end(), 0);
    std::rotate(best_order.begin(), zero, best_order.end());
    if (n >= 3 && best_order[1] > best_order[static_cast<std::size_t>(n - 1)])
        std::reverse(best_order.begin() + 1, best_order.end());

    result.best.length = tour_length(inst, best_order);
    result.best.order = std::move(best_order);
    return result;
}

}  // namespace qtsp

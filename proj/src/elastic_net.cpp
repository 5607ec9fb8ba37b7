#include "qtsp/elastic_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qtsp/errors.hpp"
#include "qtsp/landscapes.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Scalar pieces of the update are shared by the parallel and serial paths;
// what the serial reference cross-checks is the OpenMP work decomposition
// and reduction order, not the transcendental math.
double kernel_exponent(Point2 x, Point2 y, double inv_2k2, bool squared) {
    return squared ? -dist2(x, y) * inv_2k2 : -dist(x, y) * inv_2k2;
}

// Softmax row statistics for one city: max exponent and the sum of
// max-shifted exponentials (always >= 1, so no division hazard).
struct RowStats {
    double max_e;
    double denom;
};

RowStats row_stats(Point2 city, const std::vector<Point2>& beads, double inv_2k2, bool squared) {
    double max_e = -std::numeric_limits<double>::infinity();
    for (const Point2& b : beads) max_e = std::max(max_e, kernel_exponent(city, b, inv_2k2, squared));
    double denom = 0.0;
    for (const Point2& b : beads) denom += std::exp(kernel_exponent(city, b, inv_2k2, squared) - max_e);
    return {max_e, denom};
}

Point2 bead_update(Point2 y, Point2 prev, Point2 next, double ax, double ay, double alpha,
                   double beta_k) {
    return {y.x + alpha * ax + beta_k * (next.x - 2.0 * y.x + prev.x),
            y.y + alpha * ay + beta_k * (next.y - 2.0 * y.y + prev.y)};
}

// The tension term carries beta/2 so that en_step is exactly unit-step
// gradient descent on this function: the factor 2 the derivative of
// sum |y_{j+1} - y_j|^2 produces is conventionally absorbed into beta in the
// update rule, and the monotone-descent guarantee only holds for the energy
// written in the same convention.
double combine_free_energy(double attract, double tension, const EnParams& p, double k) {
    return -p.alpha * k * k * attract + 0.5 * p.beta * k * tension;
}

double ring_tension(const std::vector<Point2>& beads) {
    const std::size_t m = beads.size();
    double tension = 0.0;
    for (std::size_t j = 0; j < m; ++j) tension += dist2(beads[j], beads[(j + 1) % m]);
    return tension;
}

void check_finite_beads(const std::vector<Point2>& beads) {
    for (std::size_t j = 0; j < beads.size(); ++j) {
        if (!std::isfinite(beads[j].x) || !std::isfinite(beads[j].y))
            throw NumericError("en_step: non-finite bead " + std::to_string(j));
    }
}

}  // namespace

void EnParams::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("EnParams: alpha and beta must be positive");
    if (!(m_ratio >= 2.0)) throw std::invalid_argument("EnParams: m_ratio must be >= 2");
    if (!(k0 > 0.0)) throw std::invalid_argument("EnParams: k0 must be positive");
    if (!(k_decay > 0.0) || !(k_decay < 1.0))
        throw std::invalid_argument("EnParams: k_decay must be in (0,1)");
    if (k_period < 1) throw std::invalid_argument("EnParams: k_period must be >= 1");
    if (!(k_min > 0.0)) throw std::invalid_argument("EnParams: k_min must be positive");
    if (max_iters < 0) throw std::invalid_argument("EnParams: max_iters must be >= 0");
}

void ElasticString::validate() const {
    if (m() < 3) throw std::invalid_argument("ElasticString: need at least 3 beads");
    if (!(k > 0.0)) throw std::invalid_argument("ElasticString: k must be positive");
    for (const Point2& b : beads) {
        if (!std::isfinite(b.x) || !std::isfinite(b.y))
            throw std::invalid_argument("ElasticString: non-finite bead coordinate");
    }
}

double free_energy(const TspInstance& inst, const ElasticString& s, const EnParams& p) {
    p.validate();
    s.validate();
    const int n = inst.n();
    const double inv_2k2 = 1.0 / (2.0 * s.k * s.k);
    std::vector<double> city_term(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const RowStats rs = row_stats(inst.city(i), s.beads, inv_2k2, p.squared_exponent);
        city_term[static_cast<std::size_t>(i)] = rs.max_e + std::log(rs.denom);
    }
    double attract = 0.0;
    for (int i = 0; i < n; ++i) attract += city_term[static_cast<std::size_t>(i)];
    return combine_free_energy(attract, ring_tension(s.beads), p, s.k);
}

ElasticString en_step(const TspInstance& inst, const ElasticString& s, const EnParams& p) {
    p.validate();
    s.validate();
    const int n = inst.n();
    const int m = s.m();
    const double inv_2k2 = 1.0 / (2.0 * s.k * s.k);
    const double beta_k = p.beta * s.k;

    // Pass 1 (parallel over cities): normalized attraction weights, one row
    // per city. Rows are independent, so thread count cannot affect bits.
    std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const Point2 city = inst.city(i);
        const RowStats rs = row_stats(city, s.beads, inv_2k2, p.squared_exponent);
        double* row = w.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(m);
        for (int j = 0; j < m; ++j)
            row[j] = std::exp(kernel_exponent(city, s.beads[static_cast<std::size_t>(j)], inv_2k2,
                                              p.squared_exponent) -
                              rs.max_e) /
                     rs.denom;
    }

    // Pass 2 (parallel over beads): synchronous update, city sum in fixed
    // ascending order within each bead.
    ElasticString out;
    out.k = s.k;
    out.beads.resize(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        const Point2 y = s.beads[static_cast<std::size_t>(j)];
        double ax = 0.0, ay = 0.0;
        for (int i = 0; i < n; ++i) {
            const double wij = w[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                                 static_cast<std::size_t>(j)];
            const Point2 city = inst.city(i);
            ax += wij * (city.x - y.x);
            ay += wij * (city.y - y.y);
        }
        const Point2 prev = s.beads[static_cast<std::size_t>((j + m - 1) % m)];
        const Point2 next = s.beads[static_cast<std::size_t>((j + 1) % m)];
        out.beads[static_cast<std::size_t>(j)] = bead_update(y, prev, next, ax, ay, p.alpha, beta_k);
    }
    check_finite_beads(out.beads);
    return out;
}

double max_city_bead_distance(const TspInstance& inst, const ElasticString& s) {
    s.validate();
    double worst = 0.0;
    for (int i = 0; i < inst.n(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point2& b : s.beads) best = std::min(best, dist2(inst.city(i), b));
        worst = std::max(worst, std::sqrt(best));
    }
    return worst;
}

EnRunResult run_elastic_net(const TspInstance& inst, const EnParams& p, std::uint64_t seed,
                            long trace_stride, long long term_budget) {
    p.validate();
    if (trace_stride < 1) throw std::invalid_argument("run_elastic_net: trace_stride must be >= 1");
    const UnitTransform tf = inst.unit_transform();
    const TspInstance unit = inst.normalized();
    const int n = unit.n();
    const int m = std::max(3, static_cast<int>(std::lround(p.m_ratio * n)));
    const long long per_step = static_cast<long long>(n) * m;

    double cx = 0.0, cy = 0.0;
    for (const Point2& c : unit.cities()) {
        cx += c.x;
        cy += c.y;
    }
    cx /= n;
    cy /= n;

    Rng rng = Rng::derive(seed, 0xe1a2);
    const double theta0 = rng.uniform() * kTwoPi;
    ElasticString s;
    s.k = p.k0;
    s.beads.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double theta = theta0 + kTwoPi * j / m;
        s.beads.push_back({cx + 0.1 * std::cos(theta), cy + 0.1 * std::sin(theta)});
    }

    EnRunResult out;
    auto push_row = [&](long iter, double k_used, const ElasticString& state) {
        ElasticString view{state.beads, k_used};
        out.trace.push_back(
            {iter, k_used, free_energy(unit, view, p), max_city_bead_distance(unit, view)});
        out.diagnostic_terms += 2 * per_step;
    };
    push_row(0, s.k, s);

    long iter = 0;
    long last_recorded = 0;
    double k_final_used = s.k;
    while (iter < p.max_iters && s.k > p.k_min) {
        if (term_budget >= 0 && out.kernel_terms + per_step > term_budget) break;
        s = en_step(unit, s, p);
        ++iter;
        out.kernel_terms += per_step;
        k_final_used = s.k;  // k in effect during this step; decay comes after
        if (iter % trace_stride == 0) {
            push_row(iter, k_final_used, s);
            last_recorded = iter;
        }
        if (iter % static_cast<long>(p.k_period) == 0) s.k *= p.k_decay;
    }
    if (iter > 0 && last_recorded != iter) push_row(iter, k_final_used, s);

    out.iterations = iter;
    out.string.k = s.k;
    out.string.beads.reserve(s.beads.size());
    for (const Point2& b : s.beads) out.string.beads.push_back(tf.from_unit(b));
    return out;
}

Tour extract_tour(const TspInstance& inst, const ElasticString& s) {
    s.validate();
    const int n = inst.n();
    const int m = s.m();
    // (bead index, arc position, city index) sort key per city.
    std::vector<std::tuple<int, double, int>> keys;
    keys.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Point2 city = inst.city(i);
        int best_j = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
            const double d2 = dist2(city, s.beads[static_cast<std::size_t>(j)]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best_j = j;
            }
        }
        const Point2 y = s.beads[static_cast<std::size_t>(best_j)];
        const Point2 next = s.beads[static_cast<std::size_t>((best_j + 1) % m)];
        const double seg_x = next.x - y.x, seg_y = next.y - y.y;
        const double len2 = seg_x * seg_x + seg_y * seg_y;
        const double t = len2 > 0.0 ? ((city.x - y.x) * seg_x + (city.y - y.y) * seg_y) / len2 : 0.0;
        keys.emplace_back(best_j, t, i);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<int> order;
    order.reserve(keys.size());
    for (const auto& [j, t, i] : keys) order.push_back(i);
    order = TourLandscape::canonical(std::move(order));
    Tour tour;
    tour.length = tour_length(inst, order);
    tour.order = std::move(order);
    return tour;
}

namespace serial {

double free_energy(const TspInstance& inst, const ElasticString& s, const EnParams& p) {
    p.validate();
    s.validate();
    const double inv_2k2 = 1.0 / (2.0 * s.k * s.k);
    double attract = 0.0;
    for (int i = 0; i < inst.n(); ++i) {
        const RowStats rs = row_stats(inst.city(i), s.beads, inv_2k2, p.squared_exponent);
        attract += rs.max_e + std::log(rs.denom);
    }
    return combine_free_energy(attract, ring_tension(s.beads), p, s.k);
}

ElasticString en_step(const TspInstance& inst, const ElasticString& s, const EnParams& p) {
    p.validate();
    s.validate();
    const int n = inst.n();
    const int m = s.m();
    const double inv_2k2 = 1.0 / (2.0 * s.k * s.k);
    const double beta_k = p.beta * s.k;

    // Same two logical passes as the parallel kernel, but plain loops and no
    // stored weight matrix: weights are recomputed per bead from the row
    // statistics, in the same i-ascending order.
    std::vector<RowStats> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rows.push_back(row_stats(inst.city(i), s.beads, inv_2k2, p.squared_exponent));

    ElasticString out;
    out.k = s.k;
    out.beads.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const Point2 y = s.beads[static_cast<std::size_t>(j)];
        double ax = 0.0, ay = 0.0;
        for (int i = 0; i < n; ++i) {
            const Point2 city = inst.city(i);
            const double wij =
                std::exp(kernel_exponent(city, y, inv_2k2, p.squared_exponent) - rows[i].max_e) /
                rows[static_cast<std::size_t>(i)].denom;
            ax += wij * (city.x - y.x);
            ay += wij * (city.y - y.y);
        }
        const Point2 prev = s.beads[static_cast<std::size_t>((j + m - 1) % m)];
        const Point2 next = s.beads[static_cast<std::size_t>((j + 1) % m)];
        out.beads[static_cast<std::size_t>(j)] = bead_update(y, prev, next, ax, ay, p.alpha, beta_k);
    }
    check_finite_beads(out.beads);
    return out;
}

}  // namespace serial

}  // namespace qtsp

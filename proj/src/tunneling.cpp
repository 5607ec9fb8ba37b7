#include "qtsp/tunneling.hpp"

#include <algorithm>
#include <cmath>

#include "qtsp/errors.hpp"
#include "qtsp/linalg.hpp"
#include "qtsp/rng.hpp"

namespace qtsp {

void TunnelParams::validate() const {
    if (delta <= 0.0) throw std::invalid_argument("TunnelParams: delta must be positive");
    if (omega <= 0.0) throw std::invalid_argument("TunnelParams: omega must be positive");
    if (d <= 0.0) throw std::invalid_argument("TunnelParams: d must be positive");
    if (hbar <= 0.0) throw std::invalid_argument("TunnelParams: hbar must be positive");
    if (sigma < 0.0) throw std::invalid_argument("TunnelParams: sigma must be non-negative");
    if (eta < 0.0) throw std::invalid_argument("TunnelParams: eta must be non-negative");
    if (beta <= 0.0) throw std::invalid_argument("TunnelParams: beta must be positive");
}

double rate_forward(const TunnelParams& p) {
    p.validate();
    const double a = p.alpha();
    if (a <= 0.0) throw std::invalid_argument("rate_forward: alpha must be positive (eta > 0)");
    const double exponent = 2.0 * a - 1.0;
    if (p.sigma == 0.0 && exponent < 0.0)
        throw DivergentRate("rate_forward: sigma = 0 with 2*alpha < 1 diverges");
    const double ratio_pow = std::pow(p.sigma / p.omega, exponent);
    return 0.5 * M_PI * (p.delta * p.delta / p.omega) / std::tgamma(2.0 * a) * ratio_pow;
}

double rate_backward(const TunnelParams& p) {
    const double forward = rate_forward(p);
    if (std::isinf(p.beta)) return 0.0;
    return forward * std::exp(-p.beta * p.hbar * p.sigma);
}

double transition_time(double gamma, double hbar) {
    if (gamma <= 0.0) throw std::invalid_argument("transition_time: rate must be positive");
    if (hbar <= 0.0) throw std::invalid_argument("transition_time: hbar must be positive");
    return hbar / gamma;
}

double drift_velocity(const TunnelParams& p, DriftVariant variant) {
    if (std::isinf(p.beta))
        throw std::invalid_argument("drift_velocity: requires finite beta");
    const double gamma = rate_forward(p);
    const double thermal = std::tanh(0.5 * p.beta * p.hbar * p.sigma);
    // Zero bias means zero drift in either reading; return it directly so the
    // literal variant cannot evaluate inf * 0 when gamma is 0 as well.
    if (thermal == 0.0) return 0.0;
    switch (variant) {
        case DriftVariant::literal:
            return (p.d * p.hbar / gamma) * thermal;
        case DriftVariant::corrected:
            return p.d * gamma * thermal;
    }
    return 0.0;
}

void MinimaChain::validate() const {
    if (positions.size() < 2) throw std::invalid_argument("MinimaChain: need at least 2 minima");
    if (forward_rates.size() != positions.size() - 1 ||
        backward_rates.size() != positions.size() - 1)
        throw std::invalid_argument("MinimaChain: rates must have size n_minima - 1");
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        if (!(positions[i] < positions[i + 1]))
            throw std::invalid_argument("MinimaChain: positions must be strictly increasing");
    }
    bool any_positive = false;
    for (std::size_t i = 0; i < forward_rates.size(); ++i) {
        if (forward_rates[i] < 0.0 || backward_rates[i] < 0.0)
            throw std::invalid_argument("MinimaChain: rates must be non-negative");
        any_positive = any_positive || forward_rates[i] > 0.0 || backward_rates[i] > 0.0;
    }
    if (!any_positive) throw std::invalid_argument("MinimaChain: all rates are zero");
}

MinimaChain MinimaChain::uniform(int n_minima, double spacing, double forward_rate,
                                 double backward_rate, double q0) {
    if (n_minima < 2) throw std::invalid_argument("MinimaChain::uniform: need at least 2 minima");
    if (spacing <= 0.0) throw std::invalid_argument("MinimaChain::uniform: spacing must be positive");
    MinimaChain chain;
    chain.positions.resize(static_cast<std::size_t>(n_minima));
    for (int i = 0; i < n_minima; ++i) chain.positions[static_cast<std::size_t>(i)] = q0 + spacing * i;
    chain.forward_rates.assign(static_cast<std::size_t>(n_minima - 1), forward_rate);
    chain.backward_rates.assign(static_cast<std::size_t>(n_minima - 1), backward_rate);
    chain.validate();
    return chain;
}

double mean_first_passage_analytic(const MinimaChain& chain) {
    chain.validate();
    for (double b : chain.backward_rates) {
        if (b != 0.0)
            throw std::invalid_argument("mean_first_passage_analytic: backward rates must be zero");
    }
    KahanSum total;
    for (double f : chain.forward_rates) {
        if (f <= 0.0)
            throw UnreachableMinimum("mean_first_passage_analytic: zero forward rate blocks passage");
        total.add(1.0 / f);
    }
    return total.value();
}

namespace {

struct TrajectoryOut {
    double slope = 0.0;
    double fpt = -1.0;  // < 0 when the last minimum was not reached within t_max
};

// Runs one trajectory, adding its sampled positions into sum_q/sumsq_q.
TrajectoryOut run_trajectory(const MinimaChain& chain, const KmcParams& params, Rng rng,
                             const std::vector<double>& t_grid, double t_mean, double s_tt,
                             std::vector<double>& sum_q, std::vector<double>& sumsq_q) {
    const int n = chain.size();
    const int target = n - 1;
    int state = params.start_index;
    double t = 0.0;
    std::size_t next_grid = 0;
    TrajectoryOut out;
    if (state == target) out.fpt = 0.0;

    double sq = 0.0;   // sum of sampled positions
    double stq = 0.0;  // sum of t_g * q_g

    auto record_until = [&](double t_limit, double q) {
        while (next_grid < t_grid.size() && t_grid[next_grid] <= t_limit) {
            sum_q[next_grid] += q;
            sumsq_q[next_grid] += q * q;
            sq += q;
            stq += t_grid[next_grid] * q;
            ++next_grid;
        }
    };

    while (true) {
        const double fw = state < n - 1 ? chain.forward_rates[static_cast<std::size_t>(state)] : 0.0;
        const double bw = state > 0 ? chain.backward_rates[static_cast<std::size_t>(state - 1)] : 0.0;
        const double total = fw + bw;
        const double q = chain.positions[static_cast<std::size_t>(state)];
        if (total <= 0.0) {  // absorbed
            record_until(params.t_max, q);
            break;
        }
        const double wait = rng.exponential(total);
        const double t_next = t + wait;
        if (t_next >= params.t_max) {
            record_until(params.t_max, q);
            break;
        }
        record_until(t_next, q);
        state += rng.uniform() * total < fw ? 1 : -1;
        t = t_next;
        if (state == target && out.fpt < 0.0) out.fpt = t;
    }

    const double n_pts = static_cast<double>(t_grid.size());
    const double q_mean = sq / n_pts;
    out.slope = (stq - n_pts * t_mean * q_mean) / s_tt;
    return out;
}

constexpr long kChunk = 64;

void check_kmc_inputs(const MinimaChain& chain, const KmcParams& params) {
    chain.validate();
    if (params.t_max <= 0.0) throw std::invalid_argument("simulate_kmc: t_max must be positive");
    if (params.trajectories < 1)
        throw std::invalid_argument("simulate_kmc: need at least one trajectory");
    if (params.grid_points < 2) throw std::invalid_argument("simulate_kmc: need >= 2 grid points");
    if (params.start_index < 0 || params.start_index >= chain.size())
        throw std::invalid_argument("simulate_kmc: start index out of range");
    const int s = params.start_index;
    const double fw = s < chain.size() - 1 ? chain.forward_rates[static_cast<std::size_t>(s)] : 0.0;
    const double bw = s > 0 ? chain.backward_rates[static_cast<std::size_t>(s - 1)] : 0.0;
    if (fw + bw <= 0.0) throw StuckState("simulate_kmc: start state has zero exit rate");
}

std::vector<double> make_grid(const KmcParams& params, double& t_mean, double& s_tt) {
    const std::size_t g = static_cast<std::size_t>(params.grid_points);
    std::vector<double> t_grid(g);
    for (std::size_t i = 0; i < g; ++i)
        t_grid[i] = params.t_max * static_cast<double>(i) / static_cast<double>(g - 1);
    t_mean = 0.0;
    for (double t : t_grid) t_mean += t;
    t_mean /= static_cast<double>(g);
    s_tt = 0.0;
    for (double t : t_grid) s_tt += (t - t_mean) * (t - t_mean);
    return t_grid;
}

double stderr_of(double sum, double sumsq, double count) {
    if (count < 2.0) return 0.0;
    const double mean = sum / count;
    double var = (sumsq - count * mean * mean) / (count - 1.0);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / count);
}

}  // namespace

KmcStats simulate_kmc(const MinimaChain& chain, const KmcParams& params) {
    check_kmc_inputs(chain, params);
    double t_mean, s_tt;
    const std::vector<double> t_grid = make_grid(params, t_mean, s_tt);
    const std::size_t g = t_grid.size();
    const long k = params.trajectories;
    const long n_chunks = (k + kChunk - 1) / kChunk;

    // Fixed-size chunks keyed by trajectory index keep the reduction order
    // independent of the thread count.
    struct ChunkAcc {
        std::vector<double> sum_q, sumsq_q;
        double sum_slope = 0.0, sumsq_slope = 0.0;
        double sum_fpt = 0.0, sumsq_fpt = 0.0;
        long arrived = 0;
    };
    std::vector<ChunkAcc> chunks(static_cast<std::size_t>(n_chunks));

#pragma omp parallel for schedule(static)
    for (long c = 0; c < n_chunks; ++c) {
        ChunkAcc& acc = chunks[static_cast<std::size_t>(c)];
        acc.sum_q.assign(g, 0.0);
        acc.sumsq_q.assign(g, 0.0);
        const long lo = c * kChunk;
        const long hi = std::min(k, lo + kChunk);
        for (long traj = lo; traj < hi; ++traj) {
            TrajectoryOut out =
                run_trajectory(chain, params, Rng::derive(params.seed, static_cast<std::uint64_t>(traj)),
                               t_grid, t_mean, s_tt, acc.sum_q, acc.sumsq_q);
            acc.sum_slope += out.slope;
            acc.sumsq_slope += out.slope * out.slope;
            if (out.fpt >= 0.0) {
                ++acc.arrived;
                acc.sum_fpt += out.fpt;
                acc.sumsq_fpt += out.fpt * out.fpt;
            }
        }
    }

    KmcStats stats;
    stats.t_grid = t_grid;
    stats.mean_q.assign(g, 0.0);
    stats.stderr_q.assign(g, 0.0);
    std::vector<KahanSum> sum_q(g), sumsq_q(g);
    KahanSum sum_slope, sumsq_slope, sum_fpt, sumsq_fpt;
    for (const ChunkAcc& acc : chunks) {
        for (std::size_t i = 0; i < g; ++i) {
            sum_q[i].add(acc.sum_q[i]);
            sumsq_q[i].add(acc.sumsq_q[i]);
        }
        sum_slope.add(acc.sum_slope);
        sumsq_slope.add(acc.sumsq_slope);
        sum_fpt.add(acc.sum_fpt);
        sumsq_fpt.add(acc.sumsq_fpt);
        stats.arrived += acc.arrived;
    }

    const double kd = static_cast<double>(k);
    for (std::size_t i = 0; i < g; ++i) {
        stats.mean_q[i] = sum_q[i].value() / kd;
        stats.stderr_q[i] = stderr_of(sum_q[i].value(), sumsq_q[i].value(), kd);
    }
    stats.slope = sum_slope.value() / kd;
    stats.slope_stderr = stderr_of(sum_slope.value(), sumsq_slope.value(), kd);
    if (stats.arrived > 0) {
        const double ad = static_cast<double>(stats.arrived);
        stats.mfpt_mean = sum_fpt.value() / ad;
        stats.mfpt_stderr = stderr_of(sum_fpt.value(), sumsq_fpt.value(), ad);
    }
    return stats;
}

namespace serial {

KmcStats simulate_kmc(const MinimaChain& chain, const KmcParams& params) {
    check_kmc_inputs(chain, params);
    double t_mean, s_tt;
    const std::vector<double> t_grid = make_grid(params, t_mean, s_tt);
    const std::size_t g = t_grid.size();
    const long k = params.trajectories;

    std::vector<double> sum_q(g, 0.0), sumsq_q(g, 0.0);
    double sum_slope = 0.0, sumsq_slope = 0.0;
    double sum_fpt = 0.0, sumsq_fpt = 0.0;
    long arrived = 0;

    std::vector<double> traj_sum(g), traj_sumsq(g);
    for (long traj = 0; traj < k; ++traj) {
        std::fill(traj_sum.begin(), traj_sum.end(), 0.0);
        std::fill(traj_sumsq.begin(), traj_sumsq.end(), 0.0);
        TrajectoryOut out =
            run_trajectory(chain, params, Rng::derive(params.seed, static_cast<std::uint64_t>(traj)),
                           t_grid, t_mean, s_tt, traj_sum, traj_sumsq);
        for (std::size_t i = 0; i < g; ++i) {
            sum_q[i] += traj_sum[i];
            sumsq_q[i] += traj_sumsq[i];
        }
        sum_slope += out.slope;
        sumsq_slope += out.slope * out.slope;
        if (out.fpt >= 0.0) {
            ++arrived;
            sum_fpt += out.fpt;
            sumsq_fpt += out.fpt * out.fpt;
        }
    }

    KmcStats stats;
    stats.t_grid = t_grid;
    stats.mean_q.assign(g, 0.0);
    stats.stderr_q.assign(g, 0.0);
    const double kd = static_cast<double>(k);
    for (std::size_t i = 0; i < g; ++i) {
        stats.mean_q[i] = sum_q[i] / kd;
        stats.stderr_q[i] = stderr_of(sum_q[i], sumsq_q[i], kd);
    }
    stats.slope = sum_slope / kd;
    stats.slope_stderr = stderr_of(sum_slope, sumsq_slope, kd);
    stats.arrived = arrived;
    if (arrived > 0) {
        const double ad = static_cast<double>(arrived);
        stats.mfpt_mean = sum_fpt / ad;
        stats.mfpt_stderr = stderr_of(sum_fpt, sumsq_fpt, ad);
    }
    return stats;
}

}  // namespace serial

}  // namespace qtsp

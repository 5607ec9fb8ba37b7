#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace qtsp {

// Dissipative two-well tunneling parameters, hbar = k_B = 1 conventions by
// default. delta/omega/sigma are frequencies, eta is a friction coefficient,
// d the tunneling length, beta the inverse temperature (infinite by default,
// i.e. the T -> 0 regime where reverse hops vanish).
struct TunnelParams {
    double delta = 1.0;
    double omega = 1.0;
    double sigma = 0.5;
    double eta = M_PI / 4.0;
    double d = 1.0;
    double hbar = 1.0;
    double beta = std::numeric_limits<double>::infinity();

    double alpha() const { return eta * d * d / (2.0 * M_PI * hbar); }
    void validate() const;
};

// Forward incoherent-tunneling rate
//   gamma = (pi/2) (delta^2/omega) (1/Gamma(2 alpha)) (sigma/omega)^(2 alpha - 1).
// sigma = 0 with 2 alpha < 1 is rejected as a divergent rate.
double rate_forward(const TunnelParams& p);

// Zero at beta = infinity; otherwise the detailed-balance extension
// rate_forward * exp(-beta * hbar * sigma). The finite-temperature branch is
// an extension beyond the zero-temperature suppression statement.
double rate_backward(const TunnelParams& p);

// tau = hbar / gamma (the proportionality constant is taken as 1).
double transition_time(double gamma, double hbar = 1.0);

enum class DriftVariant { literal, corrected };

// Mean drift velocity down a tilted washboard. `literal` evaluates
// (d*hbar/gamma)*tanh(beta*hbar*sigma/2) exactly as stated even though its
// dimensions are not a velocity; `corrected` uses d*gamma*tanh(...).
double drift_velocity(const TunnelParams& p, DriftVariant variant);

// 1-D sequence of local minima with per-barrier hop rates.
// forward_rates[i] is the rate i -> i+1, backward_rates[i] the rate i+1 -> i.
struct MinimaChain {
    std::vector<double> positions;
    std::vector<double> forward_rates;
    std::vector<double> backward_rates;

    int size() const { return static_cast<int>(positions.size()); }
    void validate() const;

    static MinimaChain uniform(int n_minima, double spacing, double forward_rate,
                               double backward_rate, double q0 = 0.0);
};

struct KmcParams {
    double t_max = 10.0;
    long trajectories = 1000;
    std::uint64_t seed = 1;
    int grid_points = 201;
    int start_index = 0;
};

struct KmcStats {
    std::vector<double> t_grid;
    std::vector<double> mean_q;
    std::vector<double> stderr_q;
    double slope = 0.0;         // mean of per-trajectory least-squares slopes
    double slope_stderr = 0.0;
    long arrived = 0;           // trajectories that reached the last minimum
    double mfpt_mean = 0.0;     // first-passage time to the last minimum, over arrived
    double mfpt_stderr = 0.0;
};

// Continuous-time Markov jumps: exponential waiting times with the total exit
// rate, direction proportional to the rates. Trajectories use independent
// streams derived from the seed, so results do not depend on thread count.
KmcStats simulate_kmc(const MinimaChain& chain, const KmcParams& params);

// Sum of single-barrier passage times 1/gamma_i for forward-only chains.
double mean_first_passage_analytic(const MinimaChain& chain);

namespace serial {
// Plain sequential reference used by tests and the kernel benchmark.
KmcStats simulate_kmc(const MinimaChain& chain, const KmcParams& params);
}  // namespace serial

}  // namespace qtsp

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qtsp {

// Solves A x = b in place (A is n*n row-major, overwritten) by Gaussian
// elimination with partial pivoting. Throws NumericError on a singular system.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

// Kahan-compensated accumulator; merging two accumulators is associative
// enough for the fixed-order chunk reductions used by the parallel kernels.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double value) {
        const double y = value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

}  // namespace qtsp

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "gmeasure/gfunction.hpp"

namespace gmeasure {

// Dyadic grid points j/2^m are exactly representable in binary floating
// point, so grid arithmetic incurs no representation error.

/// Values of a real function on the level-m dyadic grid {j/2^m}.
/// When log_space is set, entries hold log2 of a non-negative function,
/// with -inf marking exact zeros.
struct GridFunction {
    int level = 0;
    std::vector<double> values;
    bool log_space = false;

    std::size_t size() const { return values.size(); }
    double spacing() const { return std::ldexp(1.0, -level); }
    double point(std::size_t j) const { return static_cast<double>(j) * spacing(); }

    double min() const;
    double max() const;

    /// Convert log2 representation back to linear values.
    GridFunction to_linear() const;
};

/// Sample a closed-form function on the level-m grid.
GridFunction sample_grid(const std::function<double(double)>& f, int level);

/// Sample a g-function on the level-m grid; uses a blocked trig recurrence
/// for cosine-form builtins, direct evaluation otherwise.
GridFunction sample_g(const GFunction& g, int level);

/// Fill out[j] = cos(2*pi*(freq * j * 2^-level + phase)) for j < count.
/// Blocked rotation recurrence resynchronized against std::cos; absolute
/// error stays below 1e-12.
void fill_cos(std::vector<double>& out, std::size_t count, int level, double freq, double phase);

/// Riesz-product density g_n(x) = 2^n prod_{k<n} g(2^k x) on the level-m
/// grid.  In log space, sums log2 terms with -inf at zeros of g.
GridFunction density_g_n(const GFunction& g, int n, int level, bool log_space = false);

/// Trapezoidal quadrature over the torus (equals the grid mean for
/// periodic data).
double trapezoid(const GridFunction& f);

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace gmeasure

#include "gmeasure/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmeasure {

double GridFunction::min() const {
    return *std::min_element(values.begin(), values.end());
}

double GridFunction::max() const {
    return *std::max_element(values.begin(), values.end());
}

GridFunction GridFunction::to_linear() const {
    if (!log_space) return *this;
    GridFunction out;
    out.level = level;
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back(v == kNegInf ? 0.0 : std::exp2(v));
    return out;
}

GridFunction sample_grid(const std::function<double(double)>& f, int level) {
    GridFunction out;
    out.level = level;
    const std::size_t n = std::size_t{1} << level;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.values[j] = f(std::ldexp(static_cast<double>(j), -level));
    return out;
}

void fill_cos(std::vector<double>& out, std::size_t count, int level, double freq, double phase) {
    if (out.size() < count) out.resize(count);
    constexpr std::size_t kBlock = 1024;  // resync period for the rotation recurrence
    const double step = 2.0 * std::numbers::pi * freq * std::ldexp(1.0, -level);
    const double cs = std::cos(step), sn = std::sin(step);
    const double phase0 = 2.0 * std::numbers::pi * phase;
    for (std::size_t base = 0; base < count; base += kBlock) {
        const double a0 = phase0 + step * static_cast<double>(base);
        double c = std::cos(a0), s = std::sin(a0);
        const std::size_t end = std::min(count, base + kBlock);
        for (std::size_t j = base; j < end; ++j) {
            out[j] = c;
            const double c2 = c * cs - s * sn;
            s = c * sn + s * cs;
            c = c2;
        }
    }
}

GridFunction sample_g(const GFunction& g, int level) {
    if (!g.cos_form) return sample_grid(g.fn, level);
    GridFunction out;
    out.level = level;
    const std::size_t n = std::size_t{1} << level;
    fill_cos(out.values, n, level, g.cos_form->freq, 0.0);
    for (double& v : out.values) v = g.cos_form->offset + g.cos_form->amplitude * v;
    return out;
}

GridFunction density_g_n(const GFunction& g, int n, int level, bool log_space) {
    if (n < 0) throw error("density_g_n: n must be >= 0");
    GridFunction out;
    out.level = level;
    out.log_space = log_space;
    const std::size_t size = std::size_t{1} << level;
    out.values.assign(size, log_space ? static_cast<double>(n) : std::ldexp(1.0, n));
    // g(2^k x) on the level-m grid is g sampled with index stride 2^k mod 2^m.
    std::vector<double> gv;
    {
        GridFunction gs = sample_g(g, level);
        gv = std::move(gs.values);
    }
    const std::size_t mask = size - 1;
    for (int k = 0; k < n; ++k) {
        const std::size_t stride = (k < level) ? (std::size_t{1} << k) : 0;
        if (stride == 0) {
            // 2^k x wraps to the single grid point 0 for every j
            const double v0 = gv[0];
            if (log_space) {
                const double lv = v0 > 0 ? std::log2(v0) : kNegInf;
                for (double& v : out.values) v += lv;
            } else {
                for (double& v : out.values) v *= v0;
            }
            continue;
        }
        std::size_t idx = 0;
        if (log_space) {
            for (std::size_t j = 0; j < size; ++j, idx = (idx + stride) & mask) {
                const double gval = gv[idx];
                out.values[j] += gval > 0 ? std::log2(gval) : kNegInf;
            }
        } else {
            for (std::size_t j = 0; j < size; ++j, idx = (idx + stride) & mask)
                out.values[j] *= gv[idx];
        }
    }
    return out;
}

double trapezoid(const GridFunction& f) {
    if (f.log_space) throw error("trapezoid: expects a linear-space grid");
    double sum = 0, c = 0;  // Kahan
    for (double v : f.values) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(f.values.size());
}

}  // namespace gmeasure

#include "gmeasure/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmeasure/classify.hpp"

namespace gmeasure {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TestFunction TestFunction::constant(double c) {
    TestFunction f;
    f.eval = [c](double) { return c; };
    f.sup_bound = std::fabs(c);
    f.modulus = [](double) { return 0.0; };
    f.sampler = [c](std::vector<double>& out, int level) {
        out.assign(std::size_t{1} << level, c);
    };
    return f;
}

TestFunction TestFunction::cosine(int k) {
    TestFunction f;
    f.eval = [k](double x) { return std::cos(kTwoPi * k * x); };
    f.sup_bound = 1.0;
    f.modulus = [k](double d) { return std::min(2.0, kTwoPi * std::fabs(k) * d); };
    f.sampler = [k](std::vector<double>& out, int level) {
        fill_cos(out, std::size_t{1} << level, level, k, 0.0);
    };
    return f;
}

TestFunction TestFunction::sine(int k) {
    TestFunction f;
    f.eval = [k](double x) { return std::sin(kTwoPi * k * x); };
    f.sup_bound = 1.0;
    f.modulus = [k](double d) { return std::min(2.0, kTwoPi * std::fabs(k) * d); };
    f.sampler = [k](std::vector<double>& out, int level) {
        // sin t = cos(t - pi/2)
        fill_cos(out, std::size_t{1} << level, level, k, -0.25);
    };
    return f;
}

GridFunction apply_transfer(const GFunction& g, const GridFunction& f) {
    if (f.level < 1) throw error("apply_transfer: cannot descend below level 0");
    if (f.log_space) throw error("apply_transfer: expects a linear-space grid");
    const GridFunction gv = sample_g(g, f.level);
    GridFunction out;
    out.level = f.level - 1;
    const std::size_t half = std::size_t{1} << out.level;
    out.values.resize(half);
    for (std::size_t j = 0; j < half; ++j)
        out.values[j] = gv.values[j] * f.values[j] + gv.values[j + half] * f.values[j + half];
    return out;
}

namespace {

double preimage_tree(const GFunction& g, const std::function<double(double)>& f,
                     double x, int n) {
    if (n == 0) return f(x);
    const double a = 0.5 * x;
    const double b = a + 0.5;
    return g(a) * preimage_tree(g, f, a, n - 1) + g(b) * preimage_tree(g, f, b, n - 1);
}

}  // namespace

namespace {

GridFunction iterate_transfer_impl(const GFunction& g, const std::function<double(double)>& f,
                                   const std::function<void(std::vector<double>&, int)>& sampler,
                                   int n, int level, TransferStats* stats) {
    if (n < 0 || level < 0) throw error("iterate_transfer: n and level must be >= 0");
    const int total = level + n;
    if (total > kMaxTotalLevel)
        throw error("iterate_transfer: level + n = " + std::to_string(total) +
                    " exceeds the cap of " + std::to_string(kMaxTotalLevel));

    GridFunction out;
    out.level = level;

    if (total <= kMaterializeLevel) {
        std::vector<double> gv;
        if (n > 0) {
            GridFunction gs = sample_g(g, total);
            gv = std::move(gs.values);
        }
        std::vector<double> cur(std::size_t{1} << total);
        if (sampler) {
            sampler(cur, total);
            cur.resize(std::size_t{1} << total);
        } else {
            for (std::size_t j = 0; j < cur.size(); ++j)
                cur[j] = f(std::ldexp(static_cast<double>(j), -total));
        }
        for (int l = total; l > level; --l) {
            const std::size_t half = std::size_t{1} << (l - 1);
            const int sh = total - l;
            for (std::size_t j = 0; j < half; ++j)
                cur[j] = gv[j << sh] * cur[j] + gv[(j + half) << sh] * cur[j + half];
            cur.resize(half);
            if (stats) {
                const auto [mn, mx] = std::minmax_element(cur.begin(), cur.end());
                stats->full_min.push_back(*mn);
                stats->full_max.push_back(*mx);
                const int sub_sh = (l - 1) - level;
                double smn = cur[0], smx = cur[0];
                for (std::size_t j = 0; j < (std::size_t{1} << level); ++j) {
                    const double v = cur[j << sub_sh];
                    smn = std::min(smn, v);
                    smx = std::max(smx, v);
                }
                stats->sub_min.push_back(smn);
                stats->sub_max.push_back(smx);
            }
        }
        out.values = std::move(cur);
        return out;
    }

    // streaming fallback: O(n) memory, 2^(level+n) leaf evaluations
    out.values.resize(std::size_t{1} << level);
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = preimage_tree(g, f, std::ldexp(static_cast<double>(j), -level), n);
    return out;
}

}  // namespace

GridFunction iterate_transfer(const GFunction& g, const std::function<double(double)>& f,
                              int n, int level, TransferStats* stats) {
    return iterate_transfer_impl(g, f, nullptr, n, level, stats);
}

GridFunction iterate_transfer(const GFunction& g, const TestFunction& f,
                              int n, int level, TransferStats* stats) {
    return iterate_transfer_impl(g, f.eval, f.sampler, n, level, stats);
}

double modulus_propagation(const std::function<double(double)>& f_modulus, double sup_f,
                           const std::function<double(double)>& g_modulus, int n, double delta) {
    // (phi^n f)[d] <= f[d/2^n] + 2 sup|f| sum_{j=1..n} g[d/2^j]
    double pad = f_modulus(std::ldexp(delta, -n));
    for (int j = 1; j <= n; ++j) pad += 2.0 * sup_f * g_modulus(std::ldexp(delta, -j));
    return pad;
}

namespace {

/// M_n(delta) with an explicit per-step sup chain s_0..s_{n-1}.
double chained_modulus(const TestFunction& f, const GFunction& g,
                       const std::vector<double>& sup_chain, int n, double delta) {
    double pad = f.modulus(std::ldexp(delta, -n));
    for (int j = 1; j <= n; ++j)
        pad += 2.0 * sup_chain[static_cast<std::size_t>(j - 1)] *
               g.modulus_bound(std::ldexp(delta, -(n - j + 1)));
    return pad;
}

}  // namespace

MuResult mu_of_function_full(const GFunction& g, const TestFunction& f, int n, int level,
                             const MuOptions& opts) {
    if (!opts.override_goodness) {
        const GoodnessReport rep = check_goodness(g);
        if (!rep.good)
            throw error("mu_of_function: g-function '" + g.name +
                        "' fails all convergence conditions; pass override to force");
    }
    const int total = level + n;
    TransferStats stats;
    TransferStats* stats_ptr = (total <= kMaterializeLevel) ? &stats : nullptr;
    const GridFunction res = iterate_transfer(g, f, n, level, stats_ptr);

    MuResult r;
    r.at_zero = res.values.empty() ? 0.0 : res.values[0];
    r.grid_min = res.min();
    r.grid_max = res.max();

    const double h = res.spacing();
    double pad = 0;
    bool cert = false;
    if (g.has_certified_modulus() && f.has_certified_modulus() && n > 0) {
        // sup chain: s_j <= min(s_{j-1}, observed grid max + propagated
        // modulus at that grid's spacing); the Markov property gives the
        // monotone fallback, the grid max tightens it when stats exist.
        std::vector<double> sup_chain{f.sup_bound};
        for (int j = 1; j < n; ++j) {
            double s = sup_chain.back();
            if (stats_ptr) {
                const double spacing_j = std::ldexp(1.0, -(total - j));
                const double mj = chained_modulus(f, g, sup_chain, j, spacing_j);
                const double grid_abs =
                    std::max(std::fabs(stats.full_min[static_cast<std::size_t>(j - 1)]),
                             std::fabs(stats.full_max[static_cast<std::size_t>(j - 1)]));
                s = std::min(s, grid_abs + mj);
            }
            sup_chain.push_back(s);
        }
        pad = chained_modulus(f, g, sup_chain, n, h);
        cert = true;
    } else if (n > 0) {
        // heuristic: largest adjacent-cell jump of the result grid
        for (std::size_t j = 0; j < res.values.size(); ++j) {
            const double d = std::fabs(res.values[(j + 1) % res.values.size()] - res.values[j]);
            pad = std::max(pad, d);
        }
    } else {
        cert = f.has_certified_modulus();
        if (cert) pad = f.modulus(h);
    }

    Enclosure e;
    e.lo = r.grid_min - pad;
    e.hi = r.grid_max + pad;
    e.modulus_pad = pad;
    e.n_iterations = n;
    e.certified = cert;

    const bool have_apriori = opts.apriori_lo > 0 ||
                              opts.apriori_hi < std::numeric_limits<double>::infinity();
    if (have_apriori) {
        const double alo = opts.apriori_lo, ahi = opts.apriori_hi;
        if (e.certified && opts.apriori_certified) {
            e.lo = std::max(e.lo, alo);
            e.hi = std::min(e.hi, ahi);
        } else if (opts.apriori_certified && alo >= e.lo && ahi <= e.hi) {
            e.lo = alo;
            e.hi = ahi;
            e.certified = true;
        } else {
            e.lo = std::max(e.lo, alo);
            e.hi = std::min(e.hi, ahi);
            e.certified = false;
        }
        if (e.lo > e.hi)
            throw error("mu_of_function: a-priori bounds inconsistent with grid enclosure");
    }
    r.enclosure = e;
    return r;
}

}  // namespace gmeasure

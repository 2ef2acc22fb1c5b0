#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gmeasure/gfunction.hpp"
#include "gmeasure/grid.hpp"

namespace gmeasure {

// Hard cap on level+n (array of 2^(level+n) samples feeds the dynamic
// program); beyond kMaterializeLevel the evaluation falls back to a
// per-point preimage-tree recursion with O(n) memory.
inline constexpr int kMaxTotalLevel = 30;
inline constexpr int kMaterializeLevel = 26;

/// Certified (or heuristically padded) interval for a real target.
struct Enclosure {
    double lo = 0;
    double hi = 0;
    double modulus_pad = 0;   // widening applied for off-grid behavior
    int n_iterations = 0;
    bool certified = false;   // pad derives from propagated equicontinuity bound

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool overlaps(const Enclosure& o, double slack = 0) const {
        return lo <= o.hi + slack && o.lo <= hi + slack;
    }
    double log2_lo() const { return lo > 0 ? std::log2(lo) : kNegInf; }
    double log2_hi() const { return hi > 0 ? std::log2(hi) : kNegInf; }
    double log2_mid() const { double m = mid(); return m > 0 ? std::log2(m) : kNegInf; }
    bool pad_exceeds_width() const { return modulus_pad > (hi - lo) - 2 * modulus_pad; }

    static Enclosure exact(double v) { return {v, v, 0.0, 0, true}; }
};

/// A closed-form test function with the metadata the enclosure machinery
/// needs: a sup bound and (optionally) a certified modulus of continuity.
struct TestFunction {
    std::function<double(double)> eval;
    double sup_bound = 1.0;                   // bound on sup |f|
    std::function<double(double)> modulus;    // certified upper bound of f[delta]; may be null
    // Optional bulk sampler onto the level-m grid (trig recurrence etc.);
    // must agree with eval at grid points.
    std::function<void(std::vector<double>&, int)> sampler;

    bool has_certified_modulus() const { return static_cast<bool>(modulus); }

    static TestFunction constant(double c);
    static TestFunction cosine(int k);  // cos(2 pi k x)
    static TestFunction sine(int k);    // sin(2 pi k x)
};

/// One application of the transfer operator: a level-l grid maps to level
/// l-1 via (phi_g f)(x) = g(x/2) f(x/2) + g((x+1)/2) f((x+1)/2); both
/// preimages are exact level-l grid points.
GridFunction apply_transfer(const GFunction& g, const GridFunction& f);

/// Per-iteration range statistics on the target-level subgrid.
struct TransferStats {
    std::vector<double> sub_min, sub_max;    // at target level, per n = 1..N
    std::vector<double> full_min, full_max;  // over the full (shrinking) grid
};

/// phi_g^n f on the level-m grid: samples f at level m+n, then applies the
/// transfer n times.  Cost Theta(2^(m+n)); falls back to a streaming
/// preimage-tree recursion past kMaterializeLevel (no stats in that mode).
GridFunction iterate_transfer(const GFunction& g, const std::function<double(double)>& f,
                              int n, int level, TransferStats* stats = nullptr);
GridFunction iterate_transfer(const GFunction& g, const TestFunction& f,
                              int n, int level, TransferStats* stats = nullptr);

/// Iterated equicontinuity bound on (phi_g^n f)[delta] using
/// (phi_g f)[d] <= 2|f| g[d/2] + f[d/2] and sup|phi_g^k f| <= sup|f|.
double modulus_propagation(const std::function<double(double)>& f_modulus, double sup_f,
                           const std::function<double(double)>& g_modulus, int n, double delta);

struct MuOptions {
    bool override_goodness = false;  // skip the goodness gate
    double apriori_lo = 0;           // external certified bounds on mu(f); intersected in
    double apriori_hi = std::numeric_limits<double>::infinity();
    bool apriori_certified = false;
};

struct MuResult {
    Enclosure enclosure;
    double at_zero = 0;       // phi_g^n f evaluated at the grid point 0
    double grid_min = 0, grid_max = 0;  // before padding
};

/// Certified-or-padded enclosure of mu_g(f) from the sandwich
/// min phi_g^n f <= mu_g(f) <= max phi_g^n f (invariance + Markov).
/// The pad bounds off-grid variation: propagated equicontinuity bound when
/// both moduli are certified (with the sup chain tightened by observed grid
/// maxima), else a local-difference heuristic with certified=false.
MuResult mu_of_function_full(const GFunction& g, const TestFunction& f, int n, int level,
                             const MuOptions& opts = {});

inline Enclosure mu_of_function(const GFunction& g, const TestFunction& f, int n, int level,
                                const MuOptions& opts = {}) {
    return mu_of_function_full(g, f, n, level, opts).enclosure;
}

}  // namespace gmeasure

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmeasure/rational.hpp"

namespace gmeasure {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduce a real to the fundamental domain [0,1).
inline double wrap01(double x) {
    x -= std::floor(x);
    return x < 1.0 ? x : 0.0;  // guard against floor rounding at integers
}

/// Power-law envelope c1*x^theta1 <= g(x) <= c2*x^theta2 on (0,1/2].
struct ScalingEnvelope {
    double c1 = 0, theta1 = 0, c2 = 0, theta2 = 0;
    double s() const { return std::min(1.0, c1); }
    double S() const { return std::max(1.0, c2); }
    bool valid() const { return c1 > 0 && c2 > 0 && theta1 > 0 && theta2 > 0 && theta2 <= theta1; }
};

/// One declared zero of g: either an exact rational, or an irrational
/// localized to a bracketing interval with a user assertion that its
/// doubling orbit never enters a cycle (equivalently, that it is irrational).
struct ZeroEntry {
    bool is_rational = true;
    Rational q;                       // when is_rational
    double lo = 0, hi = 0;            // bracketing interval otherwise
    bool asserted_not_eventually_periodic = false;

    double location() const { return is_rational ? q.to_double() : 0.5 * (lo + hi); }
};

struct ZeroSpec {
    std::vector<ZeroEntry> zeros;
    bool complete = false;  // asserts the list is the full zero set
};

/// Modulus-of-continuity table with a partial variation sum
/// sum_{j<=depth} f[2^-j * delta].  The tail beyond `depth` is a geometric
/// extrapolation, never a certificate.
struct ModulusProfile {
    std::map<double, double> table;  // delta -> estimate of f[delta]
    double partial_sum = 0;
    double tail_estimate = 0;        // extrapolated remainder
    int depth = 0;
    bool tail_extrapolated = true;
};

/// Closed-form a + b*cos(2*pi*freq*x); enables fast grid sampling.
struct CosForm {
    double offset = 0, amplitude = 0, freq = 1;
};

/// A 1-periodic g-function: g >= 0 with g(x) + g(x+1/2) = 1.
/// Immutable after construction; evaluation is pure.
class GFunction {
public:
    std::string name;
    std::function<double(double)> fn;
    ZeroSpec zero_spec;
    std::optional<ScalingEnvelope> envelope;
    bool symmetric = false;  // asserts g(x) = g(1-x)
    std::optional<CosForm> cos_form;
    // Certified upper bound for the modulus of continuity g[delta];
    // null when only grid estimates are available (user piecewise input).
    std::function<double(double)> modulus_fn;

    double operator()(double x) const { return fn(wrap01(x)); }
    double riesz_factor(double x) const { return 2.0 * (*this)(x); }

    bool has_certified_modulus() const { return static_cast<bool>(modulus_fn); }
    double modulus_bound(double delta) const {
        if (!modulus_fn) throw error("no certified modulus available for g-function '" + name + "'");
        return modulus_fn(delta);
    }
};

/// Piecewise segment on [lo,hi): poly = c0 + c1*x + ... (x absolute),
/// cos = c0 + c1*cos(2*pi*c2*x).
struct Segment {
    enum class Kind { poly, cos };
    double lo = 0, hi = 0;
    Kind kind = Kind::poly;
    std::vector<double> coeffs;

    double eval(double x) const;
};

inline constexpr double kIdentityTol = 1e-9;  // default tolerance for g-identity checks
inline constexpr double kZeroTol = 1e-9;      // "g has a zero" decision tolerance

/// Builtin guide functions: tm, tent, sqrt, half, coshift.
GFunction make_builtin(const std::string& name);

/// User-supplied g from segments covering [0,1).  Validates coverage and the
/// g-identity at level 12; throws gmeasure::error on failure.
GFunction make_piecewise(const std::vector<Segment>& segments,
                         ZeroSpec zero_spec = {},
                         double tol = kIdentityTol);

/// Parse the textual description: "builtin:<name>" or "piecewise:" followed
/// by lines "lo hi kind coeffs..." (kind in {poly, cos}), optionally a final
/// line "zeros complete|incomplete [p/q ...]".
GFunction parse_gspec(const std::string& text);

/// Max over the level-m grid of |g(x) + g(x+1/2) - 1|.
double validate_g_identity(const GFunction& g, int level);

/// Grid sanity scan of the declared zero set: g < tol near declared zeros,
/// g above tol away from them.  Throws on mismatch.
void validate_zero_spec(const GFunction& g, int level = 12, double tol = kZeroTol);

struct ModulusEstimate {
    double lower = 0;                  // grid scan: always a lower bound of the true modulus
    std::optional<double> upper;       // closed-form bound when available
};

/// f[delta] = max |f(x)-f(y)| over grid pairs with |x-y| <= delta.
ModulusEstimate estimate_modulus(const GFunction& f, double delta, int level);
ModulusEstimate estimate_modulus(const std::vector<double>& grid_values, double delta, int level);

/// Partial sum of the summable-variation series plus a geometric tail
/// extrapolated from the last two terms.
ModulusProfile estimate_summable_variation(const GFunction& g, double delta, int depth);

struct EnvelopeReport {
    ScalingEnvelope envelope;
    bool verified = false;
    bool fitted = false;
    double worst_x = 0;      // witnessing grid point on violation
    double worst_margin = 0; // most negative of g - c1 x^th1 and c2 x^th2 - g
};

/// Verify a proposed envelope on the level-m grid restricted to (0,1/2],
/// or fit one by log-log regression near 0 when none is proposed.
EnvelopeReport fit_or_verify_envelope(const GFunction& g,
                                      std::optional<ScalingEnvelope> proposed,
                                      int level,
                                      double tol = kIdentityTol);

}  // namespace gmeasure

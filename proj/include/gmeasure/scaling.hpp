#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gmeasure/gfunction.hpp"
#include "gmeasure/measure.hpp"

namespace gmeasure {

// All bound arithmetic stays in log2 space; nothing here exponentiates a
// super-polynomially small quantity back to linear scale.

/// Two-sided bounds on F_g(x) near 0, in log2:
///   lower = kappa * s * 2^(-2 th1) * x^(-(th1/2) log2 x) * x^((5 th1/2) - log2 s)
///   upper =                          x^(-(th2/2) log2 x) * x^(-(th2/2) - log2 S)
/// with s = min{1,c1}, S = max{1,c2}.  Requires 0 < x < 1 and kappa > 0.
std::pair<double, double> theorem_bounds_log2(const ScalingEnvelope& env, double kappa, double x);

struct ScalingRow {
    int m = 0;                       // x = 2^-m
    double log2_F_lo = 0, log2_F_hi = 0;
    double log2_lower = 0, log2_upper = 0;
    double ratio = 0;                // log2 F_mid / m^2
    bool pass = false;               // strict sandwich; ties fail
    bool certified = false;
    std::string note;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    ScalingEnvelope envelope;
    Enclosure kappa_enclosure;
    bool all_pass = false;

    void write_csv(std::ostream& os) const;  // m,log2F_lo,log2F_hi,log2_lower,log2_upper,ratio
};

/// Per m in [m_lo, m_hi]: F_g(2^-m) enclosure via dyadic_interval_mass(0,m)
/// checked strictly against the closed-form bounds.  Rows whose enclosure is
/// too wide to decide are retried with larger n (within budget) and noted.
ScalingReport verify_bounds(const GFunction& g, const ScalingEnvelope& env,
                            int m_lo, int m_hi, int n, int level);

struct AsymptoticFit {
    double slope = 0;            // least squares of log2 F(2^-m) against m^2
    double band_lo = 0, band_hi = 0;
    bool in_band = false;
    std::string summary_json() const;
};

/// Slope fit plus the O(1/m) band read off the explicit bound exponents:
/// [-th1/2 - 5 th1/(2 m_min), -th2/2 + (th2/2 + log2 S)/m_min].
AsymptoticFit asymptotic_fit(const ScalingReport& report);

/// JSON summary with slope, band, and per-row pass/fail.
std::string scaling_summary_json(const ScalingReport& report);

}  // namespace gmeasure

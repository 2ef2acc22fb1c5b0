#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmeasure/gfunction.hpp"
#include "gmeasure/rational.hpp"
#include "gmeasure/transfer.hpp"

namespace gmeasure {

/// The cylinder test function f_{j,k}(x) = 2^-k g_k(2^-k (j+x))
///                                       = prod_{l=1..k} g((j+x)/2^l),
/// whose mu_g-integral is the mass of the dyadic interval
/// [j 2^-k, (j+1) 2^-k].  Carries certified sup and modulus bounds derived
/// from per-factor ranges of g.
TestFunction cylinder_function(const GFunction& g, std::int64_t j, int k);

/// Certified upper/lower bounds for the range of g over [a,b] (wrapped),
/// from a grid scan widened by the certified modulus when available.
struct RangeBound {
    double lo = 0, hi = 0;
    bool certified = false;
};
RangeBound g_range_on(const GFunction& g, double a, double b, int scan_level = 16);

enum class MassMethod { certified_enclosure, density_quadrature };

/// Enclosures of mu_g on all level-k dyadic intervals.
struct DyadicMassVector {
    int level = 0;
    std::vector<Enclosure> masses;
    MassMethod method = MassMethod::certified_enclosure;
    double declared_tolerance = 0;      // slack on sum-of-midpoints = 1
    std::vector<std::string> notes;     // per-interval budget reports

    double midpoint_sum() const;
    void write_csv(std::ostream& os) const;  // j,k,lo,hi,log2_mid
};

/// Enclosures of F_g(j/2^k) = mu_g([0, j/2^k]) for j = 0..2^k.
struct CDFTable {
    int level = 0;
    std::vector<Enclosure> values;      // 2^k + 1 entries
    std::vector<double> log2_mid;       // parallel log2 representation

    void write_csv(std::ostream& os) const;  // x,F_lo,F_hi,log2F_mid
};

/// Exact Thue-Morse autocorrelation coefficients eta_t(m).
struct AutocorrSeq {
    std::vector<Rational> eta;

    void write_csv(std::ostream& os) const;  // m,eta_num,eta_den
};

/// Complex enclosures of the Fourier-Stieltjes coefficients
/// mu_hat(n) = integral of exp(-2 pi i n x) dmu_g.
struct FourierTable {
    std::vector<Enclosure> re, im;      // n = 0..N

    void write_csv(std::ostream& os) const;  // n,re_lo,re_hi,im_lo,im_hi
};

/// mu_g of one closed dyadic interval via the cylinder function.  For the
/// pure-point case (g good with g(1/2)=0) the measure is exactly delta_0
/// and the mass is assigned to the cell containing 0.
Enclosure dyadic_interval_mass(const GFunction& g, std::int64_t j, int k, int n, int level);

/// All level-k masses, enclosures recentered on the phi^n f(0) values so
/// that midpoints sum to 1 exactly (partition of unity of the cylinder
/// functions); adaptive n where an enclosure misses the width target.
DyadicMassVector mass_vector_certified(const GFunction& g, int k, int n, int level,
                                       double width_target_rel = 1e-3);

/// One trapezoidal sweep of g_N binned into half-open level-k cells.
/// Cheap and uncertified; requires level >= N + 8 for the aliasing guard
/// (note emitted otherwise).
DyadicMassVector mass_vector_quadrature(const GFunction& g, int k, int N, int level);

/// Prefix sums of a mass vector, accumulated smallest-first with
/// compensated summation.
CDFTable cdf(const DyadicMassVector& masses);
CDFTable cdf(const GFunction& g, int k, MassMethod method, int n, int level);

/// kappa = mu_g([1/2, 1]); exact 1/2 for symmetric-flagged g.
Enclosure kappa(const GFunction& g, int n, int level);

/// Fourier-Stieltjes coefficients n = 0..N via mu_g(cos 2 pi n x) and
/// mu_g(sin 2 pi n x).  Requires level >= log2(N) + 4.
FourierTable fourier_coefficients(const GFunction& g, int N, int n, int level);

/// eta(0)=1; eta(1) solves eta(1) = -(eta(0)+eta(1))/2; then
/// eta(2m) = eta(m), eta(2m+1) = -(eta(m)+eta(m+1))/2.
AutocorrSeq tm_autocorrelation(int M);

struct DoublingReport {
    struct Pair {
        int n = 0;
        bool ok = true;
    };
    std::vector<Pair> pairs;
    bool all_ok = true;
};

/// T-invariance forces mu_hat(n) = mu_hat(2n): per-pair enclosure overlap
/// check (real and imaginary parts separately).
DoublingReport doubling_relation_check(const FourierTable& table, double slack = 0);

}  // namespace gmeasure

#pragma once

#include <string>
#include <vector>

#include "gmeasure/gfunction.hpp"
#include "gmeasure/rational.hpp"

namespace gmeasure {

/// Exact doubling-orbit data for a rational point.
struct OrbitInfo {
    Rational point;
    int preperiod = 0;
    int period = 0;
    std::vector<Rational> orbit;  // visited points: preperiod prefix then the cycle
};

/// Iterate q -> 2q mod 1 in exact rational arithmetic with cycle detection.
/// Every rational terminates (the denominator never grows).
OrbitInfo orbit_eventually_periodic(Rational q);

struct GoodnessReport {
    bool condition1 = false;  // at most one zero
    bool condition2 = false;  // finitely many zeros, none eventually periodic
    bool condition3 = false;  // zeros in [1/4,3/4) or (1/4,3/4]
    bool good = false;
    std::vector<std::string> zero_orbit_evidence;  // per-zero, for condition 2
    std::vector<std::string> assumptions;          // user assertions relied upon
    std::vector<std::string> notes;
};

/// Decide the sufficient conditions for weak convergence of the Riesz
/// densities.  Rational zeros always enter a cycle under doubling, so they
/// fail condition 2; irrational-flagged zeros pass by the user's assertion.
/// Requires a complete zero_spec.
GoodnessReport check_goodness(const GFunction& g);

enum class SpectralKind { ac, pp, sc };

struct SpectralType {
    SpectralKind kind = SpectralKind::sc;
    std::string witness;
};

const char* to_string(SpectralKind k);

/// Spectral trichotomy for good g: ac iff g is constant 1/2, pp iff
/// g(1/2) = 0, sc otherwise.  Refuses non-good g.
SpectralType classify_spectral_type(const GFunction& g, int level = 14, double tol = kZeroTol);

/// Periodic orbits on which g is identically 1 (atom support candidates):
/// enumerates rational periodic points of period <= max_period and keeps
/// orbits with g >= 1 - tol throughout.
std::vector<OrbitInfo> atom_candidates(const GFunction& g, int max_period, double tol = kZeroTol);

/// JSON report: {good, conditions:{c1,c2,c3}, spectral_type, atoms, assumptions}.
std::string classification_json(const GFunction& g, int max_period = 8);

}  // namespace gmeasure

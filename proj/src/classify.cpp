#include "gmeasure/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace gmeasure {

OrbitInfo orbit_eventually_periodic(Rational q) {
    if (q.num < 0 || !(q < Rational(1, 1)))
        throw error("orbit_eventually_periodic: point must lie in [0,1)");
    OrbitInfo info;
    info.point = q;
    std::unordered_map<Rational, int, RationalHash> seen;
    Rational x = q;
    int step = 0;
    while (true) {
        const auto it = seen.find(x);
        if (it != seen.end()) {
            info.preperiod = it->second;
            info.period = step - it->second;
            return info;
        }
        seen.emplace(x, step);
        info.orbit.push_back(x);
        x = x.doubled_mod1();
        ++step;
    }
}

GoodnessReport check_goodness(const GFunction& g) {
    if (!g.zero_spec.complete)
        throw error("check_goodness: zero set of '" + g.name + "' not declared complete");
    GoodnessReport rep;
    const auto& zeros = g.zero_spec.zeros;

    rep.condition1 = zeros.size() <= 1;

    rep.condition2 = true;
    for (const auto& z : zeros) {
        if (z.is_rational) {
            const OrbitInfo o = orbit_eventually_periodic(z.q);
            std::ostringstream os;
            os << "zero " << z.q.str() << " enters a period-" << o.period
               << " cycle after " << o.preperiod << " steps";
            rep.zero_orbit_evidence.push_back(os.str());
            rep.condition2 = false;  // every rational orbit is eventually periodic
        } else if (z.asserted_not_eventually_periodic) {
            std::ostringstream os;
            os << "zero in [" << z.lo << ", " << z.hi
               << "] asserted irrational (orbit never periodic)";
            rep.zero_orbit_evidence.push_back("asserted aperiodic orbit for zero near " +
                                              std::to_string(z.location()));
            rep.assumptions.push_back(os.str());
        } else {
            rep.zero_orbit_evidence.push_back("no periodicity information for zero near " +
                                              std::to_string(z.location()));
            rep.condition2 = false;
        }
    }

    // all zeros in [1/4,3/4) or all in (1/4,3/4]
    const Rational q14(1, 4), q34(3, 4);
    bool left_closed = true, right_closed = true;
    for (const auto& z : zeros) {
        if (z.is_rational) {
            left_closed = left_closed && q14 <= z.q && z.q < q34;
            right_closed = right_closed && q14 < z.q && z.q <= q34;
        } else {
            left_closed = left_closed && z.lo >= 0.25 && z.hi < 0.75;
            right_closed = right_closed && z.lo > 0.25 && z.hi <= 0.75;
        }
    }
    rep.condition3 = left_closed || right_closed;
    if (!zeros.empty() && rep.condition3)
        rep.notes.push_back(left_closed ? "zeros confined to [1/4, 3/4)"
                                        : "zeros confined to (1/4, 3/4]");

    rep.good = rep.condition1 || rep.condition2 || rep.condition3;
    return rep;
}

const char* to_string(SpectralKind k) {
    switch (k) {
        case SpectralKind::ac: return "ac";
        case SpectralKind::pp: return "pp";
        case SpectralKind::sc: return "sc";
    }
    return "?";
}

SpectralType classify_spectral_type(const GFunction& g, int level, double tol) {
    const GoodnessReport rep = check_goodness(g);
    if (!rep.good)
        throw error("classify_spectral_type: '" + g.name +
                    "' is not covered by the convergence theorem");
    SpectralType st;
    double dev = 0;
    const std::size_t n = std::size_t{1} << level;
    for (std::size_t j = 0; j < n; ++j)
        dev = std::max(dev, std::fabs(g(std::ldexp(static_cast<double>(j), -level)) - 0.5));
    if (dev < tol) {
        st.kind = SpectralKind::ac;
        std::ostringstream os;
        os << "g constant 1/2 (max grid deviation " << dev << "); mu_g is Lebesgue";
        st.witness = os.str();
        return st;
    }
    const double ghalf = g(0.5);
    if (ghalf < tol) {
        st.kind = SpectralKind::pp;
        std::ostringstream os;
        os << "g(1/2) = " << ghalf << " < " << tol << "; mu_g = delta_0";
        st.witness = os.str();
        return st;
    }
    st.kind = SpectralKind::sc;
    std::ostringstream os;
    os << "g non-constant (deviation " << dev << ") with g(1/2) = " << ghalf
       << " > 0; mu_g singular continuous";
    st.witness = os.str();
    return st;
}

std::vector<OrbitInfo> atom_candidates(const GFunction& g, int max_period, double tol) {
    if (max_period < 1 || max_period > 30)
        throw error("atom_candidates: max_period out of range");
    std::vector<OrbitInfo> out;
    std::unordered_map<Rational, bool, RationalHash> visited;
    for (int p = 1; p <= max_period; ++p) {
        const std::int64_t den = (std::int64_t{1} << p) - 1;  // fixed points of T^p
        for (std::int64_t j = 0; j < den; ++j) {
            const Rational q(j, den);
            if (visited.count(q)) continue;
            OrbitInfo o = orbit_eventually_periodic(q);
            bool all_one = true;
            for (const auto& x : o.orbit) {
                visited.emplace(x, true);
                if (g(x.to_double()) < 1.0 - tol) all_one = false;
            }
            if (all_one) out.push_back(std::move(o));
        }
    }
    return out;
}

std::string classification_json(const GFunction& g, int max_period) {
    nlohmann::json j;
    const GoodnessReport rep = check_goodness(g);
    j["g"] = g.name;
    j["good"] = rep.good;
    j["conditions"] = {{"c1_at_most_one_zero", rep.condition1},
                       {"c2_no_eventually_periodic_zero", rep.condition2},
                       {"c3_zeros_in_central_interval", rep.condition3}};
    j["zero_orbit_evidence"] = rep.zero_orbit_evidence;
    j["assumptions"] = rep.assumptions;
    j["notes"] = rep.notes;
    if (rep.good) {
        const SpectralType st = classify_spectral_type(g);
        j["spectral_type"] = to_string(st.kind);
        j["witness"] = st.witness;
        nlohmann::json atoms = nlohmann::json::array();
        for (const auto& o : atom_candidates(g, max_period)) {
            nlohmann::json a;
            a["period"] = o.period;
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& x : o.orbit) pts.push_back(x.str());
            a["orbit"] = pts;
            atoms.push_back(a);
        }
        j["atom_candidate_orbits"] = atoms;
    }
    return j.dump(2);
}

}  // namespace gmeasure

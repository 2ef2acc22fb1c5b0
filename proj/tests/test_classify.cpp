#include <doctest.h>

#include <json.hpp>

#include "gmeasure/classify.hpp"

using namespace gmeasure;

TEST_CASE("doubling orbits of rationals") {
    SUBCASE("fixed point 0") {
        const OrbitInfo o = orbit_eventually_periodic(Rational(0, 1));
        CHECK(o.preperiod == 0);
        CHECK(o.period == 1);
    }
    SUBCASE("1/2 falls onto 0") {
        const OrbitInfo o = orbit_eventually_periodic(Rational(1, 2));
        CHECK(o.preperiod == 1);
        CHECK(o.period == 1);
    }
    SUBCASE("1/3 is 2-periodic") {
        const OrbitInfo o = orbit_eventually_periodic(Rational(1, 3));
        CHECK(o.preperiod == 0);
        CHECK(o.period == 2);
        REQUIRE(o.orbit.size() == 2);
        CHECK(o.orbit[1] == Rational(2, 3));
    }
    SUBCASE("3/14 has preperiod 1, period 3") {
        const OrbitInfo o = orbit_eventually_periodic(Rational(3, 14));
        CHECK(o.preperiod == 1);
        CHECK(o.period == 3);
    }
    CHECK_THROWS_AS(orbit_eventually_periodic(Rational(3, 2)), error);
}

TEST_CASE("goodness of the builtins") {
    SUBCASE("tm: single zero suffices") {
        const GoodnessReport r = check_goodness(make_builtin("tm"));
        CHECK(r.condition1);
        CHECK_FALSE(r.condition2);  // zero at 0 is a fixed point
        CHECK_FALSE(r.condition3);  // 0 outside [1/4, 3/4]
        CHECK(r.good);
    }
    SUBCASE("half: no zeros at all") {
        const GoodnessReport r = check_goodness(make_builtin("half"));
        CHECK(r.condition1);
        CHECK(r.condition2);
        CHECK(r.condition3);
        CHECK(r.good);
    }
    SUBCASE("coshift: one zero, central") {
        const GoodnessReport r = check_goodness(make_builtin("coshift"));
        CHECK(r.condition1);
        CHECK(r.condition3);  // 1/2 sits inside both half-open variants
        CHECK(r.good);
    }
}

namespace {
GFunction with_zeros(std::vector<Rational> qs) {
    GFunction g = make_builtin("tm");  // evaluation irrelevant for goodness logic
    g.name = "synthetic";
    g.zero_spec.zeros.clear();
    for (const auto& q : qs) {
        ZeroEntry z;
        z.is_rational = true;
        z.q = q;
        g.zero_spec.zeros.push_back(z);
    }
    g.zero_spec.complete = true;
    return g;
}
}  // namespace

TEST_CASE("condition 3 half-open boundary bookkeeping") {
    // both endpoints occupied: neither variant admits the pair
    CHECK_FALSE(check_goodness(with_zeros({Rational(1, 4), Rational(3, 4)})).good);
    // only the left endpoint: [1/4, 3/4) works
    CHECK(check_goodness(with_zeros({Rational(1, 4), Rational(5, 12)})).condition3);
    // only the right endpoint: (1/4, 3/4] works
    CHECK(check_goodness(with_zeros({Rational(3, 4), Rational(5, 12)})).condition3);
    // two interior rational zeros: good via condition 3 despite periodic orbits
    const GoodnessReport r = check_goodness(with_zeros({Rational(1, 3), Rational(2, 3)}));
    CHECK_FALSE(r.condition1);
    CHECK_FALSE(r.condition2);
    CHECK(r.condition3);
    CHECK(r.good);
}

TEST_CASE("irrational zeros rely on the user's assertion") {
    GFunction g = with_zeros({});
    ZeroEntry z;
    z.is_rational = false;
    z.lo = 0.30;
    z.hi = 0.31;
    ZeroEntry z2 = z;
    z2.lo = 0.70;
    z2.hi = 0.71;
    g.zero_spec.zeros = {z, z2};
    CHECK_FALSE(check_goodness(g).condition2);  // no assertion given
    g.zero_spec.zeros[0].asserted_not_eventually_periodic = true;
    g.zero_spec.zeros[1].asserted_not_eventually_periodic = true;
    const GoodnessReport r = check_goodness(g);
    CHECK(r.condition2);
    CHECK(r.good);
    CHECK_FALSE(r.assumptions.empty());
}

TEST_CASE("goodness demands a complete zero spec") {
    GFunction g = make_builtin("tm");
    g.zero_spec.complete = false;
    CHECK_THROWS_AS(check_goodness(g), error);
}

TEST_CASE("spectral trichotomy on the builtins") {
    CHECK(classify_spectral_type(make_builtin("half")).kind == SpectralKind::ac);
    CHECK(classify_spectral_type(make_builtin("coshift")).kind == SpectralKind::pp);
    CHECK(classify_spectral_type(make_builtin("tm")).kind == SpectralKind::sc);
    CHECK(classify_spectral_type(make_builtin("tent")).kind == SpectralKind::sc);
    CHECK(classify_spectral_type(make_builtin("sqrt")).kind == SpectralKind::sc);
}

TEST_CASE("atom candidates") {
    // coshift: g(0) = 1, so the fixed point 0 supports the atom
    const auto atoms = atom_candidates(make_builtin("coshift"), 6);
    REQUIRE(atoms.size() >= 1);
    CHECK(atoms[0].orbit[0] == Rational(0, 1));
    // tm: g(0) = 0 and g < 1 off 1/2; no invariant orbit with g = 1
    CHECK(atom_candidates(make_builtin("tm"), 6).empty());
}

TEST_CASE("classification JSON is well formed") {
    const auto parsed = nlohmann::json::parse(classification_json(make_builtin("coshift")));
    CHECK(parsed["good"] == true);
    CHECK(parsed["spectral_type"] == "pp");
    CHECK(parsed["atom_candidate_orbits"].size() >= 1);
    const auto tm = nlohmann::json::parse(classification_json(make_builtin("tm")));
    CHECK(tm["spectral_type"] == "sc");
}

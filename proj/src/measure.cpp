#include "gmeasure/measure.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gmeasure/classify.hpp"
#include "gmeasure/grid.hpp"
#include "gmeasure/numfmt.hpp"

namespace gmeasure {

namespace {

struct KahanSum {
    double s = 0, c = 0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

/// Factor intervals of the cylinder f_{j,k}: the l-th factor g((j+x)/2^l)
/// sweeps [j/2^l, (j+1)/2^l] as x runs over [0,1].
struct CylinderData {
    TestFunction f;
    std::vector<RangeBound> factor_ranges;  // l = 1..k
    double sup_hi = 1.0;
    bool hi_certified = true;
};

CylinderData cylinder_data(const GFunction& g, std::int64_t j, int k) {
    if (k < 0 || k > 60 || j < 0 || j >= (std::int64_t{1} << k))
        throw error("cylinder_function: index out of range");
    CylinderData cd;
    cd.f.eval = [&g, j, k](double x) {
        double p = 1.0;
        for (int l = 1; l <= k; ++l)
            p *= g(std::ldexp(static_cast<double>(j) + x, -l));
        return p;
    };
    for (int l = 1; l <= k; ++l) {
        const double a = std::ldexp(static_cast<double>(j), -l);
        const double b = std::ldexp(static_cast<double>(j) + 1.0, -l);
        const RangeBound r = g_range_on(g, a, b);
        cd.factor_ranges.push_back(r);
        cd.sup_hi *= r.hi;
        cd.hi_certified = cd.hi_certified && r.certified;
    }
    cd.f.sup_bound = cd.sup_hi;
    if (g.has_certified_modulus() && cd.hi_certified && k >= 1) {
        // |f(x)-f(y)| <= sum_l (prod_{l' != l} hi_l') g[|x-y| / 2^l]
        std::vector<double> prod_except(static_cast<std::size_t>(k), 1.0);
        for (int l = 1; l <= k; ++l)
            for (int l2 = 1; l2 <= k; ++l2)
                if (l2 != l)
                    prod_except[static_cast<std::size_t>(l - 1)] *=
                        cd.factor_ranges[static_cast<std::size_t>(l2 - 1)].hi;
        cd.f.modulus = [&g, k, prod_except](double d) {
            double m = 0;
            for (int l = 1; l <= k; ++l)
                m += prod_except[static_cast<std::size_t>(l - 1)] *
                     g.modulus_bound(std::ldexp(d, -l));
            return m;
        };
    } else if (k == 0) {
        cd.f.modulus = [](double) { return 0.0; };
    }
    return cd;
}

enum class ShortCircuit { none, dirac, lebesgue };

ShortCircuit short_circuit_kind(const GFunction& g) {
    GoodnessReport rep;
    try {
        rep = check_goodness(g);
    } catch (const error&) {
        return ShortCircuit::none;  // no complete zero spec; let the gate decide
    }
    if (!rep.good) return ShortCircuit::none;
    if (g(0.5) < kZeroTol) return ShortCircuit::dirac;
    double dev = 0;
    for (int j = 0; j < (1 << 12); ++j)
        dev = std::max(dev, std::fabs(g(std::ldexp(static_cast<double>(j), -12)) - 0.5));
    if (dev < kZeroTol) return ShortCircuit::lebesgue;
    return ShortCircuit::none;
}

MuResult cell_mass_full(const GFunction& g, std::int64_t j, int k, int n, int level) {
    const CylinderData cd = cylinder_data(g, j, k);
    MuOptions opts;
    opts.apriori_hi = cd.sup_hi;
    bool lo_cert = true;
    if (j == 0 && k >= 1 && g.envelope) {
        // the factor intervals [0, 2^-l] sit inside the envelope's domain
        // (0,1/2], where g <= c2 x^theta2; this beats the grid-scan bound
        // whose additive modulus pad swamps the tiny minima near 0
        double hi = 1.0;
        for (int l = 1; l <= k; ++l) {
            double h = cd.factor_ranges[static_cast<std::size_t>(l - 1)].hi;
            h = std::min(h, g.envelope->c2 * std::pow(std::ldexp(1.0, -l), g.envelope->theta2));
            hi *= h;
        }
        opts.apriori_hi = std::min(opts.apriori_hi, hi);
    }
    if (j == 0 && g.symmetric && k >= 1) {
        // mu(f) >= mu([1/2,1]) min_{[1/2,1]} f = (1/2) prod_l min g on [2^-l-1, 2^-l]
        double lo = 0.5;
        for (int l = 1; l <= k; ++l) {
            const RangeBound r = g_range_on(g, std::ldexp(1.0, -l - 1), std::ldexp(1.0, -l));
            double m = r.lo;
            if (g.envelope)
                m = std::max(m, g.envelope->c1 *
                                    std::pow(std::ldexp(1.0, -l - 1), g.envelope->theta1));
            lo *= m;
            lo_cert = lo_cert && (r.certified || g.envelope.has_value());
        }
        if (lo_cert) opts.apriori_lo = lo;
    }
    opts.apriori_certified = cd.hi_certified && (opts.apriori_lo == 0 || lo_cert);
    return mu_of_function_full(g, cd.f, n, level, opts);
}

}  // namespace

TestFunction cylinder_function(const GFunction& g, std::int64_t j, int k) {
    return cylinder_data(g, j, k).f;
}

RangeBound g_range_on(const GFunction& g, double a, double b, int scan_level) {
    const double len = b - a;
    if (!(len > 0) || len > 1) throw error("g_range_on: need 0 < b - a <= 1");
    const double want = len * std::ldexp(1.0, scan_level);
    const std::size_t M = std::min<std::size_t>(
        std::size_t{1} << 20, std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(want))));
    const double step = len / static_cast<double>(M);
    double mn = g(a), mx = mn, max_jump = 0, prev = mn;
    for (std::size_t i = 1; i <= M; ++i) {
        const double v = g(a + static_cast<double>(i) * step);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        max_jump = std::max(max_jump, std::fabs(v - prev));
        prev = v;
    }
    RangeBound r;
    double pad;
    if (g.has_certified_modulus()) {
        pad = g.modulus_bound(step);
        r.certified = true;
    } else {
        pad = max_jump;  // heuristic stand-in for off-sample variation
        r.certified = false;
    }
    r.lo = std::max(0.0, mn - pad);
    r.hi = std::min(1.0, mx + pad);
    return r;
}

Enclosure dyadic_interval_mass(const GFunction& g, std::int64_t j, int k, int n, int level) {
    if (k == 0) return Enclosure::exact(1.0);
    switch (short_circuit_kind(g)) {
        case ShortCircuit::dirac:
            // mu_g = delta_0 exactly; half-open binning puts the atom in cell 0
            return Enclosure::exact(j == 0 ? 1.0 : 0.0);
        case ShortCircuit::lebesgue:
            return Enclosure::exact(std::ldexp(1.0, -k));
        case ShortCircuit::none:
            break;
    }
    Enclosure e = cell_mass_full(g, j, k, n, level).enclosure;
    e.lo = std::max(0.0, e.lo);
    e.hi = std::min(1.0, e.hi);
    return e;
}

double DyadicMassVector::midpoint_sum() const {
    KahanSum s;
    for (const auto& e : masses) s.add(e.mid());
    return s.s;
}

void DyadicMassVector::write_csv(std::ostream& os) const {
    os << "j,k,lo,hi,log2_mid\n";
    for (std::size_t j = 0; j < masses.size(); ++j) {
        const auto& e = masses[j];
        os << j << ',' << level << ',' << numfmt(e.lo) << ',' << numfmt(e.hi) << ','
           << numfmt(e.log2_mid()) << '\n';
    }
}

void CDFTable::write_csv(std::ostream& os) const {
    os << "x,F_lo,F_hi,log2F_mid\n";
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double x = std::ldexp(static_cast<double>(j), -level);
        os << numfmt(x) << ',' << numfmt(values[j].lo) << ',' << numfmt(values[j].hi) << ','
           << numfmt(log2_mid[j]) << '\n';
    }
}

void AutocorrSeq::write_csv(std::ostream& os) const {
    os << "m,eta_num,eta_den\n";
    for (std::size_t m = 0; m < eta.size(); ++m)
        os << m << ',' << eta[m].num << ',' << eta[m].den << '\n';
}

void FourierTable::write_csv(std::ostream& os) const {
    os << "n,re_lo,re_hi,im_lo,im_hi\n";
    for (std::size_t n = 0; n < re.size(); ++n)
        os << n << ',' << numfmt(re[n].lo) << ',' << numfmt(re[n].hi) << ','
           << numfmt(im[n].lo) << ',' << numfmt(im[n].hi) << '\n';
}

DyadicMassVector mass_vector_certified(const GFunction& g, int k, int n, int level,
                                       double width_target_rel) {
    if (k < 0 || k > 20) throw error("mass_vector_certified: k out of range");
    DyadicMassVector mv;
    mv.level = k;
    mv.method = MassMethod::certified_enclosure;
    const std::int64_t cells = std::int64_t{1} << k;

    const ShortCircuit sc = short_circuit_kind(g);
    if (sc != ShortCircuit::none) {
        for (std::int64_t j = 0; j < cells; ++j) {
            const double v = sc == ShortCircuit::dirac ? (j == 0 ? 1.0 : 0.0)
                                                       : std::ldexp(1.0, -k);
            mv.masses.push_back(Enclosure::exact(v));
        }
        mv.notes.push_back(sc == ShortCircuit::dirac
                               ? "mu_g = delta_0 (g(1/2) = 0); masses exact"
                               : "mu_g = Lebesgue (g = 1/2); masses exact");
        mv.declared_tolerance = 1e-12;
        return mv;
    }

    mv.declared_tolerance = 1e-9;
    for (std::int64_t j = 0; j < cells; ++j) {
        MuResult r = cell_mass_full(g, j, k, n, level);
        double w = std::max(r.at_zero - r.enclosure.lo, r.enclosure.hi - r.at_zero);
        int used_n = n;
        if (w > width_target_rel * std::max(r.at_zero, 1e-300) &&
            level + n + 4 <= kMaterializeLevel) {
            const MuResult r2 = cell_mass_full(g, j, k, n + 4, level);
            const double w2 =
                std::max(r2.at_zero - r2.enclosure.lo, r2.enclosure.hi - r2.at_zero);
            if (w2 < w) {
                r = r2;
                w = w2;
                used_n = n + 4;
            }
        }
        // recenter on phi^n f(0): those values sum to exactly 1 by the
        // partition of unity, so midpoints do too
        Enclosure e = r.enclosure;
        e.lo = r.at_zero - w;
        e.hi = r.at_zero + w;
        e.n_iterations = used_n;
        mv.masses.push_back(e);
        if (w > width_target_rel * std::max(r.at_zero, 1e-300))
            mv.notes.push_back("cell " + std::to_string(j) + ": width " + numfmt(w) +
                               " misses relative target at n=" + std::to_string(used_n));
    }
    return mv;
}

DyadicMassVector mass_vector_quadrature(const GFunction& g, int k, int N, int level) {
    if (k < 0 || k > level) throw error("mass_vector_quadrature: need 0 <= k <= level");
    DyadicMassVector mv;
    mv.level = k;
    mv.method = MassMethod::density_quadrature;
    if (level < N + 8)
        mv.notes.push_back("aliasing guard violated: level < N + 8; values are rough");
    const GridFunction d = density_g_n(g, N, level);
    const std::size_t per_cell = std::size_t{1} << (level - k);
    const double scale = std::ldexp(1.0, -level);
    for (std::int64_t j = 0; j < (std::int64_t{1} << k); ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < per_cell; ++i)
            s.add(d.values[static_cast<std::size_t>(j) * per_cell + i]);
        Enclosure e;
        e.lo = e.hi = s.s * scale;
        e.n_iterations = N;
        e.certified = false;
        mv.masses.push_back(e);
    }
    mv.declared_tolerance = std::fabs(mv.midpoint_sum() - 1.0);
    return mv;
}

CDFTable cdf(const DyadicMassVector& masses) {
    CDFTable t;
    t.level = masses.level;
    KahanSum lo, hi, mid;
    Enclosure cur;
    cur.certified = true;
    t.values.push_back(Enclosure::exact(0.0));
    for (const auto& e : masses.masses) {
        lo.add(std::max(0.0, e.lo));
        hi.add(e.hi);
        mid.add(e.mid());
        cur.lo = lo.s;
        cur.hi = std::min(1.0, hi.s);
        cur.certified = cur.certified && e.certified;
        cur.n_iterations = std::max(cur.n_iterations, e.n_iterations);
        t.values.push_back(cur);
    }
    t.log2_mid.reserve(t.values.size());
    t.log2_mid.push_back(kNegInf);
    KahanSum mid2;
    for (const auto& e : masses.masses) {
        mid2.add(e.mid());
        t.log2_mid.push_back(mid2.s > 0 ? std::log2(mid2.s) : kNegInf);
    }
    return t;
}

CDFTable cdf(const GFunction& g, int k, MassMethod method, int n, int level) {
    return cdf(method == MassMethod::certified_enclosure
                   ? mass_vector_certified(g, k, n, level)
                   : mass_vector_quadrature(g, k, n, level));
}

Enclosure kappa(const GFunction& g, int n, int level) {
    if (g.symmetric) return Enclosure::exact(0.5);
    return dyadic_interval_mass(g, 1, 1, n, level);
}

FourierTable fourier_coefficients(const GFunction& g, int N, int n, int level) {
    if (N < 0) throw error("fourier_coefficients: N must be >= 0");
    int need = 4;
    while ((1 << (need - 4)) < std::max(N, 1)) ++need;
    if (level < need)
        throw error("fourier_coefficients: level too small for N (need level >= log2(N) + 4)");
    FourierTable t;
    t.re.push_back(Enclosure::exact(1.0));
    t.im.push_back(Enclosure::exact(0.0));
    for (int m = 1; m <= N; ++m) {
        t.re.push_back(mu_of_function(g, TestFunction::cosine(m), n, level));
        // mu_hat(m) = mu(cos 2 pi m x) - i mu(sin 2 pi m x)
        Enclosure s = mu_of_function(g, TestFunction::sine(m), n, level);
        std::swap(s.lo, s.hi);
        s.lo = -s.lo;
        s.hi = -s.hi;
        t.im.push_back(s);
    }
    return t;
}

AutocorrSeq tm_autocorrelation(int M) {
    if (M < 0) throw error("tm_autocorrelation: M must be >= 0");
    AutocorrSeq a;
    a.eta.resize(static_cast<std::size_t>(M) + 1);
    a.eta[0] = Rational(1, 1);
    if (M >= 1) a.eta[1] = Rational(-1, 3);  // eta(1) = -(eta(0)+eta(1))/2
    const Rational half(1, 2);
    for (int m = 1; 2 * m <= M; ++m) {
        a.eta[static_cast<std::size_t>(2 * m)] = a.eta[static_cast<std::size_t>(m)];
        if (2 * m + 1 <= M)
            a.eta[static_cast<std::size_t>(2 * m + 1)] =
                -((a.eta[static_cast<std::size_t>(m)] + a.eta[static_cast<std::size_t>(m + 1)]) *
                  half);
    }
    return a;
}

DoublingReport doubling_relation_check(const FourierTable& table, double slack) {
    DoublingReport rep;
    for (std::size_t n = 1; 2 * n < table.re.size(); ++n) {
        DoublingReport::Pair p;
        p.n = static_cast<int>(n);
        p.ok = table.re[n].overlaps(table.re[2 * n], slack) &&
               table.im[n].overlaps(table.im[2 * n], slack);
        rep.all_ok = rep.all_ok && p.ok;
        rep.pairs.push_back(p);
    }
    return rep;
}

}  // namespace gmeasure

#include "gmeasure/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <numbers>
#include <sstream>

namespace gmeasure {

namespace {

constexpr double kPi = std::numbers::pi;

double tent_eval(double x) {
    return x <= 0.5 ? 2.0 * x : 2.0 * (1.0 - x);
}

double sqrt_eval(double x) {
    if (x <= 0.25) return std::sqrt(x);
    if (x <= 0.75) return 1.0 - std::sqrt(std::fabs(x - 0.5));
    return std::sqrt(1.0 - x);
}

ZeroSpec single_rational_zero(std::int64_t num, std::int64_t den) {
    ZeroEntry z;
    z.is_rational = true;
    z.q = Rational(num, den);
    ZeroSpec spec;
    spec.zeros.push_back(z);
    spec.complete = true;
    return spec;
}

}  // namespace

double Segment::eval(double x) const {
    if (kind == Kind::cos) {
        const double a = coeffs.size() > 0 ? coeffs[0] : 0.0;
        const double b = coeffs.size() > 1 ? coeffs[1] : 0.0;
        const double f = coeffs.size() > 2 ? coeffs[2] : 1.0;
        return a + b * std::cos(2.0 * kPi * f * x);
    }
    double acc = 0;  // Horner
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

GFunction make_builtin(const std::string& name) {
    GFunction g;
    g.name = name;
    if (name == "tm") {
        g.fn = [](double x) { return 0.5 * (1.0 - std::cos(2.0 * kPi * x)); };
        g.cos_form = CosForm{0.5, -0.5, 1.0};
        g.zero_spec = single_rational_zero(0, 1);
        g.symmetric = true;
        g.envelope = ScalingEnvelope{4.0, 2.0, kPi * kPi, 2.0};
        g.modulus_fn = [](double d) { return std::min(1.0, kPi * d); };
    } else if (name == "tent") {
        g.fn = tent_eval;
        g.zero_spec = single_rational_zero(0, 1);
        g.symmetric = true;
        g.envelope = ScalingEnvelope{2.0, 1.0, 2.0, 1.0};
        g.modulus_fn = [](double d) { return std::min(1.0, 2.0 * d); };
    } else if (name == "sqrt") {
        g.fn = sqrt_eval;
        g.zero_spec = single_rational_zero(0, 1);
        g.symmetric = true;
        g.envelope = ScalingEnvelope{1.0, 0.5, std::sqrt(2.0), 0.5};
        g.modulus_fn = [](double d) { return std::min(1.0, 2.0 * std::sqrt(d)); };
    } else if (name == "half") {
        g.fn = [](double) { return 0.5; };
        g.cos_form = CosForm{0.5, 0.0, 1.0};
        g.zero_spec.complete = true;
        g.symmetric = true;
        g.modulus_fn = [](double) { return 0.0; };
    } else if (name == "coshift") {
        g.fn = [](double x) { return 0.5 * (1.0 + std::cos(2.0 * kPi * x)); };
        g.cos_form = CosForm{0.5, 0.5, 1.0};
        g.zero_spec = single_rational_zero(1, 2);
        // Mathematically symmetric, but the flag drives the kappa = 1/2
        // shortcut, which is meaningless for the Dirac measure; leave unset.
        g.symmetric = false;
        g.modulus_fn = [](double d) { return std::min(1.0, kPi * d); };
    } else {
        throw error("unknown builtin g-function '" + name +
                    "'; valid names: tm, tent, sqrt, half, coshift");
    }
    return g;
}

GFunction make_piecewise(const std::vector<Segment>& segments, ZeroSpec zero_spec, double tol) {
    if (segments.empty()) throw error("piecewise g-function: empty segment list (coverage gap)");
    auto segs = std::make_shared<std::vector<Segment>>(segments);
    std::sort(segs->begin(), segs->end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    constexpr double kCovTol = 1e-12;
    if (std::fabs(segs->front().lo) > kCovTol)
        throw error("piecewise g-function: coverage gap before first segment");
    for (std::size_t i = 0; i + 1 < segs->size(); ++i) {
        const double d = (*segs)[i + 1].lo - (*segs)[i].hi;
        if (d > kCovTol) throw error("piecewise g-function: coverage gap at x=" + std::to_string((*segs)[i].hi));
        if (d < -kCovTol) throw error("piecewise g-function: segment overlap at x=" + std::to_string((*segs)[i + 1].lo));
    }
    if (std::fabs(segs->back().hi - 1.0) > kCovTol)
        throw error("piecewise g-function: coverage gap after last segment");

    GFunction g;
    g.name = "piecewise";
    g.fn = [segs](double x) {
        // last segment with lo <= x
        auto it = std::upper_bound(segs->begin(), segs->end(), x,
                                   [](double v, const Segment& s) { return v < s.lo; });
        if (it != segs->begin()) --it;
        return it->eval(x);
    };
    g.zero_spec = std::move(zero_spec);

    const double residual = validate_g_identity(g, 12);
    if (residual > tol) {
        std::ostringstream os;
        os << "piecewise g-function fails g(x)+g(x+1/2)=1: max residual " << residual;
        throw error(os.str());
    }
    double sym_res = 0;
    const int m = 12;
    for (int j = 0; j < (1 << m); ++j) {
        const double x = std::ldexp(static_cast<double>(j), -m);
        sym_res = std::max(sym_res, std::fabs(g(x) - g(1.0 - x)));
    }
    g.symmetric = sym_res < 1e-12;
    if (g.zero_spec.complete) validate_zero_spec(g);
    return g;
}

GFunction parse_gspec(const std::string& text) {
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };
    const std::string t = trim(text);
    if (t.rfind("builtin:", 0) == 0) return make_builtin(trim(t.substr(8)));
    if (t.rfind("piecewise:", 0) != 0)
        throw error("g-function description must start with 'builtin:' or 'piecewise:'");

    std::istringstream in(t.substr(10));
    std::vector<Segment> segs;
    ZeroSpec zspec;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "zeros") {
            std::string mode;
            ls >> mode;
            zspec.complete = (mode == "complete");
            std::string q;
            while (ls >> q) {
                ZeroEntry z;
                z.is_rational = true;
                z.q = Rational::parse(q);
                zspec.zeros.push_back(z);
            }
            continue;
        }
        Segment s;
        s.lo = std::stod(first);
        std::string kind;
        ls >> s.hi >> kind;
        if (kind == "poly") s.kind = Segment::Kind::poly;
        else if (kind == "cos") s.kind = Segment::Kind::cos;
        else throw error("piecewise segment kind must be 'poly' or 'cos', got '" + kind + "'");
        double c;
        while (ls >> c) s.coeffs.push_back(c);
        segs.push_back(s);
    }
    return make_piecewise(segs, zspec);
}

double validate_g_identity(const GFunction& g, int level) {
    if (level < 1) throw error("validate_g_identity: level must be >= 1");
    double worst = 0;
    const std::size_t n = std::size_t{1} << level;
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double x = std::ldexp(static_cast<double>(j), -level);
        worst = std::max(worst, std::fabs(g(x) + g(x + 0.5) - 1.0));
    }
    return worst;
}

void validate_zero_spec(const GFunction& g, int level, double tol) {
    for (const auto& z : g.zero_spec.zeros) {
        const double x = z.location();
        if (x < 0 || x >= 1) throw error("zero_spec entry outside [0,1)");
        if (g(x) >= tol)
            throw error("declared zero at x=" + std::to_string(x) + " but g(x)=" + std::to_string(g(x)));
    }
    if (!g.zero_spec.complete) return;
    const std::size_t n = std::size_t{1} << level;
    const double radius = std::ldexp(1.0, -(level - 2));
    for (std::size_t j = 0; j < n; ++j) {
        const double x = std::ldexp(static_cast<double>(j), -level);
        if (g(x) >= tol * 1e-3) continue;
        bool near = false;
        for (const auto& z : g.zero_spec.zeros) {
            double d = std::fabs(x - z.location());
            d = std::min(d, 1.0 - d);  // torus distance
            if (d <= radius) { near = true; break; }
        }
        if (!near)
            throw error("zero_spec marked complete but g vanishes near x=" + std::to_string(x));
    }
}

ModulusEstimate estimate_modulus(const std::vector<double>& grid_values, double delta, int level) {
    if (delta <= 0 || delta > 0.5) throw error("estimate_modulus: delta must be in (0, 1/2]");
    const double spacing = std::ldexp(1.0, -level);
    if (spacing > delta) throw error("estimate_modulus: grid too coarse relative to delta");
    const std::size_t n = grid_values.size();
    const std::size_t w = static_cast<std::size_t>(std::floor(delta / spacing));
    // sliding max-min over windows of w+1 points, periodic extension
    std::deque<std::size_t> qmax, qmin;
    double worst = 0;
    for (std::size_t i = 0; i < n + w; ++i) {
        const double v = grid_values[i % n];
        while (!qmax.empty() && grid_values[qmax.back() % n] <= v) qmax.pop_back();
        qmax.push_back(i);
        while (!qmin.empty() && grid_values[qmin.back() % n] >= v) qmin.pop_back();
        qmin.push_back(i);
        if (i >= w) {
            while (qmax.front() + w < i) qmax.pop_front();
            while (qmin.front() + w < i) qmin.pop_front();
            worst = std::max(worst, grid_values[qmax.front() % n] - grid_values[qmin.front() % n]);
        }
    }
    ModulusEstimate e;
    e.lower = worst;
    return e;
}

ModulusEstimate estimate_modulus(const GFunction& f, double delta, int level) {
    std::vector<double> v(std::size_t{1} << level);
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = f(std::ldexp(static_cast<double>(j), -level));
    ModulusEstimate e = estimate_modulus(v, delta, level);
    if (f.has_certified_modulus()) e.upper = f.modulus_bound(delta);
    return e;
}

ModulusProfile estimate_summable_variation(const GFunction& g, double delta, int depth) {
    if (depth < 1) throw error("estimate_summable_variation: depth must be >= 1");
    constexpr int kMaxScanLevel = 22;
    ModulusProfile p;
    double prev = 0, last = 0;
    for (int j = 0; j <= depth; ++j) {
        const double d = std::ldexp(delta, -j);
        const int need = static_cast<int>(std::ceil(std::log2(1.0 / d))) + 4;
        const int lev = std::min(kMaxScanLevel, std::max(need, 8));
        if (std::ldexp(1.0, -lev) > d) break;  // scan cap reached; rest goes to the tail
        const double term = estimate_modulus(g, d, lev).lower;
        p.table[d] = term;
        p.partial_sum += term;
        prev = last;
        last = term;
        p.depth = j;
    }
    p.tail_extrapolated = true;
    if (prev > 0 && last > 0 && last < prev) {
        const double r = last / prev;
        p.tail_estimate = last * r / (1.0 - r);
    } else {
        p.tail_estimate = 0;
    }
    return p;
}

EnvelopeReport fit_or_verify_envelope(const GFunction& g, std::optional<ScalingEnvelope> proposed,
                                      int level, double tol) {
    if (g(0.0) > kZeroTol)
        throw error("fit_or_verify_envelope: g(0) != 0, no power-law scaling at the origin");
    EnvelopeReport rep;
    ScalingEnvelope env;
    const std::size_t n = std::size_t{1} << level;

    if (proposed) {
        env = *proposed;
    } else {
        // log-log regression of g against x near 0, then tighten c1, c2
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (std::size_t j = 1; j <= n / 16; ++j) {
            const double x = std::ldexp(static_cast<double>(j), -level);
            const double v = g(x);
            if (v <= 0) continue;
            const double lx = std::log2(x), ly = std::log2(v);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++cnt;
        }
        if (cnt < 4) throw error("fit_or_verify_envelope: too few usable points to fit");
        const double theta = (static_cast<double>(cnt) * sxy - sx * sy) /
                             (static_cast<double>(cnt) * sxx - sx * sx);
        double c1 = std::numeric_limits<double>::infinity(), c2 = 0;
        for (std::size_t j = 1; j <= n / 2; ++j) {
            const double x = std::ldexp(static_cast<double>(j), -level);
            const double r = g(x) / std::pow(x, theta);
            c1 = std::min(c1, r);
            c2 = std::max(c2, r);
        }
        env = ScalingEnvelope{c1, theta, c2, theta};
        rep.fitted = true;
    }

    if (!env.valid()) throw error("fit_or_verify_envelope: invalid envelope constants");
    rep.envelope = env;
    rep.verified = true;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= n / 2; ++j) {
        const double x = std::ldexp(static_cast<double>(j), -level);
        const double v = g(x);
        const double lo_margin = v - env.c1 * std::pow(x, env.theta1);
        const double hi_margin = env.c2 * std::pow(x, env.theta2) - v;
        const double margin = std::min(lo_margin, hi_margin);
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst_x = x;
        }
    }
    rep.verified = rep.worst_margin >= -tol;
    return rep;
}

}  // namespace gmeasure

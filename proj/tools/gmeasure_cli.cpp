#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmeasure/classify.hpp"
#include "gmeasure/gfunction.hpp"
#include "gmeasure/grid.hpp"
#include "gmeasure/measure.hpp"
#include "gmeasure/numfmt.hpp"
#include "gmeasure/scaling.hpp"
#include "gmeasure/transfer.hpp"

namespace {

using namespace gmeasure;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

struct OutFile {
    std::ofstream file;
    std::ostream& stream(const std::string& path) {
        if (path.empty() || path == "-") return std::cout;
        file.open(path, std::ios::binary);  // binary: no platform newline translation
        if (!file) throw error("cannot open output file '" + path + "'");
        return file;
    }
};

GFunction load_g(const std::string& spec) {
    // allow a file path holding the description (needed for piecewise specs)
    if (spec.rfind("builtin:", 0) != 0 && spec.rfind("piecewise:", 0) != 0) {
        std::ifstream in(spec);
        if (!in) throw error("g-spec '" + spec + "' is neither inline nor a readable file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_gspec(ss.str());
    }
    return parse_gspec(spec);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw error("empty integer list");
    return out;
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) {
        const int v = std::stoi(s);
        return {v, v};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

int cmd_density(const std::string& gspec, const std::string& ns, int level,
                const std::string& out) {
    const GFunction g = load_g(gspec);
    const std::vector<int> nlist = parse_int_list(ns);
    std::vector<GridFunction> cols;
    for (int n : nlist) {
        if (n < 0 || n > level + 10) throw error("density: n out of range");
        cols.push_back(density_g_n(g, n, level));
    }
    OutFile of;
    std::ostream& os = of.stream(out);
    os << "x";
    for (int n : nlist) os << ",g_" << n;
    os << "\n";
    const std::size_t rows = std::size_t{1} << level;
    for (std::size_t j = 0; j < rows; ++j) {
        os << numfmt(std::ldexp(static_cast<double>(j), -level));
        for (const auto& c : cols) os << ',' << numfmt(c.values[j]);
        os << '\n';
    }
    return kExitOk;
}

DyadicMassVector make_masses(const GFunction& g, int k, int n, int level,
                             const std::string& method) {
    if (method == "certified") return mass_vector_certified(g, k, n, level);
    if (method == "quadrature") return mass_vector_quadrature(g, k, n, std::max(level, n + 8));
    throw error("method must be 'certified' or 'quadrature'");
}

int cmd_mass(const std::string& gspec, int k, int n, int level, const std::string& method,
             const std::string& out) {
    const DyadicMassVector mv = make_masses(load_g(gspec), k, n, level, method);
    OutFile of;
    mv.write_csv(of.stream(out));
    return kExitOk;
}

int cmd_cdf(const std::string& gspec, int k, int n, int level, const std::string& method,
            const std::string& out) {
    const CDFTable t = cdf(make_masses(load_g(gspec), k, n, level, method));
    OutFile of;
    t.write_csv(of.stream(out));
    return kExitOk;
}

int cmd_fourier(const std::string& gspec, int m, int n, int level, const std::string& out) {
    const GFunction g = load_g(gspec);
    int need = 4;
    while ((1 << (need - 4)) < std::max(m, 1)) ++need;
    const FourierTable t = fourier_coefficients(g, m, n, std::max(level, need));
    OutFile of;
    t.write_csv(of.stream(out));
    return kExitOk;
}

int cmd_autocorr(int m, const std::string& out) {
    const AutocorrSeq a = tm_autocorrelation(m);
    OutFile of;
    a.write_csv(of.stream(out));
    return kExitOk;
}

int cmd_classify(const std::string& gspec, const std::string& out) {
    OutFile of;
    of.stream(out) << classification_json(load_g(gspec)) << '\n';
    return kExitOk;
}

int cmd_scaling(const std::string& gspec, const std::string& mrange, int n, int level,
                const std::string& format, const std::string& out) {
    const GFunction g = load_g(gspec);
    ScalingEnvelope env;
    if (g.envelope) {
        env = *g.envelope;
    } else {
        const EnvelopeReport rep = fit_or_verify_envelope(g, std::nullopt, 14);
        if (!rep.verified) throw error("scaling: could not establish a power-law envelope");
        env = rep.envelope;
    }
    const auto [m_lo, m_hi] = parse_range(mrange);
    const ScalingReport rep = verify_bounds(g, env, m_lo, m_hi, n, level);
    OutFile of;
    std::ostream& os = of.stream(out);
    if (format == "json") os << scaling_summary_json(rep) << '\n';
    else rep.write_csv(os);
    return rep.all_pass ? kExitOk : kExitValidationFailure;
}

int cmd_validate(const std::string& gspec, const std::string& out) {
    OutFile of;
    std::ostream& os = of.stream(out);
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        os << (ok ? "ok  " : "FAIL") << "  " << name << "  " << detail << '\n';
        all_ok = all_ok && ok;
    };

    GFunction g;
    try {
        g = load_g(gspec);
    } catch (const error& e) {
        os << "FAIL  g-spec  " << e.what() << '\n';
        return kExitValidationFailure;
    }

    const double res = validate_g_identity(g, 12);
    report("g-identity", res < 1e-6, "max residual " + numfmt(res));

    {
        const GridFunction one =
            iterate_transfer(g, [](double) { return 1.0; }, 10, 8);
        double dev = 0;
        for (double v : one.values) dev = std::max(dev, std::fabs(v - 1.0));
        report("markov-fixed-point", dev < 1e-12, "max |phi^10 1 - 1| = " + numfmt(dev));
    }
    {
        double worst = 0;
        for (int n = 1; n <= 8; ++n)
            worst = std::max(worst, std::fabs(trapezoid(density_g_n(g, n, n + 8)) - 1.0));
        report("density-normalization", worst < 1e-3, "max |mean g_n - 1| = " + numfmt(worst));
    }
    try {
        const DyadicMassVector coarse = mass_vector_certified(g, 4, 10, 6);
        const DyadicMassVector fine = mass_vector_certified(g, 5, 10, 6);
        bool ok = true;
        for (std::size_t j = 0; j < coarse.masses.size(); ++j) {
            const Enclosure& p = coarse.masses[j];
            Enclosure c;
            c.lo = fine.masses[2 * j].lo + fine.masses[2 * j + 1].lo;
            c.hi = fine.masses[2 * j].hi + fine.masses[2 * j + 1].hi;
            ok = ok && p.overlaps(c, 1e-12);
        }
        report("refinement-consistency", ok, "k=4 parents vs k=5 children");
    } catch (const error& e) {
        report("refinement-consistency", false, e.what());
    }
    try {
        if (g.name == "tm") {
            const FourierTable t = fourier_coefficients(g, 8, 12, 8);
            const AutocorrSeq a = tm_autocorrelation(8);
            double worst = 0;
            for (int m = 0; m <= 8; ++m)
                worst = std::max(worst,
                                 std::fabs(t.re[static_cast<std::size_t>(m)].mid() -
                                           a.eta[static_cast<std::size_t>(m)].to_double()));
            report("fourier-autocorrelation", worst < 1e-2, "max gap " + numfmt(worst));
        } else {
            const FourierTable t = fourier_coefficients(g, 8, 12, 8);
            const DoublingReport d = doubling_relation_check(t, 1e-9);
            report("fourier-doubling", d.all_ok, "mu_hat(n) vs mu_hat(2n) overlap");
        }
    } catch (const error& e) {
        report("fourier", false, e.what());
    }

    os << (all_ok ? "validate: all checks passed\n" : "validate: FAILURES above\n");
    return all_ok ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"g-measures of the doubling map: densities, distribution functions, "
                 "Fourier coefficients, spectral classification, scaling bounds"};
    app.require_subcommand(1);
    app.fallthrough();  // parent flags (--config) usable after the subcommand
    app.set_config("--config", "", "key=value config file (flags win)");

    std::string gspec = "builtin:tm", out, format = "csv", method = "certified";
    std::string nlist = "1,2,3,6,11", mrange = "1..10";
    int n = 14, level = 6, k = 8, m = 32;

    auto* d = app.add_subcommand("density", "Riesz-product densities g_n on a dyadic grid");
    d->add_option("--g", gspec, "g-function spec or file");
    d->add_option("--n", nlist, "comma-separated iteration counts");
    int dlevel = 12;
    d->add_option("--level", dlevel, "grid level (2^level points)");
    d->add_option("--out", out, "output path (default stdout)");

    auto* ms = app.add_subcommand("mass", "enclosures of dyadic interval masses");
    ms->add_option("--g", gspec);
    ms->add_option("--k", k, "dyadic level of the cells");
    ms->add_option("--n", n, "transfer iterations");
    ms->add_option("--level", level, "evaluation grid level");
    ms->add_option("--method", method, "certified|quadrature");
    ms->add_option("--out", out);

    auto* cd = app.add_subcommand("cdf", "distribution function F_g on a dyadic grid");
    cd->add_option("--g", gspec);
    cd->add_option("--k", k);
    cd->add_option("--n", n);
    cd->add_option("--level", level);
    cd->add_option("--method", method);
    cd->add_option("--out", out);

    auto* fo = app.add_subcommand("fourier", "Fourier-Stieltjes coefficient enclosures");
    fo->add_option("--g", gspec);
    fo->add_option("--m", m, "highest coefficient index");
    fo->add_option("--n", n);
    fo->add_option("--level", level);
    fo->add_option("--out", out);

    auto* au = app.add_subcommand("autocorr-tm", "exact Thue-Morse autocorrelation eta(m)");
    au->add_option("--m", m, "highest lag");
    au->add_option("--out", out);

    auto* cl = app.add_subcommand("classify", "goodness + spectral type (JSON)");
    cl->add_option("--g", gspec);
    cl->add_option("--out", out);

    auto* sc = app.add_subcommand("scaling", "super-polynomial scaling bound verification");
    sc->add_option("--g", gspec);
    sc->add_option("--m", mrange, "depth range a..b (x = 2^-m)");
    sc->add_option("--n", n);
    sc->add_option("--level", level);
    sc->add_option("--format", format, "csv|json");
    sc->add_option("--out", out);

    auto* va = app.add_subcommand("validate", "cross-module property suite");
    va->add_option("--g", gspec);
    va->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (d->parsed()) return cmd_density(gspec, nlist, dlevel, out);
        if (ms->parsed()) return cmd_mass(gspec, k, n, level, method, out);
        if (cd->parsed()) return cmd_cdf(gspec, k, n, level, method, out);
        if (fo->parsed()) return cmd_fourier(gspec, m, n, level, out);
        if (au->parsed()) return cmd_autocorr(m, out);
        if (cl->parsed()) return cmd_classify(gspec, out);
        if (sc->parsed()) return cmd_scaling(gspec, mrange, n, level, format, out);
        if (va->parsed()) return cmd_validate(gspec, out);
    } catch (const gmeasure::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

#include "gmeasure/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "gmeasure/numfmt.hpp"
#include "gmeasure/transfer.hpp"

namespace gmeasure {

std::pair<double, double> theorem_bounds_log2(const ScalingEnvelope& env, double kappa, double x) {
    if (!env.valid()) throw error("theorem_bounds_log2: invalid envelope");
    if (!(kappa > 0)) throw error("theorem_bounds_log2: kappa must be positive");
    if (!(x > 0 && x < 1)) throw error("theorem_bounds_log2: need 0 < x < 1");
    const double l = std::log2(x);
    const double ls = std::log2(env.s());
    const double lS = std::log2(env.S());
    const double lower = std::log2(kappa) + ls - 2.0 * env.theta1 +
                         (-(env.theta1 / 2.0) * l + (5.0 * env.theta1 / 2.0) - ls) * l;
    const double upper = (-(env.theta2 / 2.0) * l) * l + (-env.theta2 / 2.0 - lS) * l;
    return {lower, upper};
}

void ScalingReport::write_csv(std::ostream& os) const {
    os << "m,log2F_lo,log2F_hi,log2_lower,log2_upper,ratio\n";
    for (const auto& r : rows)
        os << r.m << ',' << numfmt(r.log2_F_lo) << ',' << numfmt(r.log2_F_hi) << ','
           << numfmt(r.log2_lower) << ',' << numfmt(r.log2_upper) << ',' << numfmt(r.ratio)
           << '\n';
}

ScalingReport verify_bounds(const GFunction& g, const ScalingEnvelope& env,
                            int m_lo, int m_hi, int n, int level) {
    if (m_lo < 1 || m_hi < m_lo) throw error("verify_bounds: bad m range");
    ScalingReport rep;
    rep.envelope = env;
    rep.kappa_enclosure = kappa(g, n, level);
    if (!(rep.kappa_enclosure.lo > 0))
        throw error("verify_bounds: kappa lower bound not positive; bounds are vacuous");
    rep.all_pass = true;
    for (int m = m_lo; m <= m_hi; ++m) {
        ScalingRow row;
        row.m = m;
        const double x = std::ldexp(1.0, -m);
        const auto [blo, bhi] = theorem_bounds_log2(env, rep.kappa_enclosure.lo, x);
        row.log2_lower = blo;
        row.log2_upper = bhi;
        Enclosure e = dyadic_interval_mass(g, 0, m, n, level);
        bool sandwich = blo < e.log2_lo() && e.log2_hi() < bhi;
        if (!sandwich && level + n + 4 <= kMaterializeLevel) {
            const Enclosure e2 = dyadic_interval_mass(g, 0, m, n + 4, level);
            if (e2.width() < e.width()) {
                e = e2;
                row.note = "retried with n=" + std::to_string(n + 4);
            }
            sandwich = blo < e.log2_lo() && e.log2_hi() < bhi;
        }
        row.log2_F_lo = e.log2_lo();
        row.log2_F_hi = e.log2_hi();
        row.ratio = e.log2_mid() / (static_cast<double>(m) * m);
        row.pass = sandwich;
        row.certified = e.certified && rep.kappa_enclosure.certified;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

AsymptoticFit asymptotic_fit(const ScalingReport& report) {
    if (report.rows.size() < 2) throw error("asymptotic_fit: need at least two rows");
    // least squares of log2 F(2^-m) against m^2 with intercept
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(report.rows.size());
    for (const auto& r : report.rows) {
        const double x = static_cast<double>(r.m) * r.m;
        const double y = 0.5 * (r.log2_F_lo + r.log2_F_hi);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    AsymptoticFit fit;
    fit.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const auto& env = report.envelope;
    const double m_min = static_cast<double>(
        std::min_element(report.rows.begin(), report.rows.end(),
                         [](const ScalingRow& a, const ScalingRow& b) { return a.m < b.m; })->m);
    fit.band_lo = -env.theta1 / 2.0 - 5.0 * env.theta1 / (2.0 * m_min);
    fit.band_hi = -env.theta2 / 2.0 + (env.theta2 / 2.0 + std::log2(env.S())) / m_min;
    fit.in_band = fit.band_lo <= fit.slope && fit.slope <= fit.band_hi;
    return fit;
}

std::string AsymptoticFit::summary_json() const {
    nlohmann::json j;
    j["slope"] = slope;
    j["band"] = {band_lo, band_hi};
    j["in_band"] = in_band;
    return j.dump();
}

std::string scaling_summary_json(const ScalingReport& report) {
    nlohmann::json j;
    j["envelope"] = {{"c1", report.envelope.c1},
                     {"theta1", report.envelope.theta1},
                     {"c2", report.envelope.c2},
                     {"theta2", report.envelope.theta2}};
    j["kappa"] = {report.kappa_enclosure.lo, report.kappa_enclosure.hi};
    j["all_pass"] = report.all_pass;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row;
        row["m"] = r.m;
        row["log2F"] = {r.log2_F_lo, r.log2_F_hi};
        row["bounds"] = {r.log2_lower, r.log2_upper};
        row["ratio"] = r.ratio;
        row["pass"] = r.pass;
        row["certified"] = r.certified;
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
    }
    j["rows"] = rows;
    const AsymptoticFit fit = asymptotic_fit(report);
    j["fit"] = {{"slope", fit.slope}, {"band", {fit.band_lo, fit.band_hi}},
                {"in_band", fit.in_band}};
    return j.dump(2);
}

}  // namespace gmeasure

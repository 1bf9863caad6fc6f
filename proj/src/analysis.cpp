#include "drlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace drlab {

Statistic parse_statistic(const std::string& s) {
    if (s == "survival") return Statistic::Survival;
    if (s == "mean") return Statistic::Mean;
    throw ConfigError("unknown statistic '" + s + "' (expected survival|mean)");
}

std::string statistic_name(Statistic s) { return s == Statistic::Survival ? "survival" : "mean"; }

Series series_from_trace(const GenerationTrace<double>& trace, Statistic stat) {
    Series s;
    for (const auto& g : trace.gens) {
        s.n.push_back(g.n);
        s.value.push_back(stat == Statistic::Survival ? g.survival : g.mean);
    }
    return s;
}

std::vector<long> geometric_points(long n_min, long n_max) {
    std::vector<long> out;
    for (int j = 0;; ++j) {
        const double v = static_cast<double>(n_min) * std::pow(2.0, j / 2.0);
        const long n = std::lround(v);
        if (n > n_max) break;
        if (out.empty() || n != out.back()) out.push_back(n);
    }
    return out;
}

FitResult fit_exponent(const Series& s, long n_min, long n_max) {
    if (n_min < 2 || n_max <= n_min) throw DomainError("fit window must satisfy 2 <= n_min < n_max");
    const auto targets = geometric_points(n_min, n_max);
    if (targets.size() < 5)
        throw DomainError("fit window [" + std::to_string(n_min) + ", " + std::to_string(n_max) +
                          "] holds fewer than 5 geometric points");
    FitResult r;
    r.n_min = n_min;
    r.n_max = n_max;
    std::set<std::size_t> used;
    for (long t : targets) {
        // Nearest sampled generation in log distance; exact for dense traces.
        std::size_t best = s.n.size();
        double dist = 0.0;
        for (std::size_t i = 0; i < s.n.size(); ++i) {
            if (s.n[i] < n_min || s.n[i] > n_max || s.n[i] <= 0) continue;
            const double d = std::fabs(std::log(static_cast<double>(s.n[i]) / static_cast<double>(t)));
            if (best == s.n.size() || d < dist) {
                best = i;
                dist = d;
            }
        }
        if (best == s.n.size()) throw DomainError("no data inside the fit window");
        if (!used.insert(best).second) continue;
        const double v = s.value[best];
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("statistic is not strictly positive at n = " + std::to_string(s.n[best]));
        r.points.emplace_back(s.n[best], v);
    }
    if (r.points.size() < 5) throw DomainError("fit window holds fewer than 5 distinct sampled points");
    const double k = static_cast<double>(r.points.size());
    double sx = 0, sy = 0;
    for (const auto& [n, v] : r.points) {
        sx += std::log(static_cast<double>(n));
        sy += std::log(v);
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& [n, v] : r.points) {
        const double dx = std::log(static_cast<double>(n)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double sse = 0;
    for (const auto& [n, v] : r.points) {
        const double e = std::log(v) - (r.intercept + r.slope * std::log(static_cast<double>(n)));
        sse += e * e;
    }
    r.residual_se = std::sqrt(sse / (k - 2.0));
    return r;
}

bool ScalingReport::pass() const {
    if (refused) return false;
    for (const auto& b : bands)
        if (!b.pass) return false;
    return tail_pass;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size();
    return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

} // namespace

ScalingReport scaling_report(const GenerationTrace<double>& trace, Phase phase, const ScalingOptions& opt,
                             const ChannelDiagnostics* diag) {
    ScalingReport rep;
    if (phase != Phase::Critical) {
        rep.refused = true;
        rep.notice = "scaling report needs a critical spec; this one is " + phase_name(phase);
        return rep;
    }
    const double m = static_cast<double>(trace.m);
    const std::vector<std::string> assertable = {"n_weighted_survival", "product_over_n2", "wm1", "wm2_over_n",
                                                 "wm3_over_n2"};
    rep.columns = assertable;
    for (int k = 1; k <= 4; ++k) rep.columns.push_back("gderiv" + std::to_string(k) + "_scaled");
    for (double lam : trace.lambdas) {
        for (int k = 0; k < 4; ++k) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "trunc_m%d_lambda%g", k, lam);
            rep.columns.emplace_back(buf);
        }
    }
    for (int l = 0; l <= 10; ++l) rep.columns.push_back("tail_ratio" + std::to_string(l));
    rep.columns.push_back("n2_survival");
    rep.columns.push_back("n2_survival_over_log2");
    rep.columns.push_back("n2_mean");
    if (diag) {
        rep.columns.push_back("openpath_weighted_over_n");
        rep.columns.push_back("openpath_weighted_x_over_n2");
    }
    static const double fact[] = {1, 1, 2, 6, 24};
    for (const auto& g : trace.gens) {
        if (g.n < 1) continue;
        const double n = static_cast<double>(g.n);
        ScalingRow row;
        row.n = g.n;
        row.cols["n_weighted_survival"] = n * (g.g_at_m - g.g_at_0);
        row.cols["product_over_n2"] = std::exp(g.log_running_product) / (n * n);
        row.cols["wm1"] = g.wm[1];
        row.cols["wm2_over_n"] = g.wm[2] / n;
        row.cols["wm3_over_n2"] = g.wm[3] / (n * n);
        for (int k = 1; k <= 4; ++k)
            row.cols["gderiv" + std::to_string(k) + "_scaled"] = g.gderiv[k] / (fact[k] * std::pow(n, k - 1));
        for (std::size_t li = 0; li < trace.lambdas.size() && li < g.lambda_moments.size(); ++li) {
            for (int k = 0; k < 4; ++k) {
                char buf[48];
                std::snprintf(buf, sizeof buf, "trunc_m%d_lambda%g", k, trace.lambdas[li]);
                row.cols[buf] = g.lambda_moments[li][k];
            }
        }
        for (int l = 0; l <= 10; ++l) row.cols["tail_ratio" + std::to_string(l)] = g.tail_ratio[l];
        row.cols["n2_survival"] = n * n * g.survival;
        const double ln = std::log(n);
        row.cols["n2_survival_over_log2"] = n > 1 ? n * n * g.survival / (ln * ln) : 0.0;
        row.cols["n2_mean"] = n * n * g.mean;
        if (diag && static_cast<std::size_t>(g.n) < diag->weighted.size()) {
            row.cols["openpath_weighted_over_n"] = diag->weighted[g.n] / n;
            row.cols["openpath_weighted_x_over_n2"] = diag->weighted_x[g.n] / (n * n);
        }
        rep.rows.push_back(std::move(row));
    }
    for (const auto& col : assertable) {
        std::vector<double> vals;
        for (const auto& row : rep.rows)
            if (row.n >= opt.band_lo && row.n <= opt.band_hi) vals.push_back(row.cols.at(col));
        BandCheck b;
        b.column = col;
        if (vals.empty()) {
            b.pass = false;
        } else {
            b.median = median(vals);
            b.lo = *std::min_element(vals.begin(), vals.end());
            b.hi = *std::max_element(vals.begin(), vals.end());
            b.pass = b.median > 0 && b.lo >= b.median / opt.band_factor && b.hi <= b.median * opt.band_factor;
        }
        rep.bands.push_back(b);
    }
    for (const auto& row : rep.rows) {
        if (row.n != opt.tail_at) continue;
        rep.tail_checked = true;
        for (int l = 0; l <= 10; ++l) rep.tail_max = std::max(rep.tail_max, row.cols.at("tail_ratio" + std::to_string(l)));
        rep.tail_pass = rep.tail_max <= opt.tail_limit;
    }
    rep.conjectured["survival_constant"] = 4.0 / ((m - 1.0) * (m - 1.0));
    rep.conjectured["mean_constant"] = m / (m - 1.0) * 4.0 / ((m - 1.0) * (m - 1.0));
    return rep;
}

} // namespace drlab

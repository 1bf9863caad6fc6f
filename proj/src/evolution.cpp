#include "drlab/evolution.hpp"

#include <cmath>
#include <limits>

namespace drlab {

namespace {

Rational pow_q(const Rational& b, long e) { return pow_int(b, static_cast<unsigned>(e)); }

} // namespace

void SystemSpec::validate() const {
    if (m < 2) throw ConfigError("m must be an integer >= 2");
    if (initial.empty()) throw ConfigError("initial law has no atoms");
    for (const auto& [x, p] : initial) {
        if (x < 0) throw ConfigError("initial law has a negative support point");
        if (sgn(p) < 0) throw ConfigError("initial law has a negative probability at " + std::to_string(x));
    }
    if (!(eps >= 0.0)) throw ConfigError("eps must be >= 0");
    if (max_support < 1) throw ConfigError("max_support must be positive");
    const Rational total = total_mass();
    if (mode == Mode::Float) {
        if (std::fabs(nearest_double(total) - 1.0) > 1e-12)
            throw ConfigError("initial probabilities sum to " + format_number(nearest_double(total)) + ", not 1");
    } else if (total != 1) {
        throw ConfigError("initial probabilities sum to " + total.get_str() + ", not exactly 1");
    }
    if (max_value() + 1 > max_support) throw ResourceError("initial support exceeds max_support");
}

Rational SystemSpec::total_mass() const {
    Rational s = 0;
    for (const auto& [x, p] : initial) s += p;
    return s;
}

long SystemSpec::max_value() const { return initial.empty() ? 0 : initial.rbegin()->first; }

Rational SystemSpec::prob(long x) const {
    auto it = initial.find(x);
    return it == initial.end() ? Rational(0) : it->second;
}

SystemSpec make_spec(long m, std::map<long, Rational> initial, Mode mode, std::string label) {
    SystemSpec s;
    s.m = m;
    for (auto it = initial.begin(); it != initial.end();) {
        if (sgn(it->second) == 0) it = initial.erase(it);
        else ++it;
    }
    s.initial = std::move(initial);
    s.mode = mode;
    s.eps = mode == Mode::Float ? 1e-14 : 0.0;
    s.label = std::move(label);
    return s;
}

std::string phase_name(Phase p) {
    switch (p) {
    case Phase::Subcritical: return "subcritical";
    case Phase::Critical: return "critical";
    case Phase::Supercritical: return "supercritical";
    }
    return "?";
}

Rational delta0_exact(const std::map<long, Rational>& law, long m) {
    Rational g = 0, g1 = 0;
    for (const auto& [x, p] : law) {
        const Rational w = p * pow_q(Rational(m), x);
        g += w;
        g1 += Rational(x) * w;
    }
    return Rational(m - 1) * g1 - g;
}

PhaseReport classify_phase(const SystemSpec& spec) {
    PhaseReport r;
    r.mode = mode_name(spec.mode);
    if (spec.mode == Mode::Float) {
        double g = 0, g1 = 0;
        for (const auto& [x, p] : spec.initial) {
            const double w = nearest_double(p) * std::pow(static_cast<double>(spec.m), static_cast<double>(x));
            g += w;
            g1 += static_cast<double>(x) * w;
        }
        const double d = static_cast<double>(spec.m - 1) * g1 - g;
        r.tolerance = 1e-12 * g;
        r.delta0_value = d;
        r.delta0 = format_number(d);
        r.phase = d > r.tolerance ? Phase::Supercritical : (d < -r.tolerance ? Phase::Subcritical : Phase::Critical);
    } else {
        const Rational d = delta0_exact(spec.initial, spec.m);
        r.delta0_value = nearest_double(d);
        r.delta0 = d.get_str();
        r.phase = sgn(d) > 0 ? Phase::Supercritical : (sgn(d) < 0 ? Phase::Subcritical : Phase::Critical);
    }
    return r;
}

Rational default_weight_base(const SystemSpec& spec) {
    if (delta0_exact(spec.initial, spec.m) > 0) return Rational(1);
    return Rational(spec.m);
}

TailFunctionals tail_functionals(const std::map<long, Rational>& law, long m, long M, double theta, long n) {
    if (M < 0) throw DomainError("tail_functionals: M must be >= 0");
    if (!(theta > 0)) throw DomainError("tail_functionals: theta must be positive");
    if (n < 3) throw DomainError("tail_functionals: n must be >= 3");
    auto tail_from = [&](long lo) {
        Rational s = 0;
        for (const auto& [x, p] : law)
            if (x >= lo) s += Rational(x) * Rational(x) * Rational(x) * pow_q(Rational(m), x) * p;
        return s;
    };
    TailFunctionals out;
    out.tail_moment = tail_from(M + 1);
    out.zeta = sgn(out.tail_moment) == 0 ? std::numeric_limits<double>::infinity()
                                         : -std::log(nearest_double(out.tail_moment));
    const double ln = std::log(static_cast<double>(n));
    const double threshold = theta / (ln * ln);
    const Rational thr = rational_from_double(threshold);
    long i = 0;
    while (tail_from(i + 1) > thr) ++i;
    out.k_n = i;
    out.k_threshold_value = tail_from(i + 1);
    return out;
}

std::map<long, Rational> perturb_bernoulli(const std::map<long, Rational>& law, const Rational& eta) {
    if (sgn(eta) < 0 || eta > 1) throw DomainError("perturb_bernoulli: eta must lie in [0, 1]");
    std::map<long, Rational> out;
    for (const auto& [x, p] : law) {
        if (eta != 1) out[x] += p * (1 - eta);
        if (sgn(eta) != 0) out[x + 1] += p * eta;
    }
    return out;
}

std::map<long, Rational> truncate_initial(const std::map<long, Rational>& law, long cutoff) {
    if (cutoff < 0) throw DomainError("truncate_initial: cutoff must be >= 0");
    std::map<long, Rational> out;
    for (const auto& [x, p] : law) out[x <= cutoff ? x : 0] += p;
    return out;
}

std::map<long, Rational> make_critical(const std::map<long, Rational>& shape, long m) {
    if (m < 2) throw DomainError("make_critical: m must be >= 2");
    Rational a = 0, total = 0;
    for (const auto& [k, w] : shape) {
        if (k < 1) throw DomainError("make_critical: shape must live on {1, 2, ...}");
        if (sgn(w) < 0) throw DomainError("make_critical: shape weights must be non-negative");
        a += w * pow_q(Rational(m), k) * Rational((m - 1) * k - 1);
        total += w;
    }
    if (sgn(a) <= 0)
        throw DomainError("make_critical: infeasible, no critical completion with an atom at 0 (A = " +
                          a.get_str() + ")");
    const Rational beta = 1 / (a + total);
    std::map<long, Rational> out;
    const Rational p0 = 1 - beta * total;
    if (sgn(p0) != 0) out[0] = p0;
    for (const auto& [k, w] : shape)
        if (sgn(w) != 0) out[k] = beta * w;
    return out;
}

} // namespace drlab

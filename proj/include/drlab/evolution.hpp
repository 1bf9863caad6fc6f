#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drlab/errors.hpp"
#include "drlab/measures.hpp"
#include "drlab/scalar.hpp"

namespace drlab {

/// The full model: branching factor, law of X_0 (held exactly), arithmetic
/// mode, truncation tolerance and support cap.
struct SystemSpec {
    long m = 2;
    std::map<long, Rational> initial;
    Mode mode = Mode::Rational;
    double eps = 0.0;
    long max_support = 65536;
    std::string label;

    void validate() const;
    Rational total_mass() const;
    long max_value() const;
    Rational prob(long x) const;
};

SystemSpec make_spec(long m, std::map<long, Rational> initial, Mode mode, std::string label = "");

enum class Phase { Subcritical, Critical, Supercritical };
std::string phase_name(Phase p);

struct PhaseReport {
    std::string delta0;     // formatted in the spec's mode
    double delta0_value = 0.0;
    Phase phase = Phase::Critical;
    double tolerance = 0.0; // 0 in exact modes
    std::string mode;
};

/// Sign of (m-1)E[X m^X] - E[m^X]; exact unless the spec is in float mode.
PhaseReport classify_phase(const SystemSpec& spec);
Rational delta0_exact(const std::map<long, Rational>& law, long m);

template <class T>
Pmf<T> make_initial(const SystemSpec& spec, const T& base) {
    std::map<long, T> atoms;
    for (const auto& [x, p] : spec.initial) atoms[x] = NumTraits<T>::from_rational(p);
    auto pmf = Pmf<T>::from_atoms(atoms, base);
    if constexpr (NumTraits<T>::exact) pmf.track_moments();
    return pmf;
}

/// Default tilt base for a spec: m, except for supercritical laws whose
/// m^x-weighted mass grows too fast for a double.
Rational default_weight_base(const SystemSpec& spec);

template <class T>
struct GenerationStats {
    long n = 0;
    T survival{};   // P(X_n >= 1)
    T mean{};       // E X_n
    T g_at_m{};     // G_n(m)
    T g_at_0{};     // G_n(0) = P(X_n = 0)
    std::array<T, 4> wm{};     // E[X_n^k m^X_n], k = 0..3
    std::array<T, 5> gderiv{}; // G_n^{(k)}(m), k = 0..4
    T running_product{};       // prod_{i<n} G_i(m)^{m-1}
    double log_running_product = 0.0;
    T deficit{};               // certified gap in E[b^X] between the true and computed laws
    double removed_weighted = 0.0;   // tilted mass collapsed at this generation
    double removed_weighted_x = 0.0; // its first moment
    std::size_t support = 0;
    std::array<double, 11> tail_ratio{}; // P(X_n >= l+1) m^l / P(X_n >= 1)
    std::vector<std::array<double, 4>> lambda_moments; // E(X^k m^X 1{X >= lambda n}) per lambda
};

template <class T>
struct GenerationTrace {
    long m = 2;
    Mode mode = NumTraits<T>::mode;
    T base{};
    double eps = 0.0;
    std::vector<double> lambdas;
    std::vector<GenerationStats<T>> gens;
    std::vector<Pmf<T>> pmfs; // pmfs[n] for n <= keep_until
    long n_max() const { return static_cast<long>(gens.size()) - 1; }
};

struct EvolveOptions {
    long keep_pmfs_until = -1;            // keep pmf_n for n <= this
    long horizon = -1;                    // exact modes: keep x <= horizon - n at generation n
    std::optional<Rational> weight_base;  // tilt base; default_weight_base(spec) if unset
    std::vector<double> lambdas{0.25, 0.5, 1.0};
    // Rational mode: stop with ResourceError once a denominator exceeds this many bits.
    long max_rational_bits = 1L << 18;
    double max_rational_work = 3e9; // support^2 * bits of the next step, roughly 15 s
};

template <class T>
GenerationStats<T> generation_stats(const Pmf<T>& p, long m, long n, const std::vector<double>& lambdas);

/// One generation: (sum of m copies - 1)^+, then truncation.
///
/// Exact modes never drop mass: an optional window keeps x < window_len while
/// full moments carry the rest. Float mode moves the smallest upper tail whose
/// tilted mass is at most spec.eps onto the atom at 0 and rebuilds that atom as
/// the complement of the others, which keeps total mass at 1 despite rounding.
template <class T>
Pmf<T> evolve_step(const SystemSpec& spec, const Pmf<T>& p, long window_len = -1,
                   CollapseResult* collapse = nullptr, long generation = -1);

template <class T>
GenerationTrace<T> evolve(const SystemSpec& spec, long n_max, const EvolveOptions& opt = {});

template <class T>
struct MuValue {
    T value{};
    std::optional<T> alternate;   // tail form, meaningful at criticality
    std::optional<T> discrepancy; // value - alternate
};

/// m^-k E[(1 - (m-1)X) m^X 1{X <= k}].
template <class T>
MuValue<T> mu(const Pmf<T>& p, long m, long k, bool critical = false);

struct TailFunctionals {
    Rational tail_moment;       // E(Y^3 m^Y 1{Y > M})
    double zeta = 0.0;          // -log of the above, +inf when it vanishes
    long k_n = 0;
    Rational k_threshold_value; // E(Y^3 m^Y 1{Y >= k_n + 1})
};

TailFunctionals tail_functionals(const std::map<long, Rational>& law, long m, long M, double theta, long n);

/// Law of Y + U with U ~ Bernoulli(eta) independent of Y.
std::map<long, Rational> perturb_bernoulli(const std::map<long, Rational>& law, const Rational& eta);
/// Law of Y 1{Y <= cutoff}.
std::map<long, Rational> truncate_initial(const std::map<long, Rational>& law, long cutoff);
/// Critical law proportional to shape on {1..K} with the remaining mass at 0.
std::map<long, Rational> make_critical(const std::map<long, Rational>& shape, long m);

/// Sign-preservation helper: delta of a law given exactly through its moments.
template <class T>
T delta_of(const Pmf<T>& p, long m) {
    const T mm = from_int<T>(m);
    const T g = exp_weighted_moment(p, mm, 0).value;
    const T g1 = exp_weighted_moment(p, mm, 1).value;
    return from_int<T>(m - 1) * g1 - g;
}

// ---------------------------------------------------------------------------

template <class T>
GenerationStats<T> generation_stats(const Pmf<T>& p, long m, long n, const std::vector<double>& lambdas) {
    GenerationStats<T> st;
    st.n = n;
    st.support = p.size();
    const T zero = from_int<T>(0);
    const T mm = from_int<T>(m);
    st.g_at_0 = p.value(0);
    if (p.full()) {
        st.survival = p.full()->plain[0] - st.g_at_0;
        st.mean = p.full()->plain[1];
    } else {
        st.survival = zero;
        st.mean = zero;
        T pw = from_int<T>(1);
        for (std::size_t x = 0; x < p.size(); ++x) {
            const T v = p.tilted()[x] * pw;
            if (x >= 1) {
                st.survival += v;
                st.mean += from_int<T>(static_cast<long>(x)) * v;
            }
            pw *= p.inv_base();
        }
    }
    for (int k = 0; k < 4; ++k) st.wm[k] = exp_weighted_moment(p, mm, k).value;
    for (int k = 0; k < 5; ++k) st.gderiv[k] = factorial_derivative(p, mm, k);
    st.g_at_m = st.wm[0];
    st.deficit = p.raw_deficit();
    if constexpr (std::is_same_v<T, double>) {
        // Tail shape and lambda-truncated moments need the pointwise law.
        const auto vals = p.values();
        std::vector<double> tail(vals.size() + 1, 0.0);
        for (std::size_t x = vals.size(); x-- > 0;) tail[x] = tail[x + 1] + vals[x];
        const double surv = tail.size() > 1 ? tail[1] : 0.0;
        for (int l = 0; l <= 10; ++l) {
            const std::size_t idx = static_cast<std::size_t>(l + 1);
            const double t = idx < tail.size() ? tail[idx] : 0.0;
            st.tail_ratio[l] = surv > 0 ? t * std::pow(static_cast<double>(m), l) / surv : 0.0;
        }
        const double ratio = static_cast<double>(m) / p.base();
        for (double lam : lambdas) {
            std::array<double, 4> acc{0, 0, 0, 0};
            const double start = std::ceil(lam * static_cast<double>(n));
            double pw = 1.0;
            for (std::size_t x = 0; x < p.size(); ++x) {
                if (static_cast<double>(x) >= start && x >= 1) {
                    double xk = 1.0;
                    for (int k = 0; k < 4; ++k) {
                        acc[k] += xk * pw * p.tilted()[x];
                        xk *= static_cast<double>(x);
                    }
                }
                pw *= ratio;
            }
            st.lambda_moments.push_back(acc);
        }
    } else {
        st.tail_ratio.fill(std::numeric_limits<double>::quiet_NaN());
        (void)lambdas;
    }
    return st;
}

template <class T>
Pmf<T> evolve_step(const SystemSpec& spec, const Pmf<T>& p, long window_len, CollapseResult* collapse,
                   long generation) {
    Pmf<T> next;
    if constexpr (NumTraits<T>::exact) {
        const long conv_len = window_len < 0 ? -1 : window_len + 1;
        next = shift_floor(m_fold_sum(p, spec.m, conv_len));
        if (window_len >= 0) next = truncate_support(next, static_cast<std::size_t>(window_len));
        (void)collapse;
    } else {
        next = shift_floor(m_fold_sum(p, spec.m));
        const double mass = plain_total(p); // conserved by the recursion
        CollapseResult c = collapse_tail(next, spec.eps);
        next.add_deficit(c.removed_weighted - c.removed_mass);
        if (next.empty()) next = Pmf<T>::point(0, mass, next.base());
        double rest = 0.0;
        double pw = 1.0;
        for (std::size_t x = 1; x < next.size(); ++x) {
            pw *= next.inv_base();
            rest += next.tilted()[x] * pw;
        }
        next.tilted_mut()[0] = mass - rest;
        if (collapse) *collapse = c;
        (void)window_len;
    }
    if (static_cast<long>(next.size()) > spec.max_support) {
        throw ResourceError("support size " + std::to_string(next.size()) + " exceeds max_support " +
                            std::to_string(spec.max_support) + " at generation " +
                            std::to_string(generation >= 0 ? generation : -1));
    }
    return next;
}

template <class T>
GenerationTrace<T> evolve(const SystemSpec& spec, long n_max, const EvolveOptions& opt) {
    if (n_max < 0) throw DomainError("evolve: n_max must be >= 0");
    spec.validate();
    GenerationTrace<T> trace;
    trace.m = spec.m;
    trace.eps = spec.eps;
    trace.lambdas = opt.lambdas;
    const Rational base_q = opt.weight_base ? *opt.weight_base : default_weight_base(spec);
    trace.base = NumTraits<T>::from_rational(base_q);
    Pmf<T> p = make_initial<T>(spec, trace.base);
    // Values at x <= horizon - n of generation n depend only on values at
    // x <= horizon - n + 1 of generation n - 1, so the windows stay exact.
    if (opt.horizon >= 0 && opt.horizon < n_max + 1)
        throw DomainError("evolve: horizon must be at least n_max + 1");
    auto window = [&](long n) -> long { return opt.horizon < 0 ? -1 : opt.horizon - n + 1; };
    if (opt.horizon >= 0) p = truncate_support(p, static_cast<std::size_t>(window(0)));
    T running = from_int<T>(1);
    double log_running = 0.0;
    CollapseResult last;
    for (long n = 0;; ++n) {
        auto st = generation_stats(p, spec.m, n, opt.lambdas);
        st.running_product = running;
        st.log_running_product = log_running;
        st.removed_weighted = last.removed_weighted;
        st.removed_weighted_x = last.removed_weighted_x;
        trace.gens.push_back(st);
        if (n <= opt.keep_pmfs_until) trace.pmfs.push_back(p);
        if (n == n_max) break;
        running *= pow_int(st.g_at_m, static_cast<unsigned>(spec.m - 1));
        if constexpr (std::is_same_v<T, double>) {
            log_running += static_cast<double>(spec.m - 1) * std::log(st.g_at_m);
        } else if constexpr (NumTraits<T>::ordered) {
            log_running = std::log(to_double(running));
        } else {
            log_running = std::numeric_limits<double>::quiet_NaN();
        }
        last = CollapseResult{};
        p = evolve_step(spec, p, window(n + 1), &last, n + 1);
        if constexpr (std::is_same_v<T, Rational>) {
            std::size_t bits = 0;
            for (const auto& v : p.tilted()) bits = std::max(bits, mpz_sizeinbase(v.get_den_mpz_t(), 2));
            if (opt.max_rational_bits > 0 && bits > static_cast<std::size_t>(opt.max_rational_bits))
                throw ResourceError("rational denominators reached " + std::to_string(bits) + " bits at generation " +
                                    std::to_string(n + 1) + " (limit " + std::to_string(opt.max_rational_bits) +
                                    "); use modular mode for deep exact checks");
            // the next convolution costs about support^2 multiplications of bits-sized numbers
            const double work = static_cast<double>(p.size()) * static_cast<double>(p.size()) *
                                static_cast<double>(bits) * static_cast<double>(spec.m - 1);
            if (n + 1 < n_max && opt.max_rational_work > 0 && work > opt.max_rational_work)
                throw ResourceError("rational evolution past generation " + std::to_string(n + 1) + " needs ~" +
                                    std::to_string(static_cast<long long>(work)) +
                                    " bit-products per step; use a horizon or modular mode for deep exact checks");
        }
    }
    return trace;
}

template <class T>
MuValue<T> mu(const Pmf<T>& p, long m, long k, bool critical) {
    if (k < 0) throw DomainError("mu: k must be >= 0");
    const T mm = from_int<T>(m);
    const T m1 = from_int<T>(m - 1);
    const T one = from_int<T>(1);
    const T ratio = mm * p.inv_base();
    // head = sum_{x <= k} (1 - (m-1)x) m^x p(x)
    T head = from_int<T>(0);
    T pw = one;
    const std::size_t upto = std::min<std::size_t>(p.size(), static_cast<std::size_t>(k) + 1);
    for (std::size_t x = 0; x < upto; ++x) {
        head += (one - m1 * from_int<T>(static_cast<long>(x))) * pw * p.tilted()[x];
        pw *= ratio;
    }
    const T scale = one / pow_int(mm, static_cast<unsigned>(k));
    MuValue<T> out;
    out.value = head * scale;
    if (critical) {
        // E[((m-1)X - 1) m^X 1{X >= k+1}] = (m-1)E[X m^X] - E[m^X] + head
        const T g = exp_weighted_moment(p, mm, 0).value;
        const T g1 = exp_weighted_moment(p, mm, 1).value;
        out.alternate = (m1 * g1 - g + head) * scale;
        out.discrepancy = out.value - *out.alternate;
    }
    return out;
}

} // namespace drlab

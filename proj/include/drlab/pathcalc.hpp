#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drlab/errors.hpp"
#include "drlab/evolution.hpp"
#include "drlab/measures.hpp"

namespace drlab {

struct ResidualEntry {
    long index = 0;
    std::string lhs, rhs, abs_err;
};

struct ResidualReport {
    std::string identity;
    long n = 0;
    Mode mode = Mode::Rational;
    std::vector<ResidualEntry> per_index;
    std::string max_abs_err = "0";
    std::string certified_bound = "0";
    double max_abs_err_value = 0.0; // float mode only
    bool pass = true;
    std::vector<std::string> notes;
};

/// Evolved marginals shared by every open-path and pivotal channel.
template <class T>
struct PathContext {
    SystemSpec spec;
    long n = 0;
    long horizon = -1; // exact modes: window as in evolve
    GenerationTrace<T> trace;
    std::vector<Pmf<T>> q; // q_j = law of the sum of m-1 copies, j < n

    long window(long j) const { return horizon < 0 ? -1 : horizon - j + 1; }
};

/// Evolves spec to generation n. In exact modes `reach` is the largest value
/// index that must be exact at generation n; everything beyond the window is
/// carried by exact moments.
template <class T>
PathContext<T> make_context(const SystemSpec& spec, long n, long reach = -1,
                            std::optional<Rational> weight_base = std::nullopt) {
    PathContext<T> ctx;
    ctx.spec = spec;
    ctx.n = n;
    EvolveOptions opt;
    opt.keep_pmfs_until = n;
    opt.weight_base = weight_base;
    opt.lambdas.clear();
    if constexpr (NumTraits<T>::exact) {
        if (reach >= 0) {
            ctx.horizon = n + reach + 1;
            opt.horizon = ctx.horizon;
        }
    }
    ctx.trace = evolve<T>(spec, n, opt);
    for (long j = 0; j < n; ++j) {
        const long w = ctx.window(j);
        ctx.q.push_back(m_fold_sum(ctx.trace.pmfs[j], spec.m - 1, w));
    }
    return ctx;
}

/// Per-generation measures of one channel (an open-path or a pivotal one).
template <class T>
struct ChannelMeasure {
    long index = 0;
    std::vector<WeightedMeasure<T>> gens;
    const WeightedMeasure<T>& at(long n) const { return gens.at(static_cast<std::size_t>(n)); }
};

template <class T>
using OpenPathMeasure = ChannelMeasure<T>;
template <class T>
using PivotalMeasure = ChannelMeasure<T>;

/// Runs the shared operator w -> m (w * q_j)(. + 1) from an initial measure.
template <class T>
ChannelMeasure<T> run_channel(const PathContext<T>& ctx, long index, WeightedMeasure<T> start, long n) {
    if (n > ctx.n) throw DomainError("channel requested beyond the evolved generation");
    ChannelMeasure<T> out;
    out.index = index;
    if constexpr (NumTraits<T>::exact) start.track_moments();
    if (ctx.window(0) >= 0) start = truncate_support(start, static_cast<std::size_t>(ctx.window(0)));
    out.gens.push_back(std::move(start));
    for (long j = 0; j < n; ++j) {
        auto next = channel_step(out.gens.back(), ctx.q[j], ctx.spec.m, ctx.window(j + 1));
        if constexpr (!NumTraits<T>::exact) {
            next = truncate_weighted(next, next.base(), ctx.spec.eps);
        }
        out.gens.push_back(std::move(next));
    }
    return out;
}

/// w_n(x) = E[N_n^(i) 1{X_n = x}] for n = 0..n.
template <class T>
OpenPathMeasure<T> openpath_measure(const PathContext<T>& ctx, long i, long n) {
    if (i < 0) throw DomainError("openpath_measure: i must be >= 0");
    const T p = NumTraits<T>::from_rational(ctx.spec.prob(i));
    return run_channel(ctx, i, WeightedMeasure<T>::point(i, p, ctx.trace.base), n);
}

/// sigma_n(l) = E[S_n^(k,l)] for n = 0..n.
template <class T>
PivotalMeasure<T> pivotal_expectations(const PathContext<T>& ctx, long k, long n) {
    if (k < 0) throw DomainError("pivotal_expectations: k must be >= 0");
    return run_channel(ctx, k, WeightedMeasure<T>::point(k, from_int<T>(1), ctx.trace.base), n);
}

namespace detail {

template <class T>
void add_entry(ResidualReport& r, long index, const T& lhs, const T& rhs, T& worst, bool& any) {
    ResidualEntry e;
    e.index = index;
    e.lhs = format_number(lhs);
    e.rhs = format_number(rhs);
    const T diff = lhs - rhs;
    if constexpr (NumTraits<T>::ordered) {
        const T a = NumTraits<T>::magnitude(diff);
        e.abs_err = format_number(a);
        if (!any || a > worst) worst = a;
    } else {
        e.abs_err = format_number(diff);
        if (!NumTraits<T>::is_zero(diff) && (!any || NumTraits<T>::is_zero(worst))) worst = diff;
    }
    any = true;
    r.per_index.push_back(std::move(e));
}

template <class T>
void finish_report(ResidualReport& r, const T& worst, double bound) {
    r.mode = NumTraits<T>::mode;
    r.max_abs_err = format_number(worst);
    if constexpr (NumTraits<T>::exact) {
        r.certified_bound = "0";
        r.pass = NumTraits<T>::is_zero(worst);
        if constexpr (NumTraits<T>::ordered) r.max_abs_err_value = to_double(worst);
    } else {
        r.max_abs_err_value = worst;
        r.certified_bound = format_number(bound);
        r.pass = worst <= bound;
    }
}

} // namespace detail

/// sum_k mu_0(k) E S_n^(k,l) = mu_n(l) for l <= ell_max.
template <class T>
ResidualReport check_pivotal_identity(const PathContext<T>& ctx, long n, long ell_max,
                                      std::vector<PivotalMeasure<T>>* channels_out = nullptr) {
    if (n > ctx.n) throw DomainError("check_pivotal_identity: n beyond the evolved generation");
    const long m = ctx.spec.m;
    const auto& p0 = ctx.trace.pmfs.at(0);
    const auto& pn = ctx.trace.pmfs.at(static_cast<std::size_t>(n));
    std::vector<T> lhs(static_cast<std::size_t>(ell_max + 1), from_int<T>(0));
    double bound = 0.0;
    // sigma_n^(k)(l) vanishes for k > n + l.
    for (long k = 0; k <= n + ell_max; ++k) {
        const T mu0 = mu(p0, m, k).value;
        if (NumTraits<T>::is_zero(mu0)) continue;
        auto ch = pivotal_expectations(ctx, k, n);
        const auto& s = ch.at(n);
        for (long l = 0; l <= ell_max; ++l) lhs[l] += mu0 * s.value(static_cast<std::size_t>(l));
        if constexpr (!NumTraits<T>::exact) bound += std::fabs(mu0) * s.raw_deficit();
        if (channels_out) channels_out->push_back(std::move(ch));
    }
    ResidualReport r;
    r.identity = "pivotal";
    r.n = n;
    T worst = from_int<T>(0);
    bool any = false;
    for (long l = 0; l <= ell_max; ++l) {
        const T rhs = mu(pn, m, l).value;
        detail::add_entry(r, l, lhs[l], rhs, worst, any);
    }
    if constexpr (!NumTraits<T>::exact) {
        bound += pn.raw_deficit() + 1e-12;
    }
    detail::finish_report(r, worst, bound);
    return r;
}

struct OpenPathReport {
    std::optional<ResidualReport> weighted; // E[m^X (1+X) N^(i)] identity, critical only
    ResidualReport pointwise;               // P(X_0 = k) sigma^(k) = w^(k)
    std::vector<std::string> notices;
    bool pass() const { return pointwise.pass && (!weighted || weighted->pass); }
};

/// (a) sum_x m^x (1+x) w_n(x) = (i+1) m^i P(X_0 = i) prod_{j<n} G_j(m)^{m-1}
///     at every generation up to n (critical specs only);
/// (b) P(X_0 = k) sigma_n^(k)(l) = w_n^(k)(l) for every k in the initial
///     support and l <= ell_max.
template <class T>
OpenPathReport check_openpath_identities(const PathContext<T>& ctx, const std::vector<long>& is, long n,
                                         long ell_max) {
    if (n > ctx.n) throw DomainError("check_openpath_identities: n beyond the evolved generation");
    const long m = ctx.spec.m;
    const T mm = from_int<T>(m);
    OpenPathReport out;
    const bool critical = classify_phase(ctx.spec).phase == Phase::Critical;
    if (!critical) {
        out.notices.push_back("weighted open-path identity skipped: spec is not critical");
    } else {
        ResidualReport r;
        r.identity = "openpath-weighted";
        r.n = n;
        T worst = from_int<T>(0);
        bool any = false;
        double bound = 0.0;
        for (long i : is) {
            const auto w = openpath_measure(ctx, i, n);
            const T coef = from_int<T>(i + 1) * pow_int(mm, static_cast<unsigned>(i)) *
                           NumTraits<T>::from_rational(ctx.spec.prob(i));
            for (long j = 0; j <= n; ++j) {
                const auto& wj = w.at(j);
                const T lhs = exp_weighted_moment(wj, mm, 0).value + exp_weighted_moment(wj, mm, 1).value;
                const T rhs = coef * ctx.trace.gens[j].running_product;
                detail::add_entry(r, i * (n + 1) + j, lhs, rhs, worst, any);
                if constexpr (!NumTraits<T>::exact) {
                    // Upper value of the product when every G_j(m) may be short by its deficit.
                    double upper = to_double(coef);
                    for (long t = 0; t < j; ++t) {
                        upper *= std::pow(ctx.trace.gens[t].g_at_m + ctx.trace.gens[t].deficit,
                                          static_cast<double>(m - 1));
                    }
                    bound = std::max(bound, (upper - rhs) + 10.0 * wj.raw_deficit() * (1.0 + wj.size()) +
                                                1e-12 * std::fabs(rhs));
                }
            }
        }
        r.notes.push_back("index encodes i * (n + 1) + generation");
        detail::finish_report(r, worst, bound);
        out.weighted = r;
    }
    ResidualReport r;
    r.identity = "openpath-pointwise";
    r.n = n;
    T worst = from_int<T>(0);
    bool any = false;
    double bound = 0.0;
    for (const auto& [k, pk] : ctx.spec.initial) {
        const auto w = openpath_measure(ctx, k, n);
        const auto s = pivotal_expectations(ctx, k, n);
        const T p = NumTraits<T>::from_rational(pk);
        for (long l = 0; l <= ell_max; ++l) {
            const T lhs = p * s.at(n).value(static_cast<std::size_t>(l));
            const T rhs = w.at(n).value(static_cast<std::size_t>(l));
            detail::add_entry(r, k * (ell_max + 1) + l, lhs, rhs, worst, any);
        }
        if constexpr (!NumTraits<T>::exact) bound += w.at(n).raw_deficit() + to_double(p) * s.at(n).raw_deficit();
    }
    r.notes.push_back("index encodes k * (ell_max + 1) + l");
    detail::finish_report(r, worst, bound + 1e-15);
    out.pointwise = r;
    return out;
}

struct InequalityRow {
    std::string check; // "tail", "weighted", "pointwise"
    long n = 0, i = 0, k = 0, ell = 0;
    double lhs = 0, rhs = 0, eps = 0;
    bool holds = true;
};

struct InequalityReport {
    std::vector<InequalityRow> rows;
    long violations = 0;
    long checked = 0;
};

struct InequalityOptions {
    std::vector<long> ns;   // generations at which to evaluate
    long ell_max = 12;
    long i_max = 3;
    long k_max = 3;
    bool tail = true;       // sum_{x >= l} w^(0)(x) <= (m/(m-1)) m^-l
    bool lower = true;      // weighted and pointwise lower bounds for i >= k
};

/// Counting inequalities, evaluated exactly (rational) or with a tolerance of
/// ten times the accumulated deficit (float). Refused above criticality.
template <class T>
InequalityReport check_counting_inequalities(const PathContext<T>& ctx, const InequalityOptions& opt) {
    static_assert(NumTraits<T>::ordered, "inequalities need an ordered scalar");
    if (classify_phase(ctx.spec).phase == Phase::Supercritical)
        throw DomainError("counting inequalities hold only at or below criticality; spec is supercritical");
    const long m = ctx.spec.m;
    const T mm = from_int<T>(m);
    long n_top = 0;
    for (long n : opt.ns) n_top = std::max(n_top, n);
    if (n_top > ctx.n) throw DomainError("check_counting_inequalities: n beyond the evolved generation");
    InequalityReport rep;
    auto record = [&](InequalityRow row) {
        ++rep.checked;
        if (!row.holds) ++rep.violations;
        rep.rows.push_back(row);
    };
    auto tol = [&](const WeightedMeasure<T>& w) -> double {
        if constexpr (NumTraits<T>::exact) return 0.0;
        else return 10.0 * w.raw_deficit();
    };
    // i == k rows are equalities; float rounding alone can flip them by an ulp
    auto rounding = [](const T& v) -> double {
        if constexpr (NumTraits<T>::exact) return 0.0;
        else return 1e-12 * std::fabs(v);
    };
    if (opt.tail) {
        const auto w0 = openpath_measure(ctx, 0, n_top);
        for (long n : opt.ns) {
            const auto vals = w0.at(n).values();
            T tail = from_int<T>(0);
            std::vector<T> tails(vals.size() + 1, from_int<T>(0));
            for (std::size_t x = vals.size(); x-- > 0;) tails[x] = tails[x + 1] + vals[x];
            for (long l = 0; l <= opt.ell_max; ++l) {
                tail = static_cast<std::size_t>(l) < tails.size() ? tails[l] : from_int<T>(0);
                const T rhs = mm / from_int<T>(m - 1) / pow_int(mm, static_cast<unsigned>(l));
                const double eps = tol(w0.at(n)) + rounding(rhs);
                InequalityRow row{"tail", n, 0, 0, l, to_double(tail), to_double(rhs), eps, false};
                if constexpr (NumTraits<T>::exact) row.holds = tail <= rhs;
                else row.holds = tail <= rhs + eps;
                record(row);
            }
        }
    }
    if (opt.lower) {
        std::vector<OpenPathMeasure<T>> ws;
        std::vector<PivotalMeasure<T>> ss;
        for (long i = 0; i <= opt.i_max; ++i) ws.push_back(openpath_measure(ctx, i, n_top));
        for (long k = 0; k <= opt.k_max; ++k) ss.push_back(pivotal_expectations(ctx, k, n_top));
        auto weighted_sum = [&](const WeightedMeasure<T>& w) -> T {
            return exp_weighted_moment(w, mm, 0).value + exp_weighted_moment(w, mm, 1).value;
        };
        for (long n : opt.ns) {
            for (long i = 0; i <= opt.i_max; ++i) {
                const T pi = NumTraits<T>::from_rational(ctx.spec.prob(i));
                const auto& wi = ws[i].at(n);
                const T lhs = weighted_sum(wi);
                for (long k = 0; k <= std::min(i, opt.k_max); ++k) {
                    const auto& sk = ss[k].at(n);
                    const T rhs = pow_int(mm, static_cast<unsigned>(i - k)) * pi * weighted_sum(sk);
                    const double span = 1.0 + static_cast<double>(std::max(wi.size(), sk.size()));
                    const double eps =
                        (tol(wi) + to_double(pi) * std::pow(static_cast<double>(m), i - k) * tol(sk)) * span + rounding(rhs);
                    InequalityRow row{"weighted", n, i, k, -1, to_double(lhs), to_double(rhs), eps, false};
                    if constexpr (NumTraits<T>::exact) row.holds = lhs >= rhs;
                    else row.holds = lhs >= rhs - eps;
                    record(row);
                    for (long l = 0; l <= opt.ell_max; ++l) {
                        const T a = wi.value(static_cast<std::size_t>(i - k + l));
                        const T b = pi * sk.value(static_cast<std::size_t>(l));
                        const double e2 = tol(wi) + to_double(pi) * tol(sk) + rounding(b);
                        InequalityRow r2{"pointwise", n, i, k, l, to_double(a), to_double(b), e2, false};
                        if constexpr (NumTraits<T>::exact) r2.holds = a >= b;
                        else r2.holds = a >= b - e2;
                        record(r2);
                    }
                }
            }
        }
    }
    return rep;
}

/// Joint law of (X_n, N_n^(i)) on a capped grid.
template <class T>
struct JointPmf {
    long i = 0, n = 0, m = 2;
    long x_max = 64, c_max = 4096;
    std::map<std::pair<long, long>, T> atoms;
    T overflow_x{}, overflow_c{}; // mass that crossed each cap, at the step it crossed
    T missing{};                  // 1 - retained total, including descendants of overflowed mass
    bool partial = false;

    std::vector<T> marginal_x() const {
        std::vector<T> out;
        for (const auto& [key, p] : atoms) {
            if (static_cast<std::size_t>(key.first) >= out.size()) out.resize(key.first + 1, from_int<T>(0));
            out[key.first] += p;
        }
        return out;
    }

    /// E[m^X X^a N^b] over the retained grid.
    T moment(int a, int b) const {
        T s = from_int<T>(0);
        for (const auto& [key, p] : atoms) {
            const T mx = pow_int(from_int<T>(m), static_cast<unsigned>(key.first));
            s += mx * pow_int(from_int<T>(key.first), static_cast<unsigned>(a)) *
                 pow_int(from_int<T>(key.second), static_cast<unsigned>(b)) * p;
        }
        return s;
    }

    T mean_count() const {
        T s = from_int<T>(0);
        for (const auto& [key, p] : atoms) s += from_int<T>(key.second) * p;
        return s;
    }
};

struct JointCaps {
    long x_max = 64;
    long c_max = 4096;
    double overflow_bound = 1e-9;
};

template <class T>
JointPmf<T> joint_pmf(const SystemSpec& spec, long i, long n, const JointCaps& caps = {}) {
    static_assert(NumTraits<T>::ordered, "joint_pmf needs an ordered scalar");
    if (n < 0 || i < 0) throw DomainError("joint_pmf: n and i must be >= 0");
    spec.validate();
    using Key = std::pair<long, long>;
    JointPmf<T> jp;
    jp.i = i;
    jp.n = n;
    jp.m = spec.m;
    jp.x_max = caps.x_max;
    jp.c_max = caps.c_max;
    jp.overflow_x = from_int<T>(0);
    jp.overflow_c = from_int<T>(0);
    auto place = [&](std::map<Key, T>& dst, long x, long c, const T& p) {
        if (x > caps.x_max) jp.overflow_x += p;
        else if (c > caps.c_max) jp.overflow_c += p;
        else dst[{x, c}] += p;
    };
    std::map<Key, T> cur;
    for (const auto& [x, p] : spec.initial) place(cur, x, x == i ? 1 : 0, NumTraits<T>::from_rational(p));
    for (long g = 0; g < n; ++g) {
        // Law of (sum X, sum N) over m independent parents.
        std::map<Key, T> sum = cur;
        for (long r = 1; r < spec.m; ++r) {
            std::map<Key, T> nxt;
            for (const auto& [a, pa] : sum)
                for (const auto& [b, pb] : cur) nxt[{a.first + b.first, a.second + b.second}] += pa * pb;
            sum = std::move(nxt);
        }
        std::map<Key, T> out;
        for (const auto& [key, p] : sum) {
            if (key.first >= 1) place(out, key.first - 1, key.second, p);
            else place(out, 0, 0, p);
        }
        cur = std::move(out);
    }
    jp.atoms = std::move(cur);
    T kept = from_int<T>(0);
    for (const auto& [key, p] : jp.atoms) kept += p;
    jp.missing = from_int<T>(1) - kept;
    jp.partial = to_double(jp.missing) > caps.overflow_bound;
    return jp;
}

/// Generating-function recursions across generations 0..n-1 of a trace with
/// kept pmfs, at each s in grid:
///   G_{n+1}(s) = G_n(s)^m / s + (1 - 1/s) G_n(0)^m
///   s(s-1)G'_{n+1}(s) - G_{n+1}(s) = [m(s-1)G'_n(s) - G_n(s)] G_n(s)^{m-1}
/// Index encodes 2 * (grid position * n + generation) + which.
template <class T>
ResidualReport check_mgf_identities(const GenerationTrace<T>& trace, const std::vector<T>& grid,
                                    double float_slack = 1e-10) {
    const long n = static_cast<long>(trace.pmfs.size()) - 1;
    if (n < 0) throw ConfigError("check_mgf_identities: trace has no kept pmfs");
    const long m = trace.m;
    const T one = from_int<T>(1);
    ResidualReport r;
    r.identity = "mgf";
    r.n = n;
    T worst = from_int<T>(0);
    bool any = false;
    double bound = 0.0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const T& s = grid[gi];
        for (long j = 0; j < n; ++j) {
            const auto& a = trace.pmfs[j];
            const auto& b = trace.pmfs[j + 1];
            const T ga = exp_weighted_moment(a, s, 0).value;
            const T gb = exp_weighted_moment(b, s, 0).value;
            const T da = factorial_derivative(a, s, 1);
            const T db = factorial_derivative(b, s, 1);
            const T a0m = pow_int(a.value(0), static_cast<unsigned>(m));
            const T gam1 = pow_int(ga, static_cast<unsigned>(m - 1));
            const T rhs1 = gam1 * ga / s + (one - one / s) * a0m;
            const T lhs2 = s * (s - one) * db - gb;
            const T rhs2 = (from_int<T>(m) * (s - one) * da - ga) * gam1;
            const long base_idx = 2 * (static_cast<long>(gi) * n + j);
            detail::add_entry(r, base_idx, gb, rhs1, worst, any);
            detail::add_entry(r, base_idx + 1, lhs2, rhs2, worst, any);
            if constexpr (!NumTraits<T>::exact) {
                // Collapsed tail of generation j+1, valid for s up to the tilt base.
                const auto& st = trace.gens[j + 1];
                const double ratio = std::max(1.0, s / trace.base);
                const double w = st.removed_weighted * std::pow(ratio, static_cast<double>(b.size() + 64));
                const double wx = st.removed_weighted_x * std::pow(ratio, static_cast<double>(b.size() + 64));
                bound = std::max(bound, std::fabs(s - 1.0) * wx + 2.0 * w);
            }
        }
    }
    detail::finish_report(r, worst, bound + float_slack);
    return r;
}

/// s G_{n+1}^(k)(s) + k G_{n+1}^(k-1)(s) = sum over k_1 + ... + k_m = k of
/// k!/(k_1! ... k_m!) prod G_n^(k_i)(s), for 2 <= k <= k_max, at s = m.
/// (At k = 1 the right side gains G_n(0)^m, which is included.)
template <class T>
ResidualReport check_leibniz(const GenerationTrace<T>& trace, int k_max) {
    const long n = static_cast<long>(trace.pmfs.size()) - 1;
    const long m = trace.m;
    const T s = from_int<T>(m);
    ResidualReport r;
    r.identity = "leibniz";
    r.n = n;
    T worst = from_int<T>(0);
    bool any = false;
    static const long fact[] = {1, 1, 2, 6, 24, 120, 720};
    if (k_max > 6) throw DomainError("check_leibniz: k_max above 6 is not supported");
    for (long j = 0; j < n; ++j) {
        const auto& a = trace.pmfs[j];
        const auto& b = trace.pmfs[j + 1];
        std::vector<T> da, db;
        for (int k = 0; k <= k_max; ++k) {
            da.push_back(factorial_derivative(a, s, k));
            db.push_back(factorial_derivative(b, s, k));
        }
        for (int k = 1; k <= k_max; ++k) {
            const T lhs = s * db[k] + from_int<T>(k) * db[k - 1];
            // Enumerate compositions of k into m non-negative parts.
            T rhs = from_int<T>(0);
            std::vector<int> parts(static_cast<std::size_t>(m), 0);
            std::function<void(long, int)> rec = [&](long pos, int left) {
                if (pos == m - 1) {
                    parts[pos] = left;
                    long coef = fact[k];
                    T prod = from_int<T>(1);
                    for (int p : parts) {
                        coef /= fact[p];
                        prod *= da[p];
                    }
                    rhs += from_int<T>(coef) * prod;
                    return;
                }
                for (int v = 0; v <= left; ++v) {
                    parts[pos] = v;
                    rec(pos + 1, left - v);
                }
            };
            rec(0, k);
            if (k == 1) rhs += pow_int(a.value(0), static_cast<unsigned>(m));
            detail::add_entry(r, j * (k_max + 1) + k, lhs, rhs, worst, any);
        }
    }
    detail::finish_report(r, worst, 1e-9);
    return r;
}

} // namespace drlab

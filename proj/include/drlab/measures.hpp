#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drlab/errors.hpp"
#include "drlab/scalar.hpp"

namespace drlab {

struct PmfKind {};
struct WeightKind {};

inline constexpr int kMomentOrders = 5; // x^0 .. x^4

/// Moments of the complete measure, including any part cut off by a support
/// window: weighted[k] = sum x^k b^x v(x), plain[k] = sum x^k v(x).
/// Maintained only in exact arithmetic, where they are propagated by exact
/// binomial algebra through every operation.
template <class T>
struct FullMoments {
    std::array<T, kMomentOrders> weighted{};
    std::array<T, kMomentOrders> plain{};
};

/**
 * Finite non-negative measure on {0, 1, ..., size()-1}.
 *
 * Values are stored tilted: stored[x] = v(x) * b^x with b = base(). In floating
 * point this keeps the critical laws, whose atoms decay like b^-x, inside the
 * representable range out to thousands of support points. Convolution commutes
 * with tilting, so only the shift operations see the base.
 *
 * deficit() bounds the b^x-weighted mass removed by truncation.
 */
template <class T, class Kind>
class BasicMeasure {
public:
    BasicMeasure() : base_(from_int<T>(1)), inv_base_(from_int<T>(1)), deficit_(from_int<T>(0)) {}

    explicit BasicMeasure(const T& base)
        : base_(base), inv_base_(from_int<T>(1) / base), deficit_(from_int<T>(0)) {}

    static BasicMeasure from_tilted(std::vector<T> tilted, const T& base) {
        BasicMeasure m(base);
        m.w_ = std::move(tilted);
        m.trim();
        return m;
    }

    static BasicMeasure from_values(const std::vector<T>& values, const T& base) {
        BasicMeasure m(base);
        m.w_.resize(values.size());
        T pw = from_int<T>(1);
        for (std::size_t x = 0; x < values.size(); ++x) {
            m.w_[x] = values[x] * pw;
            pw *= base;
        }
        m.trim();
        return m;
    }

    static BasicMeasure from_atoms(const std::map<long, T>& atoms, const T& base) {
        std::vector<T> values;
        for (const auto& [x, v] : atoms) {
            if (x < 0) throw ConfigError("negative support point " + std::to_string(x));
            if (static_cast<std::size_t>(x) >= values.size()) values.resize(x + 1, from_int<T>(0));
            values[x] += v;
        }
        return from_values(values, base);
    }

    static BasicMeasure point(long x, const T& mass, const T& base) {
        return from_atoms({{x, mass}}, base);
    }

    std::size_t size() const { return w_.size(); }
    bool empty() const { return w_.empty(); }
    const T& base() const { return base_; }
    const T& inv_base() const { return inv_base_; }
    const std::vector<T>& tilted() const { return w_; }
    std::vector<T>& tilted_mut() { return w_; }

    T tilted(std::size_t x) const { return x < w_.size() ? w_[x] : from_int<T>(0); }

    /// Untilted value v(x).
    T value(std::size_t x) const {
        if (x >= w_.size()) return from_int<T>(0);
        if constexpr (std::is_same_v<T, double>) {
            return w_[x] * std::pow(inv_base_, static_cast<double>(x));
        } else {
            return w_[x] * pow_int(inv_base_, static_cast<unsigned>(x));
        }
    }

    std::vector<T> values() const {
        std::vector<T> out(w_.size());
        T pw = from_int<T>(1);
        for (std::size_t x = 0; x < w_.size(); ++x) {
            out[x] = w_[x] * pw;
            pw *= inv_base_;
        }
        return out;
    }

    /// Non-zero atoms as (x, v(x)).
    std::vector<std::pair<long, T>> atoms() const {
        std::vector<std::pair<long, T>> out;
        const auto vals = values();
        for (std::size_t x = 0; x < vals.size(); ++x)
            if (!NumTraits<T>::is_zero(vals[x])) out.emplace_back(static_cast<long>(x), vals[x]);
        return out;
    }

    const T& raw_deficit() const { return deficit_; }
    void set_deficit(const T& d) { deficit_ = d; }
    void add_deficit(const T& d) { deficit_ += d; }

    const std::optional<FullMoments<T>>& full() const { return full_; }
    void set_full(std::optional<FullMoments<T>> f) { full_ = std::move(f); }

    /// Start exact tracking of the complete-measure moments from the current
    /// (assumed complete) support.
    void track_moments();

    void trim() {
        while (!w_.empty() && NumTraits<T>::is_zero(w_.back())) w_.pop_back();
    }

private:
    std::vector<T> w_;
    T base_;
    T inv_base_;
    T deficit_;
    std::optional<FullMoments<T>> full_;
};

template <class T>
using Pmf = BasicMeasure<T, PmfKind>;
template <class T>
using WeightedMeasure = BasicMeasure<T, WeightKind>;

namespace detail {

inline constexpr long kBinom[kMomentOrders][kMomentOrders] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

template <class T>
std::array<T, kMomentOrders> product_moments(const std::array<T, kMomentOrders>& a,
                                             const std::array<T, kMomentOrders>& b) {
    std::array<T, kMomentOrders> out;
    for (int k = 0; k < kMomentOrders; ++k) {
        T s = from_int<T>(0);
        for (int j = 0; j <= k; ++j) s += from_int<T>(kBinom[k][j]) * a[j] * b[k - j];
        out[k] = s;
    }
    return out;
}

// Moments of y -> y-1 applied to the whole measure: sum (y-1)^k beta^y v(y).
template <class T>
std::array<T, kMomentOrders> lowered(const std::array<T, kMomentOrders>& a) {
    std::array<T, kMomentOrders> out;
    for (int k = 0; k < kMomentOrders; ++k) {
        T s = from_int<T>(0);
        for (int j = 0; j <= k; ++j) {
            const long sign = ((k - j) % 2 == 0) ? 1 : -1;
            s += from_int<T>(sign * kBinom[k][j]) * a[j];
        }
        out[k] = s;
    }
    return out;
}

// Pushforward under y -> (y-1)^+ with weight base beta; v0, v1 are the
// untilted values at 0 and 1.
template <class T>
std::array<T, kMomentOrders> shift_floor_moments(const std::array<T, kMomentOrders>& a, const T& beta,
                                                 const T& inv_beta, const T& v0, const T& v1) {
    auto low = lowered(a);
    std::array<T, kMomentOrders> out;
    for (int k = 0; k < kMomentOrders; ++k) {
        T inner = low[k] - ((k % 2 == 0) ? v0 : -v0);
        if (k == 0) inner -= beta * v1;
        out[k] = inner * inv_beta;
        if (k == 0) out[k] += v0 + v1;
    }
    return out;
}

// y -> y-1 restricted to y >= 1, scaled by factor: the open-path channel step.
template <class T>
std::array<T, kMomentOrders> channel_moments(const std::array<T, kMomentOrders>& a, const T& factor_over_beta,
                                             const T& v0) {
    auto low = lowered(a);
    std::array<T, kMomentOrders> out;
    for (int k = 0; k < kMomentOrders; ++k) out[k] = (low[k] - ((k % 2 == 0) ? v0 : -v0)) * factor_over_beta;
    return out;
}

// c[0..len) += a * b, truncated at len.
template <class T>
void convolve_into(const std::vector<T>& a, const std::vector<T>& b, std::vector<T>& c) {
    const std::size_t len = c.size();
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (NumTraits<T>::is_zero(a[i])) continue;
        const std::size_t jmax = std::min(b.size(), len - i);
        const T ai = a[i];
        for (std::size_t j = 0; j < jmax; ++j) c[i + j] += ai * b[j];
    }
}

template <class T>
void square_into(const std::vector<T>& a, std::vector<T>& c) {
    const std::size_t len = c.size();
    for (std::size_t i = 0; i < a.size() && 2 * i < len + i; ++i) {
        if (NumTraits<T>::is_zero(a[i])) continue;
        if (2 * i < len) c[2 * i] += a[i] * a[i];
        const T twice = a[i] + a[i];
        const std::size_t jmax = std::min(a.size(), len > i ? len - i : 0);
        for (std::size_t j = i + 1; j < jmax; ++j) c[i + j] += twice * a[j];
    }
}

void convolve_into(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& c);
void square_into(const std::vector<double>& a, std::vector<double>& c);

template <class T>
T total(const std::vector<T>& v) {
    T s = from_int<T>(0);
    for (const auto& x : v) s += x;
    return s;
}

template <class T>
bool same_base(const T& a, const T& b) {
    return a == b;
}

} // namespace detail

template <class T, class Kind>
void BasicMeasure<T, Kind>::track_moments() {
    FullMoments<T> f;
    f.weighted.fill(from_int<T>(0));
    f.plain.fill(from_int<T>(0));
    T pw = from_int<T>(1);
    for (std::size_t x = 0; x < w_.size(); ++x) {
        T xk = from_int<T>(1);
        const T xv = from_int<T>(static_cast<long>(x));
        const T plain = w_[x] * pw;
        for (int k = 0; k < kMomentOrders; ++k) {
            f.weighted[k] += xk * w_[x];
            f.plain[k] += xk * plain;
            xk *= xv;
        }
        pw *= inv_base_;
    }
    full_ = f;
}

/// Weighted total sum b^x v(x) over the retained support.
template <class T, class K>
T weighted_total(const BasicMeasure<T, K>& p) {
    return detail::total(p.tilted());
}

/// Plain total sum v(x) over the retained support.
template <class T, class K>
T plain_total(const BasicMeasure<T, K>& p) {
    return detail::total(p.values());
}

/// Certified bound on the b^x-weighted mass missing from the retained support.
/// Exact (a difference of exact quantities) when full moments are tracked.
template <class T, class K>
T deficit_weighted(const BasicMeasure<T, K>& p) {
    if (p.full()) return p.full()->weighted[0] - weighted_total(p) + p.raw_deficit();
    return p.raw_deficit();
}

/// a * b, keeping at most max_len support points (all if max_len < 0).
template <class T, class K>
BasicMeasure<T, K> convolve(const BasicMeasure<T, K>& a, const Pmf<T>& b, long max_len = -1) {
    if (!detail::same_base(a.base(), b.base()))
        throw ConfigError("convolve: operands use different tilt bases");
    BasicMeasure<T, K> out(a.base());
    if (a.empty() || b.empty()) {
        out.set_deficit(a.raw_deficit() * (weighted_total(b) + b.raw_deficit()) +
                        (weighted_total(a)) * b.raw_deficit());
        return out;
    }
    std::size_t len = a.size() + b.size() - 1;
    if (max_len >= 0) len = std::min(len, static_cast<std::size_t>(std::max<long>(max_len, 0)));
    std::vector<T> c(len, from_int<T>(0));
    if (static_cast<const void*>(&a) == static_cast<const void*>(&b)) {
        detail::square_into(a.tilted(), c);
    } else {
        detail::convolve_into(a.tilted(), b.tilted(), c);
    }
    const T ta = weighted_total(a);
    const T tb = weighted_total(b);
    T deficit = a.raw_deficit() * (tb + b.raw_deficit()) + ta * b.raw_deficit();
    if (a.full() && b.full()) {
        FullMoments<T> f;
        f.weighted = detail::product_moments(a.full()->weighted, b.full()->weighted);
        f.plain = detail::product_moments(a.full()->plain, b.full()->plain);
        out.set_full(f);
    } else if (len < a.size() + b.size() - 1) {
        // Mass beyond the cut: total product minus what was kept.
        deficit += ta * tb - detail::total(c);
    }
    out.tilted_mut() = std::move(c);
    out.trim();
    out.set_deficit(deficit);
    return out;
}

/// Law of the sum of `count` independent copies of p.
template <class T>
Pmf<T> m_fold_sum(const Pmf<T>& p, long count, long max_len = -1) {
    if (count < 1) throw DomainError("m_fold_sum: count must be >= 1");
    std::optional<Pmf<T>> result;
    Pmf<T> power = p;
    long c = count;
    while (true) {
        if (c & 1L) result = result ? convolve(*result, power, max_len) : power;
        c >>= 1L;
        if (c == 0) break;
        power = convolve(power, power, max_len);
    }
    return *result;
}

/// Pushforward under s -> (s-1)^+.
template <class T>
Pmf<T> shift_floor(const Pmf<T>& p) {
    Pmf<T> out(p.base());
    if (p.empty()) {
        out.set_deficit(p.raw_deficit() * p.inv_base());
        return out;
    }
    const auto& w = p.tilted();
    std::vector<T> r(std::max<std::size_t>(w.size() - 1, 1), from_int<T>(0));
    r[0] = w[0];
    for (std::size_t x = 1; x < w.size(); ++x) r[x - 1] += w[x] * p.inv_base();
    if (p.full()) {
        const T v0 = w[0];
        const T v1 = p.tilted(1) * p.inv_base();
        FullMoments<T> f;
        f.weighted = detail::shift_floor_moments(p.full()->weighted, p.base(), p.inv_base(), v0, v1);
        f.plain = detail::shift_floor_moments(p.full()->plain, from_int<T>(1), from_int<T>(1), v0, v1);
        out.set_full(f);
    }
    out.tilted_mut() = std::move(r);
    out.trim();
    out.set_deficit(p.raw_deficit() * p.inv_base());
    return out;
}

/// Open-path channel step: out(x) = factor * c(x+1) for x >= 0 (the atom at 0
/// of c is dropped).
template <class T>
WeightedMeasure<T> channel_shift(const WeightedMeasure<T>& c, const T& factor) {
    WeightedMeasure<T> out(c.base());
    const T scale = factor * c.inv_base();
    std::vector<T> r;
    if (c.size() > 1) {
        r.resize(c.size() - 1);
        for (std::size_t x = 1; x < c.size(); ++x) r[x - 1] = c.tilted()[x] * scale;
    }
    if (c.full()) {
        const T v0 = c.tilted(0);
        FullMoments<T> f;
        f.weighted = detail::channel_moments(c.full()->weighted, scale, v0);
        f.plain = detail::channel_moments(c.full()->plain, factor, v0);
        out.set_full(f);
    }
    out.tilted_mut() = std::move(r);
    out.trim();
    out.set_deficit(c.raw_deficit() * scale);
    return out;
}

/// The operator shared by open-path measures and pivotal expectations:
/// w -> m * (w * q)(. + 1).
template <class T>
WeightedMeasure<T> channel_step(const WeightedMeasure<T>& w, const Pmf<T>& q, long m, long max_len = -1) {
    return channel_shift(convolve(w, q, max_len < 0 ? -1 : max_len + 1), from_int<T>(m));
}

template <class T>
struct MomentValue {
    T value;
    std::optional<T> bound; // certified bound on |full - value| when available
};

/// sum x^k s^x v(x). Exact over the complete measure when full moments are
/// tracked and s equals the tilt base.
template <class T, class K>
MomentValue<T> exp_weighted_moment(const BasicMeasure<T, K>& p, const T& s, int k) {
    if constexpr (NumTraits<T>::ordered) {
        if (!(s > from_int<T>(0))) throw DomainError("exp_weighted_moment: base must be positive");
    }
    if (k < 0) throw DomainError("exp_weighted_moment: power must be non-negative");
    if (p.full() && k < kMomentOrders && s == p.base()) return {p.full()->weighted[k], from_int<T>(0)};
    const T ratio = s * p.inv_base();
    T pw = from_int<T>(1);
    T acc = from_int<T>(0);
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (!NumTraits<T>::is_zero(p.tilted()[x])) {
            const T xk = pow_int(from_int<T>(static_cast<long>(x)), static_cast<unsigned>(k));
            acc += xk * pw * p.tilted()[x];
        }
        pw *= ratio;
    }
    MomentValue<T> out{acc, std::nullopt};
    if constexpr (NumTraits<T>::ordered) {
        if (k == 0 && s <= p.base()) out.bound = deficit_weighted(p);
    }
    return out;
}

/// k-th derivative of the generating function at s.
template <class T, class K>
T factorial_derivative(const BasicMeasure<T, K>& p, const T& s, int k) {
    if constexpr (NumTraits<T>::ordered) {
        if (!(s > from_int<T>(0))) throw DomainError("factorial_derivative: base must be positive");
    }
    if (k < 0) throw DomainError("factorial_derivative: order must be non-negative");
    if (p.full() && k < kMomentOrders && s == p.base()) {
        // Signed Stirling numbers of the first kind turn powers into falling factorials.
        static constexpr long stirling[kMomentOrders][kMomentOrders] = {
            {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, -1, 1, 0, 0}, {0, 2, -3, 1, 0}, {0, -6, 11, -6, 1}};
        T acc = from_int<T>(0);
        for (int j = 0; j <= k; ++j) acc += from_int<T>(stirling[k][j]) * p.full()->weighted[j];
        return acc / pow_int(s, static_cast<unsigned>(k));
    }
    const T ratio = s * p.inv_base();
    T pw = from_int<T>(1);
    T acc = from_int<T>(0);
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (x >= static_cast<std::size_t>(k) && !NumTraits<T>::is_zero(p.tilted()[x])) {
            T ff = from_int<T>(1);
            for (int j = 0; j < k; ++j) ff *= from_int<T>(static_cast<long>(x) - j);
            acc += ff * pw * p.tilted()[x];
        }
        pw *= ratio;
    }
    return acc / pow_int(s, static_cast<unsigned>(k));
}

/// Removes the smallest upper tail {x >= K} whose weight_base^x-weighted mass
/// is at most eps. The removed mass joins the deficit; nothing is renormalized.
template <class T, class K>
BasicMeasure<T, K> truncate_weighted(const BasicMeasure<T, K>& p, const T& weight_base, const T& eps) {
    static_assert(NumTraits<T>::ordered, "truncation needs an ordered scalar");
    if (eps < from_int<T>(0)) throw DomainError("truncate_weighted: eps must be >= 0");
    if (weight_base < from_int<T>(1)) throw DomainError("truncate_weighted: weight base must be >= 1");
    const auto& w = p.tilted();
    const T ratio = weight_base * p.inv_base();
    std::vector<T> tail(w.size() + 1, from_int<T>(0));
    std::vector<T> ratio_pw(w.size() + 1, from_int<T>(1));
    for (std::size_t x = 1; x <= w.size(); ++x) ratio_pw[x] = ratio_pw[x - 1] * ratio;
    for (std::size_t x = w.size(); x-- > 0;) tail[x] = tail[x + 1] + w[x] * ratio_pw[x];
    std::size_t cut = w.size();
    while (cut > 1 && tail[cut - 1] <= eps) --cut; // atom 0 always stays
    if (cut == w.size()) return p;
    BasicMeasure<T, K> out = p;
    T removed = from_int<T>(0);
    for (std::size_t x = cut; x < w.size(); ++x) removed += w[x];
    out.tilted_mut().resize(cut);
    out.trim();
    out.add_deficit(removed);
    return out;
}

/// Drops support points at or beyond len. With full moments tracked the cut is
/// a window and loses nothing; otherwise the removed weighted mass joins the
/// deficit.
template <class T, class K>
BasicMeasure<T, K> truncate_support(const BasicMeasure<T, K>& p, std::size_t len) {
    if (p.size() <= len) return p;
    BasicMeasure<T, K> out = p;
    if (!p.full()) {
        T removed = from_int<T>(0);
        for (std::size_t x = len; x < p.size(); ++x) removed += p.tilted()[x];
        out.add_deficit(removed);
    }
    out.tilted_mut().resize(len);
    out.trim();
    return out;
}

struct CollapseResult {
    double removed_weighted = 0.0;   // sum over the tail of b^x p(x)
    double removed_weighted_x = 0.0; // sum over the tail of x b^x p(x)
    double removed_mass = 0.0;       // sum over the tail of p(x)
    std::size_t cut = 0;
};

/// Moves the smallest upper tail whose tilted mass is at most eps onto the
/// atom at 0. The result is the law of a variable that is pointwise no larger
/// than the input one, so the recursion keeps it below the true system.
CollapseResult collapse_tail(Pmf<double>& p, double eps);

} // namespace drlab

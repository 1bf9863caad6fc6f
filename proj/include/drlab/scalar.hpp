#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

namespace drlab {

/// Arithmetic backend of a computation. A run uses exactly one.
enum class Mode { Rational, Float, Modular };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);

using Rational = mpq_class;

/// Element of Z/p1 x ... x Z/p4 for four 61-bit primes.
///
/// Every rational whose denominator is prime to the moduli maps into this ring
/// by a ring homomorphism, so an identity between rationals built from +, -, *
/// and / holds in the ring whenever it holds over Q. The converse fails only if
/// every modulus divides the numerator of the true residual, which for
/// residuals of the sizes met here has negligible probability. The ring has no
/// order: inequalities cannot be evaluated in it.
class Residue {
public:
    static constexpr std::size_t kPrimes = 4;
    static constexpr std::array<std::uint64_t, kPrimes> kModuli = {
        2305843009213693951ULL, 2305843009213693921ULL,
        2305843009213693907ULL, 2305843009213693723ULL};

    Residue() = default;
    Residue(long value); // NOLINT(google-explicit-constructor): integer literals mix freely

    static Residue from_rational(const Rational& q);

    Residue& operator+=(const Residue& o);
    Residue& operator-=(const Residue& o);
    Residue& operator*=(const Residue& o);
    Residue& operator/=(const Residue& o);
    Residue operator-() const;

    friend Residue operator+(Residue a, const Residue& b) { return a += b; }
    friend Residue operator-(Residue a, const Residue& b) { return a -= b; }
    friend Residue operator*(Residue a, const Residue& b) { return a *= b; }
    friend Residue operator/(Residue a, const Residue& b) { return a /= b; }
    friend bool operator==(const Residue& a, const Residue& b) { return a.r_ == b.r_; }
    friend bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }

    bool is_zero() const;
    bool invertible() const;
    const std::array<std::uint64_t, kPrimes>& components() const { return r_; }
    std::string str() const;

private:
    std::array<std::uint64_t, kPrimes> r_{};
};

/// Round-to-nearest conversion (mpq get_d truncates).
double nearest_double(const Rational& q);

template <class T>
struct NumTraits;

template <>
struct NumTraits<double> {
    static constexpr bool exact = false;
    static constexpr bool ordered = true;
    static constexpr Mode mode = Mode::Float;
    static double from_rational(const Rational& q) { return nearest_double(q); }
    static double to_double(double v) { return v; }
    static double magnitude(double v) { return std::fabs(v); }
    static bool is_zero(double v) { return v == 0.0; }
    static std::string format(double v);
};

template <>
struct NumTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr bool ordered = true;
    static constexpr Mode mode = Mode::Rational;
    static Rational from_rational(const Rational& q) { return q; }
    static double to_double(const Rational& v) { return nearest_double(v); }
    static Rational magnitude(const Rational& v) { return abs(v); }
    static bool is_zero(const Rational& v) { return sgn(v) == 0; }
    static std::string format(const Rational& v) { return v.get_str(); }
};

template <>
struct NumTraits<Residue> {
    static constexpr bool exact = true;
    static constexpr bool ordered = false;
    static constexpr Mode mode = Mode::Modular;
    static Residue from_rational(const Rational& q) { return Residue::from_rational(q); }
    static double to_double(const Residue&) { return std::numeric_limits<double>::quiet_NaN(); }
    // No absolute value exists in a residue ring; the signed difference is
    // reported and only its vanishing is meaningful.
    static Residue magnitude(const Residue& v) { return v; }
    static bool is_zero(const Residue& v) { return v.is_zero(); }
    static std::string format(const Residue& v) { return v.str(); }
};

template <class T>
concept OrderedScalar = NumTraits<T>::ordered;

template <class T>
T from_int(long v) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Rational(v);
    } else {
        return T(v);
    }
}

template <class T>
T pow_int(T base, unsigned exponent) {
    T result = from_int<T>(1);
    while (exponent > 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent > 0) base *= base;
    }
    return result;
}

template <class T>
std::string format_number(const T& v) {
    return NumTraits<T>::format(v);
}

template <class T>
double to_double(const T& v) {
    return NumTraits<T>::to_double(v);
}

/// Exact rational value of a text token: "p/q", an integer, or a decimal
/// literal such as "0.2" (read as 1/5, not as the nearest double).
Rational parse_rational(const std::string& text);

/// Exact value of a binary double.
Rational rational_from_double(double v);

} // namespace drlab

#include "drlab/scalar.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "drlab/errors.hpp"

namespace drlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<u128>(a) * b) % p); }

u64 powmod(u64 base, u64 exp, u64 p) {
    u64 result = 1;
    while (exp > 0) {
        if (exp & 1U) result = mulmod(result, base, p);
        base = mulmod(base, base, p);
        exp >>= 1U;
    }
    return result;
}

u64 reduce_signed(long v, u64 p) {
    if (v >= 0) return static_cast<u64>(v) % p;
    const u64 mag = static_cast<u64>(-(v + 1)) + 1;
    const u64 r = mag % p;
    return r == 0 ? 0 : p - r;
}

u64 reduce_mpz(const mpz_class& z, u64 p) {
    // mpz_fdiv_ui takes an unsigned long, which is 64 bits on the targets we build for.
    static_assert(sizeof(unsigned long) == 8);
    return mpz_fdiv_ui(z.get_mpz_t(), p);
}

} // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::Rational: return "rational";
    case Mode::Float: return "float";
    case Mode::Modular: return "modular";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "rational" || name == "exact") return Mode::Rational;
    if (name == "float") return Mode::Float;
    if (name == "modular") return Mode::Modular;
    throw ConfigError("unknown arithmetic mode '" + name + "' (expected rational|float|modular)");
}

Residue::Residue(long value) {
    for (std::size_t i = 0; i < kPrimes; ++i) r_[i] = reduce_signed(value, kModuli[i]);
}

Residue Residue::from_rational(const Rational& q) {
    Residue out;
    for (std::size_t i = 0; i < kPrimes; ++i) {
        const u64 p = kModuli[i];
        const u64 den = reduce_mpz(q.get_den(), p);
        if (den == 0) {
            throw DomainError("denominator " + q.get_den().get_str() +
                              " is not invertible modulo a residue prime");
        }
        out.r_[i] = mulmod(reduce_mpz(q.get_num(), p), powmod(den, p - 2, p), p);
    }
    return out;
}

Residue& Residue::operator+=(const Residue& o) {
    for (std::size_t i = 0; i < kPrimes; ++i) {
        u64 s = r_[i] + o.r_[i];
        if (s >= kModuli[i]) s -= kModuli[i];
        r_[i] = s;
    }
    return *this;
}

Residue& Residue::operator-=(const Residue& o) {
    for (std::size_t i = 0; i < kPrimes; ++i) {
        r_[i] = r_[i] >= o.r_[i] ? r_[i] - o.r_[i] : r_[i] + kModuli[i] - o.r_[i];
    }
    return *this;
}

Residue& Residue::operator*=(const Residue& o) {
    for (std::size_t i = 0; i < kPrimes; ++i) r_[i] = mulmod(r_[i], o.r_[i], kModuli[i]);
    return *this;
}

Residue& Residue::operator/=(const Residue& o) {
    if (!o.invertible()) throw DomainError("division by a non-invertible residue");
    for (std::size_t i = 0; i < kPrimes; ++i) {
        r_[i] = mulmod(r_[i], powmod(o.r_[i], kModuli[i] - 2, kModuli[i]), kModuli[i]);
    }
    return *this;
}

Residue Residue::operator-() const {
    Residue out;
    for (std::size_t i = 0; i < kPrimes; ++i) out.r_[i] = r_[i] == 0 ? 0 : kModuli[i] - r_[i];
    return out;
}

bool Residue::is_zero() const {
    for (u64 v : r_)
        if (v != 0) return false;
    return true;
}

bool Residue::invertible() const {
    for (u64 v : r_)
        if (v == 0) return false;
    return true;
}

std::string Residue::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os << "mod(";
    for (std::size_t i = 0; i < kPrimes; ++i) os << (i ? "," : "") << r_[i];
    os << ")";
    return os.str();
}

std::string NumTraits<double>::format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double nearest_double(const Rational& q) {
    const double t = q.get_d();
    if (!std::isfinite(t) || sgn(q) == 0) return t;
    // t is q truncated toward zero; the nearest double is t or its outward neighbour.
    const double u = std::nextafter(t, sgn(q) > 0 ? HUGE_VAL : -HUGE_VAL);
    if (!std::isfinite(u)) return t;
    const Rational dt = abs(q - Rational(t));
    const Rational du = abs(Rational(u) - q);
    if (dt < du) return t;
    if (du < dt) return u;
    return (std::bit_cast<std::uint64_t>(t) & 1U) ? u : t; // ties to even
}

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw ConfigError("non-finite number where a probability was expected");
    Rational q(v); // GMP converts binary doubles exactly
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    if (text.empty()) throw ConfigError("empty number");
    try {
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            Rational q(mpz_class(text.substr(0, slash), 10), mpz_class(text.substr(slash + 1), 10));
            if (sgn(q.get_den()) == 0) throw ConfigError("zero denominator in '" + raw + "'");
            q.canonicalize();
            return q;
        }
        const auto epos = text.find_first_of("eE");
        std::string mant = text.substr(0, epos);
        long exp10 = 0;
        if (epos != std::string::npos) exp10 = std::stol(text.substr(epos + 1));
        const auto dot = mant.find('.');
        if (dot != std::string::npos) {
            exp10 -= static_cast<long>(mant.size() - dot - 1);
            mant.erase(dot, 1);
        }
        if (mant.empty() || mant == "-" || mant == "+") throw ConfigError("malformed number '" + raw + "'");
        if (mant[0] == '+') mant.erase(0, 1);
        mpz_class num(mant, 10); // base 0 would read "08" as octal
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        Rational q = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
        q.canonicalize();
        return q;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("malformed number '" + raw + "'");
    }
}

} // namespace drlab

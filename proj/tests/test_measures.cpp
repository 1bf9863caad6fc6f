#include <doctest.h>

#include <random>

#include "drlab/measures.hpp"
#include "oracle.hpp"

using namespace drlab;
using Q = Rational;

namespace {

Pmf<Q> qpmf(std::map<long, Q> atoms, Q base = 2) { return Pmf<Q>::from_atoms(atoms, base); }

std::map<long, Q> as_map(const Pmf<Q>& p) {
    std::map<long, Q> out;
    for (const auto& [x, v] : p.atoms()) out[x] = v;
    return out;
}

const std::map<long, Q> kEx = {{0, Q(4, 5)}, {2, Q(1, 5)}};

std::map<long, Q> random_law(std::mt19937_64& rng, int max_x) {
    std::uniform_int_distribution<int> w(0, 9), x(0, max_x);
    std::map<long, Q> law;
    long total = 0;
    for (int i = 0; i < 4; ++i) {
        const int wt = w(rng) + 1;
        law[x(rng)] += wt;
        total += wt;
    }
    for (auto& [k, v] : law) v /= total;
    return law;
}

} // namespace

TEST_SUITE("scalar") {
    TEST_CASE("parse_rational reads decimals exactly") {
        CHECK(parse_rational("0.2") == Q(1, 5));
        CHECK(parse_rational("0.8") == Q(4, 5));
        CHECK(parse_rational("0.09") == Q(9, 100));
        CHECK(parse_rational("010/4") == Q(5, 2));
        CHECK(parse_rational("3/6") == Q(1, 2));
        CHECK(parse_rational("1e-3") == Q(1, 1000));
        CHECK(parse_rational("-2") == Q(-2));
        CHECK(parse_rational("2.5E1") == Q(25));
        CHECK_THROWS_AS(parse_rational("x"), ConfigError);
        CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
    }

    TEST_CASE("nearest_double rounds to nearest") {
        CHECK(nearest_double(Q(1, 5)) == 0.2);
        CHECK(nearest_double(Q(1, 3)) == 1.0 / 3.0);
        CHECK(nearest_double(Q(-4, 5)) == -0.8);
        CHECK(nearest_double(Q(0)) == 0.0);
        CHECK(format_number(0.36) == "0.35999999999999999");
    }

    TEST_CASE("residue ring arithmetic") {
        const Residue a = Residue::from_rational(Q(1, 5));
        CHECK((a * Residue(5) - Residue(1)).is_zero());
        const Residue b = Residue::from_rational(Q(7, 3));
        CHECK(((b / a) * a - b).is_zero());
        CHECK(Residue(0).str() == "0");
        CHECK_FALSE(Residue(3).is_zero());
    }
}

TEST_SUITE("measures") {
    TEST_CASE("convolve examples") {
        const auto p = qpmf(kEx);
        CHECK(as_map(convolve(p, p)) == std::map<long, Q>{{0, Q(16, 25)}, {2, Q(8, 25)}, {4, Q(1, 25)}});
        const auto d0 = qpmf({{0, Q(1)}});
        CHECK(as_map(convolve(d0, p)) == kEx);
        const auto c = qpmf({{0, Q(1, 2)}, {1, Q(1, 2)}});
        CHECK(as_map(convolve(c, c)) == std::map<long, Q>{{0, Q(1, 4)}, {1, Q(1, 2)}, {2, Q(1, 4)}});
    }

    TEST_CASE("m_fold_sum and shift_floor examples") {
        const auto p = qpmf(kEx);
        CHECK(as_map(m_fold_sum(qpmf({{0, Q(1)}}), 5)) == std::map<long, Q>{{0, Q(1)}});
        CHECK(as_map(m_fold_sum(p, 2)) == std::map<long, Q>{{0, Q(16, 25)}, {2, Q(8, 25)}, {4, Q(1, 25)}});
        CHECK(as_map(m_fold_sum(qpmf({{1, Q(1)}}), 3)) == std::map<long, Q>{{3, Q(1)}});
        CHECK_THROWS_AS(m_fold_sum(p, 0), DomainError);
        CHECK(as_map(shift_floor(m_fold_sum(p, 2))) ==
              std::map<long, Q>{{0, Q(16, 25)}, {1, Q(8, 25)}, {3, Q(1, 25)}});
        CHECK(as_map(shift_floor(qpmf({{1, Q(1)}}))) == std::map<long, Q>{{0, Q(1)}});
        CHECK(as_map(shift_floor(qpmf({{0, Q(1)}}))) == std::map<long, Q>{{0, Q(1)}});
    }

    TEST_CASE("moment and derivative examples") {
        const auto p = qpmf(kEx);
        CHECK(exp_weighted_moment(p, Q(2), 0).value == Q(8, 5));
        CHECK(exp_weighted_moment(p, Q(2), 1).value == Q(8, 5));
        CHECK(exp_weighted_moment(qpmf({{0, Q(1)}}), Q(3), 2).value == 0);
        CHECK(factorial_derivative(p, Q(2), 1) == Q(4, 5));
        CHECK(factorial_derivative(qpmf({{2, Q(1)}}), Q(2), 2) == Q(2));
    }

    TEST_CASE("truncate_weighted examples") {
        const auto p = qpmf({{0, Q(1, 2)}, {10, Q(1, 2)}});
        const auto same = truncate_weighted(p, Q(2), Q(0));
        CHECK(as_map(same) == as_map(p));
        const auto cut = truncate_weighted(p, Q(2), Q(512));
        CHECK(as_map(cut) == std::map<long, Q>{{0, Q(1, 2)}});
        CHECK(cut.raw_deficit() == Q(512));
        const auto point = qpmf({{0, Q(1)}});
        CHECK(as_map(truncate_weighted(point, Q(2), Q(10))) == as_map(point));
    }

    TEST_CASE("convolve is commutative and associative, matches the naive oracle") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 25; ++trial) {
            const auto la = random_law(rng, 6), lb = random_law(rng, 6), lc = random_law(rng, 6);
            const auto a = qpmf(la), b = qpmf(lb), c = qpmf(lc);
            CHECK(as_map(convolve(a, b)) == as_map(convolve(b, a)));
            CHECK(as_map(convolve(convolve(a, b), c)) == as_map(convolve(a, convolve(b, c))));
            oracle::Law oa(la.begin(), la.end()), ob(lb.begin(), lb.end());
            CHECK(as_map(convolve(a, b)) == oracle::naive_convolve(oa, ob));
            // float: same up to rounding
            auto fa = Pmf<double>::from_atoms({{0, 0.0}}, 2.0);
            std::map<long, double> da, db;
            for (const auto& [x, v] : la) da[x] = nearest_double(v);
            for (const auto& [x, v] : lb) db[x] = nearest_double(v);
            const auto fab = convolve(Pmf<double>::from_atoms(da, 2.0), Pmf<double>::from_atoms(db, 2.0));
            const auto fba = convolve(Pmf<double>::from_atoms(db, 2.0), Pmf<double>::from_atoms(da, 2.0));
            for (std::size_t x = 0; x < fab.size(); ++x) CHECK(fab.value(x) == doctest::Approx(fba.value(x)).epsilon(1e-14));
            (void)fa;
        }
    }

    TEST_CASE("shift_floor keeps total mass") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 25; ++trial) {
            const auto p = qpmf(random_law(rng, 8));
            CHECK(plain_total(shift_floor(p)) == plain_total(p));
        }
    }

    TEST_CASE("generating function is multiplicative under convolution") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 25; ++trial) {
            const auto la = random_law(rng, 7), lb = random_law(rng, 7);
            const auto a = qpmf(la), b = qpmf(lb);
            for (const Q s : {Q(1, 2), Q(1), Q(2), Q(3)}) {
                CHECK(exp_weighted_moment(convolve(a, b), s, 0).value ==
                      exp_weighted_moment(a, s, 0).value * exp_weighted_moment(b, s, 0).value);
            }
            std::map<long, double> da, db;
            for (const auto& [x, v] : la) da[x] = nearest_double(v);
            for (const auto& [x, v] : lb) db[x] = nearest_double(v);
            const auto fa = Pmf<double>::from_atoms(da, 2.0), fb = Pmf<double>::from_atoms(db, 2.0);
            for (double s : {0.5, 1.0, 2.0, 3.0}) {
                const double lhs = exp_weighted_moment(convolve(fa, fb), s, 0).value;
                const double rhs = exp_weighted_moment(fa, s, 0).value * exp_weighted_moment(fb, s, 0).value;
                CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs));
            }
        }
    }

    TEST_CASE("factorial derivative of order 0 is the generating function") {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = qpmf(random_law(rng, 6));
            for (const Q s : {Q(1, 4), Q(1), Q(3, 2), Q(2), Q(5, 2)})
                CHECK(factorial_derivative(p, s, 0) == exp_weighted_moment(p, s, 0).value);
        }
    }

    TEST_CASE("truncate_weighted removes at most eps") {
        std::mt19937_64 rng(9);
        for (int trial = 0; trial < 25; ++trial) {
            const auto law = random_law(rng, 12);
            const auto p = qpmf(law);
            for (const Q eps : {Q(1, 100), Q(1, 10), Q(1), Q(10)}) {
                const auto t = truncate_weighted(p, Q(2), eps);
                Q removed = 0;
                for (const auto& [x, v] : law)
                    if (static_cast<std::size_t>(x) >= t.size() || t.value(x) == 0) removed += v * oracle::power(Q(2), x);
                CHECK(removed <= eps);
                CHECK(t.raw_deficit() == removed);
            }
        }
    }

    TEST_CASE("base mismatch is an input error") {
        CHECK_THROWS_AS(convolve(qpmf(kEx, 2), qpmf(kEx, 3)), ConfigError);
    }
}

#include <doctest.h>

#include <cmath>

#include "drlab/evolution.hpp"
#include "drlab/pathcalc.hpp"
#include "drlab/presets.hpp"
#include "oracle.hpp"

using namespace drlab;
using Q = Rational;

namespace {

const std::map<long, Q> kEx = {{0, Q(4, 5)}, {2, Q(1, 5)}};

std::map<long, Q> law_of(const Pmf<Q>& p) {
    std::map<long, Q> out;
    for (const auto& [x, v] : p.atoms()) out[x] = v;
    return out;
}

} // namespace

TEST_SUITE("evolution") {
    TEST_CASE("phase examples") {
        auto r = classify_phase(make_spec(2, kEx, Mode::Rational));
        CHECK(r.delta0 == "0");
        CHECK(r.phase == Phase::Critical);
        r = classify_phase(make_spec(3, {{0, Q(1)}}, Mode::Rational));
        CHECK(r.delta0 == "-1");
        CHECK(r.phase == Phase::Subcritical);
        r = classify_phase(make_spec(2, {{0, Q(3, 4)}, {2, Q(1, 4)}}, Mode::Rational));
        CHECK(r.delta0 == "1/4");
        CHECK(r.phase == Phase::Supercritical);
        CHECK(classify_phase(make_spec(2, kEx, Mode::Float)).phase == Phase::Critical);
    }

    TEST_CASE("spec validation") {
        CHECK_THROWS_AS(make_spec(2, {{0, Q(1, 2)}}, Mode::Rational).validate(), ConfigError);
        CHECK_THROWS_AS(make_spec(1, {{0, Q(1)}}, Mode::Rational).validate(), ConfigError);
        CHECK_NOTHROW(make_spec(2, kEx, Mode::Float).validate());
    }

    TEST_CASE("evolve_step examples") {
        const auto spec = make_spec(2, kEx, Mode::Rational);
        const auto p1 = evolve_step(spec, make_initial<Q>(spec, Q(2)));
        CHECK(law_of(p1) == std::map<long, Q>{{0, Q(16, 25)}, {1, Q(8, 25)}, {3, Q(1, 25)}});
        const auto d0 = make_spec(2, {{0, Q(1)}}, Mode::Rational);
        CHECK(law_of(evolve_step(d0, make_initial<Q>(d0, Q(2)))) == std::map<long, Q>{{0, Q(1)}});
        const auto d1 = make_spec(2, {{1, Q(1)}}, Mode::Rational);
        CHECK(law_of(evolve_step(d1, make_initial<Q>(d1, Q(2)))) == std::map<long, Q>{{1, Q(1)}});
    }

    TEST_CASE("evolve examples") {
        const auto spec = make_spec(2, kEx, Mode::Rational);
        const auto tr = evolve<Q>(spec, 2);
        CHECK(tr.gens[1].survival == Q(9, 25));
        CHECK(tr.gens[1].mean == Q(11, 25));
        CHECK(tr.gens[1].g_at_m == Q(8, 5));
        CHECK(tr.gens[2].g_at_m == Q(928, 625));
        const auto d0 = evolve<double>(preset("delta0", Mode::Float), 100);
        for (const auto& g : d0.gens) {
            CHECK(g.survival == 0.0);
            CHECK(g.mean == 0.0);
        }
        CHECK_THROWS_AS(evolve<Q>(spec, -1), DomainError);
    }

    TEST_CASE("exact evolution matches the naive oracle") {
        for (const auto& name : {"example11", "alpha-family:2:5", "subcrit-sample", "supercrit-sample"}) {
            const auto spec = preset(name, Mode::Rational);
            EvolveOptions opt;
            opt.keep_pmfs_until = 6;
            const auto tr = evolve<Q>(spec, 6, opt);
            oracle::Law p(spec.initial.begin(), spec.initial.end());
            for (long n = 0; n <= 6; ++n) {
                CHECK(law_of(tr.pmfs[n]) == std::map<long, Q>(p.begin(), p.end()));
                p = oracle::naive_step(p, spec.m);
            }
        }
    }

    TEST_CASE("modular evolution agrees with rational evolution") {
        const auto spec = preset("alpha-family:4:8", Mode::Rational);
        EvolveOptions opt;
        opt.keep_pmfs_until = 6;
        const auto tq = evolve<Q>(spec, 6, opt);
        const auto tr = evolve<Residue>(spec, 6, opt);
        for (long n = 0; n <= 6; ++n) {
            CHECK((Residue::from_rational(tq.gens[n].g_at_m) - tr.gens[n].g_at_m).is_zero());
            CHECK((Residue::from_rational(tq.gens[n].mean) - tr.gens[n].mean).is_zero());
        }
    }

    TEST_CASE("horizon windows are exact on the retained range") {
        const auto spec = preset("example11", Mode::Rational);
        EvolveOptions full, win;
        full.keep_pmfs_until = win.keep_pmfs_until = 8;
        win.horizon = 12;
        const auto a = evolve<Q>(spec, 8, full);
        const auto b = evolve<Q>(spec, 8, win);
        for (long n = 0; n <= 8; ++n) {
            for (long x = 0; x <= 12 - n; ++x) CHECK(a.pmfs[n].value(x) == b.pmfs[n].value(x));
            CHECK(a.gens[n].g_at_m == b.gens[n].g_at_m);
            CHECK(a.gens[n].mean == b.gens[n].mean);
        }
        win.horizon = 5;
        CHECK_THROWS_AS(evolve<Q>(spec, 8, win), DomainError);
    }

    TEST_CASE("float evolution tracks the exact law within the certified deficit") {
        const auto exact = evolve<Q>(preset("example11", Mode::Rational), 9);
        auto fspec = preset("example11", Mode::Float);
        fspec.eps = 1e-9; // coarse, so the deficit is visible
        const auto fl = evolve<double>(fspec, 9);
        for (long n = 0; n <= 9; ++n) {
            const double gap = nearest_double(exact.gens[n].g_at_m) - fl.gens[n].g_at_m;
            CHECK(gap >= -1e-13);
            CHECK(gap <= fl.gens[n].deficit + 1e-13);
            CHECK(std::fabs(nearest_double(exact.gens[n].mean) - fl.gens[n].mean) <= fl.gens[n].deficit + 1e-13);
        }
    }

    TEST_CASE("generating-function recursions against the naive law") {
        oracle::Law p(kEx.begin(), kEx.end());
        for (long n = 0; n < 6; ++n) {
            const auto next = oracle::naive_step(p, 2);
            for (const Q s : {Q(1, 2), Q(1), Q(3, 2), Q(2)}) {
                const Q g = oracle::gen_fn(p, s), g0 = oracle::gen_fn(p, Q(0));
                CHECK(oracle::gen_fn(next, s) == g * g / s + (1 - 1 / s) * g0 * g0);
            }
            p = next;
        }
    }

    TEST_CASE("mgf and Leibniz checks pass exactly") {
        for (const auto& name : {"example11", "supercrit-sample", "alpha-family:3:6"}) {
            EvolveOptions opt;
            opt.keep_pmfs_until = 6;
            const auto tr = evolve<Q>(preset(name, Mode::Rational), 6, opt);
            const auto r = check_mgf_identities(tr, std::vector<Q>{Q(1, 2), Q(1), Q(2)});
            CHECK(r.pass);
            CHECK(r.max_abs_err == "0");
            const auto l = check_leibniz(tr, 4);
            CHECK(l.pass);
            CHECK(l.max_abs_err == "0");
        }
    }

    TEST_CASE("sign of delta is preserved across generations") {
        for (const auto& name : {"example11", "subcrit-sample", "supercrit-sample", "alpha-family:4:10"}) {
            const auto spec = preset(name, Mode::Rational);
            EvolveOptions opt;
            opt.keep_pmfs_until = 6;
            const auto tr = evolve<Q>(spec, 6, opt);
            const int s0 = sgn(delta_of(tr.pmfs[0], 2));
            for (const auto& p : tr.pmfs) CHECK(sgn(delta_of(p, 2)) == s0);
        }
    }

    TEST_CASE("mean stays below 1/(m-1) and mu stays in [0, m^-k] at or below criticality") {
        for (const auto& name : {"example11", "subcrit-sample", "alpha-family:4:20"}) {
            EvolveOptions opt;
            opt.keep_pmfs_until = 256;
            const auto tr = evolve<double>(preset(name, Mode::Float), 256, opt);
            for (long n = 0; n <= 256; ++n) {
                CHECK(tr.gens[n].mean <= 1.0 + 1e-12);
                for (long k = 0; k <= 30; ++k) {
                    const double v = mu(tr.pmfs[n], 2, k).value;
                    CHECK(v >= -1e-12);
                    CHECK(v <= std::pow(2.0, -k) + 1e-12);
                }
            }
        }
    }

    TEST_CASE("mu examples") {
        const auto p = make_initial<Q>(make_spec(2, kEx, Mode::Rational), Q(2));
        CHECK(mu(p, 2, 0).value == Q(4, 5));
        CHECK(mu(p, 2, 1).value == Q(2, 5));
        CHECK(mu(p, 2, 2).value == 0);
        const auto both = mu(p, 2, 1, true);
        CHECK(*both.discrepancy == 0);
    }

    TEST_CASE("tail functionals") {
        CHECK(std::isinf(tail_functionals(kEx, 2, 2, 1.0, 100).zeta));
        const auto t = tail_functionals(kEx, 2, 1, 1.0, 100);
        CHECK(t.tail_moment == Q(32, 5));
        CHECK(t.zeta == doctest::Approx(-std::log(32.0 / 5.0)));
        const double ln = std::log(100.0);
        CHECK(tail_functionals(kEx, 2, 1, 7.0 * ln * ln, 100).k_n == 0);
    }

    TEST_CASE("initial-law transforms") {
        CHECK(perturb_bernoulli(kEx, Q(0)) == kEx);
        CHECK(perturb_bernoulli(kEx, Q(1)) == std::map<long, Q>{{1, Q(4, 5)}, {3, Q(1, 5)}});
        const auto half = perturb_bernoulli(kEx, Q(1, 2));
        CHECK(delta0_exact(half, 2) == Q(8, 5));
        CHECK(classify_phase(make_spec(2, half, Mode::Rational)).delta0 == "8/5");
        CHECK(truncate_initial(kEx, 5) == kEx);
        CHECK(truncate_initial(kEx, 1) == std::map<long, Q>{{0, Q(1)}});
        CHECK(truncate_initial(kEx, 0) == std::map<long, Q>{{0, Q(1)}});
    }

    TEST_CASE("make_critical") {
        CHECK(make_critical({{2, Q(1)}}, 2) == kEx);
        CHECK_THROWS_AS(make_critical({{1, Q(1)}}, 2), DomainError);
        for (long K : {5, 10, 40}) {
            const auto law = make_critical(alpha_shape(4, K), 2);
            CHECK(delta0_exact(law, 2) == 0);
            CHECK(classify_phase(make_spec(2, law, Mode::Rational)).phase == Phase::Critical);
        }
    }

    TEST_CASE("resource limits") {
        auto spec = preset("example11", Mode::Float);
        spec.max_support = 8;
        CHECK_THROWS_AS(evolve<double>(spec, 64), ResourceError);
        EvolveOptions opt;
        opt.max_rational_bits = 64;
        CHECK_THROWS_AS(evolve<Q>(preset("example11", Mode::Rational), 10, opt), ResourceError);
    }
}

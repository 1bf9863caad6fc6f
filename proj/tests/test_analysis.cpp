#include <doctest.h>

#include <cmath>

#include "drlab/analysis.hpp"
#include "drlab/presets.hpp"

using namespace drlab;

namespace {

Series power_law(double c, double a, long lo, long hi) {
    Series s;
    for (long n = lo; n <= hi; ++n) {
        s.n.push_back(n);
        s.value.push_back(c * std::pow(static_cast<double>(n), a));
    }
    return s;
}

GenerationTrace<double> flat_trace(long n_max) {
    GenerationTrace<double> t;
    t.m = 2;
    for (long n = 0; n <= n_max; ++n) {
        GenerationStats<double> g;
        g.n = n;
        g.survival = 1.0 / (1.0 + n * n);
        g.g_at_m = 1.0;
        g.g_at_0 = 1.0 - g.survival;
        g.wm = {1.0, 0.5, 0.5, 0.5};
        g.log_running_product = 0.0; // G_i(m) = 1 throughout
        t.gens.push_back(g);
    }
    return t;
}

} // namespace

TEST_SUITE("analysis") {
    TEST_CASE("half-octave points") {
        CHECK(geometric_points(256, 2048) == std::vector<long>{256, 362, 512, 724, 1024, 1448, 2048});
        CHECK(geometric_points(16, 64).size() == 5);
    }

    TEST_CASE("fit recovers exact power laws") {
        const auto r = fit_exponent(power_law(4.0, -2.0, 1, 2048), 256, 2048);
        CHECK(r.slope == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(r.intercept == doctest::Approx(std::log(4.0)).epsilon(1e-12));
        CHECK(r.points.size() == 7);
        CHECK(fit_exponent(power_law(0.3, 0.0, 1, 512), 16, 512).slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        for (double a : {-3.5, -1.0, 0.25, 2.0}) {
            const auto f = fit_exponent(power_law(1.7, a, 1, 4096), 32, 4096);
            CHECK(std::fabs(f.slope - a) <= 1e-12);
            CHECK(f.residual_se <= 1e-12);
        }
    }

    TEST_CASE("fit uses the nearest sampled generation on sparse series") {
        Series s;
        for (long n = 256; n <= 2048; n *= 2) {
            for (long k : {n, n + n / 2}) {
                s.n.push_back(k);
                s.value.push_back(4.0 / (static_cast<double>(k) * k));
            }
        }
        const auto r = fit_exponent(s, 256, 2048);
        CHECK(r.slope == doctest::Approx(-2.0).epsilon(1e-12));
    }

    TEST_CASE("fit errors") {
        CHECK_THROWS_AS(fit_exponent(power_law(1.0, -2.0, 1, 100), 64, 100), DomainError);
        auto s = power_law(1.0, -2.0, 1, 2048);
        s.value[511] = 0.0; // n = 512
        CHECK_THROWS_AS(fit_exponent(s, 256, 2048), DomainError);
        CHECK_THROWS_AS(fit_exponent(s, 1, 2048), DomainError);
        CHECK_THROWS_AS(parse_statistic("median"), ConfigError);
    }

    TEST_CASE("scaling report refuses non-critical traces") {
        const auto spec = preset("delta0", Mode::Float);
        const auto tr = evolve<double>(spec, 16);
        const auto rep = scaling_report(tr, classify_phase(spec).phase);
        CHECK(rep.refused);
        CHECK(rep.notice.find("subcritical") != std::string::npos);
        CHECK_FALSE(rep.pass());
    }

    TEST_CASE("degenerate product column is flagged") {
        const auto rep = scaling_report(flat_trace(2048), Phase::Critical);
        CHECK_FALSE(rep.refused);
        for (const auto& row : rep.rows)
            CHECK(row.cols.at("product_over_n2") == doctest::Approx(1.0 / (double(row.n) * row.n)));
        bool product_failed = false;
        for (const auto& b : rep.bands)
            if (b.column == "product_over_n2") product_failed = !b.pass;
        CHECK(product_failed);
        CHECK_FALSE(rep.pass());
    }

    TEST_CASE("scaling report on a short critical run") {
        const auto spec = preset("example11", Mode::Float);
        const auto tr = evolve<double>(spec, 256);
        ScalingOptions opt;
        opt.band_lo = 32;
        opt.band_hi = 256;
        opt.tail_at = 128;
        const auto rep = scaling_report(tr, Phase::Critical, opt);
        CHECK(rep.pass());
        CHECK(rep.tail_checked);
        CHECK(rep.conjectured.at("survival_constant") == 4.0);
        CHECK(rep.rows.size() == 256);
    }
}

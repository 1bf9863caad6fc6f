#include <doctest.h>

#include <cmath>

#include "drlab/philox.hpp"
#include "drlab/presets.hpp"
#include "drlab/treesim.hpp"

using namespace drlab;

namespace {

// Per-leaf sibling sums read straight off the stored levels.
std::vector<long> xi_of(const TreeSample& t, long leaf) {
    std::vector<long> xi;
    long idx = leaf;
    for (long j = 0; j < t.n; ++j) {
        const long first = (idx / t.m) * t.m;
        long s = 0;
        for (long c = 0; c < t.m; ++c)
            if (first + c != idx) s += t.levels[j][first + c];
        xi.push_back(s);
        idx /= t.m;
    }
    return xi;
}

void check_against_definitions(const TreeSample& t, long k_max) {
    const auto counts = count_open_paths(t);
    const auto piv = find_pivotal(t, k_max);
    std::map<long, long> by_value;
    std::map<std::pair<long, long>, long> s;
    long total = 0;
    const long root = t.root();
    for (long v = 0; v < static_cast<long>(t.leaves().size()); ++v) {
        const auto xi = xi_of(t, v);
        for (long k = 0; k <= k_max; ++k) {
            long run = k;
            bool ok = true;
            for (long i = 0; i < t.n; ++i) {
                run += xi[i];
                ok = ok && run >= i + 1;
            }
            if (ok) ++s[{k, run - t.n}];
        }
        long run = t.leaves()[v];
        bool open = true;
        for (long i = 0; i < t.n; ++i) {
            run += xi[i];
            open = open && run >= i + 1;
        }
        if (open) {
            ++by_value[t.leaves()[v]];
            ++total;
            CHECK(run - t.n == root); // an open path carries its value to the root
        }
    }
    CHECK(counts.total == total);
    for (const auto& [i, c] : by_value) CHECK(counts.by_value.at(i) == c);
    for (const auto& [i, c] : counts.by_value) CHECK((c == 0 || by_value.at(i) == c));
    for (const auto& [key, c] : s) CHECK(piv.at(key) == c);
    for (const auto& [key, c] : piv) CHECK((c == 0 || s.at(key) == c));
    if (root >= 1) CHECK(total >= 1);
}

} // namespace

TEST_SUITE("treesim") {
    TEST_CASE("Philox4x32-10 known-answer vectors") {
        const auto z = Philox4x32::block({0, 0, 0, 0}, {0, 0});
        CHECK(z == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
        const auto f = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
        CHECK(f == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    }

    TEST_CASE("figure fixture") {
        const auto t = figure_fixture();
        CHECK(t.n == 4);
        CHECK(t.root() == 2);
        CHECK(t.levels[1] == std::vector<long>{0, 0, 5, 0, 0, 2, 0, 0});
        CHECK(t.levels[2] == std::vector<long>{0, 4, 1, 0});
        CHECK(check_tree(t));
        const auto c = count_open_paths(t);
        CHECK(c.by_value.at(0) == 2);
        CHECK(c.by_value.at(1) == 1);
        CHECK((c.by_value.count(2) == 0 || c.by_value.at(2) == 0));
        CHECK(c.by_value.at(3) == 3);
        CHECK(c.total == 6);
        const auto lp = leaf_paths(t);
        CHECK(lp.open[6]);
        CHECK(lp.xi_sum[6] == 6);
        CHECK(lp.need[6] == 0);
        CHECK(lp.open[4]);
        CHECK(t.leaves()[4] == 3);
        CHECK(lp.xi_sum[4] + 3 - 4 == 2);
        const auto piv = find_pivotal(t, 3);
        CHECK(piv.at({0, 2}) >= 1);
        CHECK(piv.at({3, 2}) >= 1);
        check_against_definitions(t, 6);
    }

    TEST_CASE("degenerate trees") {
        const auto z = sample_tree(preset("delta0", Mode::Float), 5, 1);
        for (const auto& level : z.levels)
            for (long v : level) CHECK(v == 0);
        CHECK(count_open_paths(z).total == 0);
        const auto leaf = build_tree(2, {3});
        CHECK(leaf.n == 0);
        CHECK(count_open_paths(leaf).by_value.at(3) == 1);
        const auto p = find_pivotal(leaf, 4);
        for (long k = 0; k <= 4; ++k) CHECK(p.at({k, k}) == 1);
        CHECK_THROWS(build_tree(2, {1, 2, 3}));
    }

    TEST_CASE("sampled trees satisfy the path definitions") {
        for (const auto& name : {"example11", "alpha-family:2:5", "supercrit-sample"}) {
            const auto spec = preset(name, Mode::Float);
            for (std::uint64_t r = 0; r < 40; ++r) {
                const auto t = sample_tree(spec, 5, 99, r);
                CHECK(check_tree(t));
                check_against_definitions(t, 4);
            }
        }
    }

    TEST_CASE("sampling is deterministic and thread-count independent") {
        const auto spec = preset("example11", Mode::Float);
        CHECK(sample_tree(spec, 6, 7, 3).levels == sample_tree(spec, 6, 7, 3).levels);
        CHECK(sample_tree(spec, 6, 7, 3).levels != sample_tree(spec, 6, 8, 3).levels);
        const auto a = monte_carlo(spec, 5, McSelector{}, 3000, 42, 1);
        const auto b = monte_carlo(spec, 5, McSelector{}, 3000, 42, 4);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].statistic == b[i].statistic);
            CHECK(a[i].estimate == b[i].estimate);
            CHECK(a[i].stderr_ == b[i].stderr_);
        }
    }

    TEST_CASE("Monte Carlo estimates") {
        const auto zero = monte_carlo(preset("delta0", Mode::Float), 4, McSelector{}, 500, 1, 2);
        for (const auto& e : zero) {
            CHECK(e.estimate == 0.0);
            CHECK(e.stderr_ == 0.0);
        }
        McSelector sel;
        sel.pivotal = sel.openpath = sel.mean = false;
        const auto one = monte_carlo(preset("example11", Mode::Float), 1, sel, 100000, 5, 2);
        bool found = false;
        for (const auto& e : one)
            if (e.statistic == "P[X>=1]") {
                found = true;
                CHECK(std::fabs(e.estimate - 0.36) <= 4 * e.stderr_);
            }
        CHECK(found);
        const auto spec = preset("example11", Mode::Float);
        const auto est = monte_carlo(spec, 4, McSelector{}, 20000, 3, 2);
        for (const auto& c : compare_with_exact(spec, 4, McSelector{}, est)) {
            CAPTURE(c.statistic);
            CHECK(std::fabs(c.z) <= 4.0);
        }
    }

    TEST_CASE("coupling") {
        const auto spec = preset("example11", Mode::Float);
        const auto none = coupling_experiment(spec, {}, 4, 500, 2, 2);
        CHECK(none.premise_held == none.reps);
        CHECK(none.root_violations == 0);
        CHECK(none.order_violations == 0);
        const auto all = coupling_experiment(spec, {2}, 5, 2000, 2, 2);
        CHECK(all.premise_held > 0);
        CHECK(all.premise_held < all.reps);
        CHECK(all.root_violations == 0);
        CHECK(all.order_violations == 0);
    }

    TEST_CASE("leaf budget") {
        CHECK_THROWS_AS(sample_tree(preset("example11", Mode::Float), 30, 1), ResourceError);
    }
}

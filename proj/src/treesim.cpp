#include "drlab/treesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>
#include <cstdio>

#include "drlab/pathcalc.hpp"
#include "drlab/philox.hpp"

namespace drlab {

namespace {

std::uint64_t leaf_count(long m, long n, std::uint64_t budget) {
    std::uint64_t leaves = 1;
    for (long j = 0; j < n; ++j) {
        if (leaves > budget / static_cast<std::uint64_t>(m))
            throw ResourceError("tree with m^n leaves exceeds the leaf budget of " + std::to_string(budget));
        leaves *= static_cast<std::uint64_t>(m);
    }
    if (leaves > budget) throw ResourceError("tree exceeds the leaf budget of " + std::to_string(budget));
    return leaves;
}

void fill_inner(TreeSample& t) {
    for (long j = 0; j < t.n; ++j) {
        const auto& lo = t.levels[j];
        std::vector<long> up(lo.size() / t.m);
        for (std::size_t g = 0; g < up.size(); ++g) {
            long s = 0;
            for (long r = 0; r < t.m; ++r) s += lo[g * t.m + r];
            up[g] = std::max(s - 1, 0L);
        }
        t.levels.push_back(std::move(up));
    }
}

// Inverse-CDF sampler over the initial law.
struct LeafSampler {
    std::vector<long> values;
    std::vector<double> cdf;

    explicit LeafSampler(const SystemSpec& spec) {
        Rational acc = 0;
        for (const auto& [x, p] : spec.initial) {
            acc += p;
            values.push_back(x);
            cdf.push_back(nearest_double(acc));
        }
        cdf.back() = 1.0;
    }

    long draw(double u) const {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return values[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), values.size() - 1))];
    }
};

std::vector<long> draw_leaves(const LeafSampler& s, std::uint64_t count, std::uint64_t seed, std::uint64_t rep) {
    std::vector<long> leaves(count);
    for (std::uint64_t v = 0; v < count; ++v) leaves[v] = s.draw(Philox4x32::uniform(seed, v, rep));
    return leaves;
}

enum CellType : int { kPivotal = 0, kOpen = 1, kSurvival = 2, kMean = 3 };

struct CellKey {
    int type;
    long a, b;
    bool operator<(const CellKey& o) const {
        return std::tie(type, a, b) < std::tie(o.type, o.a, o.b);
    }
};

struct CellSum {
    long long sum = 0;
    __int128 sumsq = 0;
};

std::string cell_name(const CellKey& k) {
    std::ostringstream os;
    switch (k.type) {
    case kPivotal: os << "S[k=" << k.a << ",l=" << k.b << "]"; break;
    case kOpen: os << "N[i=" << k.a << ",l=" << k.b << "]"; break;
    case kSurvival: os << "P[X>=" << k.a << "]"; break;
    default: os << "E[X]"; break;
    }
    return os.str();
}

bool parse_cell(const std::string& name, CellKey& k) {
    long a = 0, b = 0;
    if (std::sscanf(name.c_str(), "S[k=%ld,l=%ld]", &a, &b) == 2) {
        k = {kPivotal, a, b};
        return true;
    }
    if (std::sscanf(name.c_str(), "N[i=%ld,l=%ld]", &a, &b) == 2) {
        k = {kOpen, a, b};
        return true;
    }
    if (std::sscanf(name.c_str(), "P[X>=%ld]", &a) == 1) {
        k = {kSurvival, a, 0};
        return true;
    }
    if (name == "E[X]") {
        k = {kMean, 0, 0};
        return true;
    }
    return false;
}

void tally_tree(const TreeSample& t, const McSelector& sel, std::map<CellKey, CellSum>& acc) {
    std::map<CellKey, long long> cell;
    const long root = t.root();
    if (sel.pivotal || sel.openpath) {
        const LeafPaths lp = leaf_paths(t);
        const auto& leaves = t.leaves();
        for (std::size_t v = 0; v < leaves.size(); ++v) {
            if (sel.pivotal) {
                for (long k = lp.need[v]; k <= sel.k_max; ++k) ++cell[{kPivotal, k, k + lp.xi_sum[v] - t.n}];
            }
            if (sel.openpath && lp.open[v] && leaves[v] <= sel.i_max) ++cell[{kOpen, leaves[v], root}];
        }
    }
    if (sel.survival)
        for (long l = 1; l <= sel.ell_max; ++l) cell[{kSurvival, l, 0}] += root >= l ? 1 : 0;
    if (sel.mean) cell[{kMean, 0, 0}] += root;
    for (const auto& [key, c] : cell) {
        auto& s = acc[key];
        s.sum += c;
        s.sumsq += static_cast<__int128>(c) * c;
    }
}

} // namespace

int default_threads() {
    if (const char* env = std::getenv("DRLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

TreeSample build_tree(long m, std::vector<long> leaves) {
    if (m < 2) throw ConfigError("tree needs m >= 2");
    TreeSample t;
    t.m = m;
    std::size_t count = leaves.size();
    while (count > 1) {
        if (count % static_cast<std::size_t>(m) != 0) throw ConfigError("leaf count is not a power of m");
        count /= static_cast<std::size_t>(m);
        ++t.n;
    }
    if (leaves.empty()) throw ConfigError("tree needs at least one leaf");
    for (long v : leaves)
        if (v < 0) throw ConfigError("leaf values must be non-negative");
    t.levels.push_back(std::move(leaves));
    fill_inner(t);
    return t;
}

TreeSample sample_tree(const SystemSpec& spec, long n, std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t leaf_budget) {
    spec.validate();
    if (n < 0) throw DomainError("sample_tree: n must be >= 0");
    const std::uint64_t count = leaf_count(spec.m, n, leaf_budget);
    LeafSampler sampler(spec);
    TreeSample t = build_tree(spec.m, draw_leaves(sampler, count, seed, replicate));
    t.seed = seed;
    t.replicate = replicate;
    return t;
}

bool check_tree(const TreeSample& t) {
    if (t.levels.size() != static_cast<std::size_t>(t.n + 1)) return false;
    TreeSample r = build_tree(t.m, t.levels.front());
    return r.levels == t.levels;
}

LeafPaths leaf_paths(const TreeSample& t) {
    // Walk from e_n down to the leaves carrying, for each vertex u on level j,
    // the sibling-sum suffix R(u) = xi_j + ... + xi_{n-1}, the least starting
    // value that crosses levels j..n-1 without truncation, and openness.
    std::vector<long> need{0}, rsum{0};
    std::vector<char> open{1};
    for (long j = t.n - 1; j >= 0; --j) {
        const auto& lv = t.levels[j];
        std::vector<long> need2(lv.size()), rsum2(lv.size());
        std::vector<char> open2(lv.size());
        for (std::size_t u = 0; u < lv.size(); ++u) {
            const std::size_t c = u / static_cast<std::size_t>(t.m);
            long parent_sum = 0;
            for (long r = 0; r < t.m; ++r) parent_sum += lv[c * t.m + r];
            const long xi = parent_sum - lv[u];
            rsum2[u] = xi + rsum[c];
            need2[u] = std::max(0L, 1 - xi + need[c]);
            open2[u] = static_cast<char>(open[c] && parent_sum >= 1);
        }
        need.swap(need2);
        rsum.swap(rsum2);
        open.swap(open2);
    }
    return {std::move(open), std::move(rsum), std::move(need)};
}

OpenPathCounts count_open_paths(const TreeSample& t) {
    const LeafPaths lp = leaf_paths(t);
    OpenPathCounts c;
    const auto& leaves = t.leaves();
    for (std::size_t v = 0; v < leaves.size(); ++v) {
        if (!lp.open[v]) continue;
        ++c.by_value[leaves[v]];
        ++c.total;
    }
    return c;
}

std::map<std::pair<long, long>, long> find_pivotal(const TreeSample& t, long k_max) {
    if (k_max < 0) throw DomainError("find_pivotal: k_max must be >= 0");
    const LeafPaths lp = leaf_paths(t);
    std::map<std::pair<long, long>, long> out;
    for (std::size_t v = 0; v < lp.need.size(); ++v)
        for (long k = lp.need[v]; k <= k_max; ++k) ++out[{k, k + lp.xi_sum[v] - t.n}];
    return out;
}

TreeSample figure_fixture() {
    return build_tree(2, {1, 0, 0, 0, 3, 3, 0, 1, 0, 0, 0, 3, 0, 0, 1, 0});
}

std::vector<McEstimate> monte_carlo(const SystemSpec& spec, long n, const McSelector& sel, long reps,
                                    std::uint64_t seed, int threads) {
    spec.validate();
    if (reps < 2) throw DomainError("monte_carlo: reps must be >= 2");
    if (n < 0) throw DomainError("monte_carlo: n must be >= 0");
    const std::uint64_t count = leaf_count(spec.m, n, kDefaultLeafBudget);
    const LeafSampler sampler(spec);
    threads = std::max(1, std::min<int>(threads, static_cast<int>(reps)));
    std::vector<std::map<CellKey, CellSum>> partial(static_cast<std::size_t>(threads));
    auto work = [&](int tid) {
        for (long r = tid; r < reps; r += threads) {
            TreeSample t = build_tree(spec.m, draw_leaves(sampler, count, seed, static_cast<std::uint64_t>(r)));
            tally_tree(t, sel, partial[static_cast<std::size_t>(tid)]);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
        for (auto& th : pool) th.join();
    }
    std::map<CellKey, CellSum> acc;
    for (const auto& part : partial)
        for (const auto& [key, s] : part) {
            acc[key].sum += s.sum;
            acc[key].sumsq += s.sumsq;
        }
    if (sel.survival)
        for (long l = 1; l <= sel.ell_max; ++l) acc[{kSurvival, l, 0}];
    if (sel.mean) acc[{kMean, 0, 0}];
    std::vector<McEstimate> out;
    const double r = static_cast<double>(reps);
    for (const auto& [key, s] : acc) {
        McEstimate e;
        e.statistic = cell_name(key);
        e.estimate = static_cast<double>(s.sum) / r;
        // Centered sum of squares from exact integers: sumsq - sum^2 / reps.
        const long double ss = static_cast<long double>(s.sumsq) -
                                static_cast<long double>(s.sum) * static_cast<long double>(s.sum) / reps;
        const double var = static_cast<double>(std::max<long double>(ss, 0.0L)) / (r - 1.0);
        e.stderr_ = std::sqrt(var / r);
        e.reps = reps;
        e.seed = seed;
        out.push_back(e);
    }
    return out;
}

std::vector<McComparison> compare_with_exact(const SystemSpec& spec, long n, const McSelector& sel,
                                             const std::vector<McEstimate>& est) {
    std::map<CellKey, const McEstimate*> by_key;
    long ell_top = sel.ell_max;
    long reps = 2;
    for (const auto& e : est) {
        CellKey k{};
        if (!parse_cell(e.statistic, k)) throw ConfigError("unknown statistic '" + e.statistic + "'");
        by_key[k] = &e;
        if (k.type == kPivotal || k.type == kOpen) ell_top = std::max(ell_top, k.b);
        reps = e.reps;
    }
    std::map<CellKey, double> exact;
    SystemSpec rs = spec;
    rs.mode = Mode::Rational;
    rs.eps = 0.0;
    auto ctx = make_context<Rational>(rs, n, ell_top + 1);
    if (sel.pivotal)
        for (long k = 0; k <= sel.k_max; ++k) {
            const auto s = pivotal_expectations(ctx, k, n);
            for (long l = 0; l <= ell_top; ++l) exact[{kPivotal, k, l}] = nearest_double(s.at(n).value(l));
        }
    if (sel.openpath)
        for (long i = 0; i <= sel.i_max; ++i) {
            const auto w = openpath_measure(ctx, i, n);
            for (long l = 0; l <= ell_top; ++l) exact[{kOpen, i, l}] = nearest_double(w.at(n).value(l));
        }
    const auto& pn = ctx.trace.pmfs.at(n);
    const Rational total = pn.full() ? pn.full()->plain[0] : plain_total(pn);
    if (sel.survival) {
        Rational below = 0;
        for (long l = 1; l <= sel.ell_max; ++l) {
            below += pn.value(static_cast<std::size_t>(l - 1));
            exact[{kSurvival, l, 0}] = nearest_double(Rational(total - below));
        }
    }
    if (sel.mean) exact[{kMean, 0, 0}] = nearest_double(ctx.trace.gens.at(n).mean);

    // Variance bounds used when a cell's sample variance is 0.
    const double counts_bound = std::pow(static_cast<double>(spec.m), static_cast<double>(n));
    const double max_root = static_cast<double>(spec.max_value()) * counts_bound;
    std::vector<McComparison> out;
    for (const auto& [key, ex] : exact) {
        const McEstimate* e = by_key.count(key) ? by_key[key] : nullptr;
        if (!e && ex == 0.0) continue;
        McComparison c;
        c.statistic = cell_name(key);
        c.exact = ex;
        c.estimate = e ? e->estimate : 0.0;
        c.stderr_ = e ? e->stderr_ : 0.0;
        double se = c.stderr_;
        if (se == 0.0) {
            const double bound = key.type == kSurvival ? 1.0 : (key.type == kMean ? max_root : counts_bound);
            se = std::sqrt(bound * std::fabs(ex) / static_cast<double>(reps));
            c.stderr_floored = true;
        }
        const double diff = std::fabs(c.estimate - ex);
        c.z = diff == 0.0 ? 0.0 : (se > 0.0 ? diff / se : std::numeric_limits<double>::infinity());
        out.push_back(c);
    }
    // Cells observed by simulation but absent from the exact table.
    for (const auto& [key, e] : by_key) {
        if (exact.count(key)) continue;
        McComparison c;
        c.statistic = e->statistic;
        c.estimate = e->estimate;
        c.stderr_ = e->stderr_;
        c.exact = std::numeric_limits<double>::quiet_NaN();
        c.z = std::numeric_limits<double>::infinity();
        out.push_back(c);
    }
    return out;
}

CouplingReport coupling_experiment(const SystemSpec& spec, const std::set<long>& B, long n, long reps,
                                   std::uint64_t seed, int threads) {
    spec.validate();
    if (reps < 1) throw DomainError("coupling_experiment: reps must be >= 1");
    const std::uint64_t count = leaf_count(spec.m, n, kDefaultLeafBudget);
    const LeafSampler sampler(spec);
    threads = std::max(1, std::min<int>(threads, static_cast<int>(reps)));
    std::vector<CouplingReport> part(static_cast<std::size_t>(threads));
    auto work = [&](int tid) {
        auto& rep = part[static_cast<std::size_t>(tid)];
        for (long r = tid; r < reps; r += threads) {
            auto leaves = draw_leaves(sampler, count, seed, static_cast<std::uint64_t>(r));
            auto hat = leaves;
            for (auto& v : hat)
                if (B.count(v)) v = 0;
            const TreeSample tx = build_tree(spec.m, std::move(leaves));
            const TreeSample th = build_tree(spec.m, std::move(hat));
            ++rep.reps;
            const LeafPaths lp = leaf_paths(tx);
            bool premise = true;
            for (std::size_t v = 0; v < tx.leaves().size(); ++v)
                if (lp.open[v] && B.count(tx.leaves()[v])) premise = false;
            bool ordered = true;
            for (std::size_t j = 0; j < tx.levels.size(); ++j)
                for (std::size_t g = 0; g < tx.levels[j].size(); ++g)
                    if (th.levels[j][g] > tx.levels[j][g]) ordered = false;
            if (!ordered) ++rep.order_violations;
            if (premise) {
                ++rep.premise_held;
                if (tx.root() != th.root()) ++rep.root_violations;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
        for (auto& th : pool) th.join();
    }
    CouplingReport out;
    out.B = B;
    for (const auto& p : part) {
        out.reps += p.reps;
        out.premise_held += p.premise_held;
        out.root_violations += p.root_violations;
        out.order_violations += p.order_violations;
    }
    return out;
}

} // namespace drlab

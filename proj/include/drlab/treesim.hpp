#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drlab/evolution.hpp"

namespace drlab {

inline constexpr std::uint64_t kDefaultLeafBudget = 1ULL << 26;

/// One realization of the reversed m-ary tree: levels[0] holds the m^n leaves,
/// levels[n] the single vertex e_n. Vertex g of level j+1 has parents
/// m*g .. m*g+m-1 on level j.
struct TreeSample {
    long m = 2;
    long n = 0;
    std::vector<std::vector<long>> levels;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    long root() const { return levels.back().front(); }
    const std::vector<long>& leaves() const { return levels.front(); }
};

/// Per-leaf path data, computed from the sibling sums alone.
struct LeafPaths {
    std::vector<char> open;    // path from the leaf to e_n is open
    std::vector<long> xi_sum;  // xi_0 + ... + xi_{n-1}
    std::vector<long> need;    // least k with k + xi_0 + ... + xi_i >= i + 1 for all i
};

struct OpenPathCounts {
    std::map<long, long> by_value; // i -> N_n^(i)
    long total = 0;                 // N_n
};

struct CouplingReport {
    long reps = 0;
    long premise_held = 0;
    long root_violations = 0;  // premise held but roots differ
    long order_violations = 0; // some vertex with hat X > X
    std::set<long> B;
};

struct McEstimate {
    std::string statistic;
    double estimate = 0.0;
    double stderr_ = 0.0;
    long reps = 0;
    std::uint64_t seed = 0;
};

/// Which statistics monte_carlo estimates.
struct McSelector {
    bool pivotal = true;  // E[S_n^(k,l)], k <= k_max
    bool openpath = true; // E[N_n^(i) 1{X_n = l}], i <= i_max
    bool survival = true; // P(X_n >= l), 1 <= l <= ell_max
    bool mean = true;     // E X_n
    long k_max = 3;
    long i_max = 3;
    long ell_max = 8;
};

struct McComparison {
    std::string statistic;
    double estimate = 0.0, stderr_ = 0.0, exact = 0.0, z = 0.0;
    bool stderr_floored = false; // sample stderr was 0 and a variance bound was used
};

TreeSample build_tree(long m, std::vector<long> leaves);
TreeSample sample_tree(const SystemSpec& spec, long n, std::uint64_t seed, std::uint64_t replicate = 0,
                       std::uint64_t leaf_budget = kDefaultLeafBudget);
/// Recomputes every inner level from the leaves; true when they match.
bool check_tree(const TreeSample& t);
LeafPaths leaf_paths(const TreeSample& t);
OpenPathCounts count_open_paths(const TreeSample& t);
/// (k, l) -> S_n^(k,l) for k <= k_max.
std::map<std::pair<long, long>, long> find_pivotal(const TreeSample& t, long k_max);
TreeSample figure_fixture();

/// Replicates sample_tree with replicate index r = 0..reps-1 under one seed.
/// Sums are integer-exact, so the result does not depend on `threads`.
std::vector<McEstimate> monte_carlo(const SystemSpec& spec, long n, const McSelector& sel, long reps,
                                    std::uint64_t seed, int threads = 1);

/// Exact values of the same statistics from the recursions (rational arithmetic).
std::vector<McComparison> compare_with_exact(const SystemSpec& spec, long n, const McSelector& sel,
                                             const std::vector<McEstimate>& est);

CouplingReport coupling_experiment(const SystemSpec& spec, const std::set<long>& B, long n, long reps,
                                   std::uint64_t seed, int threads = 1);

/// DRLAB_THREADS or 1.
int default_threads();

} // namespace drlab

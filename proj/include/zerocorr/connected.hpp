#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "zerocorr/covariance.hpp"
#include "zerocorr/parallel.hpp"

namespace zerocorr {

/// Set partition of {0, ..., n-1}; blocks sorted, ordered by smallest element.
struct Partition {
    std::vector<std::vector<int>> blocks;

    unsigned block_mask(std::size_t b) const;
};

inline constexpr int kMaxPartitionOrder = 7;

/// All Bell(n) partitions, in restricted-growth-string order.
std::vector<Partition> partitions(int n);

/// Normalized correlation of a sub-configuration, e.g. K~ of its points.
using SubsetEvaluator = std::function<double(const PointConfiguration&)>;

/// Exact-Wick K~_{n k m} evaluator for arbitrary sub-configurations.
SubsetEvaluator limit_evaluator(int k, int m);

struct ConnectedValue {
    double value = 0.0;
    int order = 0;
};

/// T~ = sum_G (-1)^{l+1} (l-1)! prod_j K~(G_j). K~ is queried once per point
/// subset.
ConnectedValue connected_correlation(const PointConfiguration& config,
                                     const SubsetEvaluator& ktilde);

/// K~ = sum_G prod_j T~(G_j).
double moebius_reconstruct(const PointConfiguration& config, const SubsetEvaluator& ttilde);

/// Mask-level forms of the two sums; f(mask) gives the value on a subset.
double connected_from_subsets(int n, const std::function<double(unsigned)>& ktilde);
double moebius_from_subsets(int n, const std::function<double(unsigned)>& ttilde);

/// Oriented multigraph on {0, ..., n-1}.
struct BalancedGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // (initial, final)

    /// Connected, every vertex touched, in-degree == out-degree everywhere.
    bool valid() const;
};

struct DecayBound {
    double value = 0.0;
    BalancedGraph maximizer;
    std::size_t graphs_checked = 0;  // valid balanced connected graphs seen
};

inline constexpr int kMaxDecayOrder = 5;

/// d(z) = max over balanced connected graphs of prod_edges t e^{-t/2},
/// t = |z^i - z^f|^2, with at most edge_cap edges (default 2(n-1)).
/// For n = 1 the empty graph gives d = 1.
DecayBound decay_bound(const PointConfiguration& config, int edge_cap = -1,
                       Exec exec = Exec::parallel);

struct DecayRow {
    double R = 0.0;  // max pairwise distance
    double connected = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double max_ratio = 0.0;
    double slope = 0.0;  // least-squares slope of log|T~| against R^2
    double slope_limit = 0.0;  // -1/(n-1) + 0.1
};

inline constexpr double kDecayMinSeparation = 0.5;

/// |T~| / d(z) and the decay exponent over a family of n-point
/// configurations, each with min separation >= kDecayMinSeparation.
DecayReport decay_check(const std::vector<PointConfiguration>& family, const SubsetEvaluator& ktilde);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace zerocorr

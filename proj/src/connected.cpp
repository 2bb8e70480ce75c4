#include "zerocorr/connected.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "zerocorr/correlations.hpp"
#include "zerocorr/error.hpp"

namespace zerocorr {

unsigned Partition::block_mask(std::size_t b) const {
    unsigned mask = 0;
    for (int i : blocks[b]) mask |= 1u << i;
    return mask;
}

std::vector<Partition> partitions(int n) {
    if (n < 1 || n > kMaxPartitionOrder) {
        throw SizeError("partitions: n must be in [1, " + std::to_string(kMaxPartitionOrder) + "]");
    }
    std::vector<Partition> out;
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(n, 0);
    std::vector<int> prefix_max(n, 0);
    while (true) {
        Partition part;
        const int nblocks = prefix_max[n - 1] + 1;
        part.blocks.resize(nblocks);
        for (int i = 0; i < n; ++i) part.blocks[a[i]].push_back(i);
        out.push_back(std::move(part));

        int i = n - 1;
        while (i > 0 && a[i] == prefix_max[i - 1] + 1) --i;
        if (i == 0) break;
        ++a[i];
        prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
        for (int j = i + 1; j < n; ++j) {
            a[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
    return out;
}

SubsetEvaluator limit_evaluator(int k, int m) {
    return [k, m](const PointConfiguration& sub) {
        if (sub.n() == 1) return 1.0;
        CorrelationRequest req{sub.n(), k, m, sub, Method::exact_wick, {}};
        return limit_correlation(req).normalized;
    };
}

namespace {

double factorial(int l) {
    double f = 1.0;
    for (int i = 2; i <= l; ++i) f *= i;
    return f;
}

// Subset values memoized by mask; the partition sums revisit blocks often.
class SubsetCache {
public:
    explicit SubsetCache(const std::function<double(unsigned)>& f) : f_(f) {}

    double operator()(unsigned mask) {
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
        const double v = f_(mask);
        cache_.emplace(mask, v);
        return v;
    }

private:
    const std::function<double(unsigned)>& f_;
    std::unordered_map<unsigned, double> cache_;
};

}  // namespace

double connected_from_subsets(int n, const std::function<double(unsigned)>& ktilde) {
    SubsetCache cache(ktilde);
    double total = 0.0;
    for (const Partition& part : partitions(n)) {
        const int l = static_cast<int>(part.blocks.size());
        double term = ((l + 1) % 2 == 0 ? 1.0 : -1.0) * factorial(l - 1);
        for (std::size_t b = 0; b < part.blocks.size(); ++b) term *= cache(part.block_mask(b));
        total += term;
    }
    return total;
}

double moebius_from_subsets(int n, const std::function<double(unsigned)>& ttilde) {
    SubsetCache cache(ttilde);
    double total = 0.0;
    for (const Partition& part : partitions(n)) {
        double term = 1.0;
        for (std::size_t b = 0; b < part.blocks.size(); ++b) term *= cache(part.block_mask(b));
        total += term;
    }
    return total;
}

ConnectedValue connected_correlation(const PointConfiguration& config,
                                     const SubsetEvaluator& ktilde) {
    const int n = config.n();
    if (n == 1) return {1.0, 1};
    const std::function<double(unsigned)> f = [&](unsigned mask) {
        return ktilde(config.subset(mask));
    };
    return {connected_from_subsets(n, f), n};
}

double moebius_reconstruct(const PointConfiguration& config, const SubsetEvaluator& ttilde) {
    const std::function<double(unsigned)> f = [&](unsigned mask) {
        return ttilde(config.subset(mask));
    };
    return moebius_from_subsets(config.n(), f);
}

bool BalancedGraph::valid() const {
    if (vertices < 1) return false;
    if (vertices == 1) return edges.empty();
    std::vector<int> balance(vertices, 0);
    std::vector<int> degree(vertices, 0);
    std::vector<int> parent(vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [i, f] : edges) {
        if (i < 0 || f < 0 || i >= vertices || f >= vertices || i == f) return false;
        ++balance[i];
        --balance[f];
        ++degree[i];
        ++degree[f];
        parent[find(i)] = find(f);
    }
    for (int v = 0; v < vertices; ++v) {
        if (balance[v] != 0 || degree[v] == 0 || find(v) != find(0)) return false;
    }
    return true;
}

namespace {

// Depth-first enumeration of multiplicity vectors over the ordered vertex
// pairs. Each leaf is a candidate multigraph with at most `cap` edges.
class GraphSearch {
public:
    GraphSearch(int n, std::vector<std::pair<int, int>> pairs, std::vector<double> weight, int cap)
        : n_(n), pairs_(std::move(pairs)), weight_(std::move(weight)), cap_(cap),
          mult_(pairs_.size(), 0) {}

    void run_from(std::size_t first, int used, double product) {
        if (first == pairs_.size()) {
            visit(used, product);
            return;
        }
        double p = product;
        for (int c = 0; used + c <= cap_; ++c) {
            mult_[first] = c;
            run_from(first + 1, used + c, p);
            p *= weight_[first];
        }
        mult_[first] = 0;
    }

    void set_prefix(std::size_t index, int count) { mult_[index] = count; }

    double best = -1.0;
    std::vector<int> best_mult;
    std::size_t checked = 0;

private:
    void visit(int used, double product) {
        if (used == 0) return;
        std::vector<int> balance(n_, 0);
        std::vector<int> degree(n_, 0);
        std::vector<int> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (std::size_t e = 0; e < pairs_.size(); ++e) {
            if (mult_[e] == 0) continue;
            const auto [i, f] = pairs_[e];
            balance[i] += mult_[e];
            balance[f] -= mult_[e];
            degree[i] += mult_[e];
            degree[f] += mult_[e];
            parent[find(i)] = find(f);
        }
        for (int v = 0; v < n_; ++v) {
            if (balance[v] != 0 || degree[v] == 0 || find(v) != find(0)) return;
        }
        ++checked;
        if (product > best) {
            best = product;
            best_mult = mult_;
        }
    }

    int n_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<double> weight_;
    int cap_;
    std::vector<int> mult_;
};

}  // namespace

DecayBound decay_bound(const PointConfiguration& config, int edge_cap, Exec exec) {
    const int n = config.n();
    if (n > kMaxDecayOrder) {
        throw SizeError("decay_bound: n must be at most " + std::to_string(kMaxDecayOrder));
    }
    DecayBound out;
    out.maximizer.vertices = n;
    if (n == 1) {
        out.value = 1.0;
        out.graphs_checked = 1;
        return out;
    }
    const int cap = edge_cap < 0 ? 2 * (n - 1) : edge_cap;
    if (cap < 2) throw InputError("decay_bound: edge cap must be at least 2");

    std::vector<std::pair<int, int>> pairs;
    std::vector<double> weight;
    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < n; ++f) {
            if (i == f) continue;
            const double d = distance(config.point(i), config.point(f));
            const double t = d * d;
            pairs.emplace_back(i, f);
            weight.push_back(t * std::exp(-0.5 * t));
        }
    }

    // Tasks are the multiplicities of the first ordered pair; the merge runs
    // in task order with strict comparison so ties resolve identically.
    const int tasks = cap + 1;
    std::vector<GraphSearch> searches(tasks, GraphSearch(n, pairs, weight, cap));
    auto run_task = [&](int c) {
        searches[c].set_prefix(0, c);
        searches[c].run_from(1, c, std::pow(weight[0], c));
    };
    if (exec == Exec::serial) {
        for (int c = 0; c < tasks; ++c) run_task(c);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (int c = 0; c < tasks; ++c) run_task(c);
    }

    double best = -1.0;
    const std::vector<int>* best_mult = nullptr;
    for (const GraphSearch& s : searches) {
        out.graphs_checked += s.checked;
        if (s.best > best) {
            best = s.best;
            best_mult = &s.best_mult;
        }
    }
    if (best_mult == nullptr) throw NumericalError("decay_bound: no balanced graph found");
    out.value = best;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        for (int c = 0; c < (*best_mult)[e]; ++c) out.maximizer.edges.push_back(pairs[e]);
    }
    return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InputError("fit_slope: need two or more points");
    const double nx = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nx;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / nx;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InputError("fit_slope: degenerate abscissae");
    return sxy / sxx;
}

DecayReport decay_check(const std::vector<PointConfiguration>& family,
                        const SubsetEvaluator& ktilde) {
    if (family.empty()) throw InputError("decay_check: empty configuration family");
    const int n = family.front().n();
    if (n < 2) throw InputError("decay_check: need at least two points");
    DecayReport report;
    report.slope_limit = -1.0 / (n - 1) + 0.1;
    std::vector<double> r2;
    std::vector<double> logt;
    for (const PointConfiguration& config : family) {
        if (config.n() != n) throw InputError("decay_check: family mixes point counts");
        if (config.min_separation() < kDecayMinSeparation) {
            throw InputError("decay_check: configuration violates the minimum separation 0.5");
        }
        DecayRow row;
        row.R = config.max_separation();
        row.connected = connected_correlation(config, ktilde).value;
        row.bound = decay_bound(config).value;
        row.ratio = std::abs(row.connected) / row.bound;
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        report.rows.push_back(row);
        if (row.connected != 0.0) {
            r2.push_back(row.R * row.R);
            logt.push_back(std::log(std::abs(row.connected)));
        }
    }
    report.slope = r2.size() >= 2 ? fit_slope(r2, logt) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

}  // namespace zerocorr

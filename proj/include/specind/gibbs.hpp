#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "specind/budgets.hpp"
#include "specind/graph.hpp"

namespace specind {

enum class ModelKind { ising, hardcore, general };

/// Two-spin Gibbs specification (beta, gamma, lambda) with 0 <= beta <= gamma.
/// Ising fixes beta = gamma, lambda = 1; hard-core fixes beta = 0, gamma = 1.
struct GibbsParams {
    double beta = 1.0;
    double gamma = 1.0;
    double lambda = 1.0;
    ModelKind kind = ModelKind::general;

    static GibbsParams ising(double beta);
    static GibbsParams hardcore(double lambda);
    static GibbsParams general(double beta, double gamma, double lambda);
};

/// Boundary condition: spins pinned at a vertex subset. Entries are +1, -1,
/// or 0 for free vertices.
class Pinning {
  public:
    Pinning() = default;
    explicit Pinning(int n) : spin_(n, 0) {}
    Pinning(int n, const std::vector<std::pair<int, int>>& pins);

    int size() const { return static_cast<int>(spin_.size()); }
    int spin(int v) const { return spin_[v]; }
    bool pinned(int v) const { return spin_[v] != 0; }
    void pin(int v, int s);
    void unpin(int v) { spin_[v] = 0; }
    int num_pinned() const;
    std::vector<int> free_vertices() const;

  private:
    std::vector<int> spin_;
};

/// Enumerates the free-vertex configurations with their log Gibbs weights.
/// States of weight zero (hard constraints) are skipped. The callback gets
/// the full spin vector (+1/-1 per vertex) and the log weight.
void for_each_state(const Graph& g, const GibbsParams& p, const Pinning& pin,
                    const Budgets& budgets,
                    const std::function<void(const std::vector<int>&, double)>& fn);

/// Exact conditional marginals mu_v(+1 | pin) for all vertices (pinned ones
/// report 0/1). Throws EmptySupport when the conditional support is empty.
std::vector<double> brute_marginals(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                    const Budgets& budgets = {});

/// log(mu_root(+1|pin) / mu_root(-1|pin)), with +-infinity allowed.
double log_ratio(const Graph& g, const GibbsParams& p, const Pinning& pin, int root,
                 const Budgets& budgets = {});

/// One-variable derivative of the log-ratio recursion,
/// h(x) = -(1 - beta gamma) e^x / ((beta e^x + 1)(e^x + gamma)),
/// evaluated as a limit at +-infinity.
double h_of(const GibbsParams& p, double x);

/// log of the factor (beta e^x + 1)/(e^x + gamma) entering H_d, stable for
/// extended-real x.
double log_ratio_factor(const GibbsParams& p, double x);

struct TreeRecursionResult {
    double H; // H_d(x_1..x_d)
    std::vector<double> h; // h(x_i)
};

TreeRecursionResult tree_recursion(const GibbsParams& p, const std::vector<double>& xs);

/// Closed-form sup over extended reals of |h|.
double sup_abs_h(const GibbsParams& p);

/// Hard-core tree-uniqueness threshold lambda_c(z) = z^z/(z-1)^(z+1), z > 1.
double lambda_c(double z);

/// Inverse map of lambda_c, by bisection.
double delta_c(double lambda);

/// Ising uniqueness-style interval [(k-1+d)/(k+1-d), (k+1-d)/(k-1+d)].
std::pair<double, double> ising_interval(double k, double delta);

/// J_d, the interval containing all log-ratios of a vertex with d children
/// (extended reals; hard-core left endpoint is -infinity).
std::pair<double, double> log_ratio_range(const GibbsParams& p, int d);

/// Hard-core boundary elimination: drops every pinned vertex and every
/// neighbor of an occupied pinned vertex; marginals of survivors are
/// unchanged. Result may be a forest.
struct ReducedGraph {
    std::vector<std::vector<int>> adj; // over surviving vertices, re-indexed
    std::vector<int> orig;             // new index -> original vertex id
};

ReducedGraph hardcore_reduce(const Graph& g, const Pinning& pin);

struct MarginalLowerBound {
    double b = 1.0;
    bool exhaustive = true;
};

/// Minimum in-support conditional marginal over pinnings ("b-marginally
/// bounded" constant). Exhaustive over all (Lambda, tau) within budget,
/// otherwise a seeded sample (flagged approximate).
MarginalLowerBound marginal_lower_bound(const Graph& g, const GibbsParams& p,
                                        const Budgets& budgets = {}, int samples = 2000,
                                        std::uint64_t seed = 1);

} // namespace specind

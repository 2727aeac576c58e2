#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specind/budgets.hpp"
#include "specind/gibbs.hpp"
#include "specind/graph.hpp"

namespace specind {

enum class InfluenceRoute { bruteforce, saw };

/// Pairwise influence matrix indexed by the free vertices: entry (w, u) is
/// mu_u(+1 | pin, w=+1) - mu_u(+1 | pin, w=-1).
struct InfluenceMatrix {
    Eigen::MatrixXd I;
    std::vector<int> verts; // row/column -> original vertex id
    InfluenceRoute route = InfluenceRoute::bruteforce;
    /// Rows where the (w,+1) conditioning had empty support; those marginal
    /// terms were taken as 0 and the row is excluded from route-equivalence
    /// claims.
    std::vector<int> flagged_rows;
    /// mu_v(+1 | pin) per free vertex; empty for the SAW route.
    Eigen::VectorXd marginals;
};

InfluenceMatrix influence_bruteforce(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                     const Budgets& budgets = {});

InfluenceMatrix influence_via_saw(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                  const Budgets& budgets = {});

struct EigenSummary {
    double theta_max = 0.0; // largest eigenvalue (largest real part)
    double rho = 0.0;       // spectral radius
    bool real_spectrum = true;
};

/// Largest eigenvalue and spectral radius of an influence matrix. When the
/// conditional marginals are available and non-degenerate, the matrix is
/// symmetrized by the diagonal similarity D = diag(sqrt(mu(1-mu))); otherwise
/// a real Schur decomposition is used and near-real eigenvalues are reported.
EigenSummary influence_spectrum(const InfluenceMatrix& m);

struct Coverage {
    bool exhaustive = true;
    int samples = 0;
    std::uint64_t seed = 0;

    static Coverage full() { return {true, 0, 0}; }
    static Coverage sampled(int m, std::uint64_t seed) { return {false, m, seed}; }
};

struct PinningRecord {
    Pinning pin;
    double theta_max = 0.0;
    double rho = 0.0;
};

struct SpectralIndependenceResult {
    double eta = 0.0;              // max theta_max - 1 over covered pinnings
    double max_rho = 0.0;          // max spectral radius over covered pinnings
    bool exhaustive = true;
    long long pinnings_covered = 0;
};

/// Sweeps pinnings (Lambda, tau) with |Lambda| <= n-2 and non-empty
/// conditional support. `skip_forced` additionally drops hard-core pinnings
/// that force an unpinned vertex (an occupied pinned neighbor); such a
/// pinning is measure-equivalent to the larger pinning that the sweep
/// already covers, so the maxima are unchanged.
SpectralIndependenceResult spectral_independence_eta(
    const Graph& g, const GibbsParams& p, const Coverage& coverage, const Budgets& budgets = {},
    bool skip_forced = false,
    const std::function<void(const PinningRecord&)>& per_pinning = nullptr);

/// Enumerates the pinnings a sweep would visit (testing / reporting hook).
void for_each_pinning(const Graph& g, const GibbsParams& p, const Coverage& coverage,
                      bool skip_forced, const std::function<void(const Pinning&)>& fn);

} // namespace specind

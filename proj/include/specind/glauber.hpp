#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "specind/budgets.hpp"
#include "specind/gibbs.hpp"
#include "specind/graph.hpp"

namespace specind {

struct ChainState {
    std::vector<int> spins; // +1/-1 per vertex
    long long step = 0;
};

/// Probability that vertex v is resampled to +1 given the spins of its
/// neighbors: lambda beta^a / (lambda beta^a + gamma^b) with a (b) the number
/// of +1 (-1) neighbors.
double conditional_plus_probability(const Graph& g, const GibbsParams& p,
                                    const std::vector<int>& spins, int v);

/// One Glauber update: a uniformly random vertex is resampled from its exact
/// conditional. Deterministic for a fixed rng state.
void glauber_step(const Graph& g, const GibbsParams& p, ChainState& state, std::mt19937_64& rng);

/// All-(-1) start state (always in the support).
ChainState initial_state(const Graph& g);

struct ChainAnalysis {
    std::vector<std::uint64_t> states; // support encoded as +1-set bitmasks
    Eigen::MatrixXd P;                 // row-stochastic transition matrix
    Eigen::VectorXd pi;                // stationary distribution
    double theta_star = 0.0;           // second-largest eigenvalue magnitude
    double gap = 0.0;                  // 1 - theta_star
    double pi_min = 0.0;
    std::vector<double> tv_curve;      // worst-start exact TV per step
    long long t_mix_quarter = -1;
};

/// Exact single-site Glauber analysis on the full support. Hard-core support
/// is enumerated as independent sets; soft models use all 2^n states. The TV
/// curve stops shortly after T_mix(1/4) or at max_tv_steps (0 = gap only).
ChainAnalysis transition_matrix(const Graph& g, const GibbsParams& p, const Budgets& budgets = {},
                                long long max_tv_steps = 20000);

struct EmpiricalMixing {
    std::vector<double> tv_proxy; // per step: mean_v |empirical mu_v - target mu_v|
    int chains = 0;
    long long horizon = 0;
    std::uint64_t seed = 0;
    bool target_exact = true;
};

/// Monte Carlo marginal-discrepancy curve from `chains` independent runs of
/// the dynamics started at the all-(-1) state. The target marginals come from
/// exact enumeration when it fits the budget, otherwise from the tail of the
/// runs themselves (flagged approximate).
EmpiricalMixing empirical_mixing(const Graph& g, const GibbsParams& p, int chains,
                                 long long horizon, std::uint64_t seed,
                                 const Budgets& budgets = {});

} // namespace specind

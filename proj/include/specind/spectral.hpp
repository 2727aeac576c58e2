#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "specind/budgets.hpp"
#include "specind/graph.hpp"

namespace specind {

struct PowerIterOptions {
    double tol = 1e-12;     // relative change per iteration
    int max_iters = 100000;
};

struct PerronPair {
    double rho = 0.0;
    Eigen::VectorXd f1; // strictly positive, unit 2-norm
};

/// Perron eigenpair of a symmetric non-negative irreducible matrix via power
/// iteration on (I + A) from the all-ones start vector.
PerronPair perron_pair(const Eigen::MatrixXd& a, const PowerIterOptions& opts = {});

/// Spectral radius of a non-negative square matrix, computed as
/// rho(I + M) - 1 so that periodic matrices (permutations) still converge.
double spectral_radius_nonnegative(const Eigen::MatrixXd& m, const PowerIterOptions& opts = {});

/// Largest singular value via power iteration on M^T M.
double operator_two_norm(const Eigen::MatrixXd& m, const PowerIterOptions& opts = {});

struct SpectralSummary {
    double rho_A = 0.0;
    Eigen::VectorXd f1;
    double nu_H = 0.0;
    int max_degree = 0;
};

SpectralSummary spectral_summary(const Graph& g, const Budgets& budgets = {});

/// rho(H_G). Trees have nilpotent H, where power iteration stalls, so the
/// acyclic case returns 0 directly.
double nb_spectral_radius(const Graph& g, const Budgets& budgets = {});

/// Matrices W^(0..k) counting non-backtracking walks by length, from the
/// recursion W^(k) = A W^(k-1) - (D - I) W^(k-2). Computed in 64-bit
/// integers; on overflow the computation restarts in floating point and the
/// result is marked inexact.
struct NbWalkCounts {
    bool exact = true;
    std::vector<Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>> integer;
    std::vector<Eigen::MatrixXd> real;
};

NbWalkCounts nb_walk_counts(const Graph& g, int k, const Budgets& budgets = {});

/// (I - x A + x^2 (D - I))^{-1}, valid for |x| < 1/nu(H). The walk-count
/// generating function satisfies sum_k x^k W^(k) = (1 - x^2) times this
/// inverse.
Eigen::MatrixXd ihara_resolvent(const Graph& g, double x, std::optional<double> nu_hint = {},
                                const Budgets& budgets = {});

/// Spectral-radius bounds for bounded-degree graphs embeddable in the plane
/// or in a surface of given Euler genus.
double surface_radius_bound(int max_degree, std::optional<int> genus = {});

} // namespace specind

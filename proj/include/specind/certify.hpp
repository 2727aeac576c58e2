#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specind/budgets.hpp"
#include "specind/gibbs.hpp"
#include "specind/graph.hpp"
#include "specind/influence.hpp"

namespace specind {

/// Absolute slack added on top of theoretical bounds when comparing against
/// measured quantities.
inline constexpr double kBoundTolerance = 1e-8;

struct ContractionCertificate {
    double delta = 0.0;
    double witness = 0.0; // sup |h|
    bool satisfied = false;
};

/// Checks sup_x |h(x)| <= delta; the gradient sup of H_d is degree-free since
/// each partial derivative is h of one coordinate.
ContractionCertificate delta_contraction_certificate(const GibbsParams& p, double delta);

struct BoundReport {
    std::string kind;
    nlohmann::json inputs;
    double value = 0.0;    // theoretical bound
    double measured = 0.0; // measured comparator
    bool holds = false;
    std::string notes;
    nlohmann::json extra;
};

nlohmann::json to_json(const BoundReport& r);

/// rho(I) <= 1/eps whenever the recursion contracts at delta = (1-eps)/rho(A).
BoundReport adjacency_bound_check(const Graph& g, const GibbsParams& p, double eps,
                                  const Coverage& coverage = Coverage::full(),
                                  const Budgets& budgets = {});

/// rho(I) <= ||(I - x A + x^2 (D-I))^{-1}||_2 at x = (1-eps)/nu(H), plus the
/// comparison against the adjacency-walk bound at the same edge weight.
BoundReport nb_bound_check(const Graph& g, const GibbsParams& p, double eps,
                           const Coverage& coverage = Coverage::full(),
                           const Budgets& budgets = {});

struct HardcorePotential {
    double s0 = 0.0;
    double delta0 = 0.0;
    double c0 = 0.0;
    double delta_c = 0.0;
};

/// Square-root potential parameters for hard-core fugacity lambda:
/// 1/s0 = 1 - (Dc-1)/2 log(1 + 1/(Dc-1)), delta0 = 1/Dc, c0 = lambda/(1+lambda).
HardcorePotential hardcore_potential_certificate(double lambda);

/// Fixed-point check for Xi(s,d,x) = (1/d) (psi(F_sym(x))/psi(x) |F'_sym(x)|)^s:
/// at the unique fixed point of F_{Dc,sym}, Xi(q, Dc, x~) = 1/Dc, and the grid
/// maximum over d and x stays below 1/Dc.
BoundReport xi_check(double lambda, double s, const std::vector<int>& d_range,
                     const std::vector<double>& x_grid, double tol = 1e-6);

double xi_function(double lambda, double s, int d, double x);
double hardcore_symmetric_fixed_point(double lambda, double dc);

/// psi(y) = (1/2) sqrt(1/(y(1+y))), the derivative weight entering Xi.
double hardcore_psi(double y);

/// Potential-method bound chain for hard-core lambda <= (1-eps) lambda_c(rho):
/// measured rho(I) <= conjugated infinity-norm <= walk-vector bound; the
/// report also carries the closed-form bound values.
BoundReport potential_norm_bound_check(const Graph& g, double lambda, double eps,
                                       const Coverage& coverage = Coverage::full(),
                                       const Budgets& budgets = {});

struct MixingInputs {
    long long n = 0;
    std::optional<double> eta;
    std::optional<double> pi_min;
    std::optional<double> max_degree;
    std::optional<double> b;
    std::optional<double> eps;
    std::optional<double> rho;
    std::optional<double> delta;
};

/// Mixing/gap formula calculators. Unspecified constants of the source
/// theorems stay symbolic: the report evaluates only the variable part and
/// names the constants in `notes`. Modes: spectral_independence, closed_form,
/// log_n, unbounded_ising, unbounded_hc.
BoundReport mixing_bounds(const std::string& mode, const MixingInputs& in);

/// Spectral-gap lower bound n^{-1} prod_{i=0}^{n-2} (1 - eta/(n-i-1)).
double si_gap_lower_bound(long long n, double eta);

/// T_mix <= gap^{-1} log(4 / pi_min).
double tmix_from_gap(double gap, double pi_min);

struct CertifyOptions {
    double eps = 0.5;
    Coverage coverage = Coverage::full();
    std::uint64_t seed = 0;
    bool with_glauber = false; // include the exact-gap pipeline comparison
    std::string timestamp;     // caller-provided; excluded from reproducibility
};

/// Aggregate report: spectra, thresholds/regime comparison, all applicable
/// bound checks with holds flags; JSON-serializable.
nlohmann::json certify_report(const Graph& g, const GibbsParams& p, const CertifyOptions& options,
                              const Budgets& budgets = {});

} // namespace specind

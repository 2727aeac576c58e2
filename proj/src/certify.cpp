#include "specind/certify.hpp"

#include <cmath>
#include <limits>

#include "specind/errors.hpp"
#include "specind/glauber.hpp"
#include "specind/io.hpp"
#include "specind/spectral.hpp"
#include "specind/walks.hpp"

namespace specind {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_rho_over_pinnings(const Graph& g, const GibbsParams& p, const Coverage& coverage,
                             const Budgets& budgets, bool skip_forced) {
    double worst = 0.0;
    for_each_pinning(g, p, coverage, skip_forced, [&](const Pinning& pin) {
        auto m = influence_bruteforce(g, p, pin, budgets);
        worst = std::max(worst, influence_spectrum(m).rho);
    });
    return worst;
}

} // namespace

ContractionCertificate delta_contraction_certificate(const GibbsParams& p, double delta) {
    ContractionCertificate c;
    c.delta = delta;
    c.witness = sup_abs_h(p);
    c.satisfied = c.witness <= delta * (1.0 + 1e-12) + 1e-15;
    return c;
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["kind"] = r.kind;
    j["inputs"] = r.inputs;
    j["bound"] = r.value;
    j["measured"] = r.measured;
    j["holds"] = r.holds;
    j["notes"] = r.notes;
    if (!r.extra.is_null())
        j["extra"] = r.extra;
    return j;
}

BoundReport adjacency_bound_check(const Graph& g, const GibbsParams& p, double eps,
                                  const Coverage& coverage, const Budgets& budgets) {
    if (eps <= 0.0 || eps >= 1.0)
        throw DomainError("adjacency bound needs eps in (0,1)");
    double rho = perron_pair(adjacency_matrix(g)).rho;
    double delta = (1.0 - eps) / rho;
    auto cert = delta_contraction_certificate(p, delta);
    if (!cert.satisfied)
        throw PreconditionViolated("no (1-eps)/rho contraction: sup|h| = " +
                                   std::to_string(cert.witness) + " > " + std::to_string(delta));
    BoundReport r;
    r.kind = "adjacency";
    r.inputs = {{"eps", eps}, {"rho", rho}, {"delta", delta}, {"sup_abs_h", cert.witness}};
    r.value = 1.0 / eps;
    r.measured = max_rho_over_pinnings(g, p, coverage, budgets, p.beta == 0.0);
    r.holds = r.measured <= r.value + kBoundTolerance;
    return r;
}

BoundReport nb_bound_check(const Graph& g, const GibbsParams& p, double eps,
                           const Coverage& coverage, const Budgets& budgets) {
    if (eps <= 0.0 || eps >= 1.0)
        throw DomainError("nb bound needs eps in (0,1)");
    double nu = nb_spectral_radius(g, budgets);
    if (nu < 1.0)
        throw PreconditionViolated("nb bound needs nu(H) >= 1 (graph has no cycle structure)");
    double x = (1.0 - eps) / nu;
    auto cert = delta_contraction_certificate(p, x);
    if (!cert.satisfied)
        throw PreconditionViolated("no (1-eps)/nu contraction: sup|h| = " +
                                   std::to_string(cert.witness) + " > " + std::to_string(x));
    BoundReport r;
    r.kind = "non_backtracking";
    r.value = operator_two_norm(ihara_resolvent(g, x, nu, budgets));
    r.measured = max_rho_over_pinnings(g, p, coverage, budgets, p.beta == 0.0);
    r.holds = r.measured <= r.value + kBoundTolerance;

    double rho = perron_pair(adjacency_matrix(g)).rho;
    double adj_same_weight = x * rho < 1.0 ? 1.0 / (1.0 - x * rho) : kInf;
    bool dominance = r.value <= adj_same_weight + kBoundTolerance;
    r.inputs = {{"eps", eps}, {"nu", nu}, {"x", x}, {"sup_abs_h", cert.witness}};
    r.extra = {{"nb_le_adjacency", dominance}};
    if (std::isfinite(adj_same_weight))
        r.extra["adjacency_bound_same_weight"] = adj_same_weight;
    else
        r.extra["adjacency_bound_same_weight"] = "inf"; // x rho >= 1, geometric series diverges
    if (!dominance)
        r.notes = "resolvent norm exceeded the adjacency-walk bound at the same weight";
    return r;
}

HardcorePotential hardcore_potential_certificate(double lambda) {
    if (lambda <= 0.0)
        throw DomainError("hard-core potential needs lambda > 0");
    HardcorePotential out;
    out.delta_c = delta_c(lambda);
    double inv_s0 = 1.0 - 0.5 * (out.delta_c - 1.0) * std::log1p(1.0 / (out.delta_c - 1.0));
    out.s0 = 1.0 / inv_s0;
    if (out.s0 < 1.0 - 1e-9 || out.s0 > 2.0 + 1e-9)
        throw DomainError("s0 left its guaranteed range [1,2]");
    out.delta0 = 1.0 / out.delta_c;
    out.c0 = lambda / (1.0 + lambda);
    return out;
}

double hardcore_psi(double y) {
    if (y <= 0.0)
        throw DomainError("hardcore_psi needs y > 0");
    return 0.5 * std::sqrt(1.0 / (y * (1.0 + y)));
}

namespace {

double hc_psi(double y) { return 0.5 * std::sqrt(1.0 / (y * (1.0 + y))); }

double hc_f_sym(double lambda, double d, double x) {
    return lambda * std::pow(1.0 + x, -d);
}

} // namespace

double xi_function(double lambda, double s, int d, double x) {
    if (d < 1 || x <= 0.0)
        throw DomainError("xi_function needs d >= 1 and x > 0");
    double f = hc_f_sym(lambda, d, x);
    double fp = d * f / (1.0 + x); // |F'_sym|
    return std::pow(hc_psi(f) / hc_psi(x) * fp, s) / d;
}

double hardcore_symmetric_fixed_point(double lambda, double dc) {
    double lo = 0.0;
    double hi = std::max(1.0, lambda);
    auto gap = [&](double x) { return hc_f_sym(lambda, dc, x) - x; };
    if (gap(lo) <= 0.0 || gap(hi) >= 0.0)
        throw FixedPointNotBracketed("F_sym fixed point not bracketed in [0, max(1,lambda)]");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BoundReport xi_check(double lambda, double s, const std::vector<int>& d_range,
                     const std::vector<double>& x_grid, double tol) {
    if (lambda <= 0.0)
        throw DomainError("xi_check needs lambda > 0");
    for (double x : x_grid)
        if (x <= 0.0)
            throw DomainError("xi_check grid must be positive");
    double dc = delta_c(lambda);
    double xt = hardcore_symmetric_fixed_point(lambda, dc);
    // Xi at the (real) critical degree d = Delta_c
    double f = hc_f_sym(lambda, dc, xt);
    double fp = dc * f / (1.0 + xt);
    double at_fixed_point = std::pow(hc_psi(f) / hc_psi(xt) * fp, s) / dc;

    double grid_max = 0.0;
    for (int d : d_range)
        for (double x : x_grid)
            grid_max = std::max(grid_max, xi_function(lambda, s, d, x));

    BoundReport r;
    r.kind = "xi_fixed_point";
    r.inputs = {{"lambda", lambda}, {"s", s}, {"delta_c", dc}, {"x_fixed", xt}};
    r.value = 1.0 / dc;
    r.measured = grid_max;
    r.extra = {{"xi_at_fixed_point", at_fixed_point},
               {"fixed_point_residual", std::abs(at_fixed_point - 1.0 / dc)}};
    r.holds = std::abs(at_fixed_point - 1.0 / dc) <= tol && grid_max <= 1.0 / dc + tol;
    return r;
}

BoundReport potential_norm_bound_check(const Graph& g, double lambda, double eps,
                                       const Coverage& coverage, const Budgets& budgets) {
    if (eps <= 0.0 || eps >= 1.0)
        throw DomainError("potential bound needs eps in (0,1)");
    auto p = GibbsParams::hardcore(lambda);
    auto pp = perron_pair(adjacency_matrix(g));
    double rho = pp.rho;
    if (rho <= 1.0)
        throw PreconditionViolated("potential bound needs rho(A) > 1");
    if (lambda > (1.0 - eps) * lambda_c(rho) * (1.0 + 1e-12))
        throw PreconditionViolated("needs lambda <= (1-eps) lambda_c(rho)");

    auto cert = hardcore_potential_certificate(lambda);
    const int n = g.num_vertices();
    const double delta_rho = cert.delta0 * rho; // (1 - z), the contraction slack
    double z = 1.0 - delta_rho;
    double zeta = cert.c0 * rho;
    double delta_ratio = g.max_degree() / rho;

    double closed_bound = 1.0 + zeta / (1.0 - std::pow(delta_rho, cert.s0)) *
                                 std::pow(delta_ratio, 1.0 - 1.0 / cert.s0);
    double series = 0.0;
    for (int l = 0; l < n; ++l)
        series += std::pow(delta_rho, l / cert.s0);
    double walk_closed_form = 1.0 + cert.c0 * std::pow(g.max_degree(), 1.0 - 1.0 / cert.s0) *
                                        std::pow(rho, 1.0 / cert.s0) * series;

    Eigen::VectorXd conj = pp.f1.array().pow(1.0 / cert.s0);
    Eigen::VectorXd q = walk_vector(g, WalkKind::max, n, conj, cert.s0, cert.delta0, cert.c0,
                                    budgets);
    double q_norm = q.maxCoeff();

    double measured_rho = 0.0;
    double measured_norm = 0.0;
    bool rho_le_norm = true;
    for_each_pinning(g, p, coverage, /*skip_forced=*/true, [&](const Pinning& pin) {
        auto brute = influence_bruteforce(g, p, pin, budgets);
        double r_i = influence_spectrum(brute).rho;
        auto saw = influence_via_saw(g, p, pin, budgets);
        Eigen::VectorXd dsub(saw.verts.size());
        for (std::size_t i = 0; i < saw.verts.size(); ++i)
            dsub(static_cast<Eigen::Index>(i)) = pp.f1(saw.verts[i]);
        double norm_i = saw.verts.empty()
                            ? 0.0
                            : dtp_norm(saw.I, dsub, 1.0 / cert.s0, kInf);
        measured_rho = std::max(measured_rho, r_i);
        measured_norm = std::max(measured_norm, norm_i);
        if (r_i > norm_i + kBoundTolerance)
            rho_le_norm = false;
    });

    BoundReport r;
    r.kind = "potential_norm";
    r.inputs = {{"lambda", lambda}, {"eps", eps},      {"rho", rho},
                {"s0", cert.s0},    {"delta0", cert.delta0}, {"c0", cert.c0},
                {"delta_c", cert.delta_c}, {"zeta", zeta}};
    r.value = closed_bound;
    r.measured = measured_rho;
    r.extra = {{"conjugated_norm_max", measured_norm},
               {"walk_vector_norm", q_norm},
               {"walk_vector_closed_form", walk_closed_form},
               {"contraction_slack_z", z},
               {"rho_le_norm", rho_le_norm},
               {"norm_le_walk_vector", measured_norm <= q_norm + kBoundTolerance},
               {"walk_vector_le_closed_form", q_norm <= walk_closed_form + kBoundTolerance}};
    r.holds = rho_le_norm && measured_norm <= closed_bound + kBoundTolerance;
    if (walk_closed_form > closed_bound)
        r.notes = "finite-depth walk-vector form exceeds the stated closed-form constant; "
                  "both are reported";
    return r;
}

double si_gap_lower_bound(long long n, double eta) {
    double prod = 1.0 / static_cast<double>(n);
    for (long long i = 0; i <= n - 2; ++i)
        prod *= 1.0 - eta / static_cast<double>(n - i - 1);
    return prod;
}

double tmix_from_gap(double gap, double pi_min) {
    if (gap <= 0.0 || pi_min <= 0.0)
        throw DomainError("tmix_from_gap needs gap > 0 and pi_min > 0");
    return std::log(4.0 / pi_min) / gap;
}

BoundReport mixing_bounds(const std::string& mode, const MixingInputs& in) {
    BoundReport r;
    r.kind = "mixing_" + mode;
    nlohmann::json inputs;
    inputs["n"] = in.n;
    if (in.eta)
        inputs["eta"] = *in.eta;
    if (in.pi_min)
        inputs["pi_min"] = *in.pi_min;
    if (in.max_degree)
        inputs["max_degree"] = *in.max_degree;
    if (in.b)
        inputs["b"] = *in.b;
    if (in.eps)
        inputs["eps"] = *in.eps;
    if (in.rho)
        inputs["rho"] = *in.rho;
    if (in.delta)
        inputs["delta"] = *in.delta;
    r.inputs = inputs;
    r.holds = true;
    r.measured = std::numeric_limits<double>::quiet_NaN();

    if (mode == "spectral_independence") {
        if (in.n < 2 || !in.eta)
            throw DomainError("spectral_independence mode needs n >= 2 and eta");
        r.value = si_gap_lower_bound(in.n, *in.eta);
        r.notes = "spectral-gap lower bound; no unspecified constants";
        if (in.pi_min && r.value > 0.0)
            r.extra = {{"tmix_upper_bound", tmix_from_gap(r.value, *in.pi_min)}};
        return r;
    }
    if (mode == "closed_form") {
        if (in.n < 2 || !in.eta)
            throw DomainError("closed_form mode needs n >= 2 and eta");
        r.value = std::pow(static_cast<double>(in.n), -(1.0 + *in.eta));
        r.notes = "gap >= C * n^{-(1+eta)}; constant C in [0,1] symbolic";
        return r;
    }
    if (mode == "log_n") {
        if (in.n < 2 || !in.max_degree || !in.b || !(in.eta || in.eps))
            throw DomainError("log_n mode needs n, max_degree, b, and eta or eps");
        double coeff = in.eta ? (*in.eta / (*in.b * *in.b) + 1.0)
                              : (1.0 / (*in.eps * *in.b * *in.b) + 1.0);
        r.value = static_cast<double>(in.n) * std::log(static_cast<double>(in.n));
        r.extra = {{"exponent_base", *in.max_degree / *in.b}, {"exponent_coefficient", coeff}};
        r.notes = "T_mix <= (Delta/b)^{C1 * coeff} * C2 * n log n; C1, C2 symbolic";
        return r;
    }
    if (mode == "unbounded_ising") {
        if (in.n < 2 || !in.delta)
            throw DomainError("unbounded_ising mode needs n and delta");
        r.value = std::pow(static_cast<double>(in.n), 1.0 + 1.0 / *in.delta);
        r.notes = "T_mix <= C * n^{1 + 1/delta}; constant C symbolic";
        return r;
    }
    if (mode == "unbounded_hc") {
        if (in.n < 2 || !in.max_degree || !in.rho)
            throw DomainError("unbounded_hc mode needs n, max_degree, rho");
        double ratio_term = std::sqrt(*in.max_degree / *in.rho);
        r.value = static_cast<double>(in.n) * static_cast<double>(in.n);
        r.extra = {{"sqrt_degree_ratio", ratio_term}};
        r.notes = "T_mix <= C * n^{2 + C' * sqrt(Delta/rho)}; C, C' symbolic";
        return r;
    }
    throw DomainError("unknown mixing mode \"" + mode + "\"");
}

nlohmann::json certify_report(const Graph& g, const GibbsParams& p, const CertifyOptions& options,
                              const Budgets& budgets) {
    nlohmann::json j;
    j["schema"] = "specind-certify-v1";
    j["generated_at"] = options.timestamp;

    auto diag = validate(g);
    j["graph"] = {{"n", diag.n}, {"edges", diag.num_edges}, {"max_degree", diag.max_degree}};

    auto pp = perron_pair(adjacency_matrix(g));
    double nu = nb_spectral_radius(g, budgets);
    j["spectra"] = {{"rho_A", pp.rho},
                    {"nu_H", nu},
                    {"f1", vector_to_json(pp.f1)},
                    {"delta_minus_1", diag.max_degree - 1},
                    // empirical comparison only; no general inequality between
                    // nu and rho is asserted
                    {"nu_le_rho_observed", nu <= pp.rho + 1e-12}};

    const char* kind = p.kind == ModelKind::ising ? "ising"
                       : p.kind == ModelKind::hardcore ? "hardcore"
                                                        : "general";
    j["model"] = {{"kind", kind}, {"beta", p.beta}, {"gamma", p.gamma}, {"lambda", p.lambda}};
    j["config"] = {{"eps", options.eps},
                   {"coverage", options.coverage.exhaustive ? "exhaustive" : "sampled"},
                   {"samples", options.coverage.samples},
                   {"seed", options.seed}};

    nlohmann::json thresholds;
    bool gain = pp.rho < diag.max_degree - 1;
    thresholds["regime_gain"] = gain;
    if (pp.rho > 1.0)
        thresholds["lambda_c_rho"] = lambda_c(pp.rho);
    if (diag.max_degree >= 3)
        thresholds["lambda_c_delta_minus_1"] = lambda_c(diag.max_degree - 1.0);
    {
        auto [lo, hi] = ising_interval(std::max(pp.rho, 1.0), options.eps);
        thresholds["ising_interval_rho"] = {lo, hi};
    }
    if (diag.max_degree >= 2) {
        auto [lo, hi] = ising_interval(diag.max_degree - 1.0, options.eps);
        thresholds["ising_interval_delta_minus_1"] = {lo, hi};
    }
    j["thresholds"] = thresholds;

    // A check only counts once its precondition is met; certification
    // succeeds when at least one applicable bound verified and none failed.
    nlohmann::json checks = nlohmann::json::array();
    int verified = 0;
    int violated = 0;
    auto push = [&](const BoundReport& r) {
        checks.push_back(to_json(r));
        (r.holds ? verified : violated) += 1;
    };
    auto push_skipped = [&](const std::string& kind, const std::string& why) {
        BoundReport skip;
        skip.kind = kind;
        skip.holds = true;
        skip.notes = "not applicable: " + why;
        skip.value = skip.measured = std::numeric_limits<double>::quiet_NaN();
        checks.push_back(to_json(skip));
    };

    double delta_adj = (1.0 - options.eps) / pp.rho;
    auto cert = delta_contraction_certificate(p, delta_adj);
    {
        BoundReport cert_report;
        cert_report.kind = "delta_contraction";
        cert_report.inputs = {{"delta", delta_adj}, {"eps", options.eps}};
        cert_report.value = delta_adj;
        cert_report.measured = cert.witness;
        cert_report.holds = cert.satisfied;
        cert_report.notes = cert.satisfied
                                ? "gate for the adjacency and non-backtracking checks"
                                : "sup|h| exceeds (1-eps)/rho; those routes are not applicable";
        checks.push_back(to_json(cert_report)); // gate, not a bound
    }

    if (cert.satisfied) {
        push(adjacency_bound_check(g, p, options.eps, options.coverage, budgets));
        try {
            push(nb_bound_check(g, p, options.eps, options.coverage, budgets));
        } catch (const PreconditionViolated& e) {
            push_skipped("non_backtracking", e.what());
        }
    } else {
        push_skipped("adjacency", "no contraction certificate");
        push_skipped("non_backtracking", "no contraction certificate");
    }
    if (p.kind == ModelKind::hardcore) {
        try {
            push(potential_norm_bound_check(g, p.lambda, options.eps, options.coverage, budgets));
        } catch (const PreconditionViolated& e) {
            push_skipped("potential_norm", e.what());
        }
    }

    auto eta_res = spectral_independence_eta(g, p, options.coverage, budgets);
    j["spectral_independence"] = {{"eta", eta_res.eta},
                                  {"max_rho", eta_res.max_rho},
                                  {"coverage", eta_res.exhaustive ? "exhaustive" : "sampled"},
                                  {"pinnings", eta_res.pinnings_covered}};
    MixingInputs mi;
    mi.n = g.num_vertices();
    mi.eta = eta_res.eta;
    auto gap_bound = mixing_bounds("spectral_independence", mi);
    j["mixing"] = {{"si_gap_lower_bound", gap_bound.value}};

    if (options.with_glauber) {
        auto chain = transition_matrix(g, p, budgets, /*max_tv_steps=*/0);
        bool pipeline = chain.gap >= gap_bound.value - kBoundTolerance;
        j["mixing"]["exact_gap"] = chain.gap;
        j["mixing"]["pipeline_holds"] = pipeline;
        (pipeline ? verified : violated) += 1;
    }

    j["checks"] = checks;
    j["verified_checks"] = verified;
    j["violated_checks"] = violated;
    j["all_hold"] = violated == 0 && verified > 0;
    return j;
}

} // namespace specind

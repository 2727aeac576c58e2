#include "specind/spectral.hpp"

#include <cmath>
#include <limits>

#include "specind/errors.hpp"

namespace specind {

namespace {

// Power iteration on the shifted matrix (I + M) for non-negative M.
// Convergence is declared either through the Collatz-Wielandt bracket
// (max/min component ratio, a certified enclosure when the iterate stays
// positive) or through a stabilized eigenvalue estimate.
struct ShiftedPowerResult {
    double shifted_value = 0.0; // estimate of rho(I + M)
    Eigen::VectorXd vec;
};

ShiftedPowerResult shifted_power_iteration(const Eigen::MatrixXd& m, const PowerIterOptions& opts) {
    const Eigen::Index n = m.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    v.normalize();
    double prev = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    for (int it = 0; it < opts.max_iters; ++it) {
        Eigen::VectorXd w = v + m * v;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        bool all_positive = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (v(i) > 0.0) {
                double r = w(i) / v(i);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            } else {
                all_positive = false;
            }
        }
        double est = v.dot(w) / v.squaredNorm();
        double nw = w.norm();
        if (nw <= 0.0)
            throw ConvergenceFailure("power iteration collapsed to zero");
        v = w / nw;
        if (all_positive && hi - lo <= opts.tol * hi)
            return {0.5 * (hi + lo), v};
        if (std::isfinite(prev) && std::abs(est - prev) <= opts.tol * std::abs(est)) {
            if (++stable >= 10)
                return {est, v};
        } else {
            stable = 0;
        }
        prev = est;
    }
    throw ConvergenceFailure("power iteration did not reach tolerance " +
                             std::to_string(opts.tol));
}

} // namespace

PerronPair perron_pair(const Eigen::MatrixXd& a, const PowerIterOptions& opts) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("perron_pair needs a square matrix");
    if ((a.array() < 0.0).any())
        throw InvalidParams("perron_pair needs a non-negative matrix");
    auto res = shifted_power_iteration(a, opts);
    PerronPair out;
    out.rho = res.shifted_value - 1.0;
    out.f1 = res.vec;
    if ((out.f1.array() <= 0.0).any())
        throw ConvergenceFailure("Perron vector is not strictly positive; matrix irreducible?");
    out.f1.normalize();
    return out;
}

double spectral_radius_nonnegative(const Eigen::MatrixXd& m, const PowerIterOptions& opts) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("spectral_radius_nonnegative needs a square matrix");
    if ((m.array() < 0.0).any())
        throw InvalidParams("spectral_radius_nonnegative needs a non-negative matrix");
    if (m.rows() == 0)
        return 0.0;
    double rho = shifted_power_iteration(m, opts).shifted_value - 1.0;
    return rho < 0.0 ? 0.0 : rho;
}

double operator_two_norm(const Eigen::MatrixXd& m, const PowerIterOptions& opts) {
    if (m.size() == 0)
        return 0.0;
    if (!m.allFinite())
        throw InvalidParams("operator_two_norm needs finite entries");
    Eigen::MatrixXd mtm = m.transpose() * m; // PSD, so plain iteration converges
    if (mtm.cwiseAbs().maxCoeff() <= 1e-300)
        return 0.0;
    const Eigen::Index n = mtm.rows();
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double prev = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    bool restarted = false;
    for (int it = 0; it < opts.max_iters; ++it) {
        Eigen::VectorXd w = mtm * v;
        double est = v.dot(w);
        if (w.norm() <= 1e-300) {
            if (restarted)
                return 0.0; // two independent probes annihilated
            // all-ones start orthogonal to the top space; deterministic restart
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = 1.0 + static_cast<double>(i + 1) / static_cast<double>(n + 1);
            v.normalize();
            restarted = true;
            continue;
        }
        v = w.normalized();
        if (std::isfinite(prev) && std::abs(est - prev) <= opts.tol * std::max(est, 1e-300)) {
            if (++stable >= 10)
                return std::sqrt(std::max(est, 0.0));
        } else {
            stable = 0;
        }
        prev = est;
    }
    throw ConvergenceFailure("operator_two_norm power iteration did not converge");
}

double nb_spectral_radius(const Graph& g, const Budgets& budgets) {
    if (g.num_edges() == g.num_vertices() - 1)
        return 0.0; // connected and acyclic: H is nilpotent
    return spectral_radius_nonnegative(struct_matrices(g, budgets).H);
}

SpectralSummary spectral_summary(const Graph& g, const Budgets& budgets) {
    SpectralSummary s;
    auto pp = perron_pair(adjacency_matrix(g));
    s.rho_A = pp.rho;
    s.f1 = pp.f1;
    s.nu_H = nb_spectral_radius(g, budgets);
    s.max_degree = g.max_degree();
    return s;
}

NbWalkCounts nb_walk_counts(const Graph& g, int k, const Budgets& budgets) {
    if (k < 0)
        throw InvalidParams("nb_walk_counts needs k >= 0");
    const int n = g.num_vertices();
    std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) *
                        static_cast<std::size_t>(k + 1);
    if (cells > budgets.matrix_cells)
        throw BudgetExceeded("nb_walk_counts needs " + std::to_string(cells) + " cells");

    using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
    NbWalkCounts out;
    std::vector<IMat> w;
    w.push_back(IMat::Identity(n, n));
    if (k >= 1) {
        IMat a = IMat::Zero(n, n);
        for (int u = 0; u < n; ++u)
            for (int v : g.neighbors(u))
                a(u, v) = 1;
        w.push_back(a);
    }
    // W^(2) = A^2 - D (every length-2 backtrack removed); thereafter the
    // first-step backtracks cost (D - I) onto W^(k-2)
    bool overflow = false;
    for (int step = 2; step <= k && !overflow; ++step) {
        IMat next = IMat::Zero(n, n);
        const IMat& a = w[1];
        const IMat& w1 = w[step - 1];
        const IMat& w2 = w[step - 2];
        const std::int64_t back = step == 2 ? 0 : 1;
        for (int i = 0; i < n && !overflow; ++i)
            for (int j = 0; j < n; ++j) {
                std::int64_t acc = 0;
                for (int l : g.neighbors(i)) {
                    if (__builtin_add_overflow(acc, a(i, l) * w1(l, j), &acc)) {
                        overflow = true;
                        break;
                    }
                }
                if (overflow)
                    break;
                std::int64_t sub = (g.degree(i) - back) * w2(i, j);
                if (__builtin_sub_overflow(acc, sub, &acc)) {
                    overflow = true;
                    break;
                }
                next(i, j) = acc;
            }
        if (!overflow)
            w.push_back(std::move(next));
    }

    if (!overflow) {
        out.exact = true;
        out.integer = std::move(w);
        for (const auto& mat : out.integer)
            out.real.push_back(mat.cast<double>());
        return out;
    }

    out.exact = false;
    Eigen::MatrixXd a = adjacency_matrix(g);
    Eigen::MatrixXd d = degree_matrix(g);
    Eigen::MatrixXd dm1 = d - Eigen::MatrixXd::Identity(n, n);
    out.real.push_back(Eigen::MatrixXd::Identity(n, n));
    if (k >= 1)
        out.real.push_back(a);
    for (int step = 2; step <= k; ++step)
        out.real.push_back(a * out.real[step - 1] -
                           (step == 2 ? d : dm1) * out.real[step - 2]);
    return out;
}

Eigen::MatrixXd ihara_resolvent(const Graph& g, double x, std::optional<double> nu_hint,
                                const Budgets& budgets) {
    double nu = nu_hint ? *nu_hint : nb_spectral_radius(g, budgets);
    if (nu > 0.0 && std::abs(x) >= 1.0 / nu)
        throw OutOfConvergenceRadius("|x| = " + std::to_string(std::abs(x)) +
                                     " is outside (-1/nu, 1/nu) with nu = " + std::to_string(nu));
    const int n = g.num_vertices();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - x * adjacency_matrix(g) +
                        x * x * (degree_matrix(g) - Eigen::MatrixXd::Identity(n, n));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-12)
        throw SingularMatrix("Ihara matrix is singular at x = " + std::to_string(x));
    return lu.solve(Eigen::MatrixXd::Identity(n, n));
}

double surface_radius_bound(int max_degree, std::optional<int> genus) {
    if (max_degree < 1)
        throw PreconditionViolated("surface_radius_bound needs max degree >= 1");
    if (!genus) {
        if (max_degree <= 5)
            return max_degree;
        if (max_degree <= 36)
            return std::sqrt(12.0 * max_degree - 36.0);
        return std::sqrt(8.0 * (max_degree - 2.0)) + 2.0 * std::sqrt(3.0);
    }
    int gv = *genus;
    if (gv < 0)
        throw DomainError("Euler genus must be non-negative");
    int d;
    if (gv <= 1)
        d = 10;
    else if (gv <= 3)
        d = 12;
    else if (gv <= 5)
        d = 2 * gv + 6;
    else
        d = 2 * gv + 4;
    if (max_degree < d + 2)
        throw PreconditionViolated("genus bound needs max degree >= d(g) + 2 = " +
                                   std::to_string(d + 2));
    return std::sqrt(8.0 * (max_degree - d)) + d;
}

} // namespace specind

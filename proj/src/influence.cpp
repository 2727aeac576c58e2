#include "specind/influence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specind/errors.hpp"
#include "specind/walks.hpp"

namespace specind {

namespace {

bool hardcore_infeasible(const Graph& g, const GibbsParams& p, const Pinning& pin) {
    if (p.beta != 0.0)
        return false;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (pin.spin(v) == 1)
            for (int w : g.neighbors(v))
                if (pin.spin(w) == 1)
                    return true;
    return false;
}

bool forces_free_vertex(const Graph& g, const GibbsParams& p, const Pinning& pin) {
    if (p.beta != 0.0)
        return false;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (pin.spin(v) == 1)
            for (int w : g.neighbors(v))
                if (!pin.pinned(w))
                    return true;
    return false;
}

} // namespace

InfluenceMatrix influence_bruteforce(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                     const Budgets& budgets) {
    InfluenceMatrix out;
    out.route = InfluenceRoute::bruteforce;
    out.verts = pin.free_vertices();
    const int f = static_cast<int>(out.verts.size());
    out.I = Eigen::MatrixXd::Zero(f, f);

    auto base = brute_marginals(g, p, pin, budgets); // throws EmptySupport if infeasible
    out.marginals.resize(f);
    for (int i = 0; i < f; ++i)
        out.marginals(i) = base[out.verts[i]];

    for (int i = 0; i < f; ++i) {
        int w = out.verts[i];
        Pinning with = pin;
        std::vector<double> mu_plus, mu_minus;
        bool plus_ok = true;
        with.pin(w, 1);
        try {
            mu_plus = brute_marginals(g, p, with, budgets);
        } catch (const EmptySupport&) {
            plus_ok = false; // term taken as 0, row flagged
        }
        with.pin(w, -1);
        mu_minus = brute_marginals(g, p, with, budgets);
        if (!plus_ok)
            out.flagged_rows.push_back(i);
        for (int j = 0; j < f; ++j) {
            int u = out.verts[j];
            double plus_term = plus_ok ? (u == w ? 1.0 : mu_plus[u]) : 0.0;
            double minus_term = u == w ? 0.0 : mu_minus[u];
            out.I(i, j) = plus_term - minus_term;
        }
    }
    return out;
}

InfluenceMatrix influence_via_saw(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                  const Budgets& budgets) {
    InfluenceMatrix out;
    out.route = InfluenceRoute::saw;
    out.verts = pin.free_vertices();
    std::vector<WalkTree> trees;
    std::vector<std::vector<double>> weights;
    trees.reserve(out.verts.size());
    for (int w : out.verts) {
        auto sw = saw_boundary_and_weights(g, p, pin, w, budgets);
        trees.push_back(std::move(sw.tree));
        weights.push_back(std::move(sw.weight));
    }
    // Paths through Gamma-pinned copies carry weight 0, so summing over the
    // full SAW tree realizes the restricted walk set.
    out.I = walk_matrix(trees, weights, out.verts);
    return out;
}

EigenSummary influence_spectrum(const InfluenceMatrix& m) {
    EigenSummary out;
    const Eigen::Index n = m.I.rows();
    if (n == 0)
        return out;
    if (m.marginals.size() == n) {
        Eigen::VectorXd var = m.marginals.array() * (1.0 - m.marginals.array());
        if ((var.array() > 1e-12).all()) {
            Eigen::VectorXd d = var.cwiseSqrt();
            Eigen::MatrixXd s(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    s(i, j) = d(i) * m.I(i, j) / d(j);
            s = 0.5 * (s + s.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
            out.theta_max = es.eigenvalues().maxCoeff();
            out.rho = es.eigenvalues().cwiseAbs().maxCoeff();
            return out;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.I);
    double theta = -std::numeric_limits<double>::infinity();
    double rho = 0.0;
    bool real_ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto ev = es.eigenvalues()(i);
        rho = std::max(rho, std::abs(ev));
        if (std::abs(ev.imag()) > 1e-8 * std::max(1.0, std::abs(ev)))
            real_ok = false;
        else
            theta = std::max(theta, ev.real());
    }
    out.theta_max = theta;
    out.rho = rho;
    out.real_spectrum = real_ok;
    return out;
}

void for_each_pinning(const Graph& g, const GibbsParams& p, const Coverage& coverage,
                      bool skip_forced, const std::function<void(const Pinning&)>& fn) {
    const int n = g.num_vertices();
    auto consider = [&](const Pinning& pin) {
        if (hardcore_infeasible(g, p, pin))
            return;
        if (skip_forced && forces_free_vertex(g, p, pin))
            return;
        fn(pin);
    };

    if (coverage.exhaustive) {
        if (n > 10)
            throw BudgetExceeded("exhaustive pinning sweep limited to n <= 10");
        // every Lambda of size <= n-2, every tau on it
        for (std::uint32_t lam = 0; lam < (1u << n); ++lam) {
            int k = __builtin_popcount(lam);
            if (k > n - 2)
                continue;
            std::vector<int> members;
            for (int v = 0; v < n; ++v)
                if (lam & (1u << v))
                    members.push_back(v);
            for (std::uint32_t tau = 0; tau < (1u << k); ++tau) {
                Pinning pin(n);
                for (int i = 0; i < k; ++i)
                    pin.pin(members[i], (tau >> i) & 1 ? 1 : -1);
                consider(pin);
            }
        }
        return;
    }

    std::mt19937_64 rng(coverage.seed);
    for (int s = 0; s < coverage.samples; ++s) {
        std::uniform_int_distribution<int> size_dist(0, std::max(0, n - 2));
        int k = size_dist(rng);
        std::vector<int> verts(n);
        for (int v = 0; v < n; ++v)
            verts[v] = v;
        std::shuffle(verts.begin(), verts.end(), rng);
        Pinning pin(n);
        for (int i = 0; i < k; ++i)
            pin.pin(verts[i], (rng() & 1) ? 1 : -1);
        consider(pin);
    }
}

SpectralIndependenceResult spectral_independence_eta(
    const Graph& g, const GibbsParams& p, const Coverage& coverage, const Budgets& budgets,
    bool skip_forced, const std::function<void(const PinningRecord&)>& per_pinning) {
    SpectralIndependenceResult out;
    out.exhaustive = coverage.exhaustive;
    double max_theta = 0.0;
    for_each_pinning(g, p, coverage, skip_forced, [&](const Pinning& pin) {
        InfluenceMatrix m = influence_bruteforce(g, p, pin, budgets);
        EigenSummary s = influence_spectrum(m);
        max_theta = std::max(max_theta, s.theta_max);
        out.max_rho = std::max(out.max_rho, s.rho);
        ++out.pinnings_covered;
        if (per_pinning)
            per_pinning({pin, s.theta_max, s.rho});
    });
    out.eta = std::max(0.0, max_theta - 1.0);
    return out;
}

} // namespace specind

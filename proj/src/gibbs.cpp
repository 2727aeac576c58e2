#include "specind/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "specind/errors.hpp"

namespace specind {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
    if (a == -kInf)
        return b;
    if (b == -kInf)
        return a;
    double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

} // namespace

GibbsParams GibbsParams::ising(double beta) {
    if (beta <= 0.0)
        throw InvalidParams("Ising needs beta > 0");
    return {beta, beta, 1.0, ModelKind::ising};
}

GibbsParams GibbsParams::hardcore(double lambda) {
    if (lambda <= 0.0)
        throw InvalidParams("hard-core needs lambda > 0");
    return {0.0, 1.0, lambda, ModelKind::hardcore};
}

GibbsParams GibbsParams::general(double beta, double gamma, double lambda) {
    if (beta < 0.0 || gamma <= 0.0 || lambda <= 0.0)
        throw InvalidParams("need beta >= 0, gamma > 0, lambda > 0");
    if (beta > gamma)
        throw InvalidParams("standing assumption beta <= gamma violated");
    return {beta, gamma, lambda, ModelKind::general};
}

Pinning::Pinning(int n, const std::vector<std::pair<int, int>>& pins) : spin_(n, 0) {
    for (auto [v, s] : pins)
        pin(v, s);
}

void Pinning::pin(int v, int s) {
    if (v < 0 || v >= size())
        throw InvalidParams("pinned vertex out of range");
    if (s != 1 && s != -1)
        throw InvalidParams("pinned spin must be +1 or -1");
    spin_[v] = s;
}

int Pinning::num_pinned() const {
    int k = 0;
    for (int s : spin_)
        k += (s != 0);
    return k;
}

std::vector<int> Pinning::free_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (spin_[v] == 0)
            out.push_back(v);
    return out;
}

void for_each_state(const Graph& g, const GibbsParams& p, const Pinning& pin,
                    const Budgets& budgets,
                    const std::function<void(const std::vector<int>&, double)>& fn) {
    const int n = g.num_vertices();
    if (pin.size() != n)
        throw DimensionMismatch("pinning size does not match graph");
    std::vector<int> free = pin.free_vertices();
    const int f = static_cast<int>(free.size());
    if (f >= 63 || (std::uint64_t{1} << f) > budgets.state_evals)
        throw BudgetExceeded("state enumeration needs 2^" + std::to_string(f) + " evaluations");

    const double log_beta = p.beta > 0.0 ? std::log(p.beta) : -kInf;
    const double log_gamma = std::log(p.gamma);
    const double log_lambda = std::log(p.lambda);

    std::vector<int> spins(n);
    for (int v = 0; v < n; ++v)
        spins[v] = pin.spin(v);

    const std::uint64_t total = std::uint64_t{1} << f;
    auto edges = g.edge_list();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < f; ++i)
            spins[free[i]] = (mask >> i) & 1 ? 1 : -1;
        double logw = 0.0;
        for (int v = 0; v < n; ++v)
            if (spins[v] == 1)
                logw += log_lambda;
        for (auto [u, v] : edges) {
            if (spins[u] == 1 && spins[v] == 1)
                logw += log_beta;
            else if (spins[u] == -1 && spins[v] == -1)
                logw += log_gamma;
        }
        if (logw == -kInf)
            continue;
        fn(spins, logw);
    }
}

std::vector<double> brute_marginals(const Graph& g, const GibbsParams& p, const Pinning& pin,
                                    const Budgets& budgets) {
    const int n = g.num_vertices();
    double log_z = -kInf;
    std::vector<double> log_z_plus(n, -kInf);
    for_each_state(g, p, pin, budgets, [&](const std::vector<int>& spins, double logw) {
        log_z = logaddexp(log_z, logw);
        for (int v = 0; v < n; ++v)
            if (spins[v] == 1)
                log_z_plus[v] = logaddexp(log_z_plus[v], logw);
    });
    if (log_z == -kInf)
        throw EmptySupport("conditional support is empty");
    std::vector<double> mu(n);
    for (int v = 0; v < n; ++v)
        mu[v] = std::clamp(std::exp(log_z_plus[v] - log_z), 0.0, 1.0);
    return mu;
}

double log_ratio(const Graph& g, const GibbsParams& p, const Pinning& pin, int root,
                 const Budgets& budgets) {
    auto mu = brute_marginals(g, p, pin, budgets);
    double plus = mu[root];
    double minus = 1.0 - plus;
    if (plus == 0.0)
        return -kInf;
    if (minus <= 0.0)
        return kInf;
    return std::log(plus) - std::log(minus);
}

double log_ratio_factor(const GibbsParams& p, double x) {
    if (x == kInf)
        return p.beta > 0.0 ? std::log(p.beta) : -kInf;
    if (x == -kInf)
        return -std::log(p.gamma);
    double num = p.beta > 0.0 ? logaddexp(std::log(p.beta) + x, 0.0) : 0.0;
    double den = logaddexp(x, std::log(p.gamma));
    return num - den;
}

double h_of(const GibbsParams& p, double x) {
    const double bg = p.beta * p.gamma;
    if (p.beta == 0.0) {
        // -(e^x)/(e^x + gamma) = -1/(1 + gamma e^{-x})
        if (x == kInf)
            return -1.0;
        if (x == -kInf)
            return 0.0;
        return -1.0 / (1.0 + p.gamma * std::exp(-x));
    }
    if (x == kInf || x == -kInf)
        return 0.0;
    double den = (p.beta * std::exp(x) + 1.0) * (1.0 + p.gamma * std::exp(-x));
    return -(1.0 - bg) / den;
}

TreeRecursionResult tree_recursion(const GibbsParams& p, const std::vector<double>& xs) {
    TreeRecursionResult out;
    out.H = std::log(p.lambda);
    for (double x : xs) {
        out.H += log_ratio_factor(p, x);
        out.h.push_back(h_of(p, x));
    }
    return out;
}

double sup_abs_h(const GibbsParams& p) {
    if (p.beta == 0.0)
        return 1.0; // approached as x -> +infinity
    double bg = p.beta * p.gamma;
    double s = std::sqrt(bg);
    return std::abs(1.0 - bg) / ((1.0 + s) * (1.0 + s));
}

double lambda_c(double z) {
    if (z <= 1.0)
        throw DomainError("lambda_c needs z > 1");
    return std::exp(z * std::log(z) - (z + 1.0) * std::log(z - 1.0));
}

double delta_c(double lambda) {
    if (lambda <= 0.0)
        throw DomainError("delta_c needs lambda > 0");
    double lo = 1.0 + 1e-12;
    double hi = 2.0;
    while (lambda_c(hi) > lambda) {
        hi *= 2.0;
        if (hi > 1e12)
            throw DomainError("delta_c bracket failed");
    }
    // lambda_c is strictly decreasing on (1, inf)
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (lambda_c(mid) > lambda)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> ising_interval(double k, double delta) {
    if (k < 1.0)
        throw DomainError("ising_interval needs k >= 1");
    if (delta <= 0.0 || delta >= 1.0)
        throw DomainError("ising_interval needs delta in (0,1)");
    double lo = (k - 1.0 + delta) / (k + 1.0 - delta);
    return {lo, 1.0 / lo};
}

std::pair<double, double> log_ratio_range(const GibbsParams& p, int d) {
    if (d < 0)
        throw InvalidParams("log_ratio_range needs d >= 0");
    double log_lambda = std::log(p.lambda);
    double a = log_lambda + (p.beta > 0.0 ? d * std::log(p.beta) : (d == 0 ? 0.0 : -kInf));
    double b = log_lambda - d * std::log(p.gamma);
    if (p.beta * p.gamma > 1.0)
        std::swap(a, b);
    return {a, b};
}

ReducedGraph hardcore_reduce(const Graph& g, const Pinning& pin) {
    const int n = g.num_vertices();
    if (pin.size() != n)
        throw DimensionMismatch("pinning size does not match graph");
    std::vector<char> removed(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!pin.pinned(v))
            continue;
        removed[v] = 1;
        if (pin.spin(v) == 1) {
            for (int w : g.neighbors(v)) {
                if (pin.spin(w) == 1)
                    throw InfeasibleBoundary("two adjacent occupied pins");
                removed[w] = 1;
            }
        }
    }
    ReducedGraph out;
    std::vector<int> new_id(n, -1);
    for (int v = 0; v < n; ++v)
        if (!removed[v]) {
            new_id[v] = static_cast<int>(out.orig.size());
            out.orig.push_back(v);
        }
    out.adj.resize(out.orig.size());
    for (int v : out.orig)
        for (int w : g.neighbors(v))
            if (new_id[w] >= 0)
                out.adj[new_id[v]].push_back(new_id[w]);
    return out;
}

namespace {

MarginalLowerBound marginal_lowest_over(const Graph& g, const GibbsParams& p,
                                        const std::vector<Pinning>& pinnings,
                                        const Budgets& budgets) {
    MarginalLowerBound out;
    for (const auto& pin : pinnings) {
        std::vector<double> mu;
        try {
            mu = brute_marginals(g, p, pin, budgets);
        } catch (const EmptySupport&) {
            continue;
        }
        for (int v = 0; v < g.num_vertices(); ++v) {
            if (pin.pinned(v))
                continue;
            if (mu[v] > 0.0)
                out.b = std::min(out.b, mu[v]);
            if (mu[v] < 1.0)
                out.b = std::min(out.b, 1.0 - mu[v]);
        }
    }
    return out;
}

} // namespace

MarginalLowerBound marginal_lower_bound(const Graph& g, const GibbsParams& p,
                                        const Budgets& budgets, int samples, std::uint64_t seed) {
    const int n = g.num_vertices();
    // 3^n (Lambda, tau) pairs; enumerate when that fits comfortably.
    double combos = std::pow(3.0, n);
    std::vector<Pinning> pinnings;
    if (combos <= 60000.0) {
        std::vector<int> code(n, 0);
        for (;;) {
            Pinning pin(n);
            for (int v = 0; v < n; ++v)
                if (code[v] == 1)
                    pin.pin(v, -1);
                else if (code[v] == 2)
                    pin.pin(v, 1);
            if (pin.num_pinned() < n)
                pinnings.push_back(pin);
            int i = 0;
            while (i < n && ++code[i] == 3)
                code[i++] = 0;
            if (i == n)
                break;
        }
        auto out = marginal_lowest_over(g, p, pinnings, budgets);
        out.exhaustive = true;
        return out;
    }
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        std::uniform_int_distribution<int> size_dist(0, n - 1);
        int k = size_dist(rng);
        std::vector<int> verts(n);
        for (int v = 0; v < n; ++v)
            verts[v] = v;
        std::shuffle(verts.begin(), verts.end(), rng);
        Pinning pin(n);
        for (int i = 0; i < k; ++i)
            pin.pin(verts[i], (rng() & 1) ? 1 : -1);
        pinnings.push_back(pin);
    }
    auto out = marginal_lowest_over(g, p, pinnings, budgets);
    out.exhaustive = false;
    return out;
}

} // namespace specind

#include "specind/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "specind/errors.hpp"

namespace specind {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Enumerates the support as bitmasks of the +1 set, in increasing mask order.
// For hard-core the recursion only extends independent sets.
std::vector<std::uint64_t> enumerate_support(const Graph& g, const GibbsParams& p,
                                             const Budgets& budgets) {
    const int n = g.num_vertices();
    if (n > 62)
        throw BudgetExceeded("support enumeration limited to n <= 62");
    std::vector<std::uint64_t> nbr_mask(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : g.neighbors(v))
            nbr_mask[v] |= std::uint64_t{1} << w;

    std::vector<std::uint64_t> states;
    auto push = [&](std::uint64_t s) {
        if (states.size() >= budgets.chain_states)
            throw BudgetExceeded("chain support exceeds " + std::to_string(budgets.chain_states) +
                                 " states");
        states.push_back(s);
    };

    if (p.beta > 0.0) {
        if (n > 30 || (std::uint64_t{1} << n) > budgets.chain_states)
            throw BudgetExceeded("soft-model support is 2^" + std::to_string(n) + " states");
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
            push(s);
        return states;
    }

    // independent sets, lexicographic by lowest allowed vertex
    std::vector<std::pair<std::uint64_t, int>> stack{{0, 0}};
    push(0);
    while (!stack.empty()) {
        auto [set, next] = stack.back();
        stack.pop_back();
        for (int v = next; v < n; ++v) {
            if (set & nbr_mask[v])
                continue;
            std::uint64_t ext = set | (std::uint64_t{1} << v);
            push(ext);
            stack.push_back({ext, v + 1});
        }
    }
    std::sort(states.begin(), states.end());
    return states;
}

double state_log_weight(const Graph& g, const GibbsParams& p, std::uint64_t plus_set) {
    double logw = 0.0;
    const double log_beta = p.beta > 0.0 ? std::log(p.beta) : -std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.num_vertices(); ++v) {
        bool vp = plus_set >> v & 1;
        if (vp)
            logw += std::log(p.lambda);
        for (int w : g.neighbors(v)) {
            if (w <= v)
                continue;
            bool wp = plus_set >> w & 1;
            if (vp && wp)
                logw += log_beta;
            else if (!vp && !wp)
                logw += std::log(p.gamma);
        }
    }
    return logw;
}

} // namespace

double conditional_plus_probability(const Graph& g, const GibbsParams& p,
                                    const std::vector<int>& spins, int v) {
    int a = 0, b = 0;
    for (int w : g.neighbors(v))
        (spins[w] == 1 ? a : b)++;
    if (p.beta == 0.0 && a > 0)
        return 0.0;
    // log weights to dodge overflow for extreme parameters
    double lp = std::log(p.lambda) + (a > 0 ? a * std::log(p.beta) : 0.0);
    double lm = b * std::log(p.gamma);
    return 1.0 / (1.0 + std::exp(lm - lp));
}

void glauber_step(const Graph& g, const GibbsParams& p, ChainState& state, std::mt19937_64& rng) {
    int v = static_cast<int>(rng() % static_cast<std::uint64_t>(g.num_vertices()));
    double plus = conditional_plus_probability(g, p, state.spins, v);
    state.spins[v] = uniform01(rng) < plus ? 1 : -1;
    ++state.step;
}

ChainState initial_state(const Graph& g) {
    ChainState s;
    s.spins.assign(g.num_vertices(), -1);
    return s;
}

ChainAnalysis transition_matrix(const Graph& g, const GibbsParams& p, const Budgets& budgets,
                                long long max_tv_steps) {
    const int n = g.num_vertices();
    ChainAnalysis out;
    out.states = enumerate_support(g, p, budgets);
    const int ns = static_cast<int>(out.states.size());
    std::unordered_map<std::uint64_t, int> index;
    index.reserve(out.states.size());
    for (int i = 0; i < ns; ++i)
        index.emplace(out.states[i], i);

    // stationary distribution straight from the Gibbs weights
    Eigen::VectorXd logw(ns);
    for (int i = 0; i < ns; ++i)
        logw(i) = state_log_weight(g, p, out.states[i]);
    double mx = logw.maxCoeff();
    out.pi = (logw.array() - mx).exp();
    out.pi /= out.pi.sum();
    out.pi_min = out.pi.minCoeff();

    out.P = Eigen::MatrixXd::Zero(ns, ns);
    std::vector<int> spins(n);
    for (int i = 0; i < ns; ++i) {
        std::uint64_t s = out.states[i];
        for (int v = 0; v < n; ++v)
            spins[v] = (s >> v & 1) ? 1 : -1;
        for (int v = 0; v < n; ++v) {
            double plus = conditional_plus_probability(g, p, spins, v);
            std::uint64_t with = s | (std::uint64_t{1} << v);
            std::uint64_t without = s & ~(std::uint64_t{1} << v);
            if (plus > 0.0) {
                auto it = index.find(with);
                if (it == index.end())
                    throw EmptySupport("transition target outside enumerated support");
                out.P(i, it->second) += plus / n;
            }
            out.P(i, index.at(without)) += (1.0 - plus) / n;
        }
    }

    // reversibility makes D P D^{-1} symmetric for D = diag(sqrt(pi))
    Eigen::VectorXd d = out.pi.cwiseSqrt();
    Eigen::MatrixXd sym(ns, ns);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
            sym(i, j) = d(i) * out.P(i, j) / d(j);
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Eigen::VectorXd ev = es.eigenvalues();
    double theta = 0.0;
    for (int i = 0; i < ns; ++i) {
        if (i == ns - 1)
            continue; // eigenvalue 1
        theta = std::max(theta, std::abs(ev(i)));
    }
    out.theta_star = theta;
    out.gap = 1.0 - theta;

    // exact worst-start TV curve; Q starts as the identity (t = 0)
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(ns, ns);
    for (long long t = 0; t <= max_tv_steps; ++t) {
        double worst = 0.0;
        for (int i = 0; i < ns; ++i)
            worst = std::max(worst, 0.5 * (q.row(i).transpose() - out.pi).cwiseAbs().sum());
        out.tv_curve.push_back(worst);
        if (worst <= 0.25 && out.t_mix_quarter < 0)
            out.t_mix_quarter = t;
        if (out.t_mix_quarter >= 0 && t >= 2 * out.t_mix_quarter + 8)
            break;
        q = (q * out.P).eval();
    }
    return out;
}

EmpiricalMixing empirical_mixing(const Graph& g, const GibbsParams& p, int chains,
                                 long long horizon, std::uint64_t seed, const Budgets& budgets) {
    if (chains < 1 || horizon < 0)
        throw InvalidParams("empirical_mixing needs chains >= 1 and horizon >= 0");
    const int n = g.num_vertices();
    EmpiricalMixing out;
    out.chains = chains;
    out.horizon = horizon;
    out.seed = seed;

    // plus-count per vertex per time across chains
    std::vector<std::vector<double>> plus(horizon + 1, std::vector<double>(n, 0.0));
    for (int c = 0; c < chains; ++c) {
        // split one seed into independent streams
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (c + 1)));
        ChainState st = initial_state(g);
        for (long long t = 0; t <= horizon; ++t) {
            for (int v = 0; v < n; ++v)
                if (st.spins[v] == 1)
                    plus[t][v] += 1.0;
            if (t < horizon)
                glauber_step(g, p, st, rng);
        }
    }

    std::vector<double> target(n, 0.0);
    try {
        Pinning none(n);
        auto mu = brute_marginals(g, p, none, budgets);
        for (int v = 0; v < n; ++v)
            target[v] = mu[v];
        out.target_exact = true;
    } catch (const BudgetExceeded&) {
        out.target_exact = false;
        long long tail_from = horizon - horizon / 10;
        long long count = 0;
        for (long long t = tail_from; t <= horizon; ++t, ++count)
            for (int v = 0; v < n; ++v)
                target[v] += plus[t][v] / chains;
        for (int v = 0; v < n; ++v)
            target[v] /= std::max<long long>(count, 1);
    }

    out.tv_proxy.resize(horizon + 1);
    for (long long t = 0; t <= horizon; ++t) {
        double acc = 0.0;
        for (int v = 0; v < n; ++v)
            acc += std::abs(plus[t][v] / chains - target[v]);
        out.tv_proxy[t] = acc / n;
    }
    return out;
}

} // namespace specind

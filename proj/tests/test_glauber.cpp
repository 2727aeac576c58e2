#include <doctest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "specind/certify.hpp"
#include "specind/glauber.hpp"
#include "specind/influence.hpp"

using namespace specind;

TEST_CASE("single-site conditional") {
    Graph p3 = make_path(3);
    auto hc = GibbsParams::hardcore(2.0);
    std::vector<int> spins{1, -1, -1};
    // vertex 1 has an occupied neighbor: must stay unoccupied
    CHECK(conditional_plus_probability(p3, hc, spins, 1) == 0.0);
    // vertex 2's neighbor is unoccupied: lambda/(1+lambda)
    CHECK(conditional_plus_probability(p3, hc, spins, 2) == doctest::Approx(2.0 / 3.0));

    // Ising conditional from the two-weight ratio, checked against brute
    // marginals on a star with pinned leaves
    auto ising = GibbsParams::ising(0.7);
    Graph s4 = make_star(4);
    std::vector<int> leaf_spins{-1, 1, 1, -1, 1}; // center value irrelevant
    double cond = conditional_plus_probability(s4, ising, leaf_spins, 0);
    Pinning pin(5, {{1, 1}, {2, 1}, {3, -1}, {4, 1}});
    CHECK(cond == doctest::Approx(brute_marginals(s4, ising, pin)[0]).epsilon(1e-12));
}

TEST_CASE("glauber step preserves the hard-core support and is deterministic") {
    Graph c5 = make_cycle(5);
    auto hc = GibbsParams::hardcore(1.3);
    std::mt19937_64 rng(42);
    ChainState st = initial_state(c5);
    for (int t = 0; t < 2000; ++t) {
        glauber_step(c5, hc, st, rng);
        for (auto [u, v] : c5.edge_list())
            CHECK(!(st.spins[u] == 1 && st.spins[v] == 1));
    }
    std::mt19937_64 rng2(42);
    ChainState st2 = initial_state(c5);
    for (int t = 0; t < 2000; ++t)
        glauber_step(c5, hc, st2, rng2);
    CHECK(st.spins == st2.spins);
}

TEST_CASE("K2 hard-core chain: uniform stationary distribution at lambda 1") {
    Graph k2 = make_path(2);
    auto a = transition_matrix(k2, GibbsParams::hardcore(1.0));
    REQUIRE(a.states.size() == 3); // {}, {u}, {w}
    for (int i = 0; i < 3; ++i)
        CHECK(a.pi(i) == doctest::Approx(1.0 / 3.0));
    CHECK(a.theta_star == doctest::Approx(0.75));
    CHECK(a.gap == doctest::Approx(0.25));
}

TEST_CASE("detailed balance and stationarity on assorted instances") {
    auto draws = testutil::random_params(6, 808);
    for (const auto& [name, g] : testutil::small_named_graphs()) {
        if (g.num_vertices() > 6)
            continue;
        INFO(name);
        for (const auto& d : draws) {
            auto a = transition_matrix(g, d.params, Budgets{}, 0);
            int ns = static_cast<int>(a.states.size());
            // rows sum to one
            for (int i = 0; i < ns; ++i)
                CHECK(a.P.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            // pi P = pi and pi(x) P(x,y) = pi(y) P(y,x)
            Eigen::VectorXd piP = a.P.transpose() * a.pi;
            CHECK((piP - a.pi).cwiseAbs().maxCoeff() <= 1e-12);
            for (int i = 0; i < ns; ++i)
                for (int j = 0; j < ns; ++j)
                    CHECK(std::abs(a.pi(i) * a.P(i, j) - a.pi(j) * a.P(j, i)) <= 1e-12);
        }
    }
}

TEST_CASE("stationary vector matches brute-force Gibbs weights") {
    Graph g = make_cycle(4);
    auto p = GibbsParams::general(0.6, 1.4, 0.9);
    auto a = transition_matrix(g, p, Budgets{}, 0);
    auto mu = brute_marginals(g, p, Pinning(4));
    // compare per-vertex marginals implied by pi with brute force
    for (int v = 0; v < 4; ++v) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.states.size(); ++i)
            if (a.states[i] >> v & 1)
                m += a.pi(static_cast<Eigen::Index>(i));
        CHECK(m == doctest::Approx(mu[v]).epsilon(1e-10));
    }
}

TEST_CASE("independent spins: gap is 1/n") {
    for (int n : {3, 5}) {
        auto a = transition_matrix(make_cycle(n), GibbsParams::ising(1.0), Budgets{}, 0);
        CHECK(a.gap == doctest::Approx(1.0 / n).epsilon(1e-10));
    }
}

TEST_CASE("exact TV curve and T_mix bound") {
    Graph c4 = make_cycle(4);
    auto p = GibbsParams::ising(0.8);
    auto a = transition_matrix(c4, p);
    REQUIRE(a.t_mix_quarter >= 0);
    // curve decreasing to the threshold
    CHECK(a.tv_curve.front() >= a.tv_curve.back());
    CHECK(a.tv_curve[a.t_mix_quarter] <= 0.25);
    if (a.t_mix_quarter > 0)
        CHECK(a.tv_curve[a.t_mix_quarter - 1] > 0.25);
    // T_mix(1/4) <= gap^{-1} log(4/pi_min)
    CHECK(static_cast<double>(a.t_mix_quarter) <= tmix_from_gap(a.gap, a.pi_min) + 1e-9);
}

TEST_CASE("pipeline: exact gap vs the spectral-independence bound") {
    // measured eta (exhaustive) feeds the gap lower bound; the exact chain
    // gap must dominate it
    struct Case {
        Graph g;
        GibbsParams p;
    };
    std::vector<Case> cases{{make_cycle(4), GibbsParams::ising(0.8)},
                            {make_path(4), GibbsParams::ising(1.2)},
                            {make_complete(4), GibbsParams::ising(0.9)},
                            {make_path(2), GibbsParams::hardcore(1.0)}};
    for (auto& [g, p] : cases) {
        auto eta = spectral_independence_eta(g, p, Coverage::full());
        auto chain = transition_matrix(g, p, Budgets{}, 0);
        double bound = si_gap_lower_bound(g.num_vertices(), eta.eta);
        CHECK(chain.gap >= bound - 1e-9);
    }
}

TEST_CASE("empirical mixing") {
    Graph c4 = make_cycle(4);
    auto p = GibbsParams::ising(0.8);
    auto e = empirical_mixing(c4, p, 400, 200, 99);
    REQUIRE(e.tv_proxy.size() == 201);
    CHECK(e.target_exact);
    // horizon 0 from the all-minus start: proxy is the exact point-mass
    // marginal distance
    auto mu = brute_marginals(c4, p, Pinning(4));
    double expect0 = 0.0;
    for (int v = 0; v < 4; ++v)
        expect0 += std::abs(0.0 - mu[v]);
    CHECK(e.tv_proxy[0] == doctest::Approx(expect0 / 4.0));
    // long-run estimate settles near zero within Monte Carlo error
    CHECK(e.tv_proxy.back() <= 0.08);
    // and the run is seed-reproducible
    auto e2 = empirical_mixing(c4, p, 400, 200, 99);
    CHECK(e.tv_proxy == e2.tv_proxy);
}

TEST_CASE("empirical estimate consistent with the exact TV curve") {
    Graph p3 = make_path(3);
    auto p = GibbsParams::hardcore(1.0);
    auto exact = transition_matrix(p3, p);
    auto emp = empirical_mixing(p3, p, 2000, 60, 5);
    // the per-vertex marginal discrepancy lower-bounds total variation, so
    // the empirical proxy must sit below the exact curve plus MC noise
    for (std::size_t t = 0; t < std::min(exact.tv_curve.size(), emp.tv_proxy.size()); ++t)
        CHECK(emp.tv_proxy[t] <= exact.tv_curve[t] + 0.05);
}

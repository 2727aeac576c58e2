#include <doctest.h>

#include <cmath>
#include <limits>

#include "corpus.hpp"
#include "specind/gibbs.hpp"

using namespace specind;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// independent tree log-ratio by recursive descent, used as the oracle side
// against brute-force enumeration
double recursive_tree_log_ratio(const Graph& g, const GibbsParams& p, int v, int parent) {
    std::vector<double> xs;
    for (int w : g.neighbors(v))
        if (w != parent)
            xs.push_back(recursive_tree_log_ratio(g, p, w, v));
    return tree_recursion(p, xs).H;
}

} // namespace

TEST_CASE("brute marginals on K2") {
    Graph k2 = make_path(2);
    auto hc = GibbsParams::hardcore(1.0);

    Pinning pin_minus(2, {{1, -1}});
    CHECK(brute_marginals(k2, hc, pin_minus)[0] == doctest::Approx(0.5));

    Pinning none(2);
    auto ising = GibbsParams::ising(0.7);
    CHECK(brute_marginals(k2, ising, none)[0] == doctest::Approx(0.5)); // +- symmetry

    Pinning pin_plus(2, {{1, 1}});
    CHECK(brute_marginals(k2, hc, pin_plus)[0] == doctest::Approx(0.0));

    Pinning both(2, {{0, 1}, {1, 1}});
    CHECK_THROWS_AS(brute_marginals(k2, hc, both), EmptySupport);
}

TEST_CASE("log ratio") {
    Graph k2 = make_path(2);
    double lam = 1.7;
    auto hc = GibbsParams::hardcore(lam);
    CHECK(log_ratio(k2, hc, Pinning(2, {{1, -1}}), 0) == doctest::Approx(std::log(lam)));
    CHECK(log_ratio(k2, hc, Pinning(2, {{1, 1}}), 0) == -kInf);
    // isolated root, d = 0: empty product leaves log lambda
    Graph k1 = make_path(1);
    CHECK(log_ratio(k1, hc, Pinning(1), 0) == doctest::Approx(std::log(lam)));
    CHECK(tree_recursion(hc, {}).H == doctest::Approx(std::log(lam)));
}

TEST_CASE("tree recursion spot values") {
    double beta = 0.6;
    auto ising = GibbsParams::ising(beta);
    auto r = tree_recursion(ising, {0.0});
    CHECK(r.H == doctest::Approx(0.0));
    CHECK(r.h[0] == doctest::Approx(-(1.0 - beta) / (1.0 + beta)));

    auto hc = GibbsParams::hardcore(2.0);
    CHECK(h_of(hc, 0.0) == doctest::Approx(-0.5));
    CHECK(h_of(hc, kInf) == doctest::Approx(-1.0));
    CHECK(h_of(hc, -kInf) == doctest::Approx(0.0));
    CHECK(h_of(ising, kInf) == doctest::Approx(0.0));
    CHECK(h_of(ising, -kInf) == doctest::Approx(0.0));
}

TEST_CASE("recursion consistency on trees vs brute force") {
    // every tree on <= 10 vertices from seeds, random parameters
    auto draws = testutil::random_params(12, 99);
    int t = 0;
    for (int n : {2, 3, 5, 7, 10}) {
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            Graph g = make_random_tree(n, seed);
            for (int root : {0, n - 1}) {
                const auto& p = draws[t++ % draws.size()].params;
                double rec = recursive_tree_log_ratio(g, p, root, -1);
                double brute = log_ratio(g, p, Pinning(n), root);
                if (std::isinf(rec) || std::isinf(brute)) {
                    CHECK(rec == brute);
                } else {
                    CHECK(rec == doctest::Approx(brute).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("h is the partial derivative of H_d (finite differences)") {
    auto draws = testutil::random_params(10, 123);
    for (const auto& d : draws) {
        const auto& p = d.params;
        for (double x : {-3.0, -0.7, 0.0, 1.3, 2.5}) {
            double eps = 1e-5;
            double plus = tree_recursion(p, {x + eps, 0.4}).H;
            double minus = tree_recursion(p, {x - eps, 0.4}).H;
            double fd = (plus - minus) / (2.0 * eps);
            CHECK(h_of(p, x) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("sup |h| closed form vs dense grid") {
    auto draws = testutil::random_params(14, 77);
    for (const auto& d : draws) {
        const auto& p = d.params;
        double closed = sup_abs_h(p);
        double grid = std::max(std::abs(h_of(p, kInf)), std::abs(h_of(p, -kInf)));
        for (int i = 0; i <= 10000; ++i) {
            double x = -40.0 + 80.0 * i / 10000.0;
            grid = std::max(grid, std::abs(h_of(p, x)));
        }
        CHECK(grid <= closed * (1.0 + 1e-9) + 1e-12);
        CHECK(closed <= grid * (1.0 + 1e-3) + 1e-12); // grid approaches the sup
    }
    CHECK(sup_abs_h(GibbsParams::ising(0.5)) == doctest::Approx(1.0 / 3.0)); // |1-b|/(1+b)
    CHECK(sup_abs_h(GibbsParams::general(0.5, 2.0, 1.0)) == doctest::Approx(0.0));
    CHECK(sup_abs_h(GibbsParams::hardcore(7.0)) == doctest::Approx(1.0));
}

TEST_CASE("log-ratio containment in J_d") {
    auto draws = testutil::random_params(10, 31);
    for (std::uint64_t seed : {4ULL, 9ULL}) {
        Graph g = make_random_tree(8, seed);
        for (const auto& d : draws) {
            const auto& p = d.params;
            for (int v = 0; v < 8; ++v) {
                // subtree ratio of v when the tree is rooted at vertex 0
                if (v == 0)
                    continue;
                std::vector<double> xs;
                // find parent of v in the tree rooted at 0 by BFS
                std::vector<int> par(8, -2);
                par[0] = -1;
                std::vector<int> queue{0};
                for (std::size_t qi = 0; qi < queue.size(); ++qi)
                    for (int w : g.neighbors(queue[qi]))
                        if (par[w] == -2) {
                            par[w] = queue[qi];
                            queue.push_back(w);
                        }
                int deg = 0;
                for (int w : g.neighbors(v))
                    if (w != par[v])
                        ++deg;
                double x = recursive_tree_log_ratio(g, p, v, par[v]);
                auto [lo, hi] = log_ratio_range(p, deg);
                CHECK(x >= lo - 1e-9);
                CHECK(x <= hi + 1e-9);
            }
        }
    }
}

TEST_CASE("thresholds") {
    CHECK(lambda_c(2.0) == doctest::Approx(4.0));
    CHECK(delta_c(4.0) == doctest::Approx(2.0).epsilon(1e-10));
    for (double z : {1.5, 2.0, 3.0, 5.0, 10.0})
        CHECK(delta_c(lambda_c(z)) == doctest::Approx(z).epsilon(1e-9));
    auto [lo, hi] = ising_interval(2.0, 0.5);
    CHECK(lo == doctest::Approx(0.6));
    CHECK(hi == doctest::Approx(5.0 / 3.0));
    CHECK_THROWS_AS(lambda_c(1.0), DomainError);
    CHECK_THROWS_AS(ising_interval(2.0, 0.0), DomainError);
    // lambda_c strictly decreasing
    CHECK(lambda_c(2.0) > lambda_c(2.5));
    CHECK(lambda_c(2.5) > lambda_c(4.0));
}

TEST_CASE("hardcore reduce") {
    Graph p3 = make_path(3);
    auto r1 = hardcore_reduce(p3, Pinning(3, {{0, 1}}));
    CHECK(r1.orig == std::vector<int>{2}); // a occupied removes a and b
    auto r2 = hardcore_reduce(p3, Pinning(3, {{0, -1}}));
    CHECK(r2.orig == std::vector<int>{1, 2});
    CHECK(r2.adj[0] == std::vector<int>{1});
    auto r3 = hardcore_reduce(p3, Pinning(3));
    CHECK(r3.orig.size() == 3);
    CHECK_THROWS_AS(hardcore_reduce(make_path(2), Pinning(2, {{0, 1}, {1, 1}})),
                    InfeasibleBoundary);

    // marginals of survivors are unchanged
    auto p = GibbsParams::hardcore(1.3);
    Graph p5 = make_path(5);
    Pinning pin(5, {{1, 1}});
    auto reduced = hardcore_reduce(p5, pin);
    auto full = brute_marginals(p5, p, pin);
    // survivors: vertices 3, 4 form an edge; compute marginals there directly
    Graph frag(2, {{0, 1}});
    auto frag_mu = brute_marginals(frag, p, Pinning(2));
    REQUIRE(reduced.orig == std::vector<int>{3, 4});
    CHECK(full[3] == doctest::Approx(frag_mu[0]).epsilon(1e-12));
    CHECK(full[4] == doctest::Approx(frag_mu[1]).epsilon(1e-12));
}

TEST_CASE("marginal lower bound") {
    Graph k2 = make_path(2);
    auto hc1 = GibbsParams::hardcore(1.0);
    auto r = marginal_lower_bound(k2, hc1);
    CHECK(r.exhaustive);
    CHECK(r.b == doctest::Approx(1.0 / 3.0));

    auto ising1 = GibbsParams::ising(1.0);
    CHECK(marginal_lower_bound(make_cycle(4), ising1).b == doctest::Approx(0.5));

    Graph k1 = make_path(1);
    double lam = 0.4;
    CHECK(marginal_lower_bound(k1, GibbsParams::hardcore(lam)).b ==
          doctest::Approx(std::min(lam, 1.0) / (1.0 + lam)));
}

TEST_CASE("budget enforcement") {
    Budgets tiny;
    tiny.state_evals = 4;
    CHECK_THROWS_AS(brute_marginals(make_cycle(5), GibbsParams::ising(0.9), Pinning(5), tiny),
                    BudgetExceeded);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(GibbsParams::general(2.0, 1.0, 1.0), InvalidParams); // beta > gamma
    CHECK_THROWS_AS(GibbsParams::hardcore(0.0), InvalidParams);
    CHECK_THROWS_AS(GibbsParams::general(0.5, 0.0, 1.0), InvalidParams);
}

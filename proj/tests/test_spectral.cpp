#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "specind/spectral.hpp"

using namespace specind;

TEST_CASE("perron pair on complete graphs, cycles, paths") {
    for (int n : {2, 3, 4, 6}) {
        auto pp = perron_pair(adjacency_matrix(make_complete(n)));
        CHECK(pp.rho == doctest::Approx(n - 1.0).epsilon(1e-10));
        for (int v = 0; v < n; ++v)
            CHECK(pp.f1(v) == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-8));
    }
    for (int n : {3, 5, 8}) {
        auto pp = perron_pair(adjacency_matrix(make_cycle(n)));
        CHECK(pp.rho == doctest::Approx(2.0).epsilon(1e-10));
    }
    auto p3 = perron_pair(adjacency_matrix(make_path(3)));
    CHECK(p3.rho == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("perron residual and positivity on the corpus") {
    for (const auto& [name, g] : testutil::small_named_graphs()) {
        INFO(name);
        Eigen::MatrixXd a = adjacency_matrix(g);
        auto pp = perron_pair(a);
        CHECK((a * pp.f1 - pp.rho * pp.f1).cwiseAbs().maxCoeff() <= 1e-8 * std::max(pp.rho, 1.0));
        CHECK(pp.f1.minCoeff() > 0.0);
        CHECK(pp.f1.norm() == doctest::Approx(1.0));
        // sqrt(max_degree) <= rho <= max_degree
        CHECK(pp.rho >= std::sqrt(static_cast<double>(g.max_degree())) - 1e-9);
        CHECK(pp.rho <= g.max_degree() + 1e-9);
    }
}

TEST_CASE("spectral radius of H") {
    CHECK(nb_spectral_radius(make_cycle(5)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nb_spectral_radius(make_complete(4)) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(nb_spectral_radius(make_path(4)) == 0.0);          // tree
    CHECK(nb_spectral_radius(make_random_tree(8, 5)) == 0.0); // tree
    CHECK(spectral_radius_nonnegative(Eigen::MatrixXd::Zero(3, 3)) == doctest::Approx(0.0));
    // d-regular graphs have nu = d - 1
    CHECK(nb_spectral_radius(make_complete(5)) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("nu(H) cross-checked against brute-force NB walk growth on K4") {
    // growth rate of the total number of NB walks approaches nu
    Graph g = make_complete(4);
    long long prev = 0, cur = 0;
    for (int u = 0; u < 4; ++u)
        for (int w = 0; w < 4; ++w) {
            prev += testutil::count_nb_walks(g, -1, u, w, 9);
            cur += testutil::count_nb_walks(g, -1, u, w, 10);
        }
    CHECK(static_cast<double>(cur) / prev == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("operator two norm") {
    CHECK(operator_two_norm(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -5.0;
    CHECK(operator_two_norm(d) == doctest::Approx(5.0));
    // symmetric matrix: ||M||_2 equals the extreme eigenvalue magnitude,
    // cross-checked through the Perron machinery on M^2 (non-negative)
    for (const auto& [name, g] : testutil::small_named_graphs()) {
        INFO(name);
        Eigen::MatrixXd a = adjacency_matrix(g);
        double normed = operator_two_norm(a);
        double via_square = std::sqrt(spectral_radius_nonnegative(a * a));
        CHECK(normed == doctest::Approx(via_square).epsilon(1e-8));
    }
}

TEST_CASE("NB walk-count recursion matches the K H^(k-1) C oracle exactly") {
    for (const auto& [name, g] : testutil::small_named_graphs()) {
        if (g.num_vertices() > 7)
            continue;
        INFO(name);
        auto counts = nb_walk_counts(g, 6);
        REQUIRE(counts.exact);
        auto sm = struct_matrices(g);
        using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
        IMat h = sm.H.cast<std::int64_t>();
        IMat k = sm.K.cast<std::int64_t>();
        IMat c = sm.C.cast<std::int64_t>();
        IMat hp = IMat::Identity(h.rows(), h.cols());
        for (int step = 1; step <= 6; ++step) {
            IMat oracle = k * hp * c; // W^(step) for step >= 1
            CHECK((counts.integer[step] - oracle).cwiseAbs().maxCoeff() == 0);
            hp = (hp * h).eval();
        }
        // W^(k) symmetric, exactly
        for (int step = 0; step <= 6; ++step)
            CHECK((counts.integer[step] - counts.integer[step].transpose()).cwiseAbs().maxCoeff() ==
                  0);
    }
}

TEST_CASE("NB walk counts on C5 and K2") {
    auto c5 = nb_walk_counts(make_cycle(5), 2);
    for (int u = 0; u < 5; ++u)
        for (int w = 0; w < 5; ++w) {
            int dist = std::min(std::abs(u - w), 5 - std::abs(u - w));
            CHECK(c5.integer[2](u, w) == (dist == 2 ? 1 : 0));
        }
    auto k2 = nb_walk_counts(make_path(2), 2);
    CHECK(k2.integer[2].cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("ihara resolvent matches the truncated walk series") {
    CHECK((ihara_resolvent(make_cycle(4), 0.0) - Eigen::MatrixXd::Identity(4, 4)).norm() ==
          doctest::Approx(0.0));
    struct Case {
        Graph g;
        double x;
    };
    // sum_k x^k W^(k) = (1 - x^2) (I - x A + x^2 (D - I))^{-1}; the series
    // converges at rate x nu, so K4 at x = 0.4 needs ~150 terms for 1e-8
    std::vector<Case> cases{{make_cycle(5), 0.5}, {make_complete(4), 0.4}};
    for (auto& [g, x] : cases) {
        auto f = ihara_resolvent(g, x);
        auto counts = nb_walk_counts(g, 150);
        Eigen::MatrixXd series = Eigen::MatrixXd::Zero(g.num_vertices(), g.num_vertices());
        double xk = 1.0;
        for (int k = 0; k <= 150; ++k, xk *= x)
            series += xk * counts.real[k];
        CHECK(((1.0 - x * x) * f - series).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("ihara resolvent rejects x outside the convergence radius") {
    CHECK_THROWS_AS(ihara_resolvent(make_cycle(5), 1.0), OutOfConvergenceRadius);
    CHECK_THROWS_AS(ihara_resolvent(make_complete(4), 0.6), OutOfConvergenceRadius);
}

TEST_CASE("surface radius bounds") {
    CHECK(surface_radius_bound(6) == doctest::Approx(6.0)); // sqrt(12*6-36) = 6
    CHECK(surface_radius_bound(4) == doctest::Approx(4.0));
    CHECK(surface_radius_bound(5) == doctest::Approx(5.0));
    CHECK(surface_radius_bound(36) == doctest::Approx(std::sqrt(12.0 * 36 - 36)));
    CHECK(surface_radius_bound(40) ==
          doctest::Approx(std::sqrt(8.0 * 38.0) + 2.0 * std::sqrt(3.0)));
    // genus table: d(g) = 10 for g <= 1, 12 for 2 <= g <= 3, then 2g+6 / 2g+4
    CHECK(surface_radius_bound(14, 0) == doctest::Approx(std::sqrt(8.0 * 4.0) + 10.0));
    CHECK(surface_radius_bound(14, 1) == doctest::Approx(std::sqrt(8.0 * 4.0) + 10.0));
    CHECK(surface_radius_bound(15, 2) == doctest::Approx(std::sqrt(8.0 * 3.0) + 12.0));
    CHECK(surface_radius_bound(20, 4) == doctest::Approx(std::sqrt(8.0 * 6.0) + 14.0));
    CHECK(surface_radius_bound(20, 6) == doctest::Approx(std::sqrt(8.0 * 4.0) + 16.0));
    CHECK_THROWS_AS(surface_radius_bound(5, 0), PreconditionViolated);
}

TEST_CASE("nu(H) <= rho(A) holds empirically on the corpus (flagged, not asserted)") {
    int observed = 0, total = 0;
    for (const auto& [name, g] : testutil::small_named_graphs()) {
        double rho = perron_pair(adjacency_matrix(g)).rho;
        double nu = nb_spectral_radius(g);
        ++total;
        if (nu <= rho + 1e-9)
            ++observed;
    }
    CHECK(observed == total); // empirical record only; nothing general is claimed
}

TEST_CASE("operator two norm handles degenerate inputs") {
    CHECK(operator_two_norm(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
    // top singular space orthogonal to the all-ones start
    Eigen::VectorXd v(2);
    v << 1.0, -1.0;
    Eigen::MatrixXd m = 5.0 * (v * v.transpose()) / 2.0;
    CHECK(operator_two_norm(m) == doctest::Approx(5.0));
}

TEST_CASE("walk counts fall back to floating point on int64 overflow") {
    auto counts = nb_walk_counts(make_complete(8), 30);
    CHECK(!counts.exact);
    CHECK(counts.integer.empty());
    REQUIRE(counts.real.size() == 31);
    // the double-path recursion still matches exact integers where those fit
    auto small = nb_walk_counts(make_complete(8), 10);
    REQUIRE(small.exact);
    for (int k = 0; k <= 10; ++k)
        CHECK((counts.real[k] - small.integer[k].cast<double>()).cwiseAbs().maxCoeff() == 0.0);
    // growth rate approaches nu = 6 for K8
    double ratio = counts.real[30].sum() / counts.real[29].sum();
    CHECK(ratio == doctest::Approx(6.0).epsilon(1e-6));
}

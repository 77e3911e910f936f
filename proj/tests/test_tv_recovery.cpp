#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "gsmab/tv_recovery.hpp"
#include "oracles/lp_oracle.hpp"

using namespace gsmab;

namespace {

double oracle_value(const Graph& g, const SampleSet& s) {
    std::vector<oracle::LpEdge> edges;
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    std::vector<std::pair<std::size_t, double>> obs;
    for (std::size_t k = 0; k < s.size(); ++k) obs.emplace_back(s.nodes()[k], s.values()[k]);
    return oracle::min_tv_lp(g.node_count(), edges, obs).optimum;
}

SampleSet samples_of(std::initializer_list<std::pair<NodeId, double>> items) {
    SampleSet s;
    for (const auto& [n, v] : items) s.add(n, v);
    return s;
}

void check_feasible(const RecoveryResult& r, const SampleSet& s) {
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(r.signal[s.nodes()[k]] == s.values()[k]);
}

}  // namespace

TEST_CASE("lp oracle on hand-solvable instances") {
    const auto path = fixtures::path(3);
    CHECK(oracle_value(path, samples_of({{0, 0.0}, {2, 5.0}})) == doctest::Approx(5.0));
    CHECK(oracle_value(fixtures::dumbbell(3), samples_of({{0, 0.0}, {4, 1.0}})) == doctest::Approx(1.0));
    // Star: the free center sits at the median leaf value.
    CHECK(oracle_value(fixtures::star(3), samples_of({{1, 0.0}, {2, 0.0}, {3, 1.0}})) == doctest::Approx(1.0));
    // Median of {-2, 0.5, 3, 4} anywhere in [0.5, 3]: cost 2.5 + 0 + 2.5 + 3.5 = 8.5 at center 0.5.
    CHECK(oracle_value(fixtures::star(4), samples_of({{1, -2.0}, {2, 0.5}, {3, 3.0}, {4, 4.0}})) ==
          doctest::Approx(8.5));
    // Edge between two sampled nodes contributes a constant.
    CHECK(oracle_value(fixtures::path(2), samples_of({{0, 1.0}, {1, -2.0}})) == doctest::Approx(3.0));
}

TEST_CASE("sample set rejects duplicates and bad values") {
    SampleSet s;
    s.add(3, 1.0);
    CHECK_THROWS_AS(s.add(3, 2.0), std::domain_error);
    CHECK_THROWS_AS(s.add(4, std::nan("")), std::domain_error);
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(4));
}

TEST_CASE("recover: all nodes sampled returns the observations") {
    const auto g = fixtures::dumbbell(3);
    const GraphSignal x({0.5, -1.0, 2.0, 3.0, 3.0, 7.0});
    const std::vector<NodeId> all{0, 1, 2, 3, 4, 5};
    const auto r = recover(g, SampleSet::from_nodes(all, x));
    CHECK(r.signal == x);
    CHECK(r.objective == total_variation(g, x));
    CHECK(r.converged);
}

TEST_CASE("recover: single sample yields a constant signal") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
        const auto g = fixtures::random_connected(15, 0.2, rng);
        const auto r = recover(g, samples_of({{static_cast<NodeId>(t), 2.5}}));
        for (double v : r.signal.values()) CHECK(v == 2.5);
        CHECK(r.objective == 0.0);
    }
}

TEST_CASE("recover: two-triangle dumbbell") {
    const auto g = fixtures::dumbbell(3);
    const auto s = samples_of({{0, 0.0}, {4, 1.0}});
    const auto r = recover(g, s);
    const double opt = oracle_value(g, s);
    CHECK(opt == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.objective - opt) <= 1e-4 * opt);
    const std::vector<double> expected{0, 0, 0, 1, 1, 1};
    for (NodeId i = 0; i < 6; ++i) CHECK(std::abs(r.signal[i] - expected[i]) <= 1e-4);
    check_feasible(r, s);
}

TEST_CASE("recover: one sample per dumbbell cluster gives zero MSE") {
    const auto g = fixtures::dumbbell(3);
    const GraphSignal truth({0, 0, 0, 1, 1, 1});
    for (NodeId a = 0; a < 3; ++a)
        for (NodeId b = 3; b < 6; ++b) {
            const std::vector<NodeId> nodes{a, b};
            const auto r = recover(g, SampleSet::from_nodes(nodes, truth));
            CHECK(mse(truth, r.signal) <= 1e-10);
        }
}

TEST_CASE("recover: empty sample set and bad config") {
    const auto g = fixtures::path(4);
    CHECK_THROWS_AS(recover(g, SampleSet{}), std::domain_error);
    SolverConfig cfg;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(recover(g, samples_of({{0, 1.0}}), cfg), std::domain_error);
    CHECK_THROWS_AS(recover(g, samples_of({{9, 1.0}})), std::domain_error);
}

TEST_CASE("recover: iteration cap reports non-convergence") {
    const auto g = fixtures::path(30);
    SolverConfig cfg;
    cfg.max_iters = 3;
    const auto s = samples_of({{0, 0.0}, {29, 1.0}});
    const auto r = recover(g, s, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 3);
    check_feasible(r, s);
}

TEST_CASE("recover matches the LP oracle on random graphs") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 4 + t % 17;
        const auto g = fixtures::random_connected(n, 0.25, rng);
        std::vector<NodeId> order(n);
        for (NodeId i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t m = 1 + std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        SampleSet s;
        for (std::size_t k = 0; k < m; ++k) s.add(order[k], value(rng));
        const auto r = recover(g, s);
        const double opt = oracle_value(g, s);
        CAPTURE(t);
        CHECK(std::abs(r.objective - opt) <= 1e-4 * std::max(opt, 1e-9));
        check_feasible(r, s);
    }
}

TEST_CASE("recover: translation and scaling equivariance, range bound") {
    // The iteration is translation-equivariant but the default stopping rule
    // is not, so compare limits with a tight tolerance.
    SolverConfig tight;
    tight.rel_tol = 1e-13;
    tight.max_iters = 500000;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
        const auto g = fixtures::random_connected(18, 0.2, rng);
        SampleSet s, shifted, scaled;
        const double c = 3.75;
        const double k = -2.5;
        for (NodeId i = 0; i < 18; i += 3) {
            const double v = value(rng);
            s.add(i, v);
            shifted.add(i, v + c);
            scaled.add(i, k * v);
        }
        const auto r = recover(g, s, tight);
        const auto rs = recover(g, shifted, tight);
        const auto rk = recover(g, scaled, tight);
        for (NodeId i = 0; i < 18; ++i) CHECK(std::abs(rs.signal[i] - (r.signal[i] + c)) <= 1e-6);
        CHECK(rs.objective == doctest::Approx(r.objective).epsilon(1e-8));
        CHECK(rk.objective == doctest::Approx(std::abs(k) * r.objective).epsilon(1e-8));
        const auto [lo, hi] = std::minmax_element(s.values().begin(), s.values().end());
        for (double v : r.signal.values()) {
            CHECK(v >= *lo - 1e-9);
            CHECK(v <= *hi + 1e-9);
        }
    }
}

TEST_CASE("objective certificate") {
    const auto g = fixtures::dumbbell(3);
    const GraphSignal truth({0, 0, 0, 1, 1, 1});
    const std::vector<NodeId> nodes{0, 4};
    const auto s = SampleSet::from_nodes(nodes, truth);
    auto r = recover(g, s);
    CHECK(tv_objective_certificate(g, s, r, truth, 1e-4));
    CHECK(r.objective == doctest::Approx(total_variation(g, truth)).epsilon(1e-4));
    r.objective = total_variation(g, truth) + 0.5;
    CHECK_FALSE(tv_objective_certificate(g, s, r, truth));
    const GraphSignal infeasible({1, 0, 0, 1, 1, 1});
    CHECK_THROWS_AS(tv_objective_certificate(g, s, r, infeasible), std::domain_error);
}

#include "doctest.h"

#include "repsep/transport.hpp"
#include "support.hpp"

using namespace repsep;
using doctest::Approx;

namespace {

void check_feasible(const TransportPlan& t, Eigen::Index m, Eigen::Index n) {
  REQUIRE(t.plan.rows() == m);
  REQUIRE(t.plan.cols() == n);
  CHECK(t.plan.minCoeff() >= -1e-12);
  for (Eigen::Index r = 0; r < m; ++r) CHECK(std::abs(t.plan.row(r).sum() - 1.0 / static_cast<double>(m)) <= 1e-8);
  for (Eigen::Index c = 0; c < n; ++c) CHECK(std::abs(t.plan.col(c).sum() - 1.0 / static_cast<double>(n)) <= 1e-8);
}

Eigen::Index nonzeros(const Matrix& plan) { return (plan.array() > 1e-15).count(); }

bool is_scaled_permutation(const Matrix& plan) {
  const auto n = plan.rows();
  for (Eigen::Index r = 0; r < n; ++r) {
    int hits = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double v = plan(r, c);
      if (std::abs(v - 1.0 / static_cast<double>(n)) <= 1e-8) {
        ++hits;
      } else if (std::abs(v) > 1e-8) {
        return false;
      }
    }
    if (hits != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("zero cost: any feasible plan, cost 0") {
  for (auto [m, n] : {std::pair<int, int>{1, 1}, {2, 3}, {4, 4}, {6, 4}, {7, 1}}) {
    const auto t = solve_transport(Matrix::Zero(m, n));
    check_feasible(t, m, n);
    CHECK(t.cost == 0.0);
  }
}

TEST_CASE("2x2 anti-diagonal cost picks the diagonal") {
  const auto t = solve_transport((Matrix(2, 2) << 0, 1, 1, 0).finished());
  CHECK(t.cost == 0.0);
  CHECK((t.plan - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("square instances match the permutation oracle") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 5;
    const Matrix cost = testing::random_integer_costs(rng, n, n);
    const auto t = solve_transport(cost);
    check_feasible(t, n, n);
    CHECK(std::llround(t.cost * static_cast<double>(n)) == std::llround(testing::min_permutation_sum(cost)));
    CHECK(t.cost == Approx(testing::min_permutation_sum(cost) / static_cast<double>(n)).epsilon(1e-12));
    CHECK(is_scaled_permutation(t.plan));
    CHECK(brute_force_transport(cost).cost == Approx(t.cost).epsilon(1e-12));
  }
}

TEST_CASE("rectangular instances match the basis-enumeration oracle") {
  std::mt19937_64 rng(202);
  const std::vector<std::pair<int, int>> shapes = {{3, 5}, {2, 3}, {3, 2}, {1, 6}, {4, 2}, {2, 6}, {3, 4}, {5, 2}, {4, 6}, {2, 9}};
  for (int trial = 0; trial < 40; ++trial) {
    const auto [m, n] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const Matrix cost = testing::random_integer_costs(rng, m, n);
    const auto t = solve_transport(cost);
    const auto oracle = brute_force_transport(cost);
    check_feasible(t, m, n);
    check_feasible(oracle, m, n);
    CHECK(std::abs(t.cost - oracle.cost) <= 1e-9);
    CHECK(nonzeros(t.plan) <= m + n - 1);
  }
}

TEST_CASE("real-valued costs") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index m = 1 + trial % 5, n = 1 + (trial * 7) % 6;
    if (m * n > 30) continue;
    const Matrix cost = testing::gaussian(rng, m, n).cwiseAbs() * 3.7;
    CHECK(std::abs(solve_transport(cost).cost - brute_force_transport(cost).cost) <= 1e-9);
  }
}

TEST_CASE("brute_force_transport edge cases") {
  const Matrix row = (Matrix(1, 4) << 4, 1, 3, 8).finished();
  const auto single = brute_force_transport(row);
  CHECK((single.plan - Matrix::Constant(1, 4, 0.25)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(single.cost == Approx(4.0));
  CHECK(solve_transport(row).cost == Approx(4.0));

  const auto flat = brute_force_transport(Matrix::Constant(2, 2, 3.5));
  CHECK(flat.cost == Approx(3.5));
  CHECK(solve_transport(Matrix::Constant(2, 2, 3.5)).cost == Approx(3.5));

  CHECK_THROWS_WITH_AS(brute_force_transport(Matrix::Zero(6, 6)), doctest::Contains("limit"), Error);
  CHECK_THROWS_AS(brute_force_transport(Matrix::Zero(4, 8)), Error);
}

TEST_CASE("solver error paths") {
  CHECK_THROWS_AS(solve_transport(Matrix::Zero(0, 3)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 0) = NAN;
  CHECK_THROWS_WITH_AS(solve_transport(bad), doctest::Contains("non-finite"), Error);
}

TEST_CASE("certificate: complementary slackness from the final duals") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index m = 1 + trial % 9, n = 1 + (trial * 5) % 12;
    const Matrix cost = trial % 2 ? testing::random_integer_costs(rng, m, n, 3) : testing::gaussian(rng, m, n).cwiseAbs();
    const auto cert = detail::solve_transport_certified(cost);
    check_feasible(cert.result, m, n);
    REQUIRE(static_cast<Eigen::Index>(cert.basis.size()) == m + n - 1);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        CHECK(cert.row_potential(r) + cert.col_potential(c) <= cost(r, c) + 1e-9);
    for (const auto& cell : cert.basis)
      CHECK(std::abs(cert.row_potential(cell.row) + cert.col_potential(cell.col) - cost(cell.row, cell.col)) <= 1e-9);
    // every nonzero plan entry sits on a basic cell
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        if (cert.result.plan(r, c) <= 0) continue;
        const bool basic = std::any_of(cert.basis.begin(), cert.basis.end(),
                                       [&](const auto& b) { return b.row == r && b.col == c; });
        CHECK(basic);
      }
    // the exact perturbation keeps every pivot nondegenerate
    CHECK(cert.degenerate_pivots == 0);
    CHECK_FALSE(cert.used_bland);
  }
}

TEST_CASE("heavily degenerate shapes stay feasible and optimal") {
  std::mt19937_64 rng(505);
  for (auto [m, n] : {std::pair<int, int>{4, 6}, {6, 4}, {5, 5}, {3, 9}, {12, 8}, {30, 20}, {64, 64}}) {
    const Matrix cost = testing::random_integer_costs(rng, m, n, 2);
    const auto t = solve_transport(cost);
    check_feasible(t, m, n);
    CHECK(nonzeros(t.plan) <= m + n - 1);
    if (m * n <= 30) CHECK(std::abs(t.cost - brute_force_transport(cost).cost) <= 1e-9);
  }
}

TEST_CASE("square plans are scaled permutations") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 20;
    const auto t = solve_transport(testing::gaussian(rng, n, n).cwiseAbs());
    CHECK(is_scaled_permutation(t.plan));
  }
}

TEST_CASE("adding a constant shifts the optimum by exactly that constant") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index m = 1 + trial % 6, n = 1 + (trial * 3) % 7;
    const Matrix cost = testing::random_integer_costs(rng, m, n);
    const double shift = 17.0;
    const auto base = solve_transport(cost);
    const Matrix shifted_cost = cost.array() + shift;
    const auto shifted = solve_transport(shifted_cost);
    CHECK(shifted.cost == Approx(base.cost + shift).epsilon(1e-12));
    // the old plan is still optimal for the shifted costs
    CHECK(base.plan.cwiseProduct(shifted_cost).sum() == Approx(shifted.cost).epsilon(1e-12));
  }
}

TEST_CASE("larger instance runs and certifies") {
  std::mt19937_64 rng(808);
  const Matrix cost = testing::gaussian(rng, 120, 90).cwiseAbs();
  const auto cert = detail::solve_transport_certified(cost);
  check_feasible(cert.result, 120, 90);
  const Matrix reduced = cost - cert.row_potential.replicate(1, 90) - cert.col_potential.transpose().replicate(120, 1);
  CHECK(reduced.minCoeff() >= -1e-9);
}

#include <doctest.h>

#include <random>

#include "liftedmix/lp.hpp"

using namespace liftedmix;
using lp::RevisedSimplex;
using lp::Status;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Primal feasibility, dual feasibility and a zero duality gap.
void check_optimal(const RevisedSimplex& s, const std::vector<Vector>& cols, const std::vector<double>& cost,
                   const Vector& b) {
  const Vector x = s.primal();
  Vector Ax = Vector::Zero(b.size());
  double cx = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    CHECK(x[static_cast<Index>(j)] >= -1e-12);
    Ax += x[static_cast<Index>(j)] * cols[j];
    cx += cost[j] * x[static_cast<Index>(j)];
    CHECK(cost[j] - s.duals().dot(cols[j]) >= -1e-9);
  }
  CHECK((Ax - b).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(cx == doctest::Approx(s.objective()).epsilon(1e-9));
  CHECK(s.duals().dot(b) == doctest::Approx(cx).epsilon(1e-9));
}

}  // namespace

TEST_CASE("small LP with a known optimum") {
  // min -x1 - 2 x2  s.t. x1 + x2 + s1 = 4, x2 + s2 = 3
  RevisedSimplex s(vec({4, 3}));
  s.add_column(vec({1, 0}), -1);
  s.add_column(vec({1, 1}), -2);
  s.add_column(vec({1, 0}), 0);
  s.add_column(vec({0, 1}), 0);
  REQUIRE(s.solve() == Status::Optimal);
  CHECK(s.objective() == doctest::Approx(-7));
  CHECK(s.primal()[0] == doctest::Approx(1));
  CHECK(s.primal()[1] == doctest::Approx(3));
}

TEST_CASE("infeasible and unbounded problems") {
  // One column cannot meet rows asking for 1 and 2.
  RevisedSimplex conflict(vec({1, 2}));
  conflict.add_column(vec({1, 1}), 0);
  CHECK(conflict.solve() == Status::Infeasible);

  RevisedSimplex unb(vec({1}));
  unb.add_column(vec({1}), 0);
  unb.add_column(vec({1}), -1);
  unb.add_column(vec({-1}), -1);
  CHECK(unb.solve() == Status::Unbounded);
}

TEST_CASE("random LPs satisfy strong duality") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 2 + trial % 7, n = m + 3 + trial % 11;
    // Feasible by construction: b = A x0 with x0 > 0; bounded because c > 0.
    std::vector<Vector> cols;
    std::vector<double> cost;
    Vector x0(n);
    for (int j = 0; j < n; ++j) {
      cols.push_back(Vector::NullaryExpr(m, [&] { return u(rng) < 0.3 ? 0.0 : u(rng); }));
      cost.push_back(0.1 + u(rng));
      x0[j] = u(rng);
    }
    Vector b = Vector::Zero(m);
    for (int j = 0; j < n; ++j) b += x0[j] * cols[j];
    RevisedSimplex s(b);
    for (int j = 0; j < n; ++j) s.add_column(cols[j], cost[j]);
    REQUIRE(s.solve() == Status::Optimal);
    check_optimal(s, cols, cost, b);
  }
}

TEST_CASE("warm start after appending columns matches a cold solve") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4, n = 12;
    std::vector<Vector> cols;
    std::vector<double> cost;
    for (int j = 0; j < n; ++j) {
      cols.push_back(Vector::NullaryExpr(m, [&] { return u(rng); }));
      cost.push_back(u(rng));
    }
    Vector b = cols[0] + cols[1] + cols[2];
    RevisedSimplex warm(b);
    for (int j = 0; j < n / 2; ++j) warm.add_column(cols[j], cost[j]);
    REQUIRE(warm.solve() == Status::Optimal);
    const double first = warm.objective();
    for (int j = n / 2; j < n; ++j) warm.add_column(cols[j], cost[j]);
    REQUIRE(warm.solve() == Status::Optimal);
    CHECK(warm.objective() <= first + 1e-12);

    RevisedSimplex cold(b);
    for (int j = 0; j < n; ++j) cold.add_column(cols[j], cost[j]);
    REQUIRE(cold.solve() == Status::Optimal);
    CHECK(warm.objective() == doctest::Approx(cold.objective()).epsilon(1e-9));
    check_optimal(warm, cols, cost, b);
  }
}

TEST_CASE("degenerate transportation problem") {
  // 3x3 assignment: every basic solution is degenerate.
  Vector b = Vector::Ones(6);
  std::vector<Vector> cols;
  std::vector<double> cost;
  const double c[3][3] = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  RevisedSimplex s(b);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vector a = Vector::Zero(6);
      a[i] = 1;
      a[3 + j] = 1;
      cols.push_back(a);
      cost.push_back(c[i][j]);
      s.add_column(a, c[i][j]);
    }
  REQUIRE(s.solve() == Status::Optimal);
  CHECK(s.objective() == doctest::Approx(5));
  check_optimal(s, cols, cost, b);
}

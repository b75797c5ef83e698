#include <functional>
#include <random>

#include "doctest.h"
#include "rdm/error.hpp"
#include "rdm/lp.hpp"

using namespace rdm;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

LinearModel pairwise_cover(bool integral) {
  LinearModel m;
  for (int i = 0; i < 3; ++i) m.add_variable("x" + std::to_string(i), 0, 1, integral, 1);
  m.add_constraint("c01", {{0, 1}, {1, 1}}, Sense::greater_equal, 1);
  m.add_constraint("c12", {{1, 1}, {2, 1}}, Sense::greater_equal, 1);
  m.add_constraint("c02", {{0, 1}, {2, 1}}, Sense::greater_equal, 1);
  return m;
}

// Vertex enumeration: every choice of n tight rows among constraints and
// bounds, solved by exact Gaussian elimination. Returns the best feasible
// objective, or nullopt when no vertex is feasible.
std::optional<Rational> vertex_oracle(const LinearModel& m) {
  const std::size_t n = m.variable_count();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (const auto& c : m.constraints()) {
    std::vector<Rational> row(n);
    for (const auto& [j, a] : c.terms) row[j] += a;
    rows.push_back(row);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(n);
    row[j] = 1;
    rows.push_back(row);
    rhs.push_back(m.variable(j).lower);
    rows.push_back(row);
    rhs.push_back(m.variable(j).upper);
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t start) {
    if (pick.size() == n) {
      std::vector<std::vector<Rational>> a;
      for (auto r : pick) {
        auto row = rows[r];
        row.push_back(rhs[r]);
        a.push_back(row);
      }
      for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && sgn(a[piv][col]) == 0) ++piv;
        if (piv == n) return;  // singular
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == col || sgn(a[r][col]) == 0) continue;
          Rational f = a[r][col] / a[col][col];
          for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
        }
      }
      std::vector<Rational> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
      if (!satisfies(m, x)) return;
      Rational obj = 0;
      for (std::size_t j = 0; j < n; ++j) obj += m.variable(j).objective * x[j];
      if (!best || obj < *best) best = obj;
      return;
    }
    for (std::size_t r = start; r < rows.size(); ++r) {
      pick.push_back(r);
      choose(r + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

// Exhaustive search over integer points of the bounding box.
std::optional<Rational> integer_oracle(const LinearModel& m) {
  const std::size_t n = m.variable_count();
  std::vector<Rational> x(n);
  std::optional<Rational> best;
  std::function<void(std::size_t)> go = [&](std::size_t j) {
    if (j == n) {
      if (!satisfies(m, x)) return;
      Rational obj = 0;
      for (std::size_t k = 0; k < n; ++k) obj += m.variable(k).objective * x[k];
      if (!best || obj < *best) best = obj;
      return;
    }
    for (long v = m.variable(j).lower.get_num().get_si(); v <= m.variable(j).upper.get_num().get_si();
         ++v) {
      x[j] = v;
      go(j + 1);
    }
  };
  go(0);
  return best;
}

LinearModel random_model(std::mt19937& rng, std::size_t vars, std::size_t cons, bool integral) {
  LinearModel m;
  for (std::size_t j = 0; j < vars; ++j) {
    long lo = static_cast<long>(rng() % 3) - 1;
    long hi = lo + static_cast<long>(rng() % 4);
    m.add_variable("v" + std::to_string(j), lo, hi, integral,
                   R(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2)));
  }
  for (std::size_t i = 0; i < cons; ++i) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (std::size_t j = 0; j < vars; ++j) {
      long a = static_cast<long>(rng() % 5) - 2;
      if (a != 0) terms.emplace_back(j, R(a));
    }
    Sense s = static_cast<Sense>(rng() % 3);
    if (s == Sense::equal && rng() % 2) s = Sense::greater_equal;
    m.add_constraint("c" + std::to_string(i), terms, s, R(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
  }
  return m;
}

}  // namespace

TEST_CASE("trivial LPs") {
  LinearModel m;
  m.add_variable("x", 0, 1, false, 1);
  m.add_constraint("c", {{0, 1}}, Sense::greater_equal, 1);
  auto s = solve_lp(m);
  CHECK(s.optimal());
  CHECK(s.objective == 1);

  auto half = solve_lp(pairwise_cover(false));
  CHECK(half.objective == R(3, 2));
  for (const auto& v : half.values) CHECK(v == R(1, 2));
  CHECK_FALSE(is_integral(half, {0, 1, 2}));

  LinearModel bad;
  bad.add_variable("x", 0, 5, false, 1);
  bad.add_constraint("lo", {{0, 1}}, Sense::greater_equal, 2);
  bad.add_constraint("hi", {{0, 1}}, Sense::less_equal, 1);
  CHECK(solve_lp(bad).status == SolveStatus::infeasible);
  CHECK(solve_mip(bad).status == SolveStatus::infeasible);
}

TEST_CASE("empty and degenerate models") {
  LinearModel none;
  auto s = solve_lp(none);
  CHECK(s.optimal());
  CHECK(s.objective == 0);

  LinearModel neg;
  neg.add_variable("x", -2, 3, false, -1);  // no constraints: goes to its upper bound
  neg.add_variable("y", R(1, 3), R(1, 3), false, 5);
  auto t = solve_lp(neg);
  CHECK(t.objective == -3 + R(5, 3));

  LinearModel empty_row;
  empty_row.add_variable("x", 0, 1, false, 1);
  empty_row.add_constraint("never", {}, Sense::greater_equal, 1);
  CHECK(solve_lp(empty_row).status == SolveStatus::infeasible);

  LinearModel inverted;
  inverted.add_variable("x", 1, 0, false, 1);
  CHECK_THROWS_AS(solve_lp(inverted), Error);
}

TEST_CASE("branch and bound on the pairwise cover") {
  auto lp = solve_lp(pairwise_cover(true));
  auto mip = solve_mip(pairwise_cover(true));
  REQUIRE(mip.optimal());
  CHECK(mip.objective == *integer_oracle(pairwise_cover(true)));
  CHECK(mip.objective == 2);
  CHECK(is_integral(mip, {0, 1, 2}));
  CHECK(lp.objective <= mip.objective);
  CHECK(mip.stats.nodes == 3);
}

TEST_CASE("integral root needs a single node") {
  LinearModel m;
  m.add_variable("x", 0, 1, true, 1);
  m.add_variable("y", 0, 1, true, 2);
  m.add_constraint("c", {{0, 1}, {1, 1}}, Sense::greater_equal, 1);
  auto lp = solve_lp(m);
  auto mip = solve_mip(m);
  CHECK(mip.stats.nodes == 1);
  CHECK(mip.values == lp.values);
  CHECK(mip.objective == lp.objective);
}

TEST_CASE("mixed model") {
  LinearModel m;
  std::size_t y = m.add_variable("y", 0, 1, true, 0);
  std::size_t x = m.add_variable("x", 0, 1, false, 1);
  m.add_constraint("link", {{x, 1}, {y, R(-1, 2)}}, Sense::greater_equal, 0);
  m.add_constraint("force", {{y, 1}}, Sense::greater_equal, 1);
  auto s = solve_mip(m);
  CHECK(s.values[y] == 1);
  CHECK(s.values[x] == R(1, 2));
  CHECK(s.objective == R(1, 2));
}

TEST_CASE("node limit raises an explicit error") {
  try {
    solve_mip(pairwise_cover(true), {1});
    FAIL("no limit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::limit);
  }
}

TEST_CASE("is_integral") {
  LinearSolution s;
  s.status = SolveStatus::optimal;
  s.values = {R(1), R(1, 2)};
  CHECK(is_integral(s, {0}));
  CHECK_FALSE(is_integral(s, {1}));
  CHECK(is_integral(s, {}));
}

TEST_CASE("LP text format") {
  LinearModel m;
  m.add_variable("x(A,1)", 0, 1, true, 2);
  m.add_variable("y", 0, R(1, 3), false, R(-1, 4));
  m.add_constraint("w0", {{0, 1}, {1, -3}}, Sense::greater_equal, 1);
  m.add_constraint("fix", {{1, 1}}, Sense::equal, R(1, 8));
  CHECK(to_lp_format(m) ==
        "\\ rdm linear model: 2 variables, 2 constraints\n"
        "Minimize\n"
        " obj: 2 x(A,1) - 0.25 y\n"
        "Subject To\n"
        " w0: x(A,1) - 3 y >= 1\n"
        " fix: y = 0.125\n"
        "Bounds\n"
        " 0 <= x(A,1) <= 1\n"
        " 0 <= y <= 1/3\n"
        "General\n"
        " x(A,1)\n"
        "End\n");
}

TEST_CASE("property: simplex matches vertex enumeration") {
  std::mt19937 rng(2024);
  for (int n = 0; n < 400; ++n) {
    std::size_t vars = 1 + rng() % 3;
    LinearModel m = random_model(rng, vars, rng() % 4, false);
    auto s = solve_lp(m);
    auto oracle = vertex_oracle(m);
    REQUIRE(s.optimal() == oracle.has_value());
    if (oracle) {
      CHECK(s.objective == *oracle);
      CHECK(satisfies(m, s.values));
    }
    CHECK(solve_lp(m).values == s.values);  // deterministic
  }
}

TEST_CASE("property: branch and bound matches integer enumeration; weak duality") {
  std::mt19937 rng(77);
  for (int n = 0; n < 300; ++n) {
    LinearModel m = random_model(rng, 1 + rng() % 4, rng() % 5, true);
    auto lp = solve_lp(m);
    auto mip = solve_mip(m);
    auto oracle = integer_oracle(m);
    REQUIRE(mip.optimal() == oracle.has_value());
    if (!oracle) continue;
    CHECK(mip.objective == *oracle);
    REQUIRE(lp.optimal());
    CHECK(lp.objective <= mip.objective);
    CHECK(is_integral(mip, integral_variables(m)));
  }
}

TEST_CASE("property: interval matrices give integral vertices") {
  // Rows with consecutive ones are totally unimodular.
  std::mt19937 rng(3);
  for (int n = 0; n < 100; ++n) {
    std::size_t vars = 3 + rng() % 6;
    LinearModel m;
    for (std::size_t j = 0; j < vars; ++j) {
      m.add_variable("v" + std::to_string(j), 0, 1, false, 1 + static_cast<long>(rng() % 4));
    }
    for (int i = 0; i < 6; ++i) {
      std::size_t a = rng() % vars, b = rng() % vars;
      if (a > b) std::swap(a, b);
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t j = a; j <= b; ++j) terms.emplace_back(j, 1);
      m.add_constraint("i" + std::to_string(i), terms, Sense::greater_equal, 1);
    }
    auto s = solve_lp(m);
    REQUIRE(s.optimal());
    std::vector<std::size_t> all(vars);
    for (std::size_t j = 0; j < vars; ++j) all[j] = j;
    CHECK(is_integral(s, all));
  }
}

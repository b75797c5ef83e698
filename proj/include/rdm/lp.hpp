#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdm/rational.hpp"

namespace rdm {

enum class Sense { greater_equal, less_equal, equal };

struct LinearVariable {
  std::string name;
  Rational lower = 0;
  Rational upper = 1;
  bool integral = false;
  Rational objective = 0;
};

struct LinearConstraint {
  std::string name;
  std::vector<std::pair<std::size_t, Rational>> terms;  // (variable index, coefficient)
  Sense sense = Sense::greater_equal;
  Rational rhs = 0;
};

/// A minimization model with finite bounds on every variable.
class LinearModel {
 public:
  std::size_t add_variable(std::string name, Rational lower, Rational upper, bool integral,
                           Rational objective);
  std::size_t add_constraint(std::string name,
                             std::vector<std::pair<std::size_t, Rational>> terms, Sense sense,
                             Rational rhs);

  const std::vector<LinearVariable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  LinearVariable& variable(std::size_t i) { return variables_.at(i); }
  const LinearVariable& variable(std::size_t i) const { return variables_.at(i); }

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t constraint_count() const { return constraints_.size(); }

  /// Copy with every integrality flag cleared.
  LinearModel relaxed() const;

  /// Throws Error(invalid_argument) when a bound is inverted or a constraint
  /// references an unknown variable.
  void validate() const;

 private:
  std::vector<LinearVariable> variables_;
  std::vector<LinearConstraint> constraints_;
};

enum class SolveStatus { optimal, infeasible };

struct SolveStats {
  std::uint64_t iterations = 0;  // simplex pivots, including bound flips
  std::uint64_t nodes = 0;       // branch-and-bound nodes (1 for a plain LP)
};

struct LinearSolution {
  SolveStatus status = SolveStatus::infeasible;
  Rational objective = 0;
  std::vector<Rational> values;
  bool basic = false;  // values form a vertex of the feasible region
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::optimal; }
};

struct MipOptions {
  std::uint64_t node_limit = 1'000'000;
};

/// Exact primal simplex (two phases, bounded variables, Bland's rule).
/// Integrality flags are ignored. Every optimal answer is audited against the
/// model; an audit failure throws Error(internal).
LinearSolution solve_lp(const LinearModel& model);

/// Branch-and-bound over solve_lp: best-bound node order, most fractional
/// integral variable first (ties to the lowest index). Throws Error(limit)
/// when the node limit is reached.
LinearSolution solve_mip(const LinearModel& model, const MipOptions& options = {});

/// True iff every listed variable has an integer value.
bool is_integral(const LinearSolution& solution, const std::vector<std::size_t>& variables);

/// Indices of the model's integral-flagged variables.
std::vector<std::size_t> integral_variables(const LinearModel& model);

/// Exact check of bounds and constraints.
bool satisfies(const LinearModel& model, const std::vector<Rational>& values);

/// CPLEX-style LP text. Coefficients use to_decimal_string, so non-decimal
/// rationals appear as p/q.
std::string to_lp_format(const LinearModel& model);

}  // namespace rdm

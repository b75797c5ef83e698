#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rdm/instance.hpp"
#include "rdm/lp.hpp"
#include "rdm/query.hpp"
#include "rdm/witness.hpp"

namespace rdm {

enum class SolveMode {
  lp,         // relaxation only
  ilp,        // branch-and-bound on the full integer model
  automatic,  // relaxation first, branch-and-bound only if the vertex is fractional
  milp,       // responsibility: only the preservation indicators stay integral
};

const char* to_string(SolveMode m);
SolveMode parse_solve_mode(const std::string& text);

struct SolveOptions {
  Semantics semantics = Semantics::set;
  SolveMode mode = SolveMode::automatic;
  std::uint64_t node_limit = 1'000'000;
};

/// A linear model together with the tuple behind each deletion variable.
struct InterventionModel {
  LinearModel model;
  std::vector<TupleId> tuple_of;  // tuple_of[j] for the deletion variable j
  std::map<TupleId, std::size_t> variable_of;
};

/// Variables x(R,row) in [0,1] (integral) for every endogenous tuple; one
/// covering row per distinct witness tuple set; objective weights 1 (set) or
/// the multiplicity (bag). Throws Error(undefined) if some witness has no
/// endogenous tuple.
InterventionModel build_resilience_model(const Query& q, const Instance& inst,
                                         Semantics semantics);

struct ResilienceResult {
  Rational value;
  std::set<TupleId> deleted;  // empty when the lp-mode answer is fractional
  Rational lp_bound;
  bool lp_integral = false;
  Semantics semantics = Semantics::set;
  SolveMode mode = SolveMode::automatic;
  bool exact = true;  // false only for a fractional lp-mode answer
  SolveStats stats;
};

ResilienceResult solve_resilience(const Query& q, const Instance& inst,
                                  const SolveOptions& options = {});

/// Counterfactual model for `target`. Adds y(w) in {0,1} for every witness
/// containing the target, x(t) <= y(w) links, a covering row for every other
/// witness, and sum y(w) <= (#target witnesses - 1). x(target) is fixed to 0.
struct ResponsibilityModel {
  InterventionModel base;
  std::vector<std::size_t> preservation_vars;  // the y(w)
  std::size_t target_witnesses = 0;
};

ResponsibilityModel build_responsibility_model(const Query& q, const Instance& inst,
                                               const TupleId& target, Semantics semantics);

enum class ResponsibilityStatus {
  counterfactual,     // a contingency exists; responsibility = 1/(1+cost)
  no_counterfactual,  // the model is infeasible; responsibility 0
  no_witness,         // the target supports no witness; responsibility 0
};

const char* to_string(ResponsibilityStatus s);

struct ResponsibilityResult {
  TupleId target;
  ResponsibilityStatus status = ResponsibilityStatus::counterfactual;
  std::set<TupleId> contingency;
  Rational cost;
  Rational responsibility;
  std::optional<Witness> preserved_witness;
  Rational lp_bound;                 // every variable relaxed
  Rational relaxation_value;         // the first model solved (MILP in milp mode)
  bool relaxation_integral = false;  // its deletion variables came out integral
  Semantics semantics = Semantics::set;
  SolveMode mode = SolveMode::milp;
  SolveStats stats;
};

/// mode is milp or ilp. In milp mode a fractional deletion vector triggers a
/// full integer re-solve; `cost` is always the integer optimum.
ResponsibilityResult solve_responsibility(const Query& q, const Instance& inst,
                                          const TupleId& target,
                                          const SolveOptions& options = {Semantics::set,
                                                                          SolveMode::milp});

/// Witnesses surviving in `inst` after deleting `ids` (pure check helper).
std::vector<Witness> surviving_witnesses(const Query& q, const Instance& inst,
                                         const std::set<TupleId>& ids);

}  // namespace rdm

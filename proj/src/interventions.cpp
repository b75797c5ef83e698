#include "rdm/interventions.hpp"

#include <algorithm>

#include "rdm/error.hpp"

namespace rdm {

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::lp: return "lp";
    case SolveMode::ilp: return "ilp";
    case SolveMode::automatic: return "auto";
    case SolveMode::milp: return "milp";
  }
  return "?";
}

SolveMode parse_solve_mode(const std::string& text) {
  if (text == "lp") return SolveMode::lp;
  if (text == "ilp") return SolveMode::ilp;
  if (text == "auto") return SolveMode::automatic;
  if (text == "milp") return SolveMode::milp;
  throw Error(ErrorCode::invalid_argument, "unknown solve mode '" + text + "'");
}

const char* to_string(ResponsibilityStatus s) {
  switch (s) {
    case ResponsibilityStatus::counterfactual: return "counterfactual";
    case ResponsibilityStatus::no_counterfactual: return "no_counterfactual";
    case ResponsibilityStatus::no_witness: return "no_witness";
  }
  return "?";
}

namespace {

std::string variable_name(const TupleId& id) {
  return "x(" + id.relation + "," + std::to_string(id.row) + ")";
}

Rational weight(const TupleRef& t, Semantics semantics) {
  return semantics == Semantics::bag ? Rational(static_cast<long>(t.multiplicity)) : Rational(1);
}

// One deletion variable per endogenous tuple, relations in query order.
InterventionModel deletion_variables(const Query& q, const Instance& inst, Semantics semantics,
                                     bool integral) {
  InterventionModel out;
  for (const auto& rel : q.relations()) {
    if (q.is_exogenous(rel)) continue;
    for (const auto& t : inst.relation(rel)) {
      std::size_t j = out.model.add_variable(variable_name(t.id), 0, 1, integral,
                                             weight(t, semantics));
      out.tuple_of.push_back(t.id);
      out.variable_of.emplace(t.id, j);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, Rational>> covering_terms(const InterventionModel& m,
                                                             const std::set<TupleId>& tuples,
                                                             const TupleId* skip = nullptr) {
  std::vector<std::pair<std::size_t, Rational>> terms;
  for (const auto& t : tuples) {
    if (skip && t == *skip) continue;
    if (auto it = m.variable_of.find(t); it != m.variable_of.end()) {
      terms.emplace_back(it->second, Rational(1));
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return terms;
}

std::set<TupleId> at_one(const InterventionModel& m, const LinearSolution& s) {
  std::set<TupleId> out;
  for (std::size_t j = 0; j < m.tuple_of.size(); ++j) {
    if (s.values[j] == 1) out.insert(m.tuple_of[j]);
  }
  return out;
}

std::vector<std::size_t> deletion_indices(const InterventionModel& m) {
  std::vector<std::size_t> out(m.tuple_of.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = j;
  return out;
}

void accumulate(SolveStats& into, const SolveStats& s) {
  into.iterations += s.iterations;
  into.nodes += s.nodes;
}

}  // namespace

InterventionModel build_resilience_model(const Query& q, const Instance& inst,
                                         Semantics semantics) {
  InterventionModel out = deletion_variables(q, inst, semantics, true);
  ProvenanceDNF dnf = provenance_dnf(enumerate_witnesses(q, inst));
  for (std::size_t i = 0; i < dnf.terms.size(); ++i) {
    auto terms = covering_terms(out, dnf.terms[i].tuples);
    if (terms.empty()) {
      throw Error(ErrorCode::undefined,
                  "resilience undefined (infinite): a witness consists of exogenous tuples only");
    }
    out.model.add_constraint("w" + std::to_string(i), std::move(terms), Sense::greater_equal, 1);
  }
  return out;
}

ResilienceResult solve_resilience(const Query& q, const Instance& inst,
                                  const SolveOptions& options) {
  InterventionModel m = build_resilience_model(q, inst, options.semantics);
  ResilienceResult r;
  r.semantics = options.semantics;
  r.mode = options.mode;

  LinearSolution lp = solve_lp(m.model);
  accumulate(r.stats, lp.stats);
  r.lp_bound = lp.objective;
  r.lp_integral = is_integral(lp, deletion_indices(m));

  LinearSolution final;
  switch (options.mode) {
    case SolveMode::lp:
      r.value = lp.objective;
      r.exact = r.lp_integral;
      if (r.lp_integral) r.deleted = at_one(m, lp);
      return r;
    case SolveMode::automatic:
      if (r.lp_integral) {
        final = std::move(lp);
        break;
      }
      [[fallthrough]];
    case SolveMode::ilp:
    case SolveMode::milp: {
      final = solve_mip(m.model, {options.node_limit});
      accumulate(r.stats, final.stats);
      break;
    }
  }
  r.value = final.objective;
  r.deleted = at_one(m, final);

  ProvenanceDNF dnf = provenance_dnf(enumerate_witnesses(q, delete_tuples(inst, r.deleted)));
  if (!dnf.empty()) throw Error(ErrorCode::internal, "resilience audit: a witness survived");
  return r;
}

ResponsibilityModel build_responsibility_model(const Query& q, const Instance& inst,
                                               const TupleId& target, Semantics semantics) {
  inst.at(target);
  if (!inst.has_relation(target.relation) || q.is_exogenous(target.relation)) {
    throw Error(ErrorCode::invalid_argument,
                "target " + target.str() + " is not an endogenous tuple of the query");
  }
  auto rels = q.relations();
  if (std::find(rels.begin(), rels.end(), target.relation) == rels.end()) {
    throw Error(ErrorCode::invalid_argument,
                "target relation " + target.relation + " does not occur in the query");
  }

  ResponsibilityModel out;
  out.base = deletion_variables(q, inst, semantics, false);
  LinearModel& model = out.base.model;
  std::size_t xt = out.base.variable_of.at(target);
  model.variable(xt).upper = 0;
  model.variable(xt).objective = 0;

  ProvenanceDNF dnf = provenance_dnf(enumerate_witnesses(q, inst));
  for (std::size_t i = 0; i < dnf.terms.size(); ++i) {
    const auto& tuples = dnf.terms[i].tuples;
    std::string tag = "w" + std::to_string(i);
    if (!tuples.count(target)) {
      model.add_constraint(tag, covering_terms(out.base, tuples), Sense::greater_equal, 1);
      continue;
    }
    std::size_t y = model.add_variable("y(" + tag + ")", 0, 1, true, 0);
    out.preservation_vars.push_back(y);
    std::size_t k = 0;
    for (const auto& [x, _] : covering_terms(out.base, tuples, &target)) {
      model.add_constraint("link_" + tag + "_" + std::to_string(k++),
                           {{x, Rational(1)}, {y, Rational(-1)}}, Sense::less_equal, 0);
    }
  }
  out.target_witnesses = out.preservation_vars.size();
  std::vector<std::pair<std::size_t, Rational>> keep;
  for (auto y : out.preservation_vars) keep.emplace_back(y, Rational(1));
  model.add_constraint("preserve", std::move(keep), Sense::less_equal,
                       Rational(static_cast<long>(out.target_witnesses)) - 1);
  return out;
}

ResponsibilityResult solve_responsibility(const Query& q, const Instance& inst,
                                          const TupleId& target, const SolveOptions& options) {
  if (options.mode != SolveMode::milp && options.mode != SolveMode::ilp) {
    throw Error(ErrorCode::invalid_argument, "responsibility supports modes milp and ilp");
  }
  ResponsibilityModel rm = build_responsibility_model(q, inst, target, options.semantics);
  const InterventionModel& m = rm.base;
  ResponsibilityResult r;
  r.target = target;
  r.semantics = options.semantics;
  r.mode = options.mode;

  auto zero = [&](ResponsibilityStatus status) {
    r.status = status;
    r.cost = 0;
    r.responsibility = 0;
    return r;
  };
  if (rm.target_witnesses == 0) return zero(ResponsibilityStatus::no_witness);

  LinearSolution lp = solve_lp(m.model);
  accumulate(r.stats, lp.stats);
  if (!lp.optimal()) return zero(ResponsibilityStatus::no_counterfactual);
  r.lp_bound = lp.objective;

  LinearModel full = m.model;
  for (std::size_t j = 0; j < m.tuple_of.size(); ++j) full.variable(j).integral = true;

  LinearSolution final;
  if (options.mode == SolveMode::milp) {
    LinearSolution mixed = solve_mip(m.model, {options.node_limit});
    accumulate(r.stats, mixed.stats);
    if (!mixed.optimal()) return zero(ResponsibilityStatus::no_counterfactual);
    r.relaxation_value = mixed.objective;
    r.relaxation_integral = is_integral(mixed, deletion_indices(m));
    if (r.relaxation_integral) {
      final = std::move(mixed);
    } else {
      final = solve_mip(full, {options.node_limit});
      accumulate(r.stats, final.stats);
    }
  } else {
    r.relaxation_value = lp.objective;
    r.relaxation_integral = is_integral(lp, deletion_indices(m));
    final = solve_mip(full, {options.node_limit});
    accumulate(r.stats, final.stats);
  }
  if (!final.optimal()) return zero(ResponsibilityStatus::no_counterfactual);

  r.status = ResponsibilityStatus::counterfactual;
  r.cost = final.objective;
  r.responsibility = 1 / (1 + r.cost);
  r.contingency = at_one(m, final);

  auto survivors = surviving_witnesses(q, inst, r.contingency);
  bool ok = !survivors.empty() && std::all_of(survivors.begin(), survivors.end(), [&](const Witness& w) {
    return w.tuple_set.count(target) > 0;
  });
  if (!ok) throw Error(ErrorCode::internal, "responsibility audit: contingency is not counterfactual");
  r.preserved_witness = survivors.front();
  return r;
}

std::vector<Witness> surviving_witnesses(const Query& q, const Instance& inst,
                                         const std::set<TupleId>& ids) {
  return enumerate_witnesses(q, delete_tuples(inst, ids));
}

}  // namespace rdm

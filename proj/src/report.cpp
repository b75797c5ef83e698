#include "rdm/report.hpp"

namespace rdm {

using nlohmann::json;

namespace {

json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

json tuples_to_json(const std::set<TupleId>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

}  // namespace

json rational_to_json(const Rational& r) {
  return {{"num", integer_to_json(r.get_num())},
          {"den", integer_to_json(r.get_den())},
          {"decimal", to_decimal_string(r)}};
}

json stats_to_json(const SolveStats& s) {
  return {{"simplex_iterations", s.iterations}, {"bb_nodes", s.nodes}};
}

json expression_to_json(const FactorExpr& e) {
  switch (e.kind()) {
    case FactorExpr::Kind::leaf:
      return {{"tuple", e.tuple().str()}};
    case FactorExpr::Kind::sum:
    case FactorExpr::Kind::product: {
      json children = json::array();
      for (const auto& c : e.children()) children.push_back(expression_to_json(c));
      return {{e.kind() == FactorExpr::Kind::sum ? "sum" : "product", children}};
    }
  }
  return nullptr;
}

json resilience_payload(const ResilienceResult& r) {
  return {{"problem", "resilience"},
          {"semantics", to_string(r.semantics)},
          {"mode", to_string(r.mode)},
          {"value", rational_to_json(r.value)},
          {"exact", r.exact},
          {"deleted", tuples_to_json(r.deleted)},
          {"lp_bound", rational_to_json(r.lp_bound)},
          {"lp_integral", r.lp_integral},
          {"stats", stats_to_json(r.stats)}};
}

json responsibility_payload(const ResponsibilityResult& r) {
  json preserved = nullptr;
  if (r.preserved_witness) {
    preserved = {{"assignment", r.preserved_witness->assignment},
                 {"tuples", tuples_to_json(r.preserved_witness->tuple_set)}};
  }
  return {{"problem", "responsibility"},
          {"semantics", to_string(r.semantics)},
          {"mode", to_string(r.mode)},
          {"target", r.target.str()},
          {"status", to_string(r.status)},
          {"cost", rational_to_json(r.cost)},
          {"responsibility", rational_to_json(r.responsibility)},
          {"contingency", tuples_to_json(r.contingency)},
          {"preserved_witness", preserved},
          {"lp_bound", rational_to_json(r.lp_bound)},
          {"relaxation_value", rational_to_json(r.relaxation_value)},
          {"relaxation_integral", r.relaxation_integral},
          {"stats", stats_to_json(r.stats)}};
}

json factorize_payload(const MinFacResult& r) {
  json plans = json::array();
  for (const auto& p : r.plans) plans.push_back(p.id);
  json assignment = json::array();
  for (std::size_t w = 0; w < r.assignment.size(); ++w) {
    assignment.push_back({{"witness", tuples_to_json(r.dnf.terms[w].tuples)},
                          {"plan", r.plans[r.assignment[w]].id}});
  }
  return {{"problem", "factorize"},
          {"length", r.length},
          {"expression", to_text(r.expression)},
          {"expression_short", to_text(r.expression, LabelStyle::initial)},
          {"tree", r.expression.empty() ? json(nullptr) : expression_to_json(r.expression)},
          {"plans", plans},
          {"assignment", assignment},
          {"objective", rational_to_json(r.objective)},
          {"lp_bound", rational_to_json(r.lp_bound)},
          {"lp_integral", r.lp_integral},
          {"stats", stats_to_json(r.stats)}};
}

json classification_payload(const Query& q, const QueryClassification& c) {
  auto optional_bool = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
  json dominated = json::array();
  for (auto i : c.dominated_atoms) dominated.push_back(q.atom(i).relation);
  json triad = nullptr;
  if (c.triad) {
    triad = json::array();
    for (auto i : *c.triad) triad.push_back(q.atom(i).relation);
  }
  json predictions = json::object();
  for (const auto& [key, p] : c.predictions) {
    predictions[key] = {{"class", to_string(p.complexity)}, {"justification", p.justification}};
  }
  std::string text = print_query(q);
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return {{"problem", "classify"},
          {"query", text},
          {"self_join_free", c.self_join_free},
          {"hierarchical", optional_bool(c.hierarchical)},
          {"linear", optional_bool(c.linear)},
          {"dominated_atoms", dominated},
          {"triad", triad},
          {"canonical_plan_count",
           c.canonical_plan_count ? json(*c.canonical_plan_count) : json("unknown")},
          {"predictions", predictions},
          {"notes", c.notes}};
}

json oracle_resilience_payload(Semantics semantics, const Rational& value) {
  return {{"problem", "resilience"},
          {"oracle", true},
          {"semantics", to_string(semantics)},
          {"value", rational_to_json(value)}};
}

json oracle_responsibility_payload(Semantics semantics, const TupleId& target,
                                   const std::optional<Rational>& cost) {
  return {{"problem", "responsibility"},
          {"oracle", true},
          {"semantics", to_string(semantics)},
          {"target", target.str()},
          {"cost", cost ? rational_to_json(*cost) : json(nullptr)},
          {"responsibility", rational_to_json(cost ? 1 / (1 + *cost) : Rational(0))}};
}

json oracle_minfac_payload(std::size_t length) {
  return {{"problem", "factorize"}, {"oracle", true}, {"length", length}};
}

}  // namespace rdm

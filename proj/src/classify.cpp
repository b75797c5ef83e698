#include "rdm/classify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "rdm/error.hpp"
#include "rdm/factorize.hpp"

namespace rdm {

namespace {

void require_sjf(const Query& q) {
  if (!is_self_join_free(q)) {
    throw Error(ErrorCode::unsupported, "structural analysis requires a self-join-free query");
  }
}

std::set<std::string> var_set(const Atom& a) {
  auto v = a.variables();
  return {v.begin(), v.end()};
}

bool strict_subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

bool is_hierarchical(const Query& q) {
  require_sjf(q);
  std::vector<std::set<std::size_t>> at;
  for (const auto& v : q.variables()) at.push_back(atoms_of_variable(q, v));
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (std::size_t j = i + 1; j < at.size(); ++j) {
      const auto& a = at[i];
      const auto& b = at[j];
      bool nested = std::includes(a.begin(), a.end(), b.begin(), b.end()) ||
                    std::includes(b.begin(), b.end(), a.begin(), a.end());
      bool disjoint = std::none_of(a.begin(), a.end(), [&](std::size_t x) { return b.count(x) > 0; });
      if (!nested && !disjoint) return false;
    }
  }
  return true;
}

bool is_linear(const Query& q) {
  require_sjf(q);
  const std::size_t n = q.size();
  std::vector<std::set<std::size_t>> at;
  for (const auto& v : q.variables()) at.push_back(atoms_of_variable(q, v));

  // Extend the order one atom at a time. A variable whose atoms were started
  // and then left must not reappear.
  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  std::function<bool()> extend = [&]() {
    if (order.size() == n) return true;
    for (std::size_t a = 0; a < n; ++a) {
      if (used[a]) continue;
      bool ok = true;
      for (const auto& s : at) {
        if (!s.count(a) || order.empty()) continue;
        bool seen = false;
        for (auto b : order) seen = seen || s.count(b);
        if (seen && !s.count(order.back())) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[a] = true;
      order.push_back(a);
      if (extend()) return true;
      order.pop_back();
      used[a] = false;
    }
    return false;
  };
  return extend();
}

std::set<std::size_t> dominated_atoms(const Query& q) {
  require_sjf(q);
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q.is_exogenous_atom(i)) continue;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (i != j && !q.is_exogenous_atom(j) &&
          strict_subset(var_set(q.atom(j)), var_set(q.atom(i)))) {
        out.insert(i);
        break;
      }
    }
  }
  return out;
}

std::optional<std::array<std::size_t, 3>> has_triad(const Query& q) {
  auto dominated = dominated_atoms(q);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!q.is_exogenous_atom(i) && !dominated.count(i)) candidates.push_back(i);
  }
  std::vector<std::set<std::string>> vars;
  for (const auto& a : q.atoms()) vars.push_back(var_set(a));

  auto connected = [&](std::size_t from, std::size_t to, std::size_t avoid) {
    std::vector<bool> seen(q.size(), false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (std::size_t v = 0; v < q.size(); ++v) {
        if (seen[v]) continue;
        for (const auto& x : vars[u]) {
          if (vars[v].count(x) && !vars[avoid].count(x)) {
            seen[v] = true;
            stack.push_back(v);
            break;
          }
        }
      }
    }
    return false;
  };

  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      for (std::size_t c = b + 1; c < candidates.size(); ++c) {
        std::size_t i = candidates[a], j = candidates[b], k = candidates[c];
        if (connected(i, j, k) && connected(j, k, i) && connected(i, k, j)) {
          return std::array<std::size_t, 3>{i, j, k};
        }
      }
    }
  }
  return std::nullopt;
}

const char* to_string(Complexity c) {
  switch (c) {
    case Complexity::ptime: return "PTIME";
    case Complexity::npc: return "NPC";
    case Complexity::open: return "OPEN";
  }
  return "?";
}

QueryClassification predict_complexity(const Query& q) {
  QueryClassification c;
  c.self_join_free = is_self_join_free(q);
  if (!c.self_join_free) {
    for (const char* key : {"RES/set", "RES/bag", "RSP/set", "RSP/bag", "FACT"}) {
      c.predictions[key] = {Complexity::open, "self-join query: no classification applies"};
    }
    c.notes.push_back("queries with self-joins are not classified; solvers still apply");
    return c;
  }

  c.hierarchical = is_hierarchical(q);
  c.linear = is_linear(q);
  c.dominated_atoms = dominated_atoms(q);
  c.triad = has_triad(q);
  if (q.variables().size() <= kMaxPlanVariables) {
    c.canonical_plan_count = prune_dominated_plans(enumerate_plans(q)).size();
  }

  auto atom_name = [&](std::size_t i) { return q.atom(i).relation; };
  const bool linear = *c.linear;
  const bool triad_free = !c.triad;

  Prediction bag = linear
      ? Prediction{Complexity::ptime, "linear: bag semantics is easy iff the query is linear"}
      : Prediction{Complexity::npc, "not linear: bag semantics is hard unless the query is linear"};
  c.predictions["RES/bag"] = bag;
  c.predictions["RSP/bag"] = bag;

  if (triad_free) {
    c.predictions["RES/set"] = {Complexity::ptime, "triad-free"};
  } else {
    const auto& t = *c.triad;
    c.predictions["RES/set"] = {Complexity::npc, "triad {" + atom_name(t[0]) + ", " + atom_name(t[1]) +
                                                     ", " + atom_name(t[2]) + "}"};
  }

  if (linear && triad_free) {
    c.predictions["RSP/set"] = {Complexity::ptime, "linear and triad-free"};
  } else {
    c.predictions["RSP/set"] = {Complexity::open, "outside the linear and triad-free region"};
  }

  if (c.canonical_plan_count && *c.canonical_plan_count <= 2) {
    c.predictions["FACT"] = {Complexity::ptime, "2-MQP, heuristic count"};
  } else if (c.canonical_plan_count) {
    c.predictions["FACT"] = {Complexity::open, "more than two canonical plans"};
  } else {
    c.predictions["FACT"] = {Complexity::open, "plan count unknown"};
  }

  bool constants = false;
  for (const auto& a : q.atoms()) {
    for (const auto& t : a.terms) constants = constants || t.kind == Term::Kind::constant;
  }
  if (constants) c.notes.push_back("constants are treated as absent variables");
  if (!q.exogenous().empty()) c.notes.push_back("exogenous atoms never dominate and are never part of a triad");
  if (c.predictions["RSP/set"].complexity == Complexity::open &&
      c.predictions["RES/set"].complexity == Complexity::ptime) {
    c.notes.push_back("set-semantics responsibility can be easy for some target relations and hard for others");
  }
  return c;
}

}  // namespace rdm

#include "rdm/factorize.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "rdm/error.hpp"

namespace rdm {

std::vector<std::size_t> QueryPlan::path(std::size_t var) const {
  std::vector<std::size_t> out{var};
  while (parent[out.back()]) out.push_back(*parent[out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> QueryPlan::prefix_variables(std::size_t atom) const {
  if (!placement[atom]) return {};
  return path(*placement[atom]);
}

std::vector<std::size_t> QueryPlan::children(std::optional<std::size_t> var) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] == var) out.push_back(v);
  }
  return out;
}

namespace {

std::string forest_id(const QueryPlan& p) {
  std::function<std::string(std::size_t)> node = [&](std::size_t v) {
    std::vector<std::string> kids;
    for (auto c : p.children(v)) kids.push_back(node(c));
    std::sort(kids.begin(), kids.end());
    std::string s = p.variables[v];
    if (!kids.empty()) {
      s += "(";
      for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? "," : "") + kids[i];
      s += ")";
    }
    return s;
  };
  std::vector<std::string> roots;
  for (auto r : p.children(std::nullopt)) roots.push_back(node(r));
  std::sort(roots.begin(), roots.end());
  std::string out;
  for (std::size_t i = 0; i < roots.size(); ++i) out += (i ? " " : "") + roots[i];
  return out.empty() ? "()" : out;
}

}  // namespace

std::vector<QueryPlan> enumerate_plans(const Query& q) {
  if (!is_self_join_free(q)) {
    throw Error(ErrorCode::unsupported, "query plans are only defined for self-join-free queries");
  }
  const auto& vars = q.variables();
  const std::size_t n = vars.size();
  if (n > kMaxPlanVariables) {
    throw Error(ErrorCode::unsupported, "too many variables for plan enumeration");
  }
  std::vector<std::vector<std::size_t>> atom_vars(q.size());
  std::vector<std::vector<bool>> cooccur(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (const auto& name : q.atom(a).variables()) {
      atom_vars[a].push_back(static_cast<std::size_t>(
          std::find(vars.begin(), vars.end(), name) - vars.begin()));
    }
    for (auto u : atom_vars[a]) {
      for (auto v : atom_vars[a]) cooccur[u][v] = true;
    }
  }

  QueryPlan plan;
  plan.variables = vars;
  plan.parent.assign(n, std::nullopt);
  std::vector<QueryPlan> out;

  auto is_ancestor = [&](std::size_t a, std::size_t v) {
    for (auto p = plan.parent[v]; p; p = plan.parent[*p]) {
      if (*p == a) return true;
    }
    return false;
  };
  auto acyclic = [&]() {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t steps = 0;
      for (auto p = plan.parent[v]; p; p = plan.parent[*p]) {
        if (++steps > n) return false;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> choose = [&](std::size_t v) {
    if (v == n) {
      if (!acyclic()) return;
      QueryPlan p = plan;
      p.placement.assign(q.size(), std::nullopt);
      for (std::size_t a = 0; a < q.size(); ++a) {
        const auto& av = atom_vars[a];
        for (std::size_t i = 0; i < av.size(); ++i) {
          for (std::size_t j = i + 1; j < av.size(); ++j) {
            if (!is_ancestor(av[i], av[j]) && !is_ancestor(av[j], av[i])) return;
          }
        }
        std::optional<std::size_t> deepest;
        for (auto u : av) {
          if (!deepest || is_ancestor(*deepest, u)) deepest = u;
        }
        p.placement[a] = deepest;
      }
      p.id = forest_id(p);
      out.push_back(std::move(p));
      return;
    }
    plan.parent[v] = std::nullopt;
    choose(v + 1);
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v || !cooccur[u][v]) continue;
      plan.parent[v] = u;
      choose(v + 1);
    }
    plan.parent[v] = std::nullopt;
  };
  choose(0);
  std::sort(out.begin(), out.end(),
            [](const QueryPlan& a, const QueryPlan& b) { return a.id < b.id; });
  return out;
}

std::vector<QueryPlan> prune_dominated_plans(const std::vector<QueryPlan>& plans) {
  auto prefix_sets = [](const QueryPlan& p) {
    std::vector<std::set<std::size_t>> out;
    for (std::size_t a = 0; a < p.placement.size(); ++a) {
      auto pv = p.prefix_variables(a);
      out.emplace_back(pv.begin(), pv.end());
    }
    return out;
  };
  std::vector<std::vector<std::set<std::size_t>>> sets;
  for (const auto& p : plans) sets.push_back(prefix_sets(p));
  // dominates(i, j): plan i is pointwise no deeper than plan j
  auto dominates = [&](std::size_t i, std::size_t j) {
    for (std::size_t a = 0; a < sets[i].size(); ++a) {
      if (!std::includes(sets[j][a].begin(), sets[j][a].end(), sets[i][a].begin(),
                         sets[i][a].end())) {
        return false;
      }
    }
    return true;
  };
  std::vector<QueryPlan> out;
  for (std::size_t j = 0; j < plans.size(); ++j) {
    bool dropped = false;
    for (std::size_t i = 0; i < plans.size() && !dropped; ++i) {
      if (i == j || !dominates(i, j)) continue;
      dropped = !dominates(j, i) || i < j;
    }
    if (!dropped) out.push_back(plans[j]);
  }
  return out;
}

OccurrenceKey occurrence_key(const QueryPlan& plan, std::size_t plan_index, std::size_t atom,
                             const std::map<std::string, std::string>& assignment) {
  OccurrenceKey key{plan_index, atom, {}};
  for (auto v : plan.prefix_variables(atom)) key.prefix.push_back(assignment.at(plan.variables[v]));
  return key;
}

// ---------------------------------------------------------------------------
// FactorExpr

FactorExpr FactorExpr::leaf(TupleId tuple) {
  FactorExpr e;
  e.kind_ = Kind::leaf;
  e.tuple_ = std::move(tuple);
  return e;
}

FactorExpr FactorExpr::sum(std::vector<FactorExpr> children) {
  return combine(Kind::sum, std::move(children));
}

FactorExpr FactorExpr::product(std::vector<FactorExpr> children) {
  return combine(Kind::product, std::move(children));
}

FactorExpr FactorExpr::combine(Kind kind, std::vector<FactorExpr> children) {
  std::vector<FactorExpr> flat;
  for (auto& c : children) {
    if (c.empty()) {
      // false absorbs a product and vanishes from a sum
      if (kind == Kind::product) return FactorExpr();
      continue;
    }
    if (c.kind_ == kind) {
      for (auto& g : c.children_) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.size() == 1) return std::move(flat.front());
  auto rank = [](const FactorExpr& e) { return static_cast<int>(e.kind_ == Kind::leaf ? 0 : e.kind_ == Kind::product ? 1 : 2); };
  std::vector<std::pair<std::string, FactorExpr>> keyed;
  for (auto& c : flat) keyed.emplace_back(c.canonical_key(), std::move(c));
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    int ra = rank(a.second), rb = rank(b.second);
    if (ra != rb) return ra < rb;
    if (ra == 0) return a.second.tuple_ < b.second.tuple_;
    return a.first < b.first;
  });
  FactorExpr e;
  e.kind_ = kind;
  for (auto& [_, c] : keyed) e.children_.push_back(std::move(c));
  return e;
}

std::size_t FactorExpr::length() const {
  if (kind_ == Kind::leaf) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.length();
  return n;
}

std::string FactorExpr::canonical_key() const {
  if (kind_ == Kind::leaf) return tuple_.str();
  std::string s = kind_ == Kind::sum ? "+(" : "*(";
  for (std::size_t i = 0; i < children_.size(); ++i) {
    s += (i ? "," : "") + children_[i].canonical_key();
  }
  return s + ")";
}

namespace {

void collect_relations(const FactorExpr& e, std::set<std::string>& out) {
  if (e.kind() == FactorExpr::Kind::leaf) {
    out.insert(e.tuple().relation);
    return;
  }
  for (const auto& c : e.children()) collect_relations(c, out);
}

void render(const FactorExpr& e, const std::function<std::string(const TupleId&)>& label,
            std::string& out) {
  switch (e.kind()) {
    case FactorExpr::Kind::leaf:
      out += label(e.tuple());
      return;
    case FactorExpr::Kind::sum:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " + ";
        render(e.children()[i], label, out);
      }
      return;
    case FactorExpr::Kind::product:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += "*";
        const auto& c = e.children()[i];
        bool paren = c.kind() == FactorExpr::Kind::sum;
        if (paren) out += "(";
        render(c, label, out);
        if (paren) out += ")";
      }
      return;
  }
}

}  // namespace

std::string to_text(const FactorExpr& e, LabelStyle style) {
  if (e.empty()) return "0";
  std::function<std::string(const TupleId&)> label = [](const TupleId& t) { return t.str(); };
  if (style == LabelStyle::initial) {
    std::set<std::string> rels;
    collect_relations(e, rels);
    std::set<char> initials;
    for (const auto& r : rels) initials.insert(static_cast<char>(std::tolower(r[0])));
    if (initials.size() == rels.size()) {
      label = [](const TupleId& t) {
        return std::string(1, static_cast<char>(std::tolower(t.relation[0]))) +
               std::to_string(t.row);
      };
    }
  }
  std::string out;
  render(e, label, out);
  return out;
}

// ---------------------------------------------------------------------------
// Plan-assignment model

MinFacModel build_minfac_model(const Query& q, const ProvenanceDNF& dnf,
                               const std::vector<QueryPlan>& plans) {
  if (!is_self_join_free(q)) {
    throw Error(ErrorCode::unsupported, "factorization requires a self-join-free query");
  }
  if (plans.empty()) throw Error(ErrorCode::invalid_argument, "no query plans given");
  MinFacModel out;
  LinearModel& m = out.model;
  out.assign_var.resize(dnf.terms.size());
  for (std::size_t w = 0; w < dnf.terms.size(); ++w) {
    for (std::size_t p = 0; p < plans.size(); ++p) {
      out.assign_var[w].push_back(m.add_variable(
          "q(w" + std::to_string(w) + ",p" + std::to_string(p) + ")", 0, 1, true, 0));
    }
  }
  std::map<OccurrenceKey, std::size_t> key_index;
  std::size_t link = 0;
  for (std::size_t w = 0; w < dnf.terms.size(); ++w) {
    std::vector<std::pair<std::size_t, Rational>> cover;
    for (std::size_t p = 0; p < plans.size(); ++p) {
      std::size_t qv = out.assign_var[w][p];
      cover.emplace_back(qv, 1);
      for (std::size_t a = 0; a < q.size(); ++a) {
        OccurrenceKey key = occurrence_key(plans[p], p, a, dnf.terms[w].assignment);
        auto [it, fresh] = key_index.emplace(key, out.keys.size());
        if (fresh) {
          out.key_var.push_back(
              m.add_variable("o" + std::to_string(out.keys.size()), 0, 1, true, 1));
          out.keys.push_back(std::move(key));
        }
        m.add_constraint("a" + std::to_string(link++),
                         {{out.key_var[it->second], Rational(1)}, {qv, Rational(-1)}},
                         Sense::greater_equal, 0);
      }
    }
    m.add_constraint("cover" + std::to_string(w), std::move(cover), Sense::greater_equal, 1);
  }
  return out;
}

FactorExpr extract_expression(const Query& q, const ProvenanceDNF& dnf,
                              const std::vector<QueryPlan>& plans,
                              const std::vector<std::size_t>& assignment) {
  if (assignment.size() != dnf.terms.size()) {
    throw Error(ErrorCode::invalid_argument, "assignment does not cover every witness");
  }
  std::vector<std::vector<std::size_t>> by_plan(plans.size());
  for (std::size_t w = 0; w < assignment.size(); ++w) {
    if (assignment[w] >= plans.size()) throw Error(ErrorCode::invalid_argument, "bad plan index");
    by_plan[assignment[w]].push_back(w);
  }

  std::vector<FactorExpr> summands;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    if (by_plan[p].empty()) continue;
    const QueryPlan& plan = plans[p];

    auto placed_at = [&](std::optional<std::size_t> v) {
      std::vector<std::size_t> atoms;
      for (std::size_t a = 0; a < q.size(); ++a) {
        if (plan.placement[a] == v) atoms.push_back(a);
      }
      return atoms;
    };

    std::function<FactorExpr(std::size_t, const std::vector<std::size_t>&)> group =
        [&](std::size_t v, const std::vector<std::size_t>& terms) {
          std::map<std::string, std::vector<std::size_t>> parts;
          for (auto w : terms) parts[dnf.terms[w].assignment.at(plan.variables[v])].push_back(w);
          std::vector<FactorExpr> alternatives;
          for (const auto& [_, part] : parts) {
            std::vector<FactorExpr> factors;
            for (auto a : placed_at(v)) {
              factors.push_back(FactorExpr::leaf(dnf.terms[part.front()].atom_support[a]));
            }
            for (auto c : plan.children(v)) factors.push_back(group(c, part));
            alternatives.push_back(FactorExpr::product(std::move(factors)));
          }
          return FactorExpr::sum(std::move(alternatives));
        };

    const auto& terms = by_plan[p];
    std::vector<FactorExpr> factors;
    for (auto a : placed_at(std::nullopt)) {
      factors.push_back(FactorExpr::leaf(dnf.terms[terms.front()].atom_support[a]));
    }
    for (auto r : plan.children(std::nullopt)) factors.push_back(group(r, terms));
    summands.push_back(FactorExpr::product(std::move(factors)));
  }
  return FactorExpr::sum(std::move(summands));
}

MinFacResult solve_minfac(const Query& q, const Instance& inst, const MinFacOptions& options) {
  MinFacResult r;
  r.plans = enumerate_plans(q);
  if (options.prune_plans) r.plans = prune_dominated_plans(r.plans);
  r.dnf = provenance_dnf(enumerate_witnesses(q, inst));
  if (r.dnf.empty()) return r;

  MinFacModel mf = build_minfac_model(q, r.dnf, r.plans);
  LinearSolution lp = solve_lp(mf.model);
  r.stats = lp.stats;
  r.lp_bound = lp.objective;
  std::vector<std::size_t> all(mf.model.variable_count());
  std::iota(all.begin(), all.end(), 0);
  r.lp_integral = is_integral(lp, all);

  LinearSolution final;
  if (r.lp_integral) {
    final = std::move(lp);
  } else {
    final = solve_mip(mf.model, {options.node_limit});
    r.stats.iterations += final.stats.iterations;
    r.stats.nodes += final.stats.nodes;
  }
  r.objective = final.objective;

  for (std::size_t w = 0; w < r.dnf.terms.size(); ++w) {
    std::size_t chosen = r.plans.size();
    for (std::size_t p = 0; p < r.plans.size() && chosen == r.plans.size(); ++p) {
      if (final.values[mf.assign_var[w][p]] == 1) chosen = p;
    }
    if (chosen == r.plans.size()) throw Error(ErrorCode::internal, "minfac: witness without plan");
    r.assignment.push_back(chosen);
  }
  r.expression = extract_expression(q, r.dnf, r.plans, r.assignment);
  r.length = r.expression.length();
  if (Rational(static_cast<long>(r.length)) != r.objective) {
    throw Error(ErrorCode::internal, "minfac: expression length differs from the optimum");
  }
  if (!expand_and_compare(r.expression, r.dnf)) {
    throw Error(ErrorCode::internal, "minfac: expression is not equivalent to the provenance");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Equivalence and read-once

namespace {

using Product = std::set<TupleId>;
using ProductSet = std::set<Product>;

ProductSet expand(const FactorExpr& e, std::size_t limit) {
  switch (e.kind()) {
    case FactorExpr::Kind::leaf:
      return {{e.tuple()}};
    case FactorExpr::Kind::sum: {
      ProductSet out;
      for (const auto& c : e.children()) {
        auto part = expand(c, limit);
        out.insert(part.begin(), part.end());
        if (out.size() > limit) throw Error(ErrorCode::resource, "expansion exceeds the product limit");
      }
      return out;
    }
    case FactorExpr::Kind::product: {
      ProductSet acc{{}};
      for (const auto& c : e.children()) {
        auto part = expand(c, limit);
        if (acc.size() * part.size() > limit) {
          throw Error(ErrorCode::resource, "expansion exceeds the product limit");
        }
        ProductSet next;
        for (const auto& x : acc) {
          for (const auto& y : part) {
            Product z = x;
            z.insert(y.begin(), y.end());
            next.insert(std::move(z));
          }
        }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

ProductSet absorb(const ProductSet& in) {
  ProductSet out;
  for (const auto& t : in) {
    bool absorbed = false;
    for (const auto& s : in) {
      if (s.size() < t.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.insert(t);
  }
  return out;
}

std::optional<FactorExpr> read_once(const std::vector<Product>& terms) {
  std::set<TupleId> vars;
  for (const auto& t : terms) vars.insert(t.begin(), t.end());
  std::vector<TupleId> vlist(vars.begin(), vars.end());
  auto index = [&](const TupleId& v) {
    return static_cast<std::size_t>(std::lower_bound(vlist.begin(), vlist.end(), v) - vlist.begin());
  };
  const std::size_t n = vlist.size();
  if (n == 1) return FactorExpr::leaf(vlist.front());

  // Co-occurrence graph.
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& t : terms) {
    for (const auto& a : t) {
      for (const auto& b : t) adj[index(a)][index(b)] = true;
    }
  }
  auto components = [&](bool complement) {
    std::vector<int> comp(n, -1);
    int count = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = count;
      while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
          if (u == v || comp[v] >= 0 || adj[u][v] == complement) continue;
          comp[v] = count;
          stack.push_back(v);
        }
      }
      ++count;
    }
    return std::make_pair(comp, count);
  };

  // Sum: terms that share no tuple fall into different components.
  if (auto [comp, count] = components(false); count > 1) {
    std::vector<std::vector<Product>> parts(static_cast<std::size_t>(count));
    for (const auto& t : terms) parts[static_cast<std::size_t>(comp[index(*t.begin())])].push_back(t);
    std::vector<FactorExpr> children;
    for (const auto& part : parts) {
      auto sub = read_once(part);
      if (!sub) return std::nullopt;
      children.push_back(std::move(*sub));
    }
    return FactorExpr::sum(std::move(children));
  }

  // Product: components of the complement graph, valid only if the terms are
  // exactly the Cartesian product of their projections.
  auto [comp, count] = components(true);
  if (count < 2) return std::nullopt;
  std::vector<std::set<Product>> projections(static_cast<std::size_t>(count));
  for (const auto& t : terms) {
    std::vector<Product> proj(static_cast<std::size_t>(count));
    for (const auto& v : t) proj[static_cast<std::size_t>(comp[index(v)])].insert(v);
    for (std::size_t c = 0; c < proj.size(); ++c) {
      if (proj[c].empty()) return std::nullopt;
      projections[c].insert(proj[c]);
    }
  }
  std::size_t product_size = 1;
  for (const auto& p : projections) product_size *= p.size();
  if (product_size != terms.size()) return std::nullopt;
  std::vector<FactorExpr> children;
  for (const auto& p : projections) {
    auto sub = read_once(std::vector<Product>(p.begin(), p.end()));
    if (!sub) return std::nullopt;
    children.push_back(std::move(*sub));
  }
  return FactorExpr::product(std::move(children));
}

}  // namespace

bool expand_and_compare(const FactorExpr& e, const ProvenanceDNF& dnf, std::size_t max_products) {
  ProductSet lhs = e.empty() ? ProductSet{} : absorb(expand(e, max_products));
  ProductSet rhs;
  for (const auto& t : dnf.terms) rhs.insert(t.tuples);
  return lhs == absorb(rhs);
}

std::optional<FactorExpr> read_once_factorize(const ProvenanceDNF& dnf) {
  if (dnf.empty()) throw Error(ErrorCode::invalid_argument, "read-once check needs a nonempty DNF");
  ProductSet terms;
  for (const auto& t : dnf.terms) terms.insert(t.tuples);
  ProductSet minimal = absorb(terms);
  return read_once(std::vector<Product>(minimal.begin(), minimal.end()));
}

}  // namespace rdm

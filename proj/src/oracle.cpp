#include "rdm/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "rdm/error.hpp"
#include "rdm/factorize.hpp"

namespace rdm {

namespace {

struct NaiveWitness {
  std::map<std::string, std::string> assignment;
  std::set<TupleId> tuples;
};

// Every combination of one tuple per atom, kept when it binds consistently.
std::vector<NaiveWitness> naive_witnesses(const Query& q, const Instance& inst) {
  std::vector<const std::vector<TupleRef>*> rels;
  for (const auto& a : q.atoms()) rels.push_back(&inst.relation(a.relation));
  std::vector<NaiveWitness> out;
  std::vector<std::size_t> pick(q.size(), 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == q.size()) {
      NaiveWitness w;
      for (std::size_t k = 0; k < q.size(); ++k) {
        const auto& t = (*rels[k])[pick[k]];
        const auto& atom = q.atom(k);
        for (std::size_t c = 0; c < atom.terms.size(); ++c) {
          const Term& term = atom.terms[c];
          if (term.kind == Term::Kind::constant) {
            if (term.name != t.values[c]) return;
            continue;
          }
          auto [it, fresh] = w.assignment.emplace(term.name, t.values[c]);
          if (!fresh && it->second != t.values[c]) return;
        }
        w.tuples.insert(t.id);
      }
      out.push_back(std::move(w));
      return;
    }
    for (pick[i] = 0; pick[i] < rels[i]->size(); ++pick[i]) go(i + 1);
  };
  go(0);
  return out;
}

void check_stop(const std::stop_token& stop) {
  if (stop.stop_requested()) throw Error(ErrorCode::cancelled, "oracle search cancelled");
}

// Endogenous tuples as bit positions, with their weights.
struct Universe {
  std::vector<TupleId> tuples;
  std::vector<Rational> weight;
  std::map<TupleId, std::size_t> bit;
};

Universe endogenous_universe(const Query& q, const Instance& inst, Semantics semantics,
                             const OracleBudget& budget) {
  Universe u;
  for (const auto& rel : q.relations()) {
    if (q.is_exogenous(rel)) continue;
    for (const auto& t : inst.relation(rel)) {
      u.bit[t.id] = u.tuples.size();
      u.tuples.push_back(t.id);
      u.weight.push_back(semantics == Semantics::bag ? Rational(static_cast<long>(t.multiplicity))
                                                     : Rational(1));
    }
  }
  if (u.tuples.size() > budget.max_endogenous_tuples || u.tuples.size() > 30) {
    throw Error(ErrorCode::budget, "oracle: " + std::to_string(u.tuples.size()) +
                                       " endogenous tuples exceed the budget");
  }
  return u;
}

std::uint32_t mask_of(const Universe& u, const std::set<TupleId>& tuples) {
  std::uint32_t m = 0;
  for (const auto& t : tuples) {
    auto it = u.bit.find(t);
    if (it != u.bit.end()) m |= 1u << it->second;
  }
  return m;
}

// Subsets of the universe by increasing weight, ties by mask value.
std::vector<std::pair<Rational, std::uint32_t>> subsets_by_weight(const Universe& u,
                                                                  const std::stop_token& stop) {
  const std::uint32_t n = static_cast<std::uint32_t>(u.tuples.size());
  std::vector<std::pair<Rational, std::uint32_t>> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if ((s & 0xfff) == 0) check_stop(stop);
    Rational w = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (s >> i & 1u) w += u.weight[i];
    }
    out.emplace_back(std::move(w), s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Rational brute_resilience(const Query& q, const Instance& inst, Semantics semantics,
                          const OracleBudget& budget, std::stop_token stop) {
  Universe u = endogenous_universe(q, inst, semantics, budget);
  std::set<std::uint32_t> masks;
  for (const auto& w : naive_witnesses(q, inst)) {
    std::uint32_t m = mask_of(u, w.tuples);
    if (m == 0) throw Error(ErrorCode::undefined, "a witness has no endogenous tuple");
    masks.insert(m);
  }
  if (masks.empty()) return 0;
  for (const auto& [weight, s] : subsets_by_weight(u, stop)) {
    if (std::all_of(masks.begin(), masks.end(), [&](std::uint32_t m) { return (m & s) != 0; })) {
      return weight;
    }
  }
  throw Error(ErrorCode::internal, "oracle: deleting every tuple left a witness");
}

std::optional<Rational> brute_responsibility(const Query& q, const Instance& inst,
                                             const TupleId& target, Semantics semantics,
                                             const OracleBudget& budget, std::stop_token stop) {
  inst.at(target);
  if (q.is_exogenous(target.relation)) {
    throw Error(ErrorCode::invalid_argument, "target " + target.str() + " is exogenous");
  }
  Universe u = endogenous_universe(q, inst, semantics, budget);
  const std::uint32_t target_bit = 1u << u.bit.at(target);
  std::vector<std::pair<std::uint32_t, bool>> witnesses;  // mask, contains target
  for (const auto& w : naive_witnesses(q, inst)) {
    witnesses.emplace_back(mask_of(u, w.tuples), w.tuples.count(target) > 0);
  }
  for (const auto& [weight, s] : subsets_by_weight(u, stop)) {
    if (s & target_bit) continue;
    bool survivor = false, ok = true;
    for (const auto& [m, has_target] : witnesses) {
      if (m & s) continue;
      survivor = true;
      if (!has_target) {
        ok = false;
        break;
      }
    }
    if (survivor && ok) return weight;
  }
  return std::nullopt;
}

std::size_t brute_minfac(const Query& q, const Instance& inst, const OracleBudget& budget,
                         std::stop_token stop) {
  auto plans = enumerate_plans(q);
  std::vector<NaiveWitness> terms;
  std::set<std::set<TupleId>> seen;
  for (auto& w : naive_witnesses(q, inst)) {
    if (seen.insert(w.tuples).second) terms.push_back(std::move(w));
  }
  if (terms.size() > budget.max_witnesses) {
    throw Error(ErrorCode::budget, "oracle: " + std::to_string(terms.size()) +
                                       " witnesses exceed the budget");
  }

  // keys[w][p]: the occurrence keys of witness w under plan p, as strings.
  std::vector<std::vector<std::vector<std::string>>> keys(terms.size());
  for (std::size_t w = 0; w < terms.size(); ++w) {
    for (std::size_t p = 0; p < plans.size(); ++p) {
      std::vector<std::string> ks;
      for (std::size_t a = 0; a < q.size(); ++a) {
        std::string k = std::to_string(p) + "|" + std::to_string(a);
        for (auto v : plans[p].prefix_variables(a)) {
          k += "|" + terms[w].assignment.at(plans[p].variables[v]);
        }
        ks.push_back(std::move(k));
      }
      keys[w].push_back(std::move(ks));
    }
  }

  std::map<std::string, std::size_t> count;
  std::size_t best = SIZE_MAX;
  std::size_t steps = 0;
  std::function<void(std::size_t)> go = [&](std::size_t w) {
    if ((++steps & 0xfff) == 0) check_stop(stop);
    if (count.size() >= best) return;
    if (w == terms.size()) {
      best = count.size();
      return;
    }
    for (std::size_t p = 0; p < plans.size(); ++p) {
      for (const auto& k : keys[w][p]) ++count[k];
      go(w + 1);
      for (const auto& k : keys[w][p]) {
        if (--count[k] == 0) count.erase(k);
      }
    }
  };
  go(0);
  return best;
}

bool brute_minfac_check(const Query& q, const Instance& inst, std::size_t claimed_length,
                        const OracleBudget& budget, std::stop_token stop) {
  return brute_minfac(q, inst, budget, stop) == claimed_length;
}

}  // namespace rdm

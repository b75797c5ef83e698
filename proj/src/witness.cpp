#include "rdm/witness.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "rdm/error.hpp"

namespace rdm {

std::set<TupleId> ProvenanceDNF::tuples() const {
  std::set<TupleId> out;
  for (const auto& t : terms) out.insert(t.tuples.begin(), t.tuples.end());
  return out;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::string>& key) const {
    std::size_t h = 0;
    for (const auto& s : key) h = h * 1000003u ^ std::hash<std::string>{}(s);
    return h;
  }
};

// Per-atom access path: the positions whose value is known when the atom is
// reached (constants, variables bound by earlier atoms), and a hash index of
// the relation on those positions.
struct AtomPlan {
  std::vector<std::size_t> bound_positions;
  std::vector<std::size_t> free_positions;
  std::unordered_map<std::vector<std::string>, std::vector<const TupleRef*>, KeyHash> index;
};

class Enumerator {
 public:
  Enumerator(const Query& q, const Instance& inst) : q_(q), inst_(inst) {
    std::set<std::string> bound;
    for (const auto& atom : q.atoms()) {
      AtomPlan plan;
      for (std::size_t i = 0; i < atom.terms.size(); ++i) {
        const Term& t = atom.terms[i];
        if (!t.is_variable() || bound.count(t.name)) {
          plan.bound_positions.push_back(i);
        } else {
          plan.free_positions.push_back(i);
        }
      }
      for (const auto& v : atom.variables()) bound.insert(v);
      for (const auto& tuple : inst.relation(atom.relation)) {
        std::vector<std::string> key;
        for (auto p : plan.bound_positions) key.push_back(tuple.values[p]);
        plan.index[key].push_back(&tuple);
      }
      plans_.push_back(std::move(plan));
    }
  }

  std::vector<Witness> run() {
    support_.resize(q_.size());
    descend(0);
    const auto& vars = q_.variables();
    std::sort(out_.begin(), out_.end(), [&](const Witness& a, const Witness& b) {
      for (const auto& v : vars) {
        const auto& x = a.assignment.at(v);
        const auto& y = b.assignment.at(v);
        if (x != y) return x < y;
      }
      return a.support < b.support;
    });
    return std::move(out_);
  }

 private:
  void descend(std::size_t depth) {
    if (depth == q_.size()) {
      Witness w;
      w.assignment = assignment_;
      w.support = support_;
      w.tuple_set.insert(support_.begin(), support_.end());
      out_.push_back(std::move(w));
      return;
    }
    const Atom& atom = q_.atom(depth);
    const AtomPlan& plan = plans_[depth];
    std::vector<std::string> key;
    for (auto p : plan.bound_positions) {
      const Term& t = atom.terms[p];
      key.push_back(t.is_variable() ? assignment_.at(t.name) : t.name);
    }
    auto it = plan.index.find(key);
    if (it == plan.index.end()) return;
    for (const TupleRef* tuple : it->second) {
      // Free positions may repeat a variable within the atom.
      std::vector<std::string> added;
      bool ok = true;
      for (auto p : plan.free_positions) {
        const std::string& var = atom.terms[p].name;
        auto [slot, fresh] = assignment_.emplace(var, tuple->values[p]);
        if (fresh) {
          added.push_back(var);
        } else if (slot->second != tuple->values[p]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        support_[depth] = tuple->id;
        descend(depth + 1);
      }
      for (const auto& v : added) assignment_.erase(v);
    }
  }

  const Query& q_;
  const Instance& inst_;
  std::vector<AtomPlan> plans_;
  std::map<std::string, std::string> assignment_;
  std::vector<TupleId> support_;
  std::vector<Witness> out_;
};

}  // namespace

std::vector<Witness> enumerate_witnesses(const Query& q, const Instance& inst) {
  return Enumerator(q, inst).run();
}

ProvenanceDNF provenance_dnf(const std::vector<Witness>& witnesses) {
  ProvenanceDNF dnf;
  std::map<std::set<TupleId>, std::size_t> seen;
  for (const auto& w : witnesses) {
    if (seen.emplace(w.tuple_set, dnf.terms.size()).second) {
      dnf.terms.push_back({w.tuple_set, w.support, w.assignment});
    }
  }
  return dnf;
}

}  // namespace rdm

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rdm/instance.hpp"
#include "rdm/query.hpp"

namespace rdm {

/// One satisfying assignment of a query together with the tuples supporting it.
struct Witness {
  std::map<std::string, std::string> assignment;
  std::vector<TupleId> support;  // support[i] matches atom i
  std::set<TupleId> tuple_set;
};

/// Disjunction over distinct witness tuple sets.
struct ProvenanceDNF {
  struct Term {
    std::set<TupleId> tuples;
    std::vector<TupleId> atom_support;  // from one representative witness
    std::map<std::string, std::string> assignment;
  };

  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
  std::set<TupleId> tuples() const;
};

/// All matches of `q` in `inst`, ordered lexicographically by the values of
/// q.variables() (in that order).
std::vector<Witness> enumerate_witnesses(const Query& q, const Instance& inst);

/// Merges witnesses with equal tuple sets; terms keep first-occurrence order.
ProvenanceDNF provenance_dnf(const std::vector<Witness>& witnesses);

}  // namespace rdm

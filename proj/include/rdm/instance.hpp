#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rdm/query.hpp"

namespace rdm {

enum class Semantics { set, bag };

const char* to_string(Semantics s);
Semantics parse_semantics(std::string_view text);

/// Physical identity of a tuple: relation name plus 1-based row index.
/// Printed as `Relation:row`.
struct TupleId {
  std::string relation;
  std::size_t row = 0;

  std::string str() const { return relation + ":" + std::to_string(row); }

  friend auto operator<=>(const TupleId&, const TupleId&) = default;
  friend bool operator==(const TupleId&, const TupleId&) = default;
};

/// Parses `Relation:row`; throws Error(unknown_tuple) when malformed.
TupleId parse_tuple_id(std::string_view text);

struct TupleRef {
  TupleId id;
  std::vector<std::string> values;
  std::int64_t multiplicity = 1;
};

/// Named relations of tuples. Row indices are stable: deleting a tuple leaves
/// a gap rather than renumbering its successors.
class Instance {
 public:
  using Relation = std::vector<TupleRef>;

  explicit Instance(Semantics semantics = Semantics::set) : semantics_(semantics) {}

  Semantics semantics() const { return semantics_; }

  /// Declares an empty relation; a no-op if it already exists with the same
  /// arity. Throws Error(data) on an arity conflict.
  void add_relation(const std::string& name, std::size_t arity);

  /// Appends a tuple with the next free row index. Under set semantics the
  /// multiplicity must be 1. Returns the new id.
  TupleId add_tuple(const std::string& relation, std::vector<std::string> values,
                    std::int64_t multiplicity = 1);

  /// As add_tuple, with an explicit row index that must exceed every row
  /// already present in the relation.
  TupleId add_tuple_at(const std::string& relation, std::size_t row,
                       std::vector<std::string> values, std::int64_t multiplicity = 1);

  bool has_relation(const std::string& name) const { return relations_.count(name) > 0; }
  const Relation& relation(const std::string& name) const;
  std::size_t arity(const std::string& name) const { return arity_.at(name); }
  const std::map<std::string, Relation>& relations() const { return relations_; }

  const TupleRef* find(const TupleId& id) const;
  const TupleRef& at(const TupleId& id) const;

  std::size_t tuple_count() const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  Semantics semantics_;
  std::map<std::string, Relation> relations_;
  std::map<std::string, std::size_t> arity_;
};

/// Reads `<Relation>.csv` from `directory` for every relation of `q`. The
/// header is `c1,...,ck` optionally followed by `_mult`. Duplicate value rows
/// are merged (kept at their first row) and reported through `warnings`.
Instance load_instance(const Query& q, const std::string& directory, Semantics semantics,
                       std::vector<std::string>* warnings = nullptr);

/// Writes one canonical CSV per relation (`_mult` column only under bag).
void save_instance(const Instance& inst, const std::string& directory);

std::string relation_to_csv(const Instance& inst, const std::string& relation);

/// Deterministic in all arguments. Values are `c1..c<domain_size>`; duplicate
/// draws within a relation are dropped; bag multiplicities are uniform in 1..3.
Instance random_instance(const Query& q, int tuples_per_relation, int domain_size,
                         std::uint64_t seed, Semantics semantics);

/// Copy of `inst` without the named tuples. Throws Error(unknown_tuple).
Instance delete_tuples(const Instance& inst, const std::set<TupleId>& ids);

}  // namespace rdm

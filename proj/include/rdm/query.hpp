#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rdm {

struct Term {
  enum class Kind { variable, constant };

  Kind kind = Kind::variable;
  // Variable name, or the constant's value (quotes stripped, integers as
  // written).
  std::string name;

  static Term variable(std::string name) { return {Kind::variable, std::move(name)}; }
  static Term constant(std::string value) { return {Kind::constant, std::move(value)}; }

  bool is_variable() const { return kind == Kind::variable; }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  std::string relation;
  std::vector<Term> terms;

  std::size_t arity() const { return terms.size(); }

  /// Distinct variable names in order of first occurrence.
  std::vector<std::string> variables() const;

  bool has_variable(std::string_view v) const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A boolean conjunctive query `q() :- A1, ..., Ak.` with optional exogenous
/// relations. Immutable once built.
class Query {
 public:
  /// Validates arities, exogenous names and the at-least-one-endogenous-atom
  /// rule; throws Error(parse) on violation.
  Query(std::vector<Atom> atoms, std::set<std::string> exogenous, std::string head = "q");

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }
  std::size_t size() const { return atoms_.size(); }

  const std::string& head() const { return head_; }
  const std::set<std::string>& exogenous() const { return exogenous_; }
  bool is_exogenous(const std::string& relation) const { return exogenous_.count(relation) > 0; }
  bool is_exogenous_atom(std::size_t i) const { return is_exogenous(atoms_.at(i).relation); }

  /// Variables in order of first occurrence.
  const std::vector<std::string>& variables() const { return variables_; }
  bool has_variable(std::string_view v) const;

  /// Relation names in order of first occurrence.
  std::vector<std::string> relations() const;
  std::size_t arity_of(const std::string& relation) const;

  friend bool operator==(const Query& a, const Query& b) {
    return a.atoms_ == b.atoms_ && a.exogenous_ == b.exogenous_;
  }

 private:
  std::vector<Atom> atoms_;
  std::set<std::string> exogenous_;
  std::string head_;
  std::vector<std::string> variables_;
};

/// Parses the `.dl` query format (see docs/query_format.md).
Query parse_query(std::string_view text);
Query load_query(const std::string& path);

/// Canonical text; parse_query(print_query(q)) == q.
std::string print_query(const Query& q);

bool is_self_join_free(const Query& q);

/// Indices of the atoms mentioning `v`. Throws Error(invalid_argument) for an
/// unknown variable.
std::set<std::size_t> atoms_of_variable(const Query& q, std::string_view v);

}  // namespace rdm

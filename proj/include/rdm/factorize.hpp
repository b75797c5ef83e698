#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdm/instance.hpp"
#include "rdm/lp.hpp"
#include "rdm/query.hpp"
#include "rdm/witness.hpp"

namespace rdm {

/// A rooted forest over the query's variables. Every atom's variables lie on
/// one root-to-node path and the atom is placed at the deepest of them (atoms
/// without variables sit at a virtual root). Each parent/child pair co-occurs
/// in some atom.
struct QueryPlan {
  std::vector<std::string> variables;                 // Query::variables() order
  std::vector<std::optional<std::size_t>> parent;     // per variable
  std::vector<std::optional<std::size_t>> placement;  // per atom
  std::string id;                                     // canonical, e.g. "y(x,z)"

  /// Variable indices from the root down to `var`, inclusive.
  std::vector<std::size_t> path(std::size_t var) const;
  /// path(placement[atom]), or empty for the virtual root.
  std::vector<std::size_t> prefix_variables(std::size_t atom) const;
  std::vector<std::size_t> children(std::optional<std::size_t> var) const;
};

/// Every plan of a self-join-free query, sorted by id. Throws
/// Error(unsupported) for self-joins or more than kMaxPlanVariables variables.
inline constexpr std::size_t kMaxPlanVariables = 8;
std::vector<QueryPlan> enumerate_plans(const Query& q);

/// Drops every plan whose per-atom prefix variable sets are all supersets of
/// another plan's (the earlier plan survives a tie). Never changes the minimal
/// factorization length.
std::vector<QueryPlan> prune_dominated_plans(const std::vector<QueryPlan>& plans);

struct OccurrenceKey {
  std::size_t plan;
  std::size_t atom;
  std::vector<std::string> prefix;

  friend auto operator<=>(const OccurrenceKey&, const OccurrenceKey&) = default;
};

OccurrenceKey occurrence_key(const QueryPlan& plan, std::size_t plan_index, std::size_t atom,
                             const std::map<std::string, std::string>& assignment);

/// Sum/product/leaf tree over tuple literals. Constructors normalize: nested
/// operators of the same kind are flattened, single children collapse and
/// children are sorted canonically (leaves first, by tuple id).
class FactorExpr {
 public:
  enum class Kind { sum, product, leaf };

  /// The empty sum: the expression of a false provenance.
  FactorExpr() = default;
  static FactorExpr leaf(TupleId tuple);
  static FactorExpr sum(std::vector<FactorExpr> children);
  static FactorExpr product(std::vector<FactorExpr> children);

  Kind kind() const { return kind_; }
  const TupleId& tuple() const { return tuple_; }
  const std::vector<FactorExpr>& children() const { return children_; }
  bool empty() const { return kind_ == Kind::sum && children_.empty(); }

  /// Number of leaves.
  std::size_t length() const;
  std::string canonical_key() const;

  friend bool operator==(const FactorExpr& a, const FactorExpr& b) {
    return a.canonical_key() == b.canonical_key();
  }

 private:
  static FactorExpr combine(Kind kind, std::vector<FactorExpr> children);

  Kind kind_ = Kind::sum;
  TupleId tuple_;
  std::vector<FactorExpr> children_;
};

enum class LabelStyle {
  id,       // Oscar:1
  initial  // o1, when relation initials are unambiguous; ids otherwise
};

/// Infix text, e.g. `Oscar:1*Spouse:1*(ActsIn:1*DirectedBy:1 + ActsIn:2*DirectedBy:2)`.
/// The empty expression prints as `0`.
std::string to_text(const FactorExpr& e, LabelStyle style = LabelStyle::id);

struct MinFacModel {
  LinearModel model;
  std::vector<std::vector<std::size_t>> assign_var;  // [term][plan] -> variable
  std::vector<OccurrenceKey> keys;                   // keys[k] <-> variable key_var[k]
  std::vector<std::size_t> key_var;
};

/// Binary assign(w,p) with sum_p assign(w,p) >= 1 per term, binary occurs(k)
/// per reachable occurrence key, occurs(k) >= assign(w,p) for each key the
/// assignment activates; minimizes the number of occurring keys.
MinFacModel build_minfac_model(const Query& q, const ProvenanceDNF& dnf,
                               const std::vector<QueryPlan>& plans);

/// Expression of a witness-to-plan assignment (plan index per DNF term).
FactorExpr extract_expression(const Query& q, const ProvenanceDNF& dnf,
                              const std::vector<QueryPlan>& plans,
                              const std::vector<std::size_t>& assignment);

struct MinFacOptions {
  bool prune_plans = true;
  std::uint64_t node_limit = 1'000'000;
};

struct MinFacResult {
  std::size_t length = 0;
  FactorExpr expression;
  std::vector<QueryPlan> plans;
  std::vector<std::size_t> assignment;  // plan index per DNF term
  ProvenanceDNF dnf;
  Rational objective;
  Rational lp_bound;
  bool lp_integral = true;
  SolveStats stats;
};

/// LP first, branch-and-bound when the relaxation is fractional. The
/// expression is audited against the provenance before returning.
MinFacResult solve_minfac(const Query& q, const Instance& inst, const MinFacOptions& options = {});

/// Expands `e`, applies absorption to both sides and compares with the DNF.
/// Throws Error(resource) beyond `max_products` intermediate products.
bool expand_and_compare(const FactorExpr& e, const ProvenanceDNF& dnf,
                        std::size_t max_products = 1'000'000);

/// Read-once form of a nonempty DNF, or nullopt when none exists.
std::optional<FactorExpr> read_once_factorize(const ProvenanceDNF& dnf);

}  // namespace rdm

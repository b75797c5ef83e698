#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rdm/query.hpp"

namespace rdm {

/// The following throw Error(unsupported) for queries with self-joins.
bool is_hierarchical(const Query& q);
/// Some atom order makes the atoms of every variable contiguous.
bool is_linear(const Query& q);
/// Endogenous atoms whose variable set strictly contains the variable set of
/// another endogenous atom.
std::set<std::size_t> dominated_atoms(const Query& q);
/// First triple (i < j < k) of non-dominated endogenous atoms where each pair
/// is connected by a path of atoms sharing variables outside the third atom.
std::optional<std::array<std::size_t, 3>> has_triad(const Query& q);

enum class Complexity { ptime, npc, open };
const char* to_string(Complexity c);

struct Prediction {
  Complexity complexity = Complexity::open;
  std::string justification;
};

struct QueryClassification {
  bool self_join_free = true;
  std::optional<bool> hierarchical;  // unset for self-joins
  std::optional<bool> linear;
  std::set<std::size_t> dominated_atoms;
  std::optional<std::array<std::size_t, 3>> triad;
  std::optional<std::size_t> canonical_plan_count;  // unset when unknown
  std::map<std::string, Prediction> predictions;    // "RES/set", "RES/bag", "RSP/set", "RSP/bag", "FACT"
  std::vector<std::string> notes;
};

QueryClassification predict_complexity(const Query& q);

}  // namespace rdm

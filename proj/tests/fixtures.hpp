#pragma once

#include <string>

#include "rdm/instance.hpp"
#include "rdm/query.hpp"

namespace rdm::testing {

inline const char* kChain2 = "q() :- R(x, y), S(y, z).";
inline const char* kQA = "q() :- Oscar(a), ActsIn(a, m), DirectedBy(m, d), Spouse(a, d).";
inline const char* kQTriangle = "q() :- ActsIn(a, m), DirectedBy(m, d), Spouse(a, d).";
inline const char* kEPath = "q() :- E(x, y), E(y, z).";

inline std::string data_path(const std::string& rel) { return std::string(RDM_DATA_DIR) + "/" + rel; }

// Oscar{o1}, ActsIn{a1,a2}, DirectedBy{d1,d2}, Spouse{s1}: one actor married to
// the director of both of her movies.
inline Instance mcdormand(Semantics sem = Semantics::set, std::int64_t oscar_mult = 1) {
  Instance inst(sem);
  inst.add_tuple("Oscar", {"mcdormand"}, oscar_mult);
  inst.add_tuple("ActsIn", {"mcdormand", "blood_simple"});
  inst.add_tuple("ActsIn", {"mcdormand", "fargo"});
  inst.add_tuple("DirectedBy", {"blood_simple", "coen"});
  inst.add_tuple("DirectedBy", {"fargo", "coen"});
  inst.add_tuple("Spouse", {"mcdormand", "coen"});
  return inst;
}

// Directed 3-cycle 1 -> 2 -> 3 -> 1.
inline Instance ecycle() {
  Instance inst;
  inst.add_tuple("E", {"1", "2"});
  inst.add_tuple("E", {"2", "3"});
  inst.add_tuple("E", {"3", "1"});
  return inst;
}

inline TupleId tid(const std::string& rel, std::size_t row) { return {rel, row}; }

}  // namespace rdm::testing

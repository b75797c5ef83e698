#pragma once

#include <optional>
#include <stop_token>

#include "rdm/instance.hpp"
#include "rdm/query.hpp"
#include "rdm/rational.hpp"

namespace rdm {

/// Exhaustive reference solvers. They share no code with the ILP path: the
/// witnesses come from a plain nested-loop join and every search is over
/// explicit subsets or assignments. All of them throw Error(budget) beyond
/// the budget and Error(cancelled) once `stop` is requested.
struct OracleBudget {
  std::size_t max_endogenous_tuples = 14;
  std::size_t max_witnesses = 64;
};

/// Minimum deletion weight that removes every witness. Throws
/// Error(undefined) when a witness has no endogenous tuple.
Rational brute_resilience(const Query& q, const Instance& inst, Semantics semantics,
                          const OracleBudget& budget = {}, std::stop_token stop = {});

/// Minimum weight of a set not containing `target` whose deletion leaves at
/// least one witness, all of them containing `target`; nullopt if none exists.
std::optional<Rational> brute_responsibility(const Query& q, const Instance& inst,
                                             const TupleId& target, Semantics semantics,
                                             const OracleBudget& budget = {},
                                             std::stop_token stop = {});

/// Fewest occurrence keys over every assignment of witnesses to the full set
/// of query plans. Self-join-free queries only.
std::size_t brute_minfac(const Query& q, const Instance& inst, const OracleBudget& budget = {},
                         std::stop_token stop = {});

bool brute_minfac_check(const Query& q, const Instance& inst, std::size_t claimed_length,
                        const OracleBudget& budget = {}, std::stop_token stop = {});

}  // namespace rdm

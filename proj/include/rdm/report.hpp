#pragma once

// JSON payloads shared by the C API and the tests. Keys are stable; rationals
// are {"num", "den", "decimal"} with integers when they fit in 64 bits and
// strings otherwise.

#include <optional>

#include "json.hpp"
#include "rdm/classify.hpp"
#include "rdm/factorize.hpp"
#include "rdm/interventions.hpp"

namespace rdm {

nlohmann::json rational_to_json(const Rational& r);
nlohmann::json stats_to_json(const SolveStats& s);
nlohmann::json expression_to_json(const FactorExpr& e);

nlohmann::json resilience_payload(const ResilienceResult& r);
nlohmann::json responsibility_payload(const ResponsibilityResult& r);
nlohmann::json factorize_payload(const MinFacResult& r);
nlohmann::json classification_payload(const Query& q, const QueryClassification& c);

nlohmann::json oracle_resilience_payload(Semantics semantics, const Rational& value);
nlohmann::json oracle_responsibility_payload(Semantics semantics, const TupleId& target,
                                             const std::optional<Rational>& cost);
nlohmann::json oracle_minfac_payload(std::size_t length);

}  // namespace rdm

#include "rdm/rdm.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "rdm/error.hpp"
#include "rdm/oracle.hpp"
#include "rdm/report.hpp"

struct rdm_query {
  rdm::Query query;
};

struct rdm_instance {
  rdm::Instance instance;
  std::vector<std::string> warnings;
};

namespace {

thread_local std::string last_error;

rdm_status status_of(rdm::ErrorCode c) {
  using rdm::ErrorCode;
  switch (c) {
    case ErrorCode::parse: return RDM_ERR_PARSE;
    case ErrorCode::data: return RDM_ERR_DATA;
    case ErrorCode::unsupported: return RDM_ERR_UNSUPPORTED;
    case ErrorCode::undefined: return RDM_ERR_UNDEFINED;
    case ErrorCode::limit: return RDM_ERR_LIMIT;
    case ErrorCode::unknown_tuple: return RDM_ERR_UNKNOWN_TUPLE;
    case ErrorCode::budget: return RDM_ERR_BUDGET;
    case ErrorCode::resource: return RDM_ERR_RESOURCE;
    case ErrorCode::cancelled: return RDM_ERR_CANCELLED;
    case ErrorCode::invalid_argument: return RDM_ERR_INVALID_ARGUMENT;
    case ErrorCode::internal: return RDM_ERR_INTERNAL;
  }
  return RDM_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread's error text.
template <class F>
rdm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RDM_OK;
  } catch (const rdm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RDM_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RDM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return RDM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw rdm::Error(rdm::ErrorCode::invalid_argument, what);
}

rdm::Semantics semantics_of(rdm_semantics s) {
  require(s == RDM_SET || s == RDM_BAG, "unknown semantics");
  return s == RDM_BAG ? rdm::Semantics::bag : rdm::Semantics::set;
}

rdm::SolveMode mode_of(rdm_mode m) {
  switch (m) {
    case RDM_MODE_AUTO: return rdm::SolveMode::automatic;
    case RDM_MODE_LP: return rdm::SolveMode::lp;
    case RDM_MODE_ILP: return rdm::SolveMode::ilp;
    case RDM_MODE_MILP: return rdm::SolveMode::milp;
  }
  throw rdm::Error(rdm::ErrorCode::invalid_argument, "unknown solve mode");
}

rdm::SolveOptions options_of(const rdm_solve_options* o) {
  rdm_solve_options defaults;
  rdm_solve_options_init(&defaults);
  if (!o) o = &defaults;
  require(o->node_limit > 0, "node_limit must be positive");
  return {semantics_of(o->semantics), mode_of(o->mode), o->node_limit};
}

void emit(char** out, const nlohmann::json& j) { *out = dup_string(j.dump()); }

}  // namespace

extern "C" {

RDM_API void rdm_solve_options_init(rdm_solve_options* options) {
  if (!options) return;
  options->semantics = RDM_SET;
  options->mode = RDM_MODE_AUTO;
  options->node_limit = 1000000;
}

RDM_API const char* rdm_version(void) { return "0.1.0"; }

RDM_API const char* rdm_last_error(void) { return last_error.c_str(); }

RDM_API const char* rdm_status_name(rdm_status status) {
  switch (status) {
    case RDM_OK: return "ok";
    case RDM_ERR_PARSE: return "parse";
    case RDM_ERR_DATA: return "data";
    case RDM_ERR_UNSUPPORTED: return "unsupported";
    case RDM_ERR_UNDEFINED: return "undefined";
    case RDM_ERR_LIMIT: return "limit";
    case RDM_ERR_UNKNOWN_TUPLE: return "unknown_tuple";
    case RDM_ERR_BUDGET: return "budget";
    case RDM_ERR_RESOURCE: return "resource";
    case RDM_ERR_CANCELLED: return "cancelled";
    case RDM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RDM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

RDM_API void rdm_string_free(char* s) { std::free(s); }

RDM_API rdm_status rdm_query_parse(const char* text, rdm_query** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new rdm_query{rdm::parse_query(text)};
  });
}

RDM_API rdm_status rdm_query_load(const char* path, rdm_query** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new rdm_query{rdm::load_query(path)};
  });
}

RDM_API rdm_status rdm_query_to_text(const rdm_query* q, char** out) {
  return guarded([&] {
    require(q && out, "null argument");
    *out = dup_string(rdm::print_query(q->query));
  });
}

RDM_API void rdm_query_free(rdm_query* q) { delete q; }

RDM_API rdm_status rdm_instance_load(const rdm_query* q, const char* dir, rdm_semantics semantics,
                                     rdm_instance** out) {
  return guarded([&] {
    require(q && dir && out, "null argument");
    std::vector<std::string> warnings;
    auto inst = rdm::load_instance(q->query, dir, semantics_of(semantics), &warnings);
    *out = new rdm_instance{std::move(inst), std::move(warnings)};
  });
}

RDM_API rdm_status rdm_instance_random(const rdm_query* q, int64_t tuples_per_relation,
                                       int64_t domain, uint64_t seed, rdm_semantics semantics,
                                       rdm_instance** out) {
  return guarded([&] {
    require(q && out, "null argument");
    auto inst = rdm::random_instance(q->query, tuples_per_relation, domain, seed,
                                     semantics_of(semantics));
    *out = new rdm_instance{std::move(inst), {}};
  });
}

RDM_API rdm_status rdm_instance_save(const rdm_instance* inst, const char* dir) {
  return guarded([&] {
    require(inst && dir, "null argument");
    rdm::save_instance(inst->instance, dir);
  });
}

RDM_API rdm_status rdm_instance_warnings(const rdm_instance* inst, char** json_out) {
  return guarded([&] {
    require(inst && json_out, "null argument");
    emit(json_out, inst->warnings);
  });
}

RDM_API size_t rdm_instance_tuple_count(const rdm_instance* inst) {
  return inst ? inst->instance.tuple_count() : 0;
}

RDM_API void rdm_instance_free(rdm_instance* inst) { delete inst; }

RDM_API rdm_status rdm_resilience(const rdm_query* q, const rdm_instance* inst,
                                  const rdm_solve_options* options, char** json_out) {
  return guarded([&] {
    require(q && inst && json_out, "null argument");
    auto r = rdm::solve_resilience(q->query, inst->instance, options_of(options));
    emit(json_out, rdm::resilience_payload(r));
  });
}

RDM_API rdm_status rdm_responsibility(const rdm_query* q, const rdm_instance* inst,
                                      const char* target, const rdm_solve_options* options,
                                      char** json_out) {
  return guarded([&] {
    require(q && inst && target && json_out, "null argument");
    auto opts = options_of(options);
    if (opts.mode == rdm::SolveMode::automatic) opts.mode = rdm::SolveMode::milp;
    auto r = rdm::solve_responsibility(q->query, inst->instance, rdm::parse_tuple_id(target), opts);
    emit(json_out, rdm::responsibility_payload(r));
  });
}

RDM_API rdm_status rdm_factorize(const rdm_query* q, const rdm_instance* inst,
                                 const rdm_solve_options* options, char** json_out) {
  return guarded([&] {
    require(q && inst && json_out, "null argument");
    rdm::MinFacOptions mf;
    mf.node_limit = options_of(options).node_limit;
    emit(json_out, rdm::factorize_payload(rdm::solve_minfac(q->query, inst->instance, mf)));
  });
}

RDM_API rdm_status rdm_classify(const rdm_query* q, char** json_out) {
  return guarded([&] {
    require(q && json_out, "null argument");
    emit(json_out, rdm::classification_payload(q->query, rdm::predict_complexity(q->query)));
  });
}

RDM_API rdm_status rdm_resilience_model(const rdm_query* q, const rdm_instance* inst,
                                        rdm_semantics semantics, char** lp_out) {
  return guarded([&] {
    require(q && inst && lp_out, "null argument");
    auto m = rdm::build_resilience_model(q->query, inst->instance, semantics_of(semantics));
    *lp_out = dup_string(rdm::to_lp_format(m.model));
  });
}

RDM_API rdm_status rdm_responsibility_model(const rdm_query* q, const rdm_instance* inst,
                                            const char* target, rdm_semantics semantics,
                                            char** lp_out) {
  return guarded([&] {
    require(q && inst && target && lp_out, "null argument");
    auto m = rdm::build_responsibility_model(q->query, inst->instance, rdm::parse_tuple_id(target),
                                             semantics_of(semantics));
    *lp_out = dup_string(rdm::to_lp_format(m.base.model));
  });
}

RDM_API rdm_status rdm_oracle_resilience(const rdm_query* q, const rdm_instance* inst,
                                         rdm_semantics semantics, char** json_out) {
  return guarded([&] {
    require(q && inst && json_out, "null argument");
    auto sem = semantics_of(semantics);
    emit(json_out, rdm::oracle_resilience_payload(
                       sem, rdm::brute_resilience(q->query, inst->instance, sem)));
  });
}

RDM_API rdm_status rdm_oracle_responsibility(const rdm_query* q, const rdm_instance* inst,
                                             const char* target, rdm_semantics semantics,
                                             char** json_out) {
  return guarded([&] {
    require(q && inst && target && json_out, "null argument");
    auto sem = semantics_of(semantics);
    auto t = rdm::parse_tuple_id(target);
    emit(json_out, rdm::oracle_responsibility_payload(
                       sem, t, rdm::brute_responsibility(q->query, inst->instance, t, sem)));
  });
}

RDM_API rdm_status rdm_oracle_minfac(const rdm_query* q, const rdm_instance* inst,
                                     char** json_out) {
  return guarded([&] {
    require(q && inst && json_out, "null argument");
    emit(json_out, rdm::oracle_minfac_payload(rdm::brute_minfac(q->query, inst->instance)));
  });
}

}  // extern "C"

// rdm: command-line front end over the C library.
//
// Every command prints a JSON run report on stdout and a one-line summary on
// stderr. Exit codes: 0 ok, 2 bad input (parse, data, unsupported query,
// unknown target), 3 undefined resilience, 4 solver or oracle limit, 1 other.

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdm/rdm.h"

using nlohmann::json;

namespace {

struct Failure {
  rdm_status status;
  std::string message;
};

void check(rdm_status s) {
  if (s != RDM_OK) throw Failure{s, rdm_last_error()};
}

int exit_code(rdm_status s) {
  switch (s) {
    case RDM_OK: return 0;
    case RDM_ERR_PARSE:
    case RDM_ERR_DATA:
    case RDM_ERR_UNSUPPORTED:
    case RDM_ERR_UNKNOWN_TUPLE:
    case RDM_ERR_INVALID_ARGUMENT: return 2;
    case RDM_ERR_UNDEFINED: return 3;
    case RDM_ERR_LIMIT:
    case RDM_ERR_BUDGET:
    case RDM_ERR_RESOURCE: return 4;
    default: return 1;
  }
}

struct QueryDeleter {
  void operator()(rdm_query* q) const { rdm_query_free(q); }
};
struct InstanceDeleter {
  void operator()(rdm_instance* i) const { rdm_instance_free(i); }
};
using QueryPtr = std::unique_ptr<rdm_query, QueryDeleter>;
using InstancePtr = std::unique_ptr<rdm_instance, InstanceDeleter>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out(s);
  rdm_string_free(s);
  return out;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

struct Args {
  std::string query_file;
  std::string data_dir;
  bool bag = false;
  std::string mode;
  std::string target;
  std::string json_out;
  std::string dump_model;
  bool emit_expr = false;
  std::string oracle_problem;
  std::int64_t tuples = 0;
  std::int64_t domain = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
};

std::uint64_t node_limit_from_env() {
  const char* env = std::getenv("RDM_NODE_LIMIT");
  if (!env || !*env) return 1000000;
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || v == 0 || env[0] == '-') {
    throw Failure{RDM_ERR_INVALID_ARGUMENT, std::string("RDM_NODE_LIMIT must be a positive integer, got '") + env + "'"};
  }
  return v;
}

rdm_mode mode_from(const std::string& m, rdm_mode fallback) {
  if (m.empty()) return fallback;
  if (m == "auto") return RDM_MODE_AUTO;
  if (m == "lp") return RDM_MODE_LP;
  if (m == "ilp") return RDM_MODE_ILP;
  if (m == "milp") return RDM_MODE_MILP;
  throw Failure{RDM_ERR_INVALID_ARGUMENT, "unknown mode '" + m + "'"};
}

std::string fraction(const json& r) {
  std::string num = r["num"].is_string() ? r["num"].get<std::string>() : std::to_string(r["num"].get<std::int64_t>());
  std::string den = r["den"].is_string() ? r["den"].get<std::string>() : std::to_string(r["den"].get<std::int64_t>());
  return den == "1" ? num : num + "/" + den;
}

class Runner {
 public:
  Runner(std::string command, const Args& args) : command_(std::move(command)), args_(args) {}

  int run() {
    auto start = Clock::now();
    json report = {{"command", command_},
                   {"query_file", args_.query_file},
                   {"data_dir", args_.data_dir.empty() ? json(nullptr) : json(args_.data_dir)},
                   {"semantics", semantics_name()},
                   {"version", rdm_version()}};
    json timings = json::object();
    int code = 0;
    try {
      options_.semantics = args_.bag ? RDM_BAG : RDM_SET;
      options_.node_limit = node_limit_from_env();

      auto t = Clock::now();
      rdm_query* q = nullptr;
      check(rdm_query_load(args_.query_file.c_str(), &q));
      query_.reset(q);
      if (!args_.data_dir.empty()) {
        rdm_instance* inst = nullptr;
        check(rdm_instance_load(query_.get(), args_.data_dir.c_str(), options_.semantics, &inst));
        instance_.reset(inst);
        json warnings = json::parse(take_checked([&](char** s) {
          return rdm_instance_warnings(instance_.get(), s);
        }));
        for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << "\n";
      }
      timings["load"] = ms_since(t);

      t = Clock::now();
      json result = dispatch();
      timings["solve"] = ms_since(t);

      report["result"] = result;
      report["lp_bound"] = result.contains("lp_bound") ? result["lp_bound"] : json(nullptr);
      report["lp_integral"] = result.contains("lp_integral") ? result["lp_integral"] : json(nullptr);
      report["stats"] = result.contains("stats") ? result["stats"] : json(nullptr);
    } catch (const Failure& f) {
      code = exit_code(f.status);
      report["error"] = {{"status", rdm_status_name(f.status)}, {"message", f.message}};
      std::cerr << "rdm " << command_ << ": " << f.message << "\n";
    }
    timings["total"] = ms_since(start);
    report["timings_ms"] = timings;

    const std::string text = report.dump(2) + "\n";
    if (!args_.json_out.empty()) {
      std::ofstream out(args_.json_out, std::ios::binary);
      if (!out || !(out << text)) {
        std::cerr << "rdm: cannot write " << args_.json_out << "\n";
        return code ? code : 1;
      }
    }
    if (code == 0 && args_.emit_expr) {
      std::cout << report["result"]["expression_short"].get<std::string>() << "\n";
    } else {
      std::cout << text;
    }
    return code;
  }

 private:
  template <class F>
  std::string take_checked(F&& call) {
    char* s = nullptr;
    check(call(&s));
    return take(s);
  }

  json semantics_name() const {
    if (command_ == "classify") return nullptr;
    return args_.bag ? "bag" : "set";
  }

  void dump_model(const std::function<rdm_status(char**)>& call) {
    if (args_.dump_model.empty()) return;
    std::ofstream out(args_.dump_model, std::ios::binary);
    out << take_checked(call);
    if (!out) throw Failure{RDM_ERR_DATA, "cannot write " + args_.dump_model};
  }

  json dispatch() {
    if (command_ == "resilience") {
      options_.mode = mode_from(args_.mode, RDM_MODE_AUTO);
      if (options_.mode == RDM_MODE_MILP) throw Failure{RDM_ERR_INVALID_ARGUMENT, "resilience modes are lp, ilp and auto"};
      dump_model([&](char** s) { return rdm_resilience_model(query_.get(), instance_.get(), options_.semantics, s); });
      json r = json::parse(take_checked([&](char** s) {
        return rdm_resilience(query_.get(), instance_.get(), &options_, s);
      }));
      std::cerr << "resilience (" << semantics_name().get<std::string>() << ", " << r["mode"].get<std::string>()
                << "): " << fraction(r["value"]) << "  lp bound " << fraction(r["lp_bound"])
                << (r["lp_integral"].get<bool>() ? " (integral)" : " (fractional)") << "\n";
      return r;
    }
    if (command_ == "responsibility") {
      options_.mode = mode_from(args_.mode, RDM_MODE_MILP);
      dump_model([&](char** s) {
        return rdm_responsibility_model(query_.get(), instance_.get(), args_.target.c_str(), options_.semantics, s);
      });
      json r = json::parse(take_checked([&](char** s) {
        return rdm_responsibility(query_.get(), instance_.get(), args_.target.c_str(), &options_, s);
      }));
      std::cerr << "responsibility of " << args_.target << ": " << fraction(r["responsibility"]) << " ("
                << r["status"].get<std::string>() << ")\n";
      return r;
    }
    if (command_ == "factorize") {
      json r = json::parse(take_checked([&](char** s) {
        return rdm_factorize(query_.get(), instance_.get(), &options_, s);
      }));
      std::cerr << "factorization length " << r["length"].get<std::size_t>() << ": "
                << r["expression_short"].get<std::string>() << "\n";
      return r;
    }
    if (command_ == "classify") {
      json r = json::parse(take_checked([&](char** s) { return rdm_classify(query_.get(), s); }));
      for (const auto& [key, p] : r["predictions"].items()) {
        std::cerr << key << ": " << p["class"].get<std::string>() << "\n";
      }
      return r;
    }
    if (command_ == "oracle") {
      json r;
      if (args_.oracle_problem == "resilience") {
        r = json::parse(take_checked([&](char** s) {
          return rdm_oracle_resilience(query_.get(), instance_.get(), options_.semantics, s);
        }));
        std::cerr << "oracle resilience: " << fraction(r["value"]) << "\n";
      } else if (args_.oracle_problem == "responsibility") {
        r = json::parse(take_checked([&](char** s) {
          return rdm_oracle_responsibility(query_.get(), instance_.get(), args_.target.c_str(), options_.semantics, s);
        }));
        std::cerr << "oracle responsibility of " << args_.target << ": " << fraction(r["responsibility"]) << "\n";
      } else {
        r = json::parse(take_checked([&](char** s) { return rdm_oracle_minfac(query_.get(), instance_.get(), s); }));
        std::cerr << "oracle factorization length " << r["length"].get<std::size_t>() << "\n";
      }
      return r;
    }
    // gen
    rdm_instance* inst = nullptr;
    check(rdm_instance_random(query_.get(), args_.tuples, args_.domain, args_.seed, options_.semantics, &inst));
    InstancePtr owned(inst);
    check(rdm_instance_save(inst, args_.out_dir.c_str()));
    std::cerr << "wrote " << rdm_instance_tuple_count(inst) << " tuples to " << args_.out_dir << "\n";
    return {{"problem", "gen"},
            {"out", args_.out_dir},
            {"tuples_per_relation", args_.tuples},
            {"domain", args_.domain},
            {"seed", args_.seed},
            {"tuple_count", rdm_instance_tuple_count(inst)}};
  }

  std::string command_;
  const Args& args_;
  rdm_solve_options options_{RDM_SET, RDM_MODE_AUTO, 1000000};
  QueryPtr query_;
  InstancePtr instance_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience, responsibility and provenance factorization for conjunctive queries"};
  app.set_version_flag("--version", std::string(rdm_version()));
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* sub, bool data) {
    sub->add_option("-q,--query", args.query_file, "query file (.dl)")->required()->check(CLI::ExistingFile);
    if (data) {
      sub->add_option("-d,--data", args.data_dir, "directory with one <Relation>.csv per relation")->required();
      sub->add_flag("--bag", args.bag, "bag semantics (weights are the _mult column)");
    }
    sub->add_option("--json", args.json_out, "also write the run report to this file");
  };

  auto* res = app.add_subcommand("resilience", "minimum deletion set that falsifies the query");
  common(res, true);
  res->add_option("--mode", args.mode, "lp, ilp or auto (default)")->check(CLI::IsMember({"lp", "ilp", "auto"}));
  res->add_option("--dump-model", args.dump_model, "write the linear model in LP format");

  auto* rsp = app.add_subcommand("responsibility", "causal responsibility of one tuple");
  common(rsp, true);
  rsp->add_option("-t,--target", args.target, "tuple id Relation:row")->required();
  rsp->add_option("--mode", args.mode, "milp (default) or ilp")->check(CLI::IsMember({"milp", "ilp"}));
  rsp->add_option("--dump-model", args.dump_model, "write the linear model in LP format");

  auto* fac = app.add_subcommand("factorize", "minimal factorization of the provenance");
  common(fac, true);
  fac->add_flag("--emit-expr", args.emit_expr, "print only the expression on stdout");

  auto* cls = app.add_subcommand("classify", "structural analysis and complexity prediction");
  common(cls, false);

  auto* orc = app.add_subcommand("oracle", "exhaustive reference values for small instances");
  orc->add_option("problem", args.oracle_problem, "resilience, responsibility or factorize")
      ->required()
      ->check(CLI::IsMember({"resilience", "responsibility", "factorize"}));
  common(orc, true);
  orc->add_option("-t,--target", args.target, "tuple id for responsibility");

  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("-q,--query", args.query_file, "query file (.dl)")->required()->check(CLI::ExistingFile);
  gen->add_option("--tuples", args.tuples, "tuples drawn per relation")->required();
  gen->add_option("--domain", args.domain, "number of distinct constants")->required();
  gen->add_option("--seed", args.seed, "random seed")->required();
  gen->add_option("--out", args.out_dir, "output directory")->required();
  gen->add_flag("--bag", args.bag, "draw multiplicities");
  gen->add_option("--json", args.json_out, "also write the run report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (orc->parsed() && args.oracle_problem == "responsibility" && args.target.empty()) {
    std::cerr << "rdm oracle responsibility: --target is required\n";
    return 2;
  }
  for (auto* sub : {res, rsp, fac, cls, orc, gen}) {
    if (sub->parsed()) return Runner(sub->get_name(), args).run();
  }
  return 2;
}

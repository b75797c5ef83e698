// Exercises the shared library through its C header only.

#include <filesystem>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "rdm/rdm.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& rel) { return std::string(RDM_DATA_DIR) + "/" + rel; }

json take_json(char* s) {
  json j = json::parse(s);
  rdm_string_free(s);
  return j;
}

struct Fixture {
  rdm_query* q = nullptr;
  rdm_instance* inst = nullptr;
  Fixture(const char* query, const char* dir, rdm_semantics sem = RDM_SET) {
    REQUIRE(rdm_query_load(data(query).c_str(), &q) == RDM_OK);
    REQUIRE(rdm_instance_load(q, data(dir).c_str(), sem, &inst) == RDM_OK);
  }
  ~Fixture() {
    rdm_instance_free(inst);
    rdm_query_free(q);
  }
};

}  // namespace

TEST_CASE("query handles") {
  rdm_query* q = nullptr;
  REQUIRE(rdm_query_parse("q() :- R(x,y), S(y,z).", &q) == RDM_OK);
  char* text = nullptr;
  REQUIRE(rdm_query_to_text(q, &text) == RDM_OK);
  CHECK(std::string(text) == "q() :- R(x, y), S(y, z).\n");
  rdm_string_free(text);
  rdm_query_free(q);

  rdm_query* bad = nullptr;
  CHECK(rdm_query_parse("q(x) :- R(x).", &bad) == RDM_ERR_PARSE);
  CHECK(bad == nullptr);
  CHECK(std::string(rdm_last_error()).find("boolean") != std::string::npos);
  CHECK(rdm_query_load("/nonexistent/file.dl", &bad) == RDM_ERR_DATA);
  CHECK(rdm_query_parse(nullptr, &bad) == RDM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(rdm_status_name(RDM_ERR_LIMIT)) == "limit");
  CHECK(std::string(rdm_version()) == "0.1.0");
  rdm_query_free(nullptr);
  rdm_instance_free(nullptr);
}

TEST_CASE("McDormand through the C API") {
  Fixture f("queries/qa_triangle.dl", "mcdormand");
  CHECK(rdm_instance_tuple_count(f.inst) == 6);

  char* out = nullptr;
  REQUIRE(rdm_resilience(f.q, f.inst, nullptr, &out) == RDM_OK);
  json r = take_json(out);
  CHECK(r["value"]["num"] == 1);
  CHECK(r["value"]["den"] == 1);
  CHECK(r["lp_integral"] == true);

  rdm_solve_options opts;
  rdm_solve_options_init(&opts);
  REQUIRE(rdm_responsibility(f.q, f.inst, "ActsIn:1", &opts, &out) == RDM_OK);
  json rsp = take_json(out);
  CHECK(rsp["responsibility"]["num"] == 1);
  CHECK(rsp["responsibility"]["den"] == 2);
  CHECK(rsp["responsibility"]["decimal"] == "0.5");
  CHECK(rsp["mode"] == "milp");

  REQUIRE(rdm_factorize(f.q, f.inst, nullptr, &out) == RDM_OK);
  json fac = take_json(out);
  CHECK(fac["length"] == 6);
  CHECK(fac["expression_short"] == "o1*s1*(a1*d1 + a2*d2)");

  REQUIRE(rdm_oracle_resilience(f.q, f.inst, RDM_SET, &out) == RDM_OK);
  CHECK(take_json(out)["value"]["num"] == 1);
  REQUIRE(rdm_oracle_responsibility(f.q, f.inst, "Oscar:1", RDM_SET, &out) == RDM_OK);
  CHECK(take_json(out)["responsibility"]["num"] == 1);
  REQUIRE(rdm_oracle_minfac(f.q, f.inst, &out) == RDM_OK);
  CHECK(take_json(out)["length"] == 6);

  CHECK(rdm_responsibility(f.q, f.inst, "ActsIn:9", &opts, &out) == RDM_ERR_UNKNOWN_TUPLE);
  CHECK(rdm_responsibility(f.q, f.inst, "nonsense", &opts, &out) == RDM_ERR_UNKNOWN_TUPLE);
  opts.mode = RDM_MODE_LP;
  CHECK(rdm_responsibility(f.q, f.inst, "ActsIn:1", &opts, &out) == RDM_ERR_INVALID_ARGUMENT);
  opts.mode = static_cast<rdm_mode>(42);
  CHECK(rdm_resilience(f.q, f.inst, &opts, &out) == RDM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bag model differs only in the objective") {
  Fixture f("queries/qa_triangle.dl", "mcdormand_bag", RDM_BAG);
  char* set_lp = nullptr;
  char* bag_lp = nullptr;
  REQUIRE(rdm_resilience_model(f.q, f.inst, RDM_SET, &set_lp) == RDM_OK);
  REQUIRE(rdm_resilience_model(f.q, f.inst, RDM_BAG, &bag_lp) == RDM_OK);
  std::string a = set_lp, b = bag_lp;
  rdm_string_free(set_lp);
  rdm_string_free(bag_lp);
  CHECK(a != b);
  auto obj = [](const std::string& s) {
    auto p = s.find(" obj:");
    return s.substr(p, s.find('\n', p) - p);
  };
  CHECK(obj(b) == " obj: 2 x(Oscar,1) + x(ActsIn,1) + x(ActsIn,2) + x(DirectedBy,1) + x(DirectedBy,2) + x(Spouse,1)");
  std::string a_rest = a, b_rest = b;
  a_rest.erase(a_rest.find(" obj:"), obj(a).size());
  b_rest.erase(b_rest.find(" obj:"), obj(b).size());
  CHECK(a_rest == b_rest);
}

TEST_CASE("limits and unsupported queries") {
  Fixture f("queries/epath.dl", "ecycle");
  rdm_solve_options opts;
  rdm_solve_options_init(&opts);
  opts.mode = RDM_MODE_ILP;
  opts.node_limit = 1;
  char* out = nullptr;
  CHECK(rdm_resilience(f.q, f.inst, &opts, &out) == RDM_ERR_LIMIT);
  CHECK(out == nullptr);
  CHECK(rdm_factorize(f.q, f.inst, nullptr, &out) == RDM_ERR_UNSUPPORTED);
  opts.node_limit = 0;
  CHECK(rdm_resilience(f.q, f.inst, &opts, &out) == RDM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("random instances are reproducible on disk") {
  rdm_query* q = nullptr;
  REQUIRE(rdm_query_load(data("queries/chain2.dl").c_str(), &q) == RDM_OK);
  fs::path base = fs::temp_directory_path() / ("rdm_capi_" + std::to_string(::getpid()));
  for (int i = 0; i < 2; ++i) {
    rdm_instance* inst = nullptr;
    REQUIRE(rdm_instance_random(q, 5, 3, 17, RDM_BAG, &inst) == RDM_OK);
    REQUIRE(rdm_instance_save(inst, (base / std::to_string(i)).c_str()) == RDM_OK);
    rdm_instance_free(inst);
  }
  for (const char* rel : {"R.csv", "S.csv"}) {
    CHECK(fs::file_size(base / "0" / rel) == fs::file_size(base / "1" / rel));
  }
  rdm_instance* loaded = nullptr;
  CHECK(rdm_instance_load(q, (base / "0").c_str(), RDM_BAG, &loaded) == RDM_OK);
  char* warnings = nullptr;
  REQUIRE(rdm_instance_warnings(loaded, &warnings) == RDM_OK);
  CHECK(take_json(warnings).empty());
  rdm_instance_free(loaded);

  rdm_instance* none = nullptr;
  CHECK(rdm_instance_random(q, -1, 3, 1, RDM_SET, &none) != RDM_OK);
  fs::remove_all(base);
  rdm_query_free(q);
}

// Runs the rdm binary. Reports are compared with tests/golden/*.json after
// dropping timings; set RDM_UPDATE_GOLDEN=1 to rewrite the golden files.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "rdm/oracle.hpp"
#include "rdm/report.hpp"

using nlohmann::json;
using namespace rdm;
using namespace rdm::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI from the data directory so reports carry relative paths.
Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = "cd '" + std::string(RDM_DATA_DIR) + "' && " + env + " '" + RDM_CLI + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json stripped(const std::string& text) {
  json j = json::parse(text);
  j.erase("timings_ms");
  return j;
}

void check_golden(const std::string& name, const std::string& args) {
  Run r = run(args);
  REQUIRE(r.code == 0);
  json got = stripped(r.out);
  fs::path file = fs::path(RDM_GOLDEN_DIR) / (name + ".json");
  const char* update = std::getenv("RDM_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    std::ofstream(file, std::ios::binary) << got.dump(2) << "\n";
  }
  std::ifstream in(file, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << file);
  std::stringstream ss;
  ss << in.rdbuf();
  CAPTURE(name);
  CHECK(got.dump(2) + "\n" == ss.str());
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kQA_file = "-q queries/qa_triangle.dl";

}  // namespace

TEST_CASE("golden reports") {
  check_golden("resilience_mcdormand", "resilience " + kQA_file + " -d mcdormand");
  check_golden("resilience_mcdormand_bag", "resilience " + kQA_file + " -d mcdormand_bag --bag");
  check_golden("resilience_ecycle_lp", "resilience -q queries/epath.dl -d ecycle --mode lp");
  check_golden("resilience_ecycle", "resilience -q queries/epath.dl -d ecycle");
  check_golden("responsibility_oscar", "responsibility " + kQA_file + " -d mcdormand -t Oscar:1");
  check_golden("responsibility_actsin", "responsibility " + kQA_file + " -d mcdormand -t ActsIn:1");
  check_golden("factorize_mcdormand", "factorize " + kQA_file + " -d mcdormand");
  check_golden("factorize_empty", "factorize " + kQA_file + " -d empty_qa");
  check_golden("classify_qa", "classify " + kQA_file);
  check_golden("classify_q_triangle", "classify -q queries/q_triangle.dl");
  check_golden("classify_chain2", "classify -q queries/chain2.dl");
  check_golden("classify_epath", "classify -q queries/epath.dl");
  check_golden("oracle_resilience", "oracle resilience " + kQA_file + " -d mcdormand");
}

TEST_CASE("payloads equal the library results") {
  Query qa = load_query(data_path("queries/qa_triangle.dl"));
  Instance inst = load_instance(qa, data_path("mcdormand"), Semantics::set);
  auto payload = [&](const std::string& args) {
    Run r = run(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out)["result"];
  };
  CHECK(payload("resilience " + kQA_file + " -d mcdormand") == resilience_payload(solve_resilience(qa, inst)));
  CHECK(payload("responsibility " + kQA_file + " -d mcdormand -t ActsIn:2") ==
        responsibility_payload(solve_responsibility(qa, inst, tid("ActsIn", 2))));
  CHECK(payload("factorize " + kQA_file + " -d mcdormand") == factorize_payload(solve_minfac(qa, inst)));
  CHECK(payload("classify " + kQA_file) == classification_payload(qa, predict_complexity(qa)));
  CHECK(payload("oracle responsibility " + kQA_file + " -d mcdormand -t Spouse:1") ==
        oracle_responsibility_payload(Semantics::set, tid("Spouse", 1),
                                      brute_responsibility(qa, inst, tid("Spouse", 1), Semantics::set)));
  CHECK(payload("oracle factorize " + kQA_file + " -d mcdormand")["length"] == 6);
}

TEST_CASE("exit codes") {
  CHECK(run("responsibility " + kQA_file + " -d mcdormand -t ActsIn:9").code == 2);
  CHECK(run("factorize -q queries/epath.dl -d ecycle").code == 2);
  CHECK(run("resilience " + kQA_file + " -d no_such_dir").code == 2);
  CHECK(run("resilience -q queries/epath.dl -d ecycle --mode ilp", "RDM_NODE_LIMIT=1").code == 4);
  CHECK(run("resilience -q queries/epath.dl -d ecycle", "RDM_NODE_LIMIT=abc").code == 2);
  CHECK(run("resilience " + kQA_file).code == 2);  // missing -d
  CHECK(run("frobnicate").code == 2);
  CHECK(run("--help").code == 0);

  Run limited = run("resilience -q queries/epath.dl -d ecycle --mode ilp", "RDM_NODE_LIMIT=1");
  json report = json::parse(limited.out);
  CHECK(report["error"]["status"] == "limit");
}

TEST_CASE("output options") {
  fs::path tmp = fs::temp_directory_path() / ("rdm_cli_" + std::to_string(::getpid()));
  fs::create_directories(tmp);

  Run expr = run("factorize " + kQA_file + " -d mcdormand --emit-expr");
  CHECK(expr.out == "o1*s1*(a1*d1 + a2*d2)\n");

  Run r = run("resilience " + kQA_file + " -d mcdormand --json '" + (tmp / "r.json").string() + "'");
  CHECK(stripped(read_file(tmp / "r.json")) == stripped(r.out));

  run("resilience " + kQA_file + " -d mcdormand --dump-model '" + (tmp / "set.lp").string() + "'");
  run("resilience " + kQA_file + " -d mcdormand_bag --bag --dump-model '" + (tmp / "bag.lp").string() + "'");
  std::string set_lp = read_file(tmp / "set.lp"), bag_lp = read_file(tmp / "bag.lp");
  CHECK(set_lp.find("Subject To") != std::string::npos);
  CHECK(set_lp.substr(set_lp.find("Subject To")) == bag_lp.substr(bag_lp.find("Subject To")));
  CHECK(set_lp != bag_lp);

  for (int i = 0; i < 2; ++i) {
    std::string out = (tmp / ("gen" + std::to_string(i))).string();
    CHECK(run("gen -q queries/chain2.dl --tuples 6 --domain 4 --seed 9 --bag --out '" + out + "'").code == 0);
  }
  for (const char* rel : {"R.csv", "S.csv"}) {
    CHECK(read_file(tmp / "gen0" / rel) == read_file(tmp / "gen1" / rel));
    CHECK_FALSE(read_file(tmp / "gen0" / rel).empty());
  }
  fs::remove_all(tmp);
}

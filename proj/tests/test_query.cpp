#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "rdm/error.hpp"
#include "rdm/query.hpp"

using namespace rdm;
using namespace rdm::testing;

namespace {

ErrorCode parse_error_code(const char* text) {
  try {
    parse_query(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for: " << text);
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("parse the 2-chain") {
  Query q = parse_query("q() :- R(x,y), S(y,z).");
  CHECK(q.size() == 2);
  CHECK(q.variables() == std::vector<std::string>{"x", "y", "z"});
  CHECK(q.exogenous().empty());
  CHECK(q.atom(1).relation == "S");
  CHECK(q.atom(1).terms[0] == Term::variable("y"));
}

TEST_CASE("parse the Oscar query") {
  Query q = parse_query("q() :- Oscar(a), ActsIn(a,m), DirectedBy(m,d), Spouse(a,d).");
  CHECK(q.size() == 4);
  CHECK(q.variables() == std::vector<std::string>{"a", "m", "d"});
  CHECK(is_self_join_free(q));
}

TEST_CASE("self-join syntax") {
  Query q = parse_query("q() :- E(x,y), E(y,z).");
  CHECK(q.size() == 2);
  CHECK(q.atom(0).relation == q.atom(1).relation);
  CHECK_FALSE(is_self_join_free(q));
  CHECK(is_self_join_free(parse_query(kChain2)));
}

TEST_CASE("comments, exogenous lines and constants") {
  Query q = parse_query(
      "% header comment\n"
      "exogenous: Spouse.\n"
      "exogenous: Oscar, DirectedBy. % trailing\n"
      "q() :- Oscar(a),\n  ActsIn(a, \"x \\\"y\\\"\"), DirectedBy(m, -12), Spouse(a, d).\n");
  CHECK(q.exogenous() == std::set<std::string>{"DirectedBy", "Oscar", "Spouse"});
  CHECK(q.atom(1).terms[1] == Term::constant("x \"y\""));
  CHECK(q.atom(2).terms[1] == Term::constant("-12"));
  CHECK(q.is_exogenous_atom(0));
  CHECK_FALSE(q.is_exogenous_atom(1));
}

TEST_CASE("repeated variable inside an atom") {
  Query q = parse_query("q() :- R(x, x), S(x).");
  CHECK(q.atom(0).variables() == std::vector<std::string>{"x"});
  CHECK(atoms_of_variable(q, "x") == std::set<std::size_t>{0, 1});
}

TEST_CASE("parse errors") {
  CHECK(parse_error_code("q(x) :- R(x).") == ErrorCode::parse);
  CHECK(parse_error_code("q() :- R(x), R(x, y).") == ErrorCode::parse);
  CHECK(parse_error_code("exogenous: R. q() :- R(x).") == ErrorCode::parse);
  CHECK(parse_error_code("exogenous: T. q() :- R(x).") == ErrorCode::parse);
  CHECK(parse_error_code("q() :- R(x)") == ErrorCode::parse);
  CHECK(parse_error_code("q() :- R(X).") == ErrorCode::parse);
  CHECK(parse_error_code("q() :- R(x). q() :- S(x).") == ErrorCode::parse);
  CHECK(parse_error_code("% nothing\n") == ErrorCode::parse);
  CHECK(parse_error_code("q() :- R(\"open).") == ErrorCode::parse);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_query("q() :-\n  R(x,\n  ?).");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3, column 3") != std::string::npos);
  }
}

TEST_CASE("atoms_of_variable") {
  Query chain = parse_query(kChain2);
  CHECK(atoms_of_variable(chain, "y") == std::set<std::size_t>{0, 1});
  CHECK(atoms_of_variable(chain, "x") == std::set<std::size_t>{0});
  Query qa = parse_query(kQA);
  CHECK(atoms_of_variable(qa, "a") == std::set<std::size_t>{0, 1, 3});
  CHECK_THROWS_AS(atoms_of_variable(chain, "w"), Error);
}

TEST_CASE("load a bundled query file") {
  Query q = load_query(data_path("queries/qa_triangle.dl"));
  CHECK(q == parse_query(kQA));
}

// Random queries over a small vocabulary.
Query random_query(std::mt19937& rng) {
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  const std::vector<std::string> consts{"1", "-4", "a b", "q\"t"};
  int atoms = 1 + static_cast<int>(rng() % 4);
  std::vector<Atom> body;
  std::vector<std::size_t> arities(5);
  for (auto& a : arities) a = 1 + rng() % 3;
  for (int i = 0; i < atoms; ++i) {
    std::size_t rel = rng() % 5;
    Atom a{"R" + std::to_string(rel), {}};
    for (std::size_t k = 0; k < arities[rel]; ++k) {
      if (rng() % 4 == 0) {
        a.terms.push_back(Term::constant(consts[rng() % consts.size()]));
      } else {
        a.terms.push_back(Term::variable(vars[rng() % vars.size()]));
      }
    }
    body.push_back(a);
  }
  std::set<std::string> exo;
  if (atoms > 1 && rng() % 2) exo.insert(body[0].relation);
  for (const auto& a : body) {
    if (exo.count(a.relation) == 0) return Query(body, exo);
  }
  return Query(body, {});
}

TEST_CASE("property: print/parse round trip and invariants") {
  std::mt19937 rng(11);
  for (int n = 0; n < 300; ++n) {
    Query q = random_query(rng);
    Query back = parse_query(print_query(q));
    REQUIRE(back == q);

    for (const auto& v : q.variables()) {
      auto atoms = atoms_of_variable(q, v);
      for (std::size_t i = 0; i < q.size(); ++i) {
        CHECK(q.atom(i).has_variable(v) == (atoms.count(i) > 0));
      }
    }

    auto atoms = q.atoms();
    std::shuffle(atoms.begin(), atoms.end(), rng);
    Query shuffled(atoms, q.exogenous());
    CHECK(is_self_join_free(shuffled) == is_self_join_free(q));
  }
}

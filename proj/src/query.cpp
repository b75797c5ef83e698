#include "rdm/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "rdm/error.hpp"

namespace rdm {

std::vector<std::string> Atom::variables() const {
  std::vector<std::string> out;
  for (const auto& t : terms) {
    if (t.is_variable() && std::find(out.begin(), out.end(), t.name) == out.end()) {
      out.push_back(t.name);
    }
  }
  return out;
}

bool Atom::has_variable(std::string_view v) const {
  return std::any_of(terms.begin(), terms.end(),
                     [&](const Term& t) { return t.is_variable() && t.name == v; });
}

Query::Query(std::vector<Atom> atoms, std::set<std::string> exogenous, std::string head)
    : atoms_(std::move(atoms)), exogenous_(std::move(exogenous)), head_(std::move(head)) {
  if (atoms_.empty()) throw Error(ErrorCode::parse, "query has no atoms");
  std::map<std::string, std::size_t> arity;
  for (const auto& a : atoms_) {
    if (a.terms.empty()) throw Error(ErrorCode::parse, "atom " + a.relation + " has arity 0");
    auto [it, fresh] = arity.emplace(a.relation, a.arity());
    if (!fresh && it->second != a.arity()) {
      throw Error(ErrorCode::parse, "arity mismatch for relation " + a.relation + ": " +
                                        std::to_string(it->second) + " vs " +
                                        std::to_string(a.arity()));
    }
    for (const auto& v : a.variables()) {
      if (std::find(variables_.begin(), variables_.end(), v) == variables_.end()) {
        variables_.push_back(v);
      }
    }
  }
  for (const auto& r : exogenous_) {
    if (!arity.count(r)) {
      throw Error(ErrorCode::parse, "exogenous relation " + r + " does not occur in the query");
    }
  }
  bool any_endogenous = std::any_of(atoms_.begin(), atoms_.end(),
                                    [&](const Atom& a) { return !is_exogenous(a.relation); });
  if (!any_endogenous) throw Error(ErrorCode::parse, "every atom of the query is exogenous");
}

bool Query::has_variable(std::string_view v) const {
  return std::find(variables_.begin(), variables_.end(), v) != variables_.end();
}

std::vector<std::string> Query::relations() const {
  std::vector<std::string> out;
  for (const auto& a : atoms_) {
    if (std::find(out.begin(), out.end(), a.relation) == out.end()) out.push_back(a.relation);
  }
  return out;
}

std::size_t Query::arity_of(const std::string& relation) const {
  for (const auto& a : atoms_) {
    if (a.relation == relation) return a.arity();
  }
  throw Error(ErrorCode::invalid_argument, "relation " + relation + " not in query");
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Query parse() {
    std::set<std::string> exogenous;
    std::optional<std::vector<Atom>> body;
    std::string head;
    skip_ws();
    while (!at_end()) {
      std::size_t start = pos_;
      std::string word = ident("statement");
      skip_ws();
      if (word == "exogenous" && peek() == ':') {
        ++pos_;
        do {
          skip_ws();
          exogenous.insert(ident("relation name"));
          skip_ws();
        } while (accept(','));
        expect('.');
      } else {
        if (body) fail(start, "more than one rule");
        head = word;
        expect('(');
        skip_ws();
        if (peek() != ')') fail(pos_, "non-boolean head: the head must take no arguments");
        expect(')');
        skip_ws();
        expect(':');
        if (peek() != '-') fail(pos_, "expected ':-'");
        ++pos_;
        body.emplace();
        do {
          skip_ws();
          body->push_back(atom());
          skip_ws();
        } while (accept(','));
        expect('.');
      }
      skip_ws();
    }
    if (!body) throw Error(ErrorCode::parse, "no rule found");
    return Query(std::move(*body), std::move(exogenous), std::move(head));
  }

 private:
  Atom atom() {
    Atom a;
    a.relation = ident("relation name");
    skip_ws();
    expect('(');
    do {
      skip_ws();
      a.terms.push_back(term());
      skip_ws();
    } while (accept(','));
    expect(')');
    return a;
  }

  Term term() {
    char c = peek();
    if (c == '"') return Term::constant(quoted());
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      if (c == '-') ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail(pos_, "expected digit");
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return Term::constant(std::string(text_.substr(start, pos_ - start)));
    }
    if (std::islower(static_cast<unsigned char>(c))) return Term::variable(ident("variable"));
    fail(pos_, "expected a variable, integer or quoted string");
  }

  std::string quoted() {
    std::size_t start = pos_;
    ++pos_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail(start, "unterminated string");
      char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end() || (peek() != '"' && peek() != '\\')) fail(pos_, "bad escape");
        c = text_[pos_++];
      }
      out.push_back(c);
    }
  }

  std::string ident(const char* what) {
    std::size_t start = pos_;
    if (!std::isalpha(static_cast<unsigned char>(peek()))) {
      fail(pos_, std::string("expected ") + what);
    }
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '%') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(pos_, std::string("expected '") + c + "'");
  }

  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_integer_literal(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse(); }

Query load_query(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::data, "cannot open query file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_query(ss.str());
}

std::string print_query(const Query& q) {
  std::ostringstream out;
  if (!q.exogenous().empty()) {
    out << "exogenous: ";
    bool first = true;
    for (const auto& r : q.exogenous()) {
      out << (first ? "" : ", ") << r;
      first = false;
    }
    out << ".\n";
  }
  out << q.head() << "() :- ";
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Atom& a = q.atom(i);
    out << (i ? ", " : "") << a.relation << "(";
    for (std::size_t j = 0; j < a.terms.size(); ++j) {
      const Term& t = a.terms[j];
      out << (j ? ", " : "");
      if (t.is_variable() || is_integer_literal(t.name)) {
        out << t.name;
      } else {
        out << '"';
        for (char c : t.name) {
          if (c == '"' || c == '\\') out << '\\';
          out << c;
        }
        out << '"';
      }
    }
    out << ")";
  }
  out << ".\n";
  return out.str();
}

bool is_self_join_free(const Query& q) {
  std::set<std::string> seen;
  for (const auto& a : q.atoms()) {
    if (!seen.insert(a.relation).second) return false;
  }
  return true;
}

std::set<std::size_t> atoms_of_variable(const Query& q, std::string_view v) {
  if (!q.has_variable(v)) {
    throw Error(ErrorCode::invalid_argument, "unknown variable " + std::string(v));
  }
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q.atom(i).has_variable(v)) out.insert(i);
  }
  return out;
}

}  // namespace rdm

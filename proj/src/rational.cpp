#include "rdm/rational.hpp"

#include <cctype>

#include "rdm/error.hpp"

namespace rdm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::data: return "data";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::undefined: return "undefined";
    case ErrorCode::limit: return "limit";
    case ErrorCode::unknown_tuple: return "unknown_tuple";
    case ErrorCode::budget: return "budget";
    case ErrorCode::resource: return "resource";
    case ErrorCode::cancelled: return "cancelled";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

std::string to_fraction_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_decimal_string(const Rational& r) {
  mpz_class den = r.get_den();
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return to_fraction_string(r);
  unsigned digits = std::max(twos, fives);
  if (digits == 0) return r.get_num().get_str();

  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class scaled = abs(r.get_num()) * scale / r.get_den();
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (r < 0 ? "-" : "") + s;
}

Rational parse_rational(const std::string& text) {
  auto bad = [&] { return Error(ErrorCode::invalid_argument, "not a rational: '" + text + "'"); };
  if (text.empty()) throw bad();
  try {
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::size_t frac = text.size() - dot - 1;
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac);
      Rational r(mpz_class(digits), scale);
      r.canonicalize();
      return r;
    }
    Rational r(text);
    if (r.get_den() == 0) throw bad();
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

}  // namespace rdm

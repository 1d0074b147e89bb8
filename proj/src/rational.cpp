#include "gjext/rational.hpp"

#include <cctype>

namespace gjext {

void Rational::canonicalize_checked() {
  if (sgn(q_.get_den()) == 0) throw ConstructionError("rational with zero denominator");
  q_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ConstructionError("division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

namespace {

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Int parse_integer(std::string_view s) {
  if (!valid_integer_token(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  return Int(std::string(s), 10);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text), Int(1));
  Int n = parse_integer(text.substr(0, slash));
  Int d = parse_integer(text.substr(slash + 1));
  if (sgn(d) <= 0) throw ParseError("denominator must be positive in '" + std::string(text) + "'");
  return Rational(n, d);
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Int Rational::floor() const {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return q;
}

Int Rational::ceil() const {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), q_.get_num().get_mpz_t(), q_.get_den().get_mpz_t());
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

Rational unit_fraction(const Int& p) {
  if (sgn(p) <= 0) throw ConstructionError("unit fraction needs p >= 1");
  return Rational(Int(1), p);
}

Int unit_fraction_den(const Rational& delta) {
  if (delta.sign() <= 0 || delta.num() != 1)
    throw ConstructionError("delta must be 1/p for a positive integer p, got " + delta.str());
  return delta.den();
}

}  // namespace gjext

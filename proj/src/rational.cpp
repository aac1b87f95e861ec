#include "ordmatch/rational.hpp"

#include <ostream>
#include <vector>

#include "ordmatch/errors.hpp"

namespace ordmatch {

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s), Integer(1));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw InvalidInput("not a rational: '" + s + "'");
  }
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidInput("division by zero");
  value_ /= o.value_;
  return *this;
}

std::string Rational::str() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal(int places) const {
  Integer scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  // round half away from zero
  mpq_class scaled = value_ * scale;
  Integer q = scaled.get_num() * 2 + (sgn(scaled) < 0 ? -scaled.get_den() : scaled.get_den());
  Integer d = scaled.get_den() * 2;
  Integer r;
  mpz_tdiv_q(r.get_mpz_t(), q.get_mpz_t(), d.get_mpz_t());
  const bool negative = sgn(r) < 0;
  if (negative) r = -r;
  std::string digits = r.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  return (negative ? "-" : "") + digits;
}

namespace {

void append_mpz(std::string& out, const mpz_srcptr z) {
  const int size = z->_mp_size;
  out.append(reinterpret_cast<const char*>(&size), sizeof(size));
  const std::size_t limbs = static_cast<std::size_t>(size < 0 ? -size : size);
  out.append(reinterpret_cast<const char*>(z->_mp_d), limbs * sizeof(mp_limb_t));
}

}  // namespace

void Rational::append_key(std::string& out) const {
  append_mpz(out, mpq_numref(value_.get_mpq_t()));
  append_mpz(out, mpq_denref(value_.get_mpq_t()));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Integer common_denominator(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.denominator().get_mpz_t());
  }
  return l;
}

}  // namespace ordmatch

#include "omegahat/rational.hpp"

#include <cctype>

namespace omegahat {

namespace {

mpz_class parse_integer(std::string_view text, std::string_view whole) {
  std::string digits(text);
  if (digits.empty()) {
    throw Error("malformed rational \"" + std::string(whole) + "\"");
  }
  std::size_t start = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
  if (start == digits.size()) {
    throw Error("malformed rational \"" + std::string(whole) + "\"");
  }
  for (std::size_t i = start; i < digits.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(digits[i]))) {
      throw Error("malformed rational \"" + std::string(whole) + "\"");
    }
  }
  if (digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text, text));
  }
  mpz_class num = parse_integer(text.substr(0, slash), text);
  mpz_class den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw Error("zero denominator in \"" + std::string(text) + "\"");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational pow2(long e) {
  mpz_class one = 1;
  if (e >= 0) {
    mpz_class p;
    mpz_mul_2exp(p.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return Rational(p);
  }
  mpz_class d;
  mpz_mul_2exp(d.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return Rational(one, d);
}

Rational floor_dyadic(const Rational& q, unsigned bits) {
  Rational scaled = q * pow2(bits);
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational r(k);
  r *= pow2(-static_cast<long>(bits));
  return r;
}

Rational ceil_dyadic(const Rational& q, unsigned bits) {
  Rational scaled = q * pow2(bits);
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational r(k);
  r *= pow2(-static_cast<long>(bits));
  return r;
}

unsigned bits_for(const Rational& q) {
  if (sgn(q) <= 0) throw Error("bits_for requires a positive rational");
  unsigned b = 0;
  while (pow2(-static_cast<long>(b)) > q) ++b;
  return b;
}

Rational sqrt_upper(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw Error("sqrt of a negative rational");
  if (sgn(q) == 0) return Rational(0);
  // ceil(sqrt(q * 4^bits)) / 2^bits
  Rational scaled = q * pow2(2L * bits);
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), k.get_mpz_t());
  if (root * root < k) root += 1;
  Rational r(root);
  r *= pow2(-static_cast<long>(bits));
  return r;
}

}  // namespace omegahat

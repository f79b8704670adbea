#include "ucantor/rational.hpp"

#include <cctype>
#include <cstdio>

#include "ucantor/error.hpp"

namespace ucantor {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("not an exact rational: \"" + std::string(text) + "\"");
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  Integer p(n, 10), q(std::string(den), 10);
  if (q == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_decimal(const Rational& r, int digits) {
  mpf_class f(0, 512);
  f = r;
  char buf[128];
  gmp_snprintf(buf, sizeof buf, "%.*Fg", digits, f.get_mpf_t());
  return buf;
}

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational pow(const Rational& r, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), r.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), r.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

Rational max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational symmetric_ratio(const Rational& a, const Rational& b) {
  return a < b ? Rational(b / a) : Rational(a / b);
}

Integer lcm_of_denominators(const std::vector<Rational>& values) {
  Integer l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

}  // namespace ucantor

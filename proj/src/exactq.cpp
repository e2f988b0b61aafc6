#include "raq/exactq.hpp"

#include <cctype>

namespace raq {

template Echelon<Rational> row_reduce(QMatrix);
template class AffineSpace<Rational>;

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

namespace {

// GMP reads a leading 0 as an octal prefix, so strip it first.
Integer decimal(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer(std::string(digits.empty() ? "0" : digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw UsageError("malformed rational '" + std::string(text) + "'");
    Integer d = decimal(den);
    if (d == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    value = Rational(decimal(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw UsageError("malformed rational '" + std::string(text) + "'");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(decimal(std::string(whole) + std::string(frac)), scale);
  } else {
    if (!all_digits(body)) throw UsageError("malformed rational '" + std::string(text) + "'");
    value = Rational(decimal(body));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) { return value.str(); }

Rational floor_of(const Rational& value) {
  Integer n = boost::multiprecision::numerator(value), d = boost::multiprecision::denominator(value);
  Integer q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return Rational(q);
}

Rational ceil_of(const Rational& value) { return -floor_of(-value); }

bool is_integer(const Rational& value) { return boost::multiprecision::denominator(value) == 1; }

QVector qvector(std::initializer_list<Rational> entries) {
  QVector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const auto& e : entries) v[i++] = e;
  return v;
}

QVector zero_vector(Index n) { return QVector::Zero(n); }

std::string to_string(const QVector& v) {
  std::string out = "(";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

}  // namespace raq

#include "spinflow/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace spinflow {

LaurentPolynomial LaurentPolynomial::constant(long long c) {
  LaurentPolynomial p;
  if (c != 0) p.c_[0] = c;
  return p;
}

LaurentPolynomial LaurentPolynomial::t_power(int k, BigInt coeff) {
  LaurentPolynomial p;
  if (coeff != 0) p.c_[k] = std::move(coeff);
  return p;
}

bool LaurentPolynomial::is_one() const {
  return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second == 1;
}

int LaurentPolynomial::min_exponent() const {
  if (c_.empty()) throw std::logic_error("min_exponent of zero polynomial");
  return c_.begin()->first;
}

int LaurentPolynomial::max_exponent() const {
  if (c_.empty()) throw std::logic_error("max_exponent of zero polynomial");
  return c_.rbegin()->first;
}

BigInt LaurentPolynomial::coeff(int k) const {
  auto it = c_.find(k);
  return it == c_.end() ? BigInt(0) : it->second;
}

void LaurentPolynomial::set(int k, BigInt v) {
  if (v == 0)
    c_.erase(k);
  else
    c_[k] = std::move(v);
}

void LaurentPolynomial::prune() {
  for (auto it = c_.begin(); it != c_.end();)
    it = it->second == 0 ? c_.erase(it) : std::next(it);
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  LaurentPolynomial out = *this;
  for (const auto& [k, v] : o.c_) out.c_[k] += v;
  out.prune();
  return out;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& o) const {
  LaurentPolynomial out = *this;
  for (const auto& [k, v] : o.c_) out.c_[k] -= v;
  out.prune();
  return out;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial out;
  for (const auto& [k, v] : c_) out.c_[k] = -v;
  return out;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  LaurentPolynomial out;
  for (const auto& [k1, v1] : c_)
    for (const auto& [k2, v2] : o.c_) out.c_[k1 + k2] += v1 * v2;
  out.prune();
  return out;
}

LaurentPolynomial LaurentPolynomial::shifted(int k) const {
  LaurentPolynomial out;
  for (const auto& [e, v] : c_) out.c_[e + k] = v;
  return out;
}

LaurentPolynomial LaurentPolynomial::reciprocal() const {
  LaurentPolynomial out;
  for (const auto& [e, v] : c_) out.c_[-e] = v;
  return out;
}

BigInt LaurentPolynomial::evaluate_at_one() const {
  BigInt s = 0;
  for (const auto& [e, v] : c_) s += v;
  return s;
}

LaurentPolynomial LaurentPolynomial::divide_exact(const LaurentPolynomial& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("divide_exact: division by zero");
  if (is_zero()) return {};
  // shift both to ordinary polynomials and long-divide from the top
  LaurentPolynomial num = shifted(-min_exponent());
  LaurentPolynomial den = divisor.shifted(-divisor.min_exponent());
  int shift_back = min_exponent() - divisor.min_exponent();

  LaurentPolynomial q;
  const int dd = den.max_exponent();
  const BigInt lead = den.coeff(dd);
  while (!num.is_zero() && num.max_exponent() >= dd) {
    int e = num.max_exponent() - dd;
    BigInt c = num.coeff(num.max_exponent());
    if (c % lead != 0) throw std::runtime_error("divide_exact: non-exact division");
    BigInt f = c / lead;
    q.c_[e] = f;
    num = num - den.shifted(e) * LaurentPolynomial::t_power(0, f);
  }
  if (!num.is_zero()) throw std::runtime_error("divide_exact: nonzero remainder");
  return q.shifted(shift_back);
}

LaurentPolynomial LaurentPolynomial::normalized_alexander() const {
  if (is_zero()) throw std::invalid_argument("normalized_alexander: zero polynomial");
  int lo = min_exponent(), hi = max_exponent();
  if ((lo + hi) % 2 != 0)
    throw std::runtime_error("normalized_alexander: cannot center (odd exponent span)");
  LaurentPolynomial p = shifted(-(lo + hi) / 2);
  if (!(p == p.reciprocal()))
    throw std::runtime_error("normalized_alexander: not symmetric under t <-> 1/t");
  BigInt at1 = p.evaluate_at_one();
  if (at1 == 1) return p;
  if (at1 == -1) return -p;
  throw std::runtime_error("normalized_alexander: value at 1 is not a unit");
}

std::string LaurentPolynomial::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    BigInt v = it->second;
    int e = it->first;
    bool neg = v < 0;
    BigInt av = neg ? BigInt(-v) : v;
    if (first) {
      if (neg) os << '-';
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    std::string term;
    if (e == 0) {
      term = av.str();
    } else {
      if (av != 1) term = av.str() + "*";
      term += "t";
      if (e != 1) term += "^" + std::to_string(e);
    }
    os << term;
  }
  return os.str();
}

}  // namespace spinflow

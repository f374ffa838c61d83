#pragma once

#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace spinflow {

using BigInt = boost::multiprecision::cpp_int;

// Integer-coefficient Laurent polynomial in one variable, exact arithmetic.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  static LaurentPolynomial constant(long long c);
  static LaurentPolynomial t_power(int k, BigInt coeff = 1);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  int min_exponent() const;
  int max_exponent() const;
  BigInt coeff(int k) const;
  void set(int k, BigInt v);

  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-(const LaurentPolynomial& o) const;
  LaurentPolynomial operator*(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-() const;
  bool operator==(const LaurentPolynomial& o) const { return c_ == o.c_; }

  LaurentPolynomial shifted(int k) const;     // * t^k
  LaurentPolynomial reciprocal() const;       // t -> 1/t
  BigInt evaluate_at_one() const;

  // Exact division; throws if the remainder is nonzero.
  LaurentPolynomial divide_exact(const LaurentPolynomial& divisor) const;

  // Symmetric normalization: * (+- t^k) so that p(t) = p(1/t) and p(1) = +1.
  // Throws if the polynomial cannot be symmetrized (never for knot inputs).
  LaurentPolynomial normalized_alexander() const;

  // "t - 1 + t^-1" style rendering, highest exponent first.
  std::string to_string() const;

 private:
  std::map<int, BigInt> c_;  // exponent -> nonzero coefficient
  void prune();
};

}  // namespace spinflow

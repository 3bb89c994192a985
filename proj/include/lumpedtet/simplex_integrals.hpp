#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lumpedtet {

// Exponent tuple of a barycentric monomial l1^e0 l2^e1 l3^e2 l4^e3.
using Exponents = std::array<int, 4>;

namespace detail {

// Multiplicity of prime p in n! (Legendre's formula).
inline long factorial_prime_exponent(int n, int p) {
  long e = 0;
  for (long q = p; q <= n; q *= p) e += n / q;
  return e;
}

inline const std::vector<int>& primes_up_to_128() {
  static const std::vector<int> primes = [] {
    std::vector<int> out;
    for (int n = 2; n <= 128; ++n) {
      bool is_prime = true;
      for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) {
          is_prime = false;
          break;
        }
      if (is_prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

// Exact integral of a barycentric monomial over the reference tetrahedron
// with vertices (0,0,0), (1,0,0), (0,1,0), (0,0,1):
//
//   integral = e0! e1! e2! e3! / (e0+e1+e2+e3+3)!
//
// The value is assembled from the exact prime factorization of the quotient,
// so the only rounding is in the final long-double product.
inline double monomial_integral(const Exponents& e) {
  long sum = 0;
  for (int k = 0; k < 4; ++k) {
    if (e[k] < 0) throw std::invalid_argument("monomial_integral: negative exponent");
    sum += e[k];
  }
  if (sum > 64) throw std::invalid_argument("monomial_integral: total degree above 64");
  int denom = static_cast<int>(sum) + 3;
  long double value = 1.0L;
  for (int p : detail::primes_up_to_128()) {
    if (p > denom) break;
    long exp = -detail::factorial_prime_exponent(denom, p);
    for (int k = 0; k < 4; ++k) exp += detail::factorial_prime_exponent(e[k], p);
    if (exp != 0) value *= powl(static_cast<long double>(p), static_cast<long double>(exp));
  }
  return static_cast<double>(value);
}

inline double monomial_integral(int a, int b, int c, int d) {
  return monomial_integral(Exponents{a, b, c, d});
}

}  // namespace lumpedtet

#pragma once

// Exact integer polynomial arithmetic: cyclotomic polynomials, divisibility
// by Phi_{2n}, the generators Phi_p(-z^k), and the two-term decomposition
// F = f1 * Phi_q(-z^{n/q}) + f2 * Phi_p(-z^{n/p}).

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reinhardt/seqcore.hpp"

namespace reinhardt {

// ------------------------------------------------------------- number theory

bool is_prime(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);
std::vector<std::uint64_t> divisors(std::uint64_t n);           // ascending
std::vector<std::uint64_t> odd_prime_divisors(std::uint64_t n);  // ascending

// ------------------------------------------------------------- IntPolynomial

// Dense polynomial over Z; coefficient i multiplies z^i. The coefficient list
// never has trailing zeros, so the zero polynomial has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  static IntPolynomial monomial(std::size_t exponent, const mpz_class& coeff = 1);
  static IntPolynomial from_ternary(const TernarySeq& seq);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const mpz_class& operator[](std::size_t i) const;
  std::span<const mpz_class> coefficients() const noexcept { return coeffs_; }
  std::size_t nonzero_count() const noexcept;

  mpz_class evaluate(const mpz_class& x) const;

  // Coefficients as a ternary sequence padded to `length` (default: degree+1);
  // nullopt if some coefficient is outside {-1, 0, 1}.
  std::optional<TernarySeq> to_ternary(std::size_t length = 0) const;

  // Ternary string when possible, otherwise a sparse "c*z^e + ..." form.
  std::string str() const;

  IntPolynomial& operator+=(const IntPolynomial& other);
  IntPolynomial& operator-=(const IntPolynomial& other);
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  IntPolynomial operator-() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void normalize();
  std::vector<mpz_class> coeffs_;
};

struct DivisionResult {
  IntPolynomial quotient;
  IntPolynomial remainder;
};

// Division by a monic divisor; exact over Z.
DivisionResult divide_monic(const IntPolynomial& dividend, const IntPolynomial& divisor);

// ------------------------------------------------------------- cyclotomics

// Phi_m, memoised per process (thread safe).
IntPolynomial cyclotomic(std::uint64_t m);

// Phi_p(-z^k) = sum_{i<p} (-1)^i z^{ik}, p an odd prime.
IntPolynomial compose_neg_power(std::uint64_t p, std::uint64_t k);

// f1*g1 + f2*g2.
IntPolynomial poly_mul_add(const IntPolynomial& f1, const IntPolynomial& g1,
                           const IntPolynomial& f2, const IntPolynomial& g2);

// Phi_{2n} | F, decided by exact remainder.
bool divides_cyclotomic(const IntPolynomial& F, std::uint64_t n);

// -------------------------------------------------- two-term decomposition

struct DegreeCaps {
  std::size_t f1_terms;  // deg f1 < f1_terms
  std::size_t f2_terms;  // deg f2 < f2_terms
};

// deg f1 < n/q and deg f2 < n/p; for n = 2^k pq these are 2^k p and 2^k q.
DegreeCaps default_degree_caps(std::uint64_t n, std::uint64_t p, std::uint64_t q);

enum class DecompositionStatus {
  Found,           // ternary f1, f2 returned
  Inconsistent,    // no rational solution at all
  NoTernaryFound,  // rational solutions exist, none ternary within search limit
};

struct TwoTermDecomposition {
  IntPolynomial f1;  // multiplies Phi_q(-z^{n/q})
  IntPolynomial f2;  // multiplies Phi_p(-z^{n/p})
};

struct DecompositionResult {
  DecompositionStatus status = DecompositionStatus::Inconsistent;
  std::optional<TwoTermDecomposition> decomposition;
  std::size_t kernel_dimension = 0;
  bool search_exhausted = true;  // false if the ternary search hit its limit
};

// Solves F = f1*Phi_q(-z^{n/q}) + f2*Phi_p(-z^{n/p}) exactly over Q, then
// searches the (free-variable) solution space for coefficients in {-1,0,1}.
// Free variables are themselves coefficients, so enumerating them over
// {-1,0,1} is complete whenever 3^kernel_dimension <= max_assignments.
DecompositionResult decompose_two_term(const IntPolynomial& F, std::uint64_t n,
                                       std::uint64_t p, std::uint64_t q,
                                       std::optional<DegreeCaps> caps = std::nullopt,
                                       std::uint64_t max_assignments = 1'000'000);

std::string to_string(DecompositionStatus status);

// ------------------------------------------------ residues modulo Phi_{2n}

// Precomputed z^k mod Phi_{2n} for 0 <= k < n, as dense vectors of length
// phi(2n). Used by the exhaustive search to test closure exactly.
class CyclotomicResidues {
 public:
  explicit CyclotomicResidues(std::uint64_t n);

  std::uint64_t n() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const std::int32_t> power(std::size_t k) const {
    return {table_.data() + k * dim_, dim_};
  }

 private:
  std::uint64_t n_;
  std::size_t dim_;
  std::vector<std::int32_t> table_;
};

// Evaluation at a primitive 2n-th root of unity modulo a prime P = 1 mod 2n.
// A nonzero result certifies that Phi_{2n} does not divide F; a zero result
// is a necessary condition only. Linear time, used on hot enumeration paths.
class RootOfUnityCheck {
 public:
  explicit RootOfUnityCheck(std::uint64_t n);

  std::uint64_t prime() const noexcept { return prime_; }
  bool vanishes(std::span<const std::int8_t> coeffs) const noexcept;

 private:
  std::uint64_t prime_ = 0;
  std::vector<std::uint64_t> powers_;
};

}  // namespace reinhardt

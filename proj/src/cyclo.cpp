#include "reinhardt/cyclo.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "reinhardt/errors.hpp"

namespace reinhardt {

// ------------------------------------------------------------- number theory

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("euler_phi(0) is undefined");
  std::uint64_t result = n;
  for (auto p : prime_divisors(n)) result = result / p * (p - 1);
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::vector<std::uint64_t> odd_prime_divisors(std::uint64_t n) {
  auto all = prime_divisors(n);
  std::erase(all, 2);
  return all;
}

// ------------------------------------------------------------- IntPolynomial

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

IntPolynomial IntPolynomial::monomial(std::size_t exponent, const mpz_class& coeff) {
  std::vector<mpz_class> c(exponent + 1);
  c[exponent] = coeff;
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::from_ternary(const TernarySeq& seq) {
  std::vector<mpz_class> c;
  c.reserve(seq.size());
  for (auto v : seq.values()) c.emplace_back(static_cast<long>(v));
  return IntPolynomial(std::move(c));
}

void IntPolynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const mpz_class& IntPolynomial::operator[](std::size_t i) const {
  static const mpz_class zero = 0;
  return i < coeffs_.size() ? coeffs_[i] : zero;
}

std::size_t IntPolynomial::nonzero_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const mpz_class& c) { return c != 0; }));
}

mpz_class IntPolynomial::evaluate(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::optional<TernarySeq> IntPolynomial::to_ternary(std::size_t length) const {
  if (length == 0) length = coeffs_.size();
  if (coeffs_.size() > length) return std::nullopt;
  std::vector<std::int8_t> out(length, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] > 1 || coeffs_[i] < -1) return std::nullopt;
    out[i] = static_cast<std::int8_t>(coeffs_[i].get_si());
  }
  return TernarySeq(std::move(out));
}

std::string IntPolynomial::str() const {
  if (is_zero()) return "0";
  if (auto t = to_ternary()) return t->str();
  std::string s;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += coeffs_[i].get_str() + "*z^" + std::to_string(i);
  }
  return s;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  normalize();
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  normalize();
  return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<mpz_class> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      if (b.coeffs_[j] != 0) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

DivisionResult divide_monic(const IntPolynomial& dividend, const IntPolynomial& divisor) {
  if (divisor.is_zero() || divisor[static_cast<std::size_t>(divisor.degree())] != 1) {
    throw InvalidArgument("divide_monic requires a monic divisor");
  }
  const auto dd = static_cast<std::size_t>(divisor.degree());
  auto rem = std::vector<mpz_class>(dividend.coefficients().begin(), dividend.coefficients().end());
  if (rem.size() <= dd) return {IntPolynomial{}, dividend};
  std::vector<mpz_class> quot(rem.size() - dd);
  const auto dc = divisor.coefficients();
  for (std::size_t top = rem.size(); top-- > dd;) {
    const mpz_class lead = rem[top];
    if (lead == 0) continue;
    const std::size_t shift = top - dd;
    quot[shift] = lead;
    for (std::size_t i = 0; i <= dd; ++i) {
      if (dc[i] != 0) rem[shift + i] -= lead * dc[i];
    }
  }
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

// ------------------------------------------------------------- cyclotomics

namespace {
std::mutex cyclotomic_mutex;
std::map<std::uint64_t, IntPolynomial>& cyclotomic_cache() {
  static std::map<std::uint64_t, IntPolynomial> cache;
  return cache;
}
}  // namespace

IntPolynomial cyclotomic(std::uint64_t m) {
  if (m == 0) throw InvalidArgument("cyclotomic(0) is undefined");
  {
    std::lock_guard lock(cyclotomic_mutex);
    auto& cache = cyclotomic_cache();
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  // z^m - 1 divided by Phi_d for every proper divisor d.
  IntPolynomial result = IntPolynomial::monomial(m) - IntPolynomial{1};
  for (auto d : divisors(m)) {
    if (d == m) continue;
    auto division = divide_monic(result, cyclotomic(d));
    if (!division.remainder.is_zero()) {
      throw InvariantViolation("cyclotomic division left a remainder for m=" + std::to_string(m));
    }
    result = std::move(division.quotient);
  }
  std::lock_guard lock(cyclotomic_mutex);
  cyclotomic_cache().emplace(m, result);
  return result;
}

IntPolynomial compose_neg_power(std::uint64_t p, std::uint64_t k) {
  if (p % 2 == 0 || !is_prime(p)) {
    throw InvalidArgument("compose_neg_power needs an odd prime, got " + std::to_string(p));
  }
  if (k == 0) throw InvalidArgument("compose_neg_power needs k >= 1");
  std::vector<mpz_class> c((p - 1) * k + 1);
  for (std::uint64_t i = 0; i < p; ++i) c[i * k] = (i % 2 == 0) ? 1 : -1;
  return IntPolynomial(std::move(c));
}

IntPolynomial poly_mul_add(const IntPolynomial& f1, const IntPolynomial& g1,
                           const IntPolynomial& f2, const IntPolynomial& g2) {
  return f1 * g1 + f2 * g2;
}

bool divides_cyclotomic(const IntPolynomial& F, std::uint64_t n) {
  if (F.is_zero()) throw InvalidArgument("divisibility of the zero polynomial is vacuous");
  if (n == 0) throw InvalidArgument("n must be positive");
  return divide_monic(F, cyclotomic(2 * n)).remainder.is_zero();
}

// -------------------------------------------------- two-term decomposition

std::string to_string(DecompositionStatus status) {
  switch (status) {
    case DecompositionStatus::Found: return "found";
    case DecompositionStatus::Inconsistent: return "inconsistent";
    case DecompositionStatus::NoTernaryFound: return "no ternary solution found";
  }
  return "unknown";
}

DegreeCaps default_degree_caps(std::uint64_t n, std::uint64_t p, std::uint64_t q) {
  return {static_cast<std::size_t>(n / q), static_cast<std::size_t>(n / p)};
}

namespace {

struct EchelonForm {
  std::vector<std::vector<mpq_class>> rows;  // reduced, last column is RHS
  std::vector<std::size_t> pivot_cols;       // per row
  bool consistent = true;
};

EchelonForm reduce(std::vector<std::vector<mpq_class>> m, std::size_t unknowns) {
  EchelonForm out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < unknowns && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[row]);
    const mpq_class inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const mpq_class factor = m[r][col];
      for (std::size_t c = col; c <= unknowns; ++c) m[r][c] -= factor * m[row][c];
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m.size(); ++r) {
    if (m[r][unknowns] != 0) out.consistent = false;
  }
  m.resize(row);
  out.rows = std::move(m);
  return out;
}

}  // namespace

DecompositionResult decompose_two_term(const IntPolynomial& F, std::uint64_t n, std::uint64_t p,
                                       std::uint64_t q, std::optional<DegreeCaps> caps,
                                       std::uint64_t max_assignments) {
  if (p == q) throw InvalidArgument("decompose_two_term needs distinct primes");
  for (auto prime : {p, q}) {
    if (prime % 2 == 0 || !is_prime(prime)) {
      throw InvalidArgument(std::to_string(prime) + " is not an odd prime");
    }
    if (n % prime != 0) {
      throw InvalidArgument(std::to_string(prime) + " does not divide n=" + std::to_string(n));
    }
  }
  const DegreeCaps bounds = caps.value_or(default_degree_caps(n, p, q));
  const IntPolynomial g1 = compose_neg_power(q, n / q);
  const IntPolynomial g2 = compose_neg_power(p, n / p);

  const std::size_t a = bounds.f1_terms;
  const std::size_t b = bounds.f2_terms;
  const std::size_t unknowns = a + b;
  const auto span_len = [](std::size_t terms, const IntPolynomial& g) {
    return terms == 0 ? 0 : terms + static_cast<std::size_t>(g.degree());
  };
  const std::size_t equations =
      std::max({span_len(a, g1), span_len(b, g2), static_cast<std::size_t>(F.degree() + 1)});

  std::vector<std::vector<mpq_class>> m(equations, std::vector<mpq_class>(unknowns + 1));
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t e = 0; e <= static_cast<std::size_t>(g1.degree()); ++e) {
      if (g1[e] != 0) m[i + e][i] = g1[e];
    }
  }
  for (std::size_t j = 0; j < b; ++j) {
    for (std::size_t e = 0; e <= static_cast<std::size_t>(g2.degree()); ++e) {
      if (g2[e] != 0) m[j + e][a + j] = g2[e];
    }
  }
  for (std::size_t e = 0; e < equations; ++e) m[e][unknowns] = F[e];

  auto ech = reduce(std::move(m), unknowns);
  DecompositionResult result;
  if (!ech.consistent) {
    result.status = DecompositionStatus::Inconsistent;
    return result;
  }

  std::vector<bool> is_pivot(unknowns, false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < unknowns; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  result.kernel_dimension = free_cols.size();

  // Per pivot row: rhs and the coefficients on the free columns.
  const std::size_t nfree = free_cols.size();
  std::vector<mpq_class> rhs(ech.rows.size());
  std::vector<std::vector<mpq_class>> coef(ech.rows.size(), std::vector<mpq_class>(nfree));
  for (std::size_t r = 0; r < ech.rows.size(); ++r) {
    rhs[r] = ech.rows[r][unknowns];
    for (std::size_t k = 0; k < nfree; ++k) coef[r][k] = ech.rows[r][free_cols[k]];
  }

  std::uint64_t total = 1;
  bool capped = false;
  for (std::size_t k = 0; k < nfree; ++k) {
    if (total > max_assignments / 3) {
      capped = true;
      break;
    }
    total *= 3;
  }
  if (capped) total = max_assignments;
  result.search_exhausted = !capped;

  static constexpr int kValues[3] = {0, 1, -1};
  std::vector<int> digits(nfree, 0);
  std::vector<int> values(unknowns, 0);
  for (std::uint64_t iter = 0; iter < total; ++iter) {
    bool ok = true;
    for (std::size_t r = 0; r < ech.rows.size() && ok; ++r) {
      mpq_class v = rhs[r];
      for (std::size_t k = 0; k < nfree; ++k) {
        if (digits[k] != 0 && coef[r][k] != 0) v -= coef[r][k] * kValues[digits[k]];
      }
      if (v != 0 && v != 1 && v != -1) {
        ok = false;
      } else {
        values[ech.pivot_cols[r]] = static_cast<int>(v.get_num().get_si());
      }
    }
    if (ok) {
      for (std::size_t k = 0; k < nfree; ++k) values[free_cols[k]] = kValues[digits[k]];
      std::vector<mpz_class> c1(a), c2(b);
      for (std::size_t i = 0; i < a; ++i) c1[i] = values[i];
      for (std::size_t j = 0; j < b; ++j) c2[j] = values[a + j];
      TwoTermDecomposition d{IntPolynomial(std::move(c1)), IntPolynomial(std::move(c2))};
      if (poly_mul_add(d.f1, g1, d.f2, g2) != F) {
        throw InvariantViolation("decomposition does not recombine to F");
      }
      result.status = DecompositionStatus::Found;
      result.decomposition = std::move(d);
      return result;
    }
    for (std::size_t k = 0; k < nfree; ++k) {
      if (++digits[k] < 3) break;
      digits[k] = 0;
    }
  }
  result.status = DecompositionStatus::NoTernaryFound;
  return result;
}

// ------------------------------------------------ residues modulo Phi_{2n}

CyclotomicResidues::CyclotomicResidues(std::uint64_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const IntPolynomial phi = cyclotomic(2 * n);
  dim_ = static_cast<std::size_t>(phi.degree());
  table_.assign(n * dim_, 0);
  std::vector<mpz_class> cur(dim_);
  cur[0] = 1;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (k > 0) {
      // multiply by z, then fold z^dim = -(phi - z^dim)
      mpz_class top = cur[dim_ - 1];
      for (std::size_t i = dim_ - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top != 0) {
        for (std::size_t i = 0; i < dim_; ++i) cur[i] -= top * phi[i];
      }
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!cur[i].fits_sint_p()) throw InvariantViolation("residue coefficient overflow");
      table_[k * dim_ + i] = static_cast<std::int32_t>(cur[i].get_si());
    }
  }
}

RootOfUnityCheck::RootOfUnityCheck(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  const std::uint64_t order = 2 * n;
  std::uint64_t k = (std::uint64_t{1} << 30) / order;
  while (!is_prime(order * k + 1)) ++k;
  prime_ = order * k + 1;
  const auto order_primes = prime_divisors(order);
  std::uint64_t root = 0;
  for (std::uint64_t g = 2;; ++g) {
    const std::uint64_t w = pow_mod(g, (prime_ - 1) / order, prime_);
    bool primitive = true;
    for (auto l : order_primes) {
      if (pow_mod(w, order / l, prime_) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      root = w;
      break;
    }
  }
  powers_.resize(n);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    powers_[i] = acc;
    acc = mul_mod(acc, root, prime_);
  }
}

bool RootOfUnityCheck::vanishes(std::span<const std::int8_t> coeffs) const noexcept {
  std::uint64_t pos = 0, neg = 0;
  const std::size_t len = std::min(coeffs.size(), powers_.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (coeffs[i] > 0) {
      pos += powers_[i];
    } else if (coeffs[i] < 0) {
      neg += powers_[i];
    }
  }
  // Each power is < 2^31 and at most a few hundred terms are summed.
  return pos % prime_ == neg % prime_;
}

}  // namespace reinhardt

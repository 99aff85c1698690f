#include "reinhardt/classify.hpp"

#include <algorithm>

#include "reinhardt/cyclo.hpp"
#include "reinhardt/errors.hpp"

namespace reinhardt {

bool is_reinhardt(const TernarySeq& seq, int n) {
  if (n < 1 || seq.size() > static_cast<std::size_t>(n)) return false;
  const auto count = seq.nonzero_count();
  if (count % 2 == 0) return false;
  if (!seq.alternates()) return false;
  return divides_cyclotomic(IntPolynomial::from_ternary(seq), static_cast<std::uint64_t>(n));
}

OddComposition composition_of(const TernarySeq& coeffs, int n) {
  if (coeffs.size() > static_cast<std::size_t>(n)) {
    throw InvalidArgument("coefficient vector longer than n");
  }
  std::vector<int> positions;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0) positions.push_back(static_cast<int>(i));
  }
  if (positions.empty()) throw InvalidArgument("polynomial has no nonzero coefficients");
  std::vector<int> parts;
  parts.reserve(positions.size());
  for (std::size_t i = 1; i < positions.size(); ++i) parts.push_back(positions[i] - positions[i - 1]);
  parts.push_back(n - positions.back() + positions.front());
  return OddComposition(std::move(parts));
}

// Two-pointer minimum-expression algorithm.
std::size_t least_rotation(std::span<const int> s) {
  const std::size_t len = s.size();
  if (len == 0) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < len && j < len && k < len) {
    const int a = s[(i + k) % len];
    const int b = s[(j + k) % len];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

namespace {

// Compare rotation ra of a against rotation rb of b (same length).
int compare_rotations(std::span<const int> a, std::size_t ra, std::span<const int> b,
                      std::size_t rb) {
  const std::size_t len = a.size();
  for (std::size_t t = 0; t < len; ++t) {
    const int x = a[(ra + t) % len];
    const int y = b[(rb + t) % len];
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

std::vector<int> rotated(std::span<const int> s, std::size_t r) {
  std::vector<int> out(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) out[t] = s[(r + t) % s.size()];
  return out;
}

}  // namespace

int composition_repetitions(std::span<const int> parts) {
  const std::size_t len = parts.size();
  // Smallest block length b dividing len with len/b odd > 1 maximises repetitions.
  for (std::size_t block = 1; block < len; ++block) {
    if (len % block != 0 || (len / block) % 2 == 0) continue;
    bool repeats = true;
    for (std::size_t t = block; t < len && repeats; ++t) repeats = parts[t] == parts[t - block];
    if (repeats) return static_cast<int>(len / block);
  }
  return 1;
}

std::string DihedralComposition::power_str() const {
  if (repetitions_ <= 1) return str();
  const auto p = parts();
  const std::size_t block = p.size() / static_cast<std::size_t>(repetitions_);
  std::string s = "[(";
  for (std::size_t i = 0; i < block; ++i) {
    if (i) s += ',';
    s += std::to_string(p[i]);
  }
  s += ")^" + std::to_string(repetitions_) + "]";
  return s;
}

DihedralComposition canonicalize(const OddComposition& comp) {
  const auto fwd = comp.parts();
  std::vector<int> rev(fwd.rbegin(), fwd.rend());
  const std::size_t rf = least_rotation(fwd);
  const std::size_t rr = least_rotation(rev);
  const int cmp = compare_rotations(fwd, rf, rev, rr);
  auto best = cmp <= 0 ? rotated(fwd, rf) : rotated(rev, rr);
  DihedralComposition out{OddComposition(std::move(best))};
  out.reciprocal_ = (cmp == 0);
  out.repetitions_ = composition_repetitions(out.parts());
  return out;
}

bool is_reciprocal(const OddComposition& comp) { return canonicalize(comp).reciprocal(); }

bool is_d_periodic(std::span<const std::int8_t> coeffs, int n, int d) {
  if (d <= 0 || d >= n || n % d != 0) return false;
  auto at = [&](int k) -> int {
    return static_cast<std::size_t>(k) < coeffs.size() ? coeffs[static_cast<std::size_t>(k)] : 0;
  };
  for (int k = 0; k + d < n; ++k) {
    if (at(k) != -at(k + d)) return false;
  }
  return true;
}

std::optional<int> coefficient_period(std::span<const std::int8_t> coeffs, int n) {
  for (auto d : divisors(static_cast<std::uint64_t>(n))) {
    if (static_cast<int>(d) >= n) break;
    if (is_d_periodic(coeffs, n, static_cast<int>(d))) return static_cast<int>(d);
  }
  return std::nullopt;
}

// ---------------------------------------------------------- ReinhardtPolynomial

ReinhardtPolynomial::ReinhardtPolynomial(TernarySeq coeffs, int n)
    : coeffs_(coeffs.padded(static_cast<std::size_t>(n))),
      n_(n),
      period_(coefficient_period(coeffs_, n)),
      dihedral_(canonicalize(composition_of(coeffs_, n))) {}

ReinhardtPolynomial ReinhardtPolynomial::validate(TernarySeq coeffs, int n) {
  if (!is_reinhardt(coeffs, n)) {
    throw InvalidArgument("not a Reinhardt polynomial for n=" + std::to_string(n) + ": " +
                          coeffs.str());
  }
  return ReinhardtPolynomial(std::move(coeffs), n);
}

ReinhardtPolynomial ReinhardtPolynomial::trusted(TernarySeq coeffs, int n) {
  return ReinhardtPolynomial(std::move(coeffs), n);
}

DihedralComposition to_dihedral(const ReinhardtPolynomial& F) { return F.dihedral(); }
std::optional<int> coefficient_period(const ReinhardtPolynomial& F) { return F.period(); }
bool is_sporadic(const ReinhardtPolynomial& F) { return F.sporadic(); }
bool is_reciprocal(const ReinhardtPolynomial& F) { return F.reciprocal(); }

// ------------------------------------------------------------ class keys

std::size_t CompositionKeyHash::operator()(const CompositionKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto w : k.words) {
    std::uint64_t x = w + h;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    h = x ^ (x >> 31);
  }
  return static_cast<std::size_t>(h);
}

CompositionKey key_of(std::span<const int> canonical_parts) {
  CompositionKey key;
  int sum = 0;
  for (std::size_t i = 0; i + 1 < canonical_parts.size(); ++i) {
    sum += canonical_parts[i];
    if (sum >= CompositionKey::kMaxN) throw InvalidArgument("composition too large for a key");
    key.words[static_cast<std::size_t>(sum) / 64] |= std::uint64_t{1} << (sum % 64);
  }
  return key;
}

std::vector<int> decode_key(const CompositionKey& key, int n) {
  std::vector<int> parts;
  int prev = 0;
  for (int pos = 1; pos < n; ++pos) {
    if ((key.words[static_cast<std::size_t>(pos) / 64] >> (pos % 64)) & 1U) {
      parts.push_back(pos - prev);
      prev = pos;
    }
  }
  parts.push_back(n - prev);
  return parts;
}

Canonicalizer::Result Canonicalizer::from_coefficients(std::span<const std::int8_t> coeffs,
                                                       int n) {
  if (n > CompositionKey::kMaxN) throw InvalidArgument("n too large for composition keys");
  parts_.clear();
  int first = -1, prev = -1;
  for (int i = 0; i < n; ++i) {
    if (coeffs[static_cast<std::size_t>(i)] == 0) continue;
    if (first < 0) {
      first = i;
    } else {
      parts_.push_back(i - prev);
    }
    prev = i;
  }
  parts_.push_back(n - prev + first);
  return from_parts(std::span<const int>(parts_));
}

Canonicalizer::Result Canonicalizer::from_parts(std::span<const int> parts) {
  reversed_.assign(parts.rbegin(), parts.rend());
  const std::size_t rf = least_rotation(parts);
  const std::size_t rr = least_rotation(reversed_);
  const int cmp = compare_rotations(parts, rf, reversed_, rr);
  const std::span<const int> src = cmp <= 0 ? parts : std::span<const int>(reversed_);
  const std::size_t start = cmp <= 0 ? rf : rr;

  Result result{{}, cmp == 0};
  const std::size_t len = src.size();
  int sum = 0;
  for (std::size_t t = 0; t + 1 < len; ++t) {
    sum += src[(start + t) % len];
    result.key.words[static_cast<std::size_t>(sum) / 64] |= std::uint64_t{1} << (sum % 64);
  }
  return result;
}

}  // namespace reinhardt

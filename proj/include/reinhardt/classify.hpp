#pragma once

// Reinhardt predicate, polynomial <-> composition conversion, dihedral
// canonical forms, periodicity and reciprocity.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reinhardt/seqcore.hpp"

namespace reinhardt {

// All four defining conditions: ternary entries, odd nonzero count, alternating
// signs, and Phi_{2n} | F. `seq` may be shorter than n (implicitly padded).
bool is_reinhardt(const TernarySeq& seq, int n);

// The raw (uncanonicalised) composition read off the nonzero exponents
// k_0 < ... < k_l: [k_1-k_0, ..., k_l-k_{l-1}, n-k_l+k_0].
OddComposition composition_of(const TernarySeq& coeffs, int n);

// Index of the lexicographically least rotation, in O(len).
std::size_t least_rotation(std::span<const int> seq);

// Equivalence class of an odd composition under rotation and reversal,
// represented by the lexicographic minimum over the whole orbit.
class DihedralComposition {
 public:
  const OddComposition& canonical() const noexcept { return canonical_; }
  std::span<const int> parts() const noexcept { return canonical_.parts(); }
  int n() const noexcept { return canonical_.n(); }
  std::size_t part_count() const noexcept { return canonical_.size(); }

  // Number of times a block repeats around the cycle (odd; 1 if sporadic).
  int repetitions() const noexcept { return repetitions_; }
  bool reciprocal() const noexcept { return reciprocal_; }

  std::string str() const { return canonical_.str(); }   // "[2,3,5]"
  std::string power_str() const;                          // "[(2,3,5)^3]"

  friend bool operator==(const DihedralComposition& a, const DihedralComposition& b) {
    return a.canonical_ == b.canonical_;
  }
  friend auto operator<=>(const DihedralComposition& a, const DihedralComposition& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  friend DihedralComposition canonicalize(const OddComposition& comp);
  explicit DihedralComposition(OddComposition canonical)
      : canonical_(std::move(canonical)) {}

  OddComposition canonical_;
  int repetitions_ = 1;
  bool reciprocal_ = false;
};

DihedralComposition canonicalize(const OddComposition& comp);

// The composition equals a rotation of its own reversal.
bool is_reciprocal(const OddComposition& comp);

// Largest odd b > 1 such that the cyclic part sequence is a block repeated b
// times; 1 when there is none.
int composition_repetitions(std::span<const int> parts);

// Least d | n, d < n, with v_k = -v_{k+d} for all valid k (linear indexing).
std::optional<int> coefficient_period(std::span<const std::int8_t> coeffs, int n);
inline std::optional<int> coefficient_period(const TernarySeq& coeffs, int n) {
  return coefficient_period(coeffs.values(), n);
}
// Whether the length-n vector is d-periodic in the above sense.
bool is_d_periodic(std::span<const std::int8_t> coeffs, int n, int d);

// A validated Reinhardt polynomial with its classification cached.
class ReinhardtPolynomial {
 public:
  // Throws InvalidArgument unless all four defining conditions hold.
  static ReinhardtPolynomial validate(TernarySeq coeffs, int n);
  // Skips the exact divisibility check; for callers that already proved it.
  static ReinhardtPolynomial trusted(TernarySeq coeffs, int n);

  const TernarySeq& coeffs() const noexcept { return coeffs_; }
  int n() const noexcept { return n_; }
  std::optional<int> period() const noexcept { return period_; }
  bool sporadic() const noexcept { return !period_.has_value(); }
  bool reciprocal() const noexcept { return dihedral_.reciprocal(); }
  const DihedralComposition& dihedral() const noexcept { return dihedral_; }

 private:
  ReinhardtPolynomial(TernarySeq coeffs, int n);
  TernarySeq coeffs_;
  int n_;
  std::optional<int> period_;
  DihedralComposition dihedral_;
};

DihedralComposition to_dihedral(const ReinhardtPolynomial& F);
std::optional<int> coefficient_period(const ReinhardtPolynomial& F);
bool is_sporadic(const ReinhardtPolynomial& F);
bool is_reciprocal(const ReinhardtPolynomial& F);

// ------------------------------------------------------------ class keys

// Exact compact key for a dihedral class of a composition of n <= 256: the
// set of partial sums of the canonical part sequence, as a bitset.
struct CompositionKey {
  static constexpr int kMaxN = 256;
  std::array<std::uint64_t, 4> words{};

  friend bool operator==(const CompositionKey&, const CompositionKey&) = default;
  friend auto operator<=>(const CompositionKey&, const CompositionKey&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const CompositionKey& k) {
    return H::combine(std::move(h), k.words[0], k.words[1], k.words[2], k.words[3]);
  }
};

struct CompositionKeyHash {
  std::size_t operator()(const CompositionKey& k) const noexcept;
};

CompositionKey key_of(std::span<const int> canonical_parts);
std::vector<int> decode_key(const CompositionKey& key, int n);

// Allocation-free canonicaliser for hot loops. One instance per thread.
class Canonicalizer {
 public:
  struct Result {
    CompositionKey key;
    bool reciprocal;
  };

  // Canonical key of the composition induced by the coefficient vector.
  // Requires at least one nonzero coefficient and n <= CompositionKey::kMaxN.
  Result from_coefficients(std::span<const std::int8_t> coeffs, int n);
  Result from_parts(std::span<const int> parts);

 private:
  std::vector<int> parts_;
  std::vector<int> reversed_;
};

}  // namespace reinhardt

template <>
struct std::hash<reinhardt::CompositionKey> {
  std::size_t operator()(const reinhardt::CompositionKey& k) const noexcept {
    return reinhardt::CompositionKeyHash{}(k);
  }
};

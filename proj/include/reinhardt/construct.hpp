#pragma once

// Block construction of Reinhardt polynomials for n = pqr.
//
// f1 is the juxtaposition of p blocks A_1..A_p and f2 = R(B_1..B_q), each
// block of length r split into 2m sub-blocks by an even composition
// c = (r_1..r_2m) of r:
//
//   A_{i,1}        in S_o(r_1 + 1, (-1)^{i+1} s)   (A_{1,1} must start with s)
//   A_{i,j}, j>=3 odd  in S_e(r_j + 1, (-1)^i s)
//   A_{i,j}, j even    =  Z(r_j - 1)
//   B_{i,j}, j odd     =  Z(r_j - 1)
//   B_{i,j}, j even    in S_e(r_j + 1, (-1)^i s)
//
// and F = f1 * Phi_q(-z^{pr}) + f2 * Phi_p(-z^{qr}).
//
// A choice of every sub-block is a ChoiceVector. Together with s it is also
// encoded as a single mixed-radix integer (all radices are powers of two):
// most significant bit selects s (0 -> -1, 1 -> +1), followed by the A
// choices in (i, j) order and then the B choices.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reinhardt/classify.hpp"
#include "reinhardt/seqcore.hpp"

namespace reinhardt {

class ConstructionParams {
 public:
  // Throws InvalidArgument unless p, q are distinct odd primes and c.total >= 2.
  ConstructionParams(int p, int q, EvenComposition c);

  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int r() const noexcept { return c_.total(); }
  int n() const noexcept { return p_ * q_ * c_.total(); }
  const EvenComposition& composition() const noexcept { return c_; }

  // Total number of polynomials, 2^(r_o p + r_e q), as a bit count.
  int index_bits() const noexcept;
  std::string str() const;  // "n=120 p=3 q=5 c=1,3,2,2"

  friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;

 private:
  int p_;
  int q_;
  EvenComposition c_;
};

struct ConstructionSpec {
  ConstructionParams params;
  Sign s;

  std::string str() const;  // "n=120 p=3 q=5 c=1,3,2,2 s=+1"
  static ConstructionSpec parse(std::string_view text);
};

// a_choices: p*m entries, row-major over (i, odd j); index into the alphabet
// of A_{i,j}. For A_{1,1} the index ranges over the members starting with s
// only (2^{r_1 - 1} of them). b_choices: q*m entries over (i, even j).
struct ChoiceVector {
  std::vector<std::uint64_t> a_choices;
  std::vector<std::uint64_t> b_choices;

  friend bool operator==(const ChoiceVector&, const ChoiceVector&) = default;
};

// Explicit blocks. `b` holds B_1..B_q before the shift-right-and-negate.
struct BlockSet {
  std::vector<TernarySeq> a;
  std::vector<TernarySeq> b;

  friend bool operator==(const BlockSet&, const BlockSet&) = default;
};

void validate_choices(const ConstructionSpec& spec, const ChoiceVector& choices);

BlockSet build_blocks(const ConstructionSpec& spec, const ChoiceVector& choices);
TernarySeq build_f1(const ConstructionSpec& spec, const ChoiceVector& choices);
TernarySeq build_f2(const ConstructionSpec& spec, const ChoiceVector& choices);

// Inverse of build_blocks. Throws InvalidArgument when a block is not in its
// alphabet (including the A_{1,1} leading-entry rule).
ChoiceVector choices_from_blocks(const ConstructionSpec& spec, const BlockSet& blocks);

// f1 * Phi_q(-z^{pr}) + f2 * Phi_p(-z^{qr}) for sequences of length pr and qr.
// Entries may leave {-1,0,1}; returns raw integer coefficients of length n.
std::vector<int> combine(const ConstructionParams& params, const TernarySeq& f1,
                         const TernarySeq& f2);

// f1 and f2 straight from explicit blocks (no alphabet checks).
TernarySeq f1_from_blocks(const BlockSet& blocks);
TernarySeq f2_from_blocks(const BlockSet& blocks);

// Builds F and re-verifies every Reinhardt condition exactly; any failure is
// an InvariantViolation.
ReinhardtPolynomial assemble(const ConstructionSpec& spec, const ChoiceVector& choices);
ReinhardtPolynomial assemble_blocks(const ConstructionParams& params, const BlockSet& blocks);

// Mixed-radix index <-> (s, choices).
class ChoiceIndexer {
 public:
  explicit ChoiceIndexer(ConstructionParams params);

  const ConstructionParams& params() const noexcept { return params_; }
  int bits() const noexcept { return bits_; }
  std::uint64_t count() const noexcept { return std::uint64_t{1} << bits_; }

  std::uint64_t encode(Sign s, const ChoiceVector& choices) const;
  std::pair<Sign, ChoiceVector> decode(std::uint64_t index) const;

 private:
  ConstructionParams params_;
  int bits_;
  std::vector<int> a_widths_;
  std::vector<int> b_widths_;
};

// Streams every constructed polynomial for the params (both signs). The
// visitor receives the mixed-radix index and the n coefficients of F.
// Coefficients pass the linear Reinhardt checks and a modular root-of-unity
// check; a failure throws InvariantViolation.
class SpecEnumerator {
 public:
  using Visitor = std::function<void(std::uint64_t index, std::span<const std::int8_t> coeffs)>;

  explicit SpecEnumerator(ConstructionParams params);

  const ConstructionParams& params() const noexcept { return params_; }
  std::uint64_t count() const noexcept { return std::uint64_t{1} << bits_; }

  // Indices in [first, last).
  void run(std::uint64_t first, std::uint64_t last, const Visitor& visit) const;
  void run(const Visitor& visit) const { run(0, count(), visit); }

  // Coefficients of F for one index into `out` (size n).
  void coefficients(std::uint64_t index, std::span<std::int8_t> out) const;

 private:
  struct Slot;
  struct Impl;
  ConstructionParams params_;
  int bits_;
  std::shared_ptr<const Impl> impl_;
};

// Materialised list of every constructed polynomial (small cases only).
std::vector<ReinhardtPolynomial> enumerate_spec(const ConstructionParams& params);

// Symmetry: exchange the roles of p and q.
struct SwapResult {
  ConstructionParams params;  // p and q exchanged, c reversed
  BlockSet blocks;            // A'_1..A'_q and B'_1..B'_p (B' before R)
};

// The block modification that moves one nonzero unit between each A_i
// (first entry) and each B_i (last entry); it leaves F unchanged.
BlockSet tilde_blocks(const ConstructionParams& params, Sign s, const BlockSet& blocks);
SwapResult symmetry_swap(const ConstructionParams& params, Sign s, const BlockSet& blocks);

}  // namespace reinhardt

#pragma once

// Ternary sequences, compositions, and the alternating block alphabets used
// to assemble Reinhardt polynomials.
//
// Textual form of a ternary sequence uses '+', '-' and '0'. When parsing,
// the separators ' ', '|', '~' and newlines are ignored so that block
// listings such as "+0|00|-+0|0" can be pasted verbatim.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reinhardt {

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign operator-(Sign s) noexcept {
  return s == Sign::Plus ? Sign::Minus : Sign::Plus;
}
// (-1)^i * s
constexpr Sign alternate(int i, Sign s) noexcept { return (i % 2 == 0) ? s : -s; }

Sign sign_from_int(int v);
std::string to_string(Sign s);  // "+1" / "-1"

class TernarySeq {
 public:
  TernarySeq() = default;
  explicit TernarySeq(std::vector<std::int8_t> values);
  TernarySeq(std::initializer_list<int> values);

  static TernarySeq parse(std::string_view text);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::int8_t operator[](std::size_t i) const { return values_[i]; }
  std::span<const std::int8_t> values() const noexcept { return values_; }

  std::string str() const;
  std::size_t nonzero_count() const noexcept;
  // Nonzero entries alternate in sign (vacuously true with < 2 nonzeros).
  bool alternates() const noexcept;
  std::optional<Sign> first_nonzero() const noexcept;
  std::optional<Sign> last_nonzero() const noexcept;

  TernarySeq reversed() const;
  TernarySeq negated() const;
  TernarySeq padded(std::size_t length) const;

  void append(const TernarySeq& other);
  // Entry-wise setter used by the block transforms; value must stay ternary.
  void set(std::size_t i, int value);

  friend bool operator==(const TernarySeq&, const TernarySeq&) = default;
  friend auto operator<=>(const TernarySeq&, const TernarySeq&) = default;

 private:
  std::vector<std::int8_t> values_;
};

TernarySeq concat(std::span<const TernarySeq> parts);

enum class Parity { Odd, Even };

// Number of length-k alternating blocks of either parity with a fixed leading
// sign: 2^(k-1).
std::uint64_t alphabet_size(std::size_t k);

// Indexed access to S_o(k, b) / S_e(k, b). Index order is the lexicographic
// order of the nonzero-position pattern read as a k-bit word with position 0
// most significant.
TernarySeq alternating_block(std::size_t k, Sign lead, Parity parity,
                             std::uint64_t index);
// Inverse of alternating_block; nullopt when seq is not a member.
std::optional<std::uint64_t> alternating_block_index(const TernarySeq& seq,
                                                     Sign lead, Parity parity);
bool is_alternating_member(const TernarySeq& seq, Sign lead, Parity parity);

std::vector<TernarySeq> odd_blocks(std::size_t k, Sign lead);   // S_o(k, b)
std::vector<TernarySeq> even_blocks(std::size_t k, Sign lead);  // S_e(k, b)
TernarySeq zero_block(std::size_t k);                           // Z(k)

// R: cyclic right shift, negating the element that wraps to the front.
TernarySeq shift_right_negate(const TernarySeq& seq);
TernarySeq shift_left_negate(const TernarySeq& seq);

// Composition of r into an even number 2m of positive parts.
class EvenComposition {
 public:
  explicit EvenComposition(std::vector<int> parts);
  static EvenComposition parse(std::string_view text);  // "1,3,2,2"

  std::span<const int> parts() const noexcept { return parts_; }
  // 1-based part r_j.
  int part(int j) const { return parts_.at(static_cast<std::size_t>(j - 1)); }
  int total() const noexcept { return total_; }
  int half_count() const noexcept { return static_cast<int>(parts_.size()) / 2; }
  int odd_total() const noexcept;   // r_o = r_1 + r_3 + ...
  int even_total() const noexcept;  // r_e = r_2 + r_4 + ...
  EvenComposition reversed() const;
  std::string str() const;

  friend bool operator==(const EvenComposition&, const EvenComposition&) = default;
  friend auto operator<=>(const EvenComposition&, const EvenComposition&) = default;

 private:
  std::vector<int> parts_;
  int total_ = 0;
};

// All compositions of r into an even number of parts, ordered by part count
// then lexicographically.
std::vector<EvenComposition> even_compositions(int r);

// Least even k with L^k(c) = c, L the cyclic left shift.
int composition_period(const EvenComposition& c);

// Composition of n into an odd number of positive parts.
class OddComposition {
 public:
  explicit OddComposition(std::vector<int> parts);
  static OddComposition parse(std::string_view text);  // "[2,3,5]" or "2,3,5"

  std::span<const int> parts() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }
  int n() const noexcept { return n_; }
  int largest_part() const noexcept;
  std::string str() const;  // "[2,3,5]"

  friend bool operator==(const OddComposition&, const OddComposition&) = default;
  friend auto operator<=>(const OddComposition&, const OddComposition&) = default;

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

std::vector<int> parse_int_list(std::string_view text);

}  // namespace reinhardt

#include "reinhardt/seqcore.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include "reinhardt/errors.hpp"

namespace reinhardt {

Sign sign_from_int(int v) {
  if (v == 1) return Sign::Plus;
  if (v == -1) return Sign::Minus;
  throw InvalidArgument("sign must be +1 or -1, got " + std::to_string(v));
}

std::string to_string(Sign s) { return s == Sign::Plus ? "+1" : "-1"; }

// ---------------------------------------------------------------- TernarySeq

TernarySeq::TernarySeq(std::vector<std::int8_t> values) : values_(std::move(values)) {
  for (auto v : values_) {
    if (v < -1 || v > 1) {
      throw InvalidArgument("ternary sequence entry out of range: " + std::to_string(v));
    }
  }
}

TernarySeq::TernarySeq(std::initializer_list<int> values) {
  values_.reserve(values.size());
  for (int v : values) {
    if (v < -1 || v > 1) {
      throw InvalidArgument("ternary sequence entry out of range: " + std::to_string(v));
    }
    values_.push_back(static_cast<std::int8_t>(v));
  }
}

TernarySeq TernarySeq::parse(std::string_view text) {
  std::vector<std::int8_t> out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '+': out.push_back(1); break;
      case '-': out.push_back(-1); break;
      case '0': out.push_back(0); break;
      case ' ': case '|': case '~': case '\n': case '\t': case '\r': break;
      default:
        throw InvalidArgument(std::string("invalid character in ternary string: '") + ch + "'");
    }
  }
  return TernarySeq(std::move(out));
}

std::string TernarySeq::str() const {
  std::string s;
  s.reserve(values_.size());
  for (auto v : values_) s.push_back(v > 0 ? '+' : (v < 0 ? '-' : '0'));
  return s;
}

std::size_t TernarySeq::nonzero_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](auto v) { return v != 0; }));
}

bool TernarySeq::alternates() const noexcept {
  std::int8_t prev = 0;
  for (auto v : values_) {
    if (v == 0) continue;
    if (v == prev) return false;
    prev = v;
  }
  return true;
}

std::optional<Sign> TernarySeq::first_nonzero() const noexcept {
  for (auto v : values_) {
    if (v != 0) return v > 0 ? Sign::Plus : Sign::Minus;
  }
  return std::nullopt;
}

std::optional<Sign> TernarySeq::last_nonzero() const noexcept {
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) {
    if (*it != 0) return *it > 0 ? Sign::Plus : Sign::Minus;
  }
  return std::nullopt;
}

TernarySeq TernarySeq::reversed() const {
  return TernarySeq(std::vector<std::int8_t>(values_.rbegin(), values_.rend()));
}

TernarySeq TernarySeq::negated() const {
  std::vector<std::int8_t> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](std::int8_t v) { return static_cast<std::int8_t>(-v); });
  return TernarySeq(std::move(out));
}

TernarySeq TernarySeq::padded(std::size_t length) const {
  if (length < values_.size()) {
    throw InvalidArgument("cannot pad a sequence of length " + std::to_string(values_.size()) +
                          " to " + std::to_string(length));
  }
  auto out = values_;
  out.resize(length, 0);
  return TernarySeq(std::move(out));
}

void TernarySeq::append(const TernarySeq& other) {
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
}

void TernarySeq::set(std::size_t i, int value) {
  if (value < -1 || value > 1) {
    throw InvalidArgument("ternary sequence entry out of range: " + std::to_string(value));
  }
  values_.at(i) = static_cast<std::int8_t>(value);
}

TernarySeq concat(std::span<const TernarySeq> parts) {
  TernarySeq out;
  for (const auto& p : parts) out.append(p);
  return out;
}

// ------------------------------------------------------------ block alphabets

std::uint64_t alphabet_size(std::size_t k) {
  if (k == 0) throw InvalidArgument("alternating block length must be >= 1");
  if (k > 63) throw InvalidArgument("alternating block length too large");
  return std::uint64_t{1} << (k - 1);
}

// A valid pattern is a k-bit word whose popcount has the requested parity.
// Exactly one of each pair {2j, 2j+1} qualifies, so index j maps to 2j plus
// a parity-fixing low bit.
TernarySeq alternating_block(std::size_t k, Sign lead, Parity parity, std::uint64_t index) {
  const auto size = alphabet_size(k);
  if (index >= size) {
    throw InvalidArgument("alternating block index " + std::to_string(index) +
                          " out of range for length " + std::to_string(k));
  }
  std::uint64_t pattern = index << 1;
  const bool odd = (std::popcount(pattern) % 2) == 1;
  if (odd != (parity == Parity::Odd)) pattern |= 1;

  std::vector<std::int8_t> out(k, 0);
  std::int8_t next = static_cast<std::int8_t>(to_int(lead));
  for (std::size_t pos = 0; pos < k; ++pos) {
    if ((pattern >> (k - 1 - pos)) & 1U) {
      out[pos] = next;
      next = static_cast<std::int8_t>(-next);
    }
  }
  return TernarySeq(std::move(out));
}

std::optional<std::uint64_t> alternating_block_index(const TernarySeq& seq, Sign lead,
                                                     Parity parity) {
  if (!is_alternating_member(seq, lead, parity)) return std::nullopt;
  std::uint64_t pattern = 0;
  for (std::size_t pos = 0; pos < seq.size(); ++pos) {
    pattern = (pattern << 1) | (seq[pos] != 0 ? 1U : 0U);
  }
  return pattern >> 1;
}

bool is_alternating_member(const TernarySeq& seq, Sign lead, Parity parity) {
  if (seq.empty()) return false;
  const auto count = seq.nonzero_count();
  if ((count % 2 == 1) != (parity == Parity::Odd)) return false;
  if (!seq.alternates()) return false;
  if (auto first = seq.first_nonzero(); first && *first != lead) return false;
  return true;
}

namespace {
std::vector<TernarySeq> all_blocks(std::size_t k, Sign lead, Parity parity) {
  const auto size = alphabet_size(k);
  std::vector<TernarySeq> out;
  out.reserve(size);
  for (std::uint64_t i = 0; i < size; ++i) out.push_back(alternating_block(k, lead, parity, i));
  return out;
}
}  // namespace

std::vector<TernarySeq> odd_blocks(std::size_t k, Sign lead) {
  return all_blocks(k, lead, Parity::Odd);
}

std::vector<TernarySeq> even_blocks(std::size_t k, Sign lead) {
  return all_blocks(k, lead, Parity::Even);
}

TernarySeq zero_block(std::size_t k) { return TernarySeq(std::vector<std::int8_t>(k, 0)); }

TernarySeq shift_right_negate(const TernarySeq& seq) {
  if (seq.empty()) throw InvalidArgument("shift_right_negate of an empty sequence");
  std::vector<std::int8_t> out(seq.size());
  out[0] = static_cast<std::int8_t>(-seq[seq.size() - 1]);
  for (std::size_t i = 1; i < seq.size(); ++i) out[i] = seq[i - 1];
  return TernarySeq(std::move(out));
}

TernarySeq shift_left_negate(const TernarySeq& seq) {
  if (seq.empty()) throw InvalidArgument("shift_left_negate of an empty sequence");
  std::vector<std::int8_t> out(seq.size());
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) out[i] = seq[i + 1];
  out[seq.size() - 1] = static_cast<std::int8_t>(-seq[0]);
  return TernarySeq(std::move(out));
}

// --------------------------------------------------------------- compositions

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '[' || text[i] == ']' ||
                               text[i] == ',' || text[i] == '\n' || text[i] == '\t')) {
      ++i;
    }
  };
  skip();
  while (i < text.size()) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == text.data() + i) {
      throw InvalidArgument("malformed integer list: \"" + std::string(text) + "\"");
    }
    out.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
    skip();
  }
  return out;
}

namespace {
std::string join(std::span<const int> parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}
}  // namespace

EvenComposition::EvenComposition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.size() < 2 || parts_.size() % 2 != 0) {
    throw InvalidArgument("even composition needs an even number (>= 2) of parts");
  }
  for (int v : parts_) {
    if (v < 1) throw InvalidArgument("composition parts must be positive");
  }
  total_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

EvenComposition EvenComposition::parse(std::string_view text) {
  return EvenComposition(parse_int_list(text));
}

int EvenComposition::odd_total() const noexcept {
  int sum = 0;
  for (std::size_t i = 0; i < parts_.size(); i += 2) sum += parts_[i];
  return sum;
}

int EvenComposition::even_total() const noexcept { return total_ - odd_total(); }

EvenComposition EvenComposition::reversed() const {
  return EvenComposition(std::vector<int>(parts_.rbegin(), parts_.rend()));
}

std::string EvenComposition::str() const { return join(parts_); }

std::vector<EvenComposition> even_compositions(int r) {
  if (r < 2) throw InvalidArgument("even compositions require r >= 2");
  std::vector<std::vector<int>> all;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      if (current.size() % 2 == 0) all.push_back(current);
      return;
    }
    for (int part = 1; part <= remaining; ++part) {
      current.push_back(part);
      self(self, remaining - part);
      current.pop_back();
    }
  };
  recurse(recurse, r);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<EvenComposition> out;
  out.reserve(all.size());
  for (auto& parts : all) out.emplace_back(std::move(parts));
  return out;
}

int composition_period(const EvenComposition& c) {
  const auto parts = c.parts();
  const std::size_t len = parts.size();
  for (std::size_t k = 2; k <= len; k += 2) {
    bool fixed = true;
    for (std::size_t i = 0; i < len && fixed; ++i) {
      fixed = parts[i] == parts[(i + k) % len];
    }
    if (fixed) return static_cast<int>(k);
  }
  return static_cast<int>(len);  // unreachable: L^{2m} is the identity
}

OddComposition::OddComposition(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty() || parts_.size() % 2 == 0) {
    throw InvalidArgument("odd composition needs an odd number of parts");
  }
  for (int v : parts_) {
    if (v < 1) throw InvalidArgument("composition parts must be positive");
  }
  n_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

OddComposition OddComposition::parse(std::string_view text) {
  return OddComposition(parse_int_list(text));
}

int OddComposition::largest_part() const noexcept {
  return *std::max_element(parts_.begin(), parts_.end());
}

std::string OddComposition::str() const { return "[" + join(parts_) + "]"; }

}  // namespace reinhardt

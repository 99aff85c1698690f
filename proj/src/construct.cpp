#include "reinhardt/construct.hpp"

#include <algorithm>
#include <sstream>

#include "reinhardt/cyclo.hpp"
#include "reinhardt/errors.hpp"

namespace reinhardt {

namespace {

struct SlotInfo {
  bool in_a;
  int block;        // 1-based i
  int sub;          // 1-based j
  std::size_t offset;  // within the block
  std::size_t len;
  Parity parity;
  int lead_exp;     // lead sign is (-1)^lead_exp * s
  int bits;
  std::uint64_t base;  // added to the choice to get the alphabet index
};

std::size_t sub_length(bool in_a, int j, int rj) {
  const bool odd = j % 2 == 1;
  return static_cast<std::size_t>(odd == in_a ? rj + 1 : rj - 1);
}

// Every non-zero sub-block of A_1..A_p then B_1..B_q, in choice order.
std::vector<SlotInfo> slot_layout(const ConstructionParams& params) {
  const auto& c = params.composition();
  const int parts = 2 * c.half_count();
  std::vector<SlotInfo> out;
  for (int pass = 0; pass < 2; ++pass) {
    const bool in_a = pass == 0;
    const int blocks = in_a ? params.p() : params.q();
    for (int i = 1; i <= blocks; ++i) {
      std::size_t offset = 0;
      for (int j = 1; j <= parts; ++j) {
        const int rj = c.part(j);
        const std::size_t len = sub_length(in_a, j, rj);
        const bool chosen = in_a ? (j % 2 == 1) : (j % 2 == 0);
        if (chosen) {
          SlotInfo slot{in_a, i, j, offset, len, Parity::Even, i, rj, 0};
          if (in_a && j == 1) {
            slot.parity = Parity::Odd;
            slot.lead_exp = i + 1;
            if (i == 1) {
              slot.bits = rj - 1;
              slot.base = std::uint64_t{1} << (rj - 1);
            }
          }
          out.push_back(slot);
        }
        offset += len;
      }
    }
  }
  return out;
}

Sign slot_lead(const SlotInfo& slot, Sign s) { return alternate(slot.lead_exp, s); }

void check_block_lengths(const ConstructionParams& params, const BlockSet& blocks) {
  if (blocks.a.size() != static_cast<std::size_t>(params.p()) ||
      blocks.b.size() != static_cast<std::size_t>(params.q())) {
    throw InvalidArgument("block counts do not match p and q");
  }
  const auto r = static_cast<std::size_t>(params.r());
  for (const auto* list : {&blocks.a, &blocks.b}) {
    for (const auto& blk : *list) {
      if (blk.size() != r) {
        throw InvalidArgument("block length " + std::to_string(blk.size()) + " differs from r=" +
                              std::to_string(r));
      }
    }
  }
}

}  // namespace

// ------------------------------------------------------------- parameters

ConstructionParams::ConstructionParams(int p, int q, EvenComposition c)
    : p_(p), q_(q), c_(std::move(c)) {
  for (int prime : {p, q}) {
    if (prime < 3 || prime % 2 == 0 || !is_prime(static_cast<std::uint64_t>(prime))) {
      throw InvalidArgument(std::to_string(prime) + " is not an odd prime");
    }
  }
  if (p == q) throw InvalidArgument("p and q must be distinct");
  if (c_.total() < 2) throw InvalidArgument("r must be at least 2");
}

int ConstructionParams::index_bits() const noexcept {
  return c_.odd_total() * p_ + c_.even_total() * q_;
}

std::string ConstructionParams::str() const {
  return "n=" + std::to_string(n()) + " p=" + std::to_string(p_) + " q=" + std::to_string(q_) +
         " c=" + c_.str();
}

std::string ConstructionSpec::str() const { return params.str() + " s=" + to_string(s); }

ConstructionSpec ConstructionSpec::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  std::optional<int> n, p, q, s;
  std::optional<EvenComposition> c;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidArgument("malformed spec token: " + token);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "n") {
        n = std::stoi(value);
      } else if (key == "p") {
        p = std::stoi(value);
      } else if (key == "q") {
        q = std::stoi(value);
      } else if (key == "s") {
        s = std::stoi(value);
      } else if (key == "c") {
        c = EvenComposition::parse(value);
      } else {
        throw InvalidArgument("unknown spec key: " + key);
      }
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed spec value: " + token);
    }
  }
  if (!p || !q || !c || !s) throw InvalidArgument("spec needs p, q, c and s");
  ConstructionSpec spec{ConstructionParams(*p, *q, *c), sign_from_int(*s)};
  if (n && *n != spec.params.n()) throw InvalidArgument("n does not equal p*q*r");
  return spec;
}

// ------------------------------------------------------------- blocks

void validate_choices(const ConstructionSpec& spec, const ChoiceVector& choices) {
  const auto layout = slot_layout(spec.params);
  std::size_t na = 0, nb = 0;
  for (const auto& slot : layout) (slot.in_a ? na : nb)++;
  if (choices.a_choices.size() != na || choices.b_choices.size() != nb) {
    throw InvalidArgument("choice vector has the wrong number of entries");
  }
  std::size_t ia = 0, ib = 0;
  for (const auto& slot : layout) {
    const auto v = slot.in_a ? choices.a_choices[ia++] : choices.b_choices[ib++];
    if (v >= (std::uint64_t{1} << slot.bits)) {
      throw InvalidArgument("choice out of range for sub-block (" + std::to_string(slot.block) +
                            "," + std::to_string(slot.sub) + ")");
    }
  }
}

BlockSet build_blocks(const ConstructionSpec& spec, const ChoiceVector& choices) {
  validate_choices(spec, choices);
  const auto& params = spec.params;
  const auto r = static_cast<std::size_t>(params.r());
  std::vector<std::vector<std::int8_t>> a(static_cast<std::size_t>(params.p()),
                                          std::vector<std::int8_t>(r, 0));
  std::vector<std::vector<std::int8_t>> b(static_cast<std::size_t>(params.q()),
                                          std::vector<std::int8_t>(r, 0));
  std::size_t ia = 0, ib = 0;
  for (const auto& slot : slot_layout(params)) {
    const auto choice = slot.in_a ? choices.a_choices[ia++] : choices.b_choices[ib++];
    const auto blk = alternating_block(slot.len, slot_lead(slot, spec.s), slot.parity,
                                       choice + slot.base);
    auto& dest = (slot.in_a ? a : b)[static_cast<std::size_t>(slot.block - 1)];
    std::copy(blk.values().begin(), blk.values().end(),
              dest.begin() + static_cast<std::ptrdiff_t>(slot.offset));
  }
  BlockSet out;
  for (auto& v : a) out.a.emplace_back(std::move(v));
  for (auto& v : b) out.b.emplace_back(std::move(v));
  return out;
}

TernarySeq f1_from_blocks(const BlockSet& blocks) { return concat(blocks.a); }
TernarySeq f2_from_blocks(const BlockSet& blocks) {
  return shift_right_negate(concat(blocks.b));
}

TernarySeq build_f1(const ConstructionSpec& spec, const ChoiceVector& choices) {
  return f1_from_blocks(build_blocks(spec, choices));
}

TernarySeq build_f2(const ConstructionSpec& spec, const ChoiceVector& choices) {
  return f2_from_blocks(build_blocks(spec, choices));
}

ChoiceVector choices_from_blocks(const ConstructionSpec& spec, const BlockSet& blocks) {
  const auto& params = spec.params;
  check_block_lengths(params, blocks);
  const auto& c = params.composition();
  // Zero sub-blocks must be zero.
  for (int pass = 0; pass < 2; ++pass) {
    const bool in_a = pass == 0;
    const auto& list = in_a ? blocks.a : blocks.b;
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::size_t offset = 0;
      for (int j = 1; j <= 2 * c.half_count(); ++j) {
        const std::size_t len = sub_length(in_a, j, c.part(j));
        const bool zero = in_a ? (j % 2 == 0) : (j % 2 == 1);
        for (std::size_t t = 0; zero && t < len; ++t) {
          if (list[i][offset + t] != 0) {
            throw InvalidArgument("sub-block (" + std::to_string(i + 1) + "," +
                                  std::to_string(j) + ") must be zero");
          }
        }
        offset += len;
      }
    }
  }
  ChoiceVector out;
  for (const auto& slot : slot_layout(params)) {
    const auto& blk = (slot.in_a ? blocks.a : blocks.b)[static_cast<std::size_t>(slot.block - 1)];
    std::vector<std::int8_t> part(blk.values().begin() + static_cast<std::ptrdiff_t>(slot.offset),
                                  blk.values().begin() +
                                      static_cast<std::ptrdiff_t>(slot.offset + slot.len));
    const auto idx =
        alternating_block_index(TernarySeq(std::move(part)), slot_lead(slot, spec.s), slot.parity);
    if (!idx || *idx < slot.base) {
      throw InvalidArgument("sub-block (" + std::to_string(slot.block) + "," +
                            std::to_string(slot.sub) + ") of " + (slot.in_a ? "A" : "B") +
                            " is not in its alphabet");
    }
    (slot.in_a ? out.a_choices : out.b_choices).push_back(*idx - slot.base);
  }
  return out;
}

// ------------------------------------------------------------- assembly

std::vector<int> combine(const ConstructionParams& params, const TernarySeq& f1,
                         const TernarySeq& f2) {
  const int n = params.n();
  const int pr = params.p() * params.r();
  const int qr = params.q() * params.r();
  if (f1.size() != static_cast<std::size_t>(pr) || f2.size() != static_cast<std::size_t>(qr)) {
    throw InvalidArgument("f1 and f2 must have lengths p*r and q*r");
  }
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int s1 = (k / pr) % 2 == 0 ? 1 : -1;
    const int s2 = (k / qr) % 2 == 0 ? 1 : -1;
    out[static_cast<std::size_t>(k)] = s1 * f1[static_cast<std::size_t>(k % pr)] +
                                       s2 * f2[static_cast<std::size_t>(k % qr)];
  }
  return out;
}

ReinhardtPolynomial assemble_blocks(const ConstructionParams& params, const BlockSet& blocks) {
  check_block_lengths(params, blocks);
  const auto raw = combine(params, f1_from_blocks(blocks), f2_from_blocks(blocks));
  std::vector<std::int8_t> coeffs(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] < -1 || raw[k] > 1) {
      throw InvariantViolation("assembled coefficient " + std::to_string(k) + " is " +
                               std::to_string(raw[k]) + " for " + params.str());
    }
    coeffs[k] = static_cast<std::int8_t>(raw[k]);
  }
  TernarySeq seq(std::move(coeffs));
  if (!is_reinhardt(seq, params.n())) {
    throw InvariantViolation("assembled polynomial is not Reinhardt for " + params.str() + ": " +
                             seq.str());
  }
  return ReinhardtPolynomial::trusted(std::move(seq), params.n());
}

ReinhardtPolynomial assemble(const ConstructionSpec& spec, const ChoiceVector& choices) {
  return assemble_blocks(spec.params, build_blocks(spec, choices));
}

// ------------------------------------------------------------- indexing

namespace {
void require_indexable(const ConstructionParams& params) {
  if (params.index_bits() > 62) {
    throw InvalidArgument("construction space too large to index: " + params.str());
  }
}
}  // namespace

ChoiceIndexer::ChoiceIndexer(ConstructionParams params)
    : params_(std::move(params)), bits_(params_.index_bits()) {
  require_indexable(params_);
  for (const auto& slot : slot_layout(params_)) {
    (slot.in_a ? a_widths_ : b_widths_).push_back(slot.bits);
  }
}

std::uint64_t ChoiceIndexer::encode(Sign s, const ChoiceVector& choices) const {
  validate_choices(ConstructionSpec{params_, s}, choices);
  std::uint64_t index = s == Sign::Plus ? 1 : 0;
  for (std::size_t k = 0; k < a_widths_.size(); ++k) {
    index = (index << a_widths_[k]) | choices.a_choices[k];
  }
  for (std::size_t k = 0; k < b_widths_.size(); ++k) {
    index = (index << b_widths_[k]) | choices.b_choices[k];
  }
  return index;
}

std::pair<Sign, ChoiceVector> ChoiceIndexer::decode(std::uint64_t index) const {
  if (index >= count()) throw InvalidArgument("choice index out of range");
  ChoiceVector out;
  out.a_choices.resize(a_widths_.size());
  out.b_choices.resize(b_widths_.size());
  for (std::size_t k = b_widths_.size(); k-- > 0;) {
    out.b_choices[k] = index & ((std::uint64_t{1} << b_widths_[k]) - 1);
    index >>= b_widths_[k];
  }
  for (std::size_t k = a_widths_.size(); k-- > 0;) {
    out.a_choices[k] = index & ((std::uint64_t{1} << a_widths_[k]) - 1);
    index >>= a_widths_[k];
  }
  return {index == 1 ? Sign::Plus : Sign::Minus, std::move(out)};
}

// ------------------------------------------------------------- enumeration

struct SpecEnumerator::Slot {
  bool in_a;
  std::size_t dest;  // offset in f1 or in the pre-R concatenation of B
  std::size_t len;
  int shift;         // bit position of the field in the index
  std::uint64_t mask;
  std::vector<std::int8_t> table[2];  // [s == Plus], 2^bits rows of len
};

struct SpecEnumerator::Impl {
  std::vector<Slot> slots;
  RootOfUnityCheck root;
  explicit Impl(std::uint64_t n) : root(n) {}
};

SpecEnumerator::SpecEnumerator(ConstructionParams params)
    : params_(std::move(params)), bits_(params_.index_bits()) {
  require_indexable(params_);
  auto impl = std::make_shared<Impl>(static_cast<std::uint64_t>(params_.n()));
  const auto layout = slot_layout(params_);
  const auto r = static_cast<std::size_t>(params_.r());
  int shift = bits_ - 1;
  for (const auto& info : layout) {
    shift -= info.bits;
    Slot slot;
    slot.in_a = info.in_a;
    slot.dest = static_cast<std::size_t>(info.block - 1) * r + info.offset;
    slot.len = info.len;
    slot.shift = shift;
    slot.mask = (std::uint64_t{1} << info.bits) - 1;
    for (Sign s : {Sign::Minus, Sign::Plus}) {
      auto& table = slot.table[s == Sign::Plus ? 1 : 0];
      const std::uint64_t rows = std::uint64_t{1} << info.bits;
      table.reserve(rows * info.len);
      for (std::uint64_t v = 0; v < rows; ++v) {
        const auto blk = alternating_block(info.len, slot_lead(info, s), info.parity, v + info.base);
        table.insert(table.end(), blk.values().begin(), blk.values().end());
      }
    }
    impl->slots.push_back(std::move(slot));
  }
  if (shift != 0) throw InvariantViolation("choice layout does not fill the index");
  impl_ = std::move(impl);
}

namespace {

struct Scratch {
  std::vector<std::int8_t> f1, bpre, out;
};

}  // namespace

void SpecEnumerator::coefficients(std::uint64_t index, std::span<std::int8_t> out) const {
  const int n = params_.n();
  const int pr = params_.p() * params_.r();
  const int qr = params_.q() * params_.r();
  if (out.size() != static_cast<std::size_t>(n)) throw InvalidArgument("output must have n entries");
  if (index >= count()) throw InvalidArgument("choice index out of range");
  thread_local Scratch scratch;
  scratch.f1.assign(static_cast<std::size_t>(pr), 0);
  scratch.bpre.assign(static_cast<std::size_t>(qr), 0);
  const int sidx = static_cast<int>(index >> (bits_ - 1)) & 1;
  for (const auto& slot : impl_->slots) {
    const auto v = (index >> slot.shift) & slot.mask;
    const std::int8_t* src = slot.table[sidx].data() + v * slot.len;
    std::int8_t* dst = (slot.in_a ? scratch.f1.data() : scratch.bpre.data()) + slot.dest;
    std::copy(src, src + slot.len, dst);
  }
  // f2 = R(bpre): f2[0] = -bpre[qr-1], f2[k] = bpre[k-1].
  const std::int8_t* f1 = scratch.f1.data();
  const std::int8_t* b = scratch.bpre.data();
  for (int k = 0; k < n; ++k) {
    const int u = k % pr;
    const int w = k % qr;
    const int f2w = w == 0 ? -b[qr - 1] : b[w - 1];
    const int v = ((k / pr) % 2 == 0 ? f1[u] : -f1[u]) + ((k / qr) % 2 == 0 ? f2w : -f2w);
    if (v < -1 || v > 1) {
      throw InvariantViolation("constructed coefficient out of range at index " +
                               std::to_string(index) + " for " + params_.str());
    }
    out[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(v);
  }
}

void SpecEnumerator::run(std::uint64_t first, std::uint64_t last, const Visitor& visit) const {
  if (first > last || last > count()) throw InvalidArgument("invalid index range");
  std::vector<std::int8_t> coeffs(static_cast<std::size_t>(params_.n()));
  for (std::uint64_t index = first; index < last; ++index) {
    coefficients(index, coeffs);
    int prev = 0;
    std::size_t nonzero = 0;
    for (auto v : coeffs) {
      if (v == 0) continue;
      if (v == prev) {
        throw InvariantViolation("constructed signs do not alternate at index " +
                                 std::to_string(index) + " for " + params_.str());
      }
      prev = v;
      ++nonzero;
    }
    if (nonzero % 2 == 0 || !impl_->root.vanishes(coeffs)) {
      throw InvariantViolation("constructed polynomial fails verification at index " +
                               std::to_string(index) + " for " + params_.str());
    }
    visit(index, coeffs);
  }
}

std::vector<ReinhardtPolynomial> enumerate_spec(const ConstructionParams& params) {
  SpecEnumerator en(params);
  std::vector<ReinhardtPolynomial> out;
  out.reserve(en.count());
  en.run([&](std::uint64_t, std::span<const std::int8_t> coeffs) {
    out.push_back(ReinhardtPolynomial::trusted(
        TernarySeq(std::vector<std::int8_t>(coeffs.begin(), coeffs.end())), params.n()));
  });
  return out;
}

// ------------------------------------------------------------- symmetry

BlockSet tilde_blocks(const ConstructionParams& params, Sign s, const BlockSet& blocks) {
  check_block_lengths(params, blocks);
  BlockSet out = blocks;
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    const int delta = to_int(alternate(static_cast<int>(i + 1), s));
    out.a[i].set(0, out.a[i][0] + delta);
  }
  for (std::size_t i = 0; i < out.b.size(); ++i) {
    const int delta = to_int(alternate(static_cast<int>(i + 1), s));
    const std::size_t last = out.b[i].size() - 1;
    out.b[i].set(last, out.b[i][last] + delta);
  }
  return out;
}

SwapResult symmetry_swap(const ConstructionParams& params, Sign s, const BlockSet& blocks) {
  const BlockSet tilde = tilde_blocks(params, s, blocks);
  BlockSet out;
  for (auto it = tilde.b.rbegin(); it != tilde.b.rend(); ++it) {
    out.a.push_back(it->reversed().negated());
  }
  for (auto it = tilde.a.rbegin(); it != tilde.a.rend(); ++it) {
    out.b.push_back(it->reversed().negated());
  }
  return {ConstructionParams(params.q(), params.p(), params.composition().reversed()),
          std::move(out)};
}

}  // namespace reinhardt

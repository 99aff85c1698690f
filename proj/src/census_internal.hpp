#pragma once

#include <absl/container/flat_hash_map.h>

#include <cstdint>
#include <span>
#include <vector>

#include "reinhardt/census.hpp"
#include "reinhardt/classify.hpp"

namespace reinhardt::detail {

inline constexpr std::uint8_t kSporadic = 1;
inline constexpr std::uint8_t kReciprocal = 2;

struct ClassEntry {
  std::uint64_t specs = 0;  // bit per spec index (first 64 specs)
  std::uint8_t flags = 0;
};

using ClassMap = absl::flat_hash_map<CompositionKey, ClassEntry>;

// Candidate periods d = n/b for the odd primes b | n; every qualifying period
// of a Reinhardt polynomial has an odd multiple among these.
std::vector<int> prime_periods(int n);
bool any_period(std::span<const std::int8_t> coeffs, int n, std::span<const int> periods);

void merge_into(ClassMap& dest, const ClassMap& src);

// Turns a stream of distinct classes into report totals.
class Tallier {
 public:
  Tallier(CensusReport& report, bool collect, std::optional<int> exact_largest_part);
  void add(const CompositionKey& key, const ClassEntry& entry);
  void finish();

 private:
  CensusReport& report_;
  bool collect_;
  std::optional<int> exact_largest_part_;
  std::vector<std::uint64_t> spec_classes_;
};

unsigned resolve_workers(unsigned requested);

}  // namespace reinhardt::detail

#pragma once

// Counting: closed-form counts and bounds, the construction census, the
// exhaustive (meet-in-the-middle) oracle and reciprocal tallies.

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reinhardt/construct.hpp"

namespace reinhardt {

// ------------------------------------------------------------- formulas

// (a^{p-1} - 1) / p.
mpz_class fermat_quotient(std::uint64_t p, std::uint64_t a);

// (2^{p-1} - 1)(2^{q-1} - 1) / (pq).
mpz_class e1_formula_2pq(std::uint64_t p, std::uint64_t q);

// 2^r (2^{r_o(p-1)} - 1)(2^{r_e(q-1)} - 1). Throws InvalidArgument when
// r has an odd prime divisor other than p and q.
mpz_class sporadic_count_exact(const ConstructionParams& params);

// Smallest odd prime divisor of n other than p and q, if any.
std::optional<std::uint64_t> third_odd_prime(std::uint64_t n, std::uint64_t p, std::uint64_t q);

// floor(2^{(2m pq + (r_o - m) p + (r_e - m) q) / t}); InvalidArgument when
// there is no third odd prime t.
mpz_class u_bound(const ConstructionParams& params);

// (v/r) (2^{r-2} (2^{r_o(p-1)}-1)/p (2^{r_e(q-1)}-1)/q - U/(4pq)), with U = 0
// when p and q are the only odd primes and v = r_1 + ... + r_{pi(c)}.
mpq_class e1_lower_bound(const ConstructionParams& params);

// All (p, q, c) with p != q odd primes dividing n, r = n/(pq) >= 2 and c an
// even composition of r. Both orders of (p, q) are included.
std::vector<ConstructionParams> qualifying_params(int n);

// Constructed polynomials (both signs) that are d-periodic; with
// `exclude_block_periods`, those that are also pr- or qr-periodic are skipped.
std::uint64_t count_periodic_constructions(const ConstructionParams& params, int d,
                                           bool exclude_block_periods);

// ------------------------------------------------------------- census

struct CensusOptions {
  unsigned workers = 0;          // 0: hardware concurrency
  double budget = 1e9;           // estimated work units
  bool budget_override = false;
  std::optional<std::filesystem::path> checkpoint_dir;
  std::optional<std::uint64_t> max_chunks;  // stop after this many new chunks
  std::uint64_t chunk_size = std::uint64_t{1} << 24;
  bool collect_classes = false;
  std::optional<int> largest_part;  // brute force: only classes with this maximum part
};

struct SpecTally {
  ConstructionParams params;
  std::uint64_t polynomials = 0;
  std::uint64_t sporadic_polynomials = 0;
  std::optional<std::uint64_t> sporadic_classes;  // absent beyond 64 specs
};

struct ClassRecord {
  std::vector<int> parts;  // canonical
  bool sporadic = false;
  bool reciprocal = false;

  friend bool operator==(const ClassRecord&, const ClassRecord&) = default;
};

struct CensusReport {
  int n = 0;
  std::string mode;  // "construction" or "brute-force"
  bool complete = true;
  std::uint64_t e1 = 0;               // sporadic classes
  std::optional<std::uint64_t> e0;    // periodic classes (brute force only)
  std::uint64_t periodic_classes = 0;
  std::uint64_t reciprocal_classes = 0;
  std::uint64_t reciprocal_sporadic_classes = 0;
  std::map<int, std::uint64_t> e1_by_largest_part;
  std::optional<int> largest_part;
  double estimated_cost = 0;
  std::vector<SpecTally> by_spec;
  std::vector<ClassRecord> classes;  // sorted, only with collect_classes
};

// Estimated work (polynomials to generate) for the construction census.
double construction_cost(int n);
CensusReport construction_census(int n, const CensusOptions& options = {});

// Estimated search nodes for the exhaustive oracle.
double brute_force_cost(int n, std::optional<int> largest_part = std::nullopt);
CensusReport brute_force_census(int n, const CensusOptions& options = {});

// Distinct reciprocal classes among the constructed sporadic polynomials.
std::uint64_t reciprocal_census(int n, const CensusOptions& options = {});

// {"n":..,"mode":..,"E1":..,"E0":..,"by_spec":[..],...}
std::string report_json(const CensusReport& report);

// One JSON object per class, sorted by canonical composition.
void write_class_list(const CensusReport& report, std::ostream& out);

}  // namespace reinhardt

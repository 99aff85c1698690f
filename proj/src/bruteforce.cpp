// Exhaustive oracle for E0(n), E1(n) and E1(n, m).
//
// Every Reinhardt polynomial is a rotation (up to sign) of one with constant
// term +1, so it suffices to choose the remaining nonzero exponents. The
// exponent range is split at h: a prefix subset of [1, h) and a suffix subset
// of [h, n). Residues modulo Phi_{2n} are additive, so with a prefix of a+1
// terms (residue P) and a suffix of b terms (residue S, signs starting at +)
// the polynomial vanishes mod Phi_{2n} iff S = (-1)^a P and b = a (mod 2).
// Suffixes are tabulated by a hash of (residue, parity); each hit is checked
// exactly before it is counted.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "census_internal.hpp"
#include "reinhardt/census.hpp"
#include "reinhardt/cyclo.hpp"
#include "reinhardt/errors.hpp"

namespace reinhardt {

namespace {

constexpr int kMaxBruteN = 64;
constexpr int kMaxSuffixBits = 26;

int split_point(int n) { return std::min(n, std::max((n + 2) / 2, n - kMaxSuffixBits)); }

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t residue_hash(std::span<const std::int32_t> v, int parity, int sign) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(parity);
  for (auto x : v) h = mix(h + static_cast<std::uint64_t>(static_cast<std::int64_t>(sign * x)));
  return h;
}

struct SuffixEntry {
  std::uint64_t hash;
  std::uint64_t mask;  // bit k set: exponent h + k
};

// Chains of exponents starting at 0 with gaps <= m, ending at x; ways[x].
std::vector<double> chain_counts(int len, int m) {
  std::vector<double> ways(static_cast<std::size_t>(len), 0.0);
  if (len > 0) ways[0] = 1;
  for (int x = 1; x < len; ++x) {
    for (int g = 1; g <= m && g <= x; ++g) ways[static_cast<std::size_t>(x)] += ways[static_cast<std::size_t>(x - g)];
  }
  return ways;
}

struct Plan {
  int n;
  int h;
  int m;  // gap cap (n when uncapped)
};

double prefix_nodes(const Plan& plan) {
  const auto ways = chain_counts(plan.h, plan.m);
  double total = 0;
  for (int x = std::max(0, plan.h - plan.m); x < plan.h; ++x) total += ways[static_cast<std::size_t>(x)];
  return total;
}

double suffix_nodes(const Plan& plan) {
  // Chains inside [h, n) whose first element is within m of the prefix and
  // whose last element is within m of n; plus the empty suffix.
  const int len = plan.n - plan.h;
  std::vector<double> ways(static_cast<std::size_t>(std::max(len, 0)), 0.0);
  double total = 1;
  for (int y = 0; y < len; ++y) {
    double w = y < plan.m ? 1.0 : 0.0;
    for (int g = 1; g <= plan.m && g <= y; ++g) w += ways[static_cast<std::size_t>(y - g)];
    ways[static_cast<std::size_t>(y)] = w;
    if (plan.n - (plan.h + y) <= plan.m) total += w;
  }
  return total;
}

class Search {
 public:
  Search(const Plan& plan, const CyclotomicResidues& residues)
      : plan_(plan), res_(residues), dim_(residues.dimension()) {}

  void build_suffix_table() {
    std::vector<std::int32_t> acc(dim_, 0);
    const int len = plan_.n - plan_.h;
    // The empty suffix; the join check decides whether it closes the cycle.
    table_.push_back({residue_hash(acc, 0, 1), 0});
    for (int y = 0; y < len && y < plan_.m; ++y) suffix_dfs(y, 0, 1, acc);
    std::sort(table_.begin(), table_.end(),
              [](const SuffixEntry& a, const SuffixEntry& b) {
                return a.hash < b.hash || (a.hash == b.hash && a.mask < b.mask);
              });
  }

  std::size_t table_size() const { return table_.size(); }

  // Visits prefixes whose first exponent after 0 is `first` (0 for none).
  template <typename Visit>
  void run_prefix(int first, Visit&& visit) const {
    std::vector<std::int32_t> acc(dim_, 0);
    add(acc, 0, 1);
    std::vector<int> chosen{0};
    if (first == 0) {
      finish_prefix(chosen, acc, visit);
      return;
    }
    add(acc, first, -1);
    chosen.push_back(first);
    prefix_dfs(chosen, acc, visit);
  }

  // Candidate suffix masks for the prefix; exact residue checked by caller.
  template <typename Visit>
  void lookup(std::span<const std::int32_t> target, int parity, int sign, Visit&& visit) const {
    const auto h = residue_hash(target, parity, sign);
    auto it = std::lower_bound(table_.begin(), table_.end(), h,
                               [](const SuffixEntry& e, std::uint64_t v) { return e.hash < v; });
    for (; it != table_.end() && it->hash == h; ++it) visit(it->mask);
  }

  bool suffix_matches(std::uint64_t mask, std::span<const std::int32_t> target, int sign) const {
    std::vector<std::int32_t> acc(dim_, 0);
    int s = 1;
    for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
      add(acc, plan_.h + std::countr_zero(bits), s);
      s = -s;
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      if (acc[i] != sign * target[i]) return false;
    }
    return true;
  }

  const Plan& plan() const { return plan_; }

 private:
  void add(std::vector<std::int32_t>& acc, int exponent, int sign) const {
    const auto row = res_.power(static_cast<std::size_t>(exponent));
    for (std::size_t i = 0; i < dim_; ++i) acc[i] += sign * row[i];
  }

  // y is the offset of the newest suffix exponent from h.
  void suffix_dfs(int y, std::uint64_t mask, int sign, std::vector<std::int32_t>& acc) {
    mask |= std::uint64_t{1} << y;
    add(acc, plan_.h + y, sign);
    const int count = std::popcount(mask);
    if (plan_.n - (plan_.h + y) <= plan_.m) table_.push_back({residue_hash(acc, count % 2, 1), mask});
    const int len = plan_.n - plan_.h;
    for (int next = y + 1; next < len && next - y <= plan_.m; ++next) suffix_dfs(next, mask, -sign, acc);
    add(acc, plan_.h + y, -sign);
  }

  template <typename Visit>
  void prefix_dfs(std::vector<int>& chosen, std::vector<std::int32_t>& acc, Visit& visit) const {
    finish_prefix(chosen, acc, visit);
    const int last = chosen.back();
    const int sign = chosen.size() % 2 == 0 ? 1 : -1;
    for (int next = last + 1; next < plan_.h && next - last <= plan_.m; ++next) {
      add(acc, next, sign);
      chosen.push_back(next);
      prefix_dfs(chosen, acc, visit);
      chosen.pop_back();
      add(acc, next, -sign);
    }
  }

  template <typename Visit>
  void finish_prefix(const std::vector<int>& chosen, const std::vector<std::int32_t>& acc,
                     Visit& visit) const {
    if (chosen.back() < plan_.h - plan_.m) return;
    visit(chosen, std::span<const std::int32_t>(acc));
  }

  Plan plan_;
  const CyclotomicResidues& res_;
  std::size_t dim_;
  std::vector<SuffixEntry> table_;
};

}  // namespace

double brute_force_cost(int n, std::optional<int> largest_part) {
  if (n < 2) return 1;
  const Plan plan{n, split_point(n), largest_part ? std::min(*largest_part, n) : n};
  return prefix_nodes(plan) + suffix_nodes(plan);
}

CensusReport brute_force_census(int n, const CensusOptions& options) {
  if (n < 2) throw InvalidArgument("brute force needs n >= 2");
  if (options.largest_part && (*options.largest_part < 1 || *options.largest_part > n)) {
    throw InvalidArgument("largest part must lie in [1, n]");
  }
  CensusReport report;
  report.n = n;
  report.mode = "brute-force";
  report.largest_part = options.largest_part;
  report.estimated_cost = brute_force_cost(n, options.largest_part);
  if (report.estimated_cost > options.budget && !options.budget_override) {
    throw BudgetExceeded("exhaustive search for n=" + std::to_string(n) + " needs about " +
                             std::to_string(report.estimated_cost) + " nodes",
                         report.estimated_cost, options.budget);
  }
  if (n > kMaxBruteN) {
    throw UnsupportedN("exhaustive search supports n <= " + std::to_string(kMaxBruteN));
  }

  const Plan plan{n, split_point(n), options.largest_part.value_or(n)};
  const CyclotomicResidues residues(static_cast<std::uint64_t>(n));
  Search search(plan, residues);
  search.build_suffix_table();

  const auto periods = detail::prime_periods(n);
  std::vector<int> firsts{0};
  for (int x = 1; x < plan.h && x <= plan.m; ++x) firsts.push_back(x);

  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  detail::ClassMap global;
  std::exception_ptr failure;

  auto work = [&] {
    try {
      detail::ClassMap local;
      Canonicalizer canon;
      std::vector<std::int8_t> coeffs(static_cast<std::size_t>(n));
      std::vector<std::int32_t> target;
      while (true) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= firsts.size()) break;
        search.run_prefix(firsts[idx], [&](const std::vector<int>& chosen,
                                           std::span<const std::int32_t> acc) {
          const int a = static_cast<int>(chosen.size()) - 1;
          const int sign = a % 2 == 0 ? 1 : -1;
          const int last = chosen.back();
          search.lookup(acc, a % 2, sign, [&](std::uint64_t mask) {
            if (mask == 0) {
              if (n - last > plan.m) return;
            } else if (plan.h + std::countr_zero(mask) - last > plan.m) {
              return;
            }
            if (!search.suffix_matches(mask, acc, sign)) return;
            std::fill(coeffs.begin(), coeffs.end(), 0);
            std::int8_t s = 1;
            for (int e : chosen) {
              coeffs[static_cast<std::size_t>(e)] = s;
              s = static_cast<std::int8_t>(-s);
            }
            for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
              coeffs[static_cast<std::size_t>(plan.h + std::countr_zero(bits))] = s;
              s = static_cast<std::int8_t>(-s);
            }
            const auto result = canon.from_coefficients(coeffs, n);
            const bool sporadic = !detail::any_period(coeffs, n, periods);
            auto& entry = local[result.key];
            entry.flags |= (sporadic ? detail::kSporadic : 0) |
                           (result.reciprocal ? detail::kReciprocal : 0);
          });
        });
      }
      std::lock_guard lock(merge_mutex);
      detail::merge_into(global, local);
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      next = firsts.size();
    }
  };

  const unsigned workers = detail::resolve_workers(options.workers);
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<std::pair<CompositionKey, detail::ClassEntry>> records(global.begin(), global.end());
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  detail::Tallier tallier(report, options.collect_classes, options.largest_part);
  for (const auto& [key, entry] : records) tallier.add(key, entry);
  tallier.finish();
  report.e0 = report.periodic_classes;
  return report;
}

}  // namespace reinhardt

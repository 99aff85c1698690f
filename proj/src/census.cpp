#include "reinhardt/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <queue>
#include <thread>

#include "json.hpp"

#include "census_internal.hpp"
#include "reinhardt/cyclo.hpp"
#include "reinhardt/errors.hpp"

namespace reinhardt {

namespace fs = std::filesystem;

// ------------------------------------------------------------- formulas

mpz_class fermat_quotient(std::uint64_t p, std::uint64_t a) {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  if (a % p == 0) throw InvalidArgument("p divides the base");
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), a, p - 1);
  power -= 1;
  if (!mpz_divisible_ui_p(power.get_mpz_t(), p)) {
    throw InvariantViolation("Fermat quotient is not integral");
  }
  return power / static_cast<unsigned long>(p);
}

mpz_class e1_formula_2pq(std::uint64_t p, std::uint64_t q) {
  if (p == q) throw InvalidArgument("p and q must be distinct");
  for (auto prime : {p, q}) {
    if (prime % 2 == 0 || !is_prime(prime)) {
      throw InvalidArgument(std::to_string(prime) + " is not an odd prime");
    }
  }
  return fermat_quotient(p, 2) * fermat_quotient(q, 2);
}

namespace {

mpz_class pow2(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return out;
}

}  // namespace

std::optional<std::uint64_t> third_odd_prime(std::uint64_t n, std::uint64_t p, std::uint64_t q) {
  for (auto t : odd_prime_divisors(n)) {
    if (t != p && t != q) return t;
  }
  return std::nullopt;
}

mpz_class sporadic_count_exact(const ConstructionParams& params) {
  const auto n = static_cast<std::uint64_t>(params.n());
  if (third_odd_prime(n, params.p(), params.q())) {
    throw InvalidArgument("n has an odd prime divisor other than p and q; use the lower bound");
  }
  const auto& c = params.composition();
  const auto p = static_cast<unsigned long>(params.p());
  const auto q = static_cast<unsigned long>(params.q());
  return pow2(static_cast<unsigned long>(params.r())) *
         (pow2(static_cast<unsigned long>(c.odd_total()) * (p - 1)) - 1) *
         (pow2(static_cast<unsigned long>(c.even_total()) * (q - 1)) - 1);
}

mpz_class u_bound(const ConstructionParams& params) {
  const auto n = static_cast<std::uint64_t>(params.n());
  const auto t = third_odd_prime(n, params.p(), params.q());
  if (!t) throw InvalidArgument("u_bound needs an odd prime divisor other than p and q");
  const auto& c = params.composition();
  const long m = c.half_count();
  const long p = params.p(), q = params.q();
  const long exponent = 2 * m * p * q + (c.odd_total() - m) * p + (c.even_total() - m) * q;
  mpz_class out;
  mpz_root(out.get_mpz_t(), pow2(static_cast<unsigned long>(exponent)).get_mpz_t(),
           static_cast<unsigned long>(*t));
  return out;
}

mpq_class e1_lower_bound(const ConstructionParams& params) {
  const auto& c = params.composition();
  const int period = composition_period(c);
  long v = 0;
  for (int j = 1; j <= period; ++j) v += c.part(j);
  const long p = params.p(), q = params.q(), r = params.r();
  const auto n = static_cast<std::uint64_t>(params.n());
  const mpz_class u = third_odd_prime(n, params.p(), params.q()) ? u_bound(params) : mpz_class(0);
  const mpq_class main = mpq_class(pow2(static_cast<unsigned long>(r - 2))) *
                         mpq_class(pow2(static_cast<unsigned long>(c.odd_total() * (p - 1))) - 1, p) *
                         mpq_class(pow2(static_cast<unsigned long>(c.even_total() * (q - 1))) - 1, q);
  mpq_class out = mpq_class(v, r) * (main - mpq_class(u, 4 * p * q));
  out.canonicalize();
  return out;
}

std::vector<ConstructionParams> qualifying_params(int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  const auto primes = odd_prime_divisors(static_cast<std::uint64_t>(n));
  std::vector<ConstructionParams> out;
  for (auto p : primes) {
    for (auto q : primes) {
      if (p == q) continue;
      const auto pq = static_cast<int>(p * q);
      if (n % pq != 0 || n / pq < 2) continue;
      for (auto& c : even_compositions(n / pq)) {
        out.emplace_back(static_cast<int>(p), static_cast<int>(q), std::move(c));
      }
    }
  }
  return out;
}

std::uint64_t count_periodic_constructions(const ConstructionParams& params, int d,
                                           bool exclude_block_periods) {
  const int n = params.n();
  const int pr = params.p() * params.r();
  const int qr = params.q() * params.r();
  std::uint64_t count = 0;
  SpecEnumerator(params).run([&](std::uint64_t, std::span<const std::int8_t> coeffs) {
    if (!is_d_periodic(coeffs, n, d)) return;
    if (exclude_block_periods && (is_d_periodic(coeffs, n, pr) || is_d_periodic(coeffs, n, qr))) {
      return;
    }
    ++count;
  });
  return count;
}

// ------------------------------------------------------------- shared helpers

namespace detail {

std::vector<int> prime_periods(int n) {
  std::vector<int> out;
  for (auto b : odd_prime_divisors(static_cast<std::uint64_t>(n))) {
    out.push_back(n / static_cast<int>(b));
  }
  return out;
}

bool any_period(std::span<const std::int8_t> coeffs, int n, std::span<const int> periods) {
  for (int d : periods) {
    if (is_d_periodic(coeffs, n, d)) return true;
  }
  return false;
}

void merge_into(ClassMap& dest, const ClassMap& src) {
  for (const auto& [key, entry] : src) {
    auto& slot = dest[key];
    slot.specs |= entry.specs;
    slot.flags |= entry.flags;
  }
}

Tallier::Tallier(CensusReport& report, bool collect, std::optional<int> exact_largest_part)
    : report_(report),
      collect_(collect),
      exact_largest_part_(exact_largest_part),
      spec_classes_(report.by_spec.size(), 0) {}

void Tallier::add(const CompositionKey& key, const ClassEntry& entry) {
  auto parts = decode_key(key, report_.n);
  const int largest = *std::max_element(parts.begin(), parts.end());
  if (exact_largest_part_ && largest != *exact_largest_part_) return;
  const bool sporadic = entry.flags & kSporadic;
  const bool reciprocal = entry.flags & kReciprocal;
  if (sporadic) {
    ++report_.e1;
    ++report_.e1_by_largest_part[largest];
    if (reciprocal) ++report_.reciprocal_sporadic_classes;
    for (std::size_t s = 0; s < spec_classes_.size() && s < 64; ++s) {
      if ((entry.specs >> s) & 1U) ++spec_classes_[s];
    }
  } else {
    ++report_.periodic_classes;
  }
  if (reciprocal) ++report_.reciprocal_classes;
  if (collect_) report_.classes.push_back({std::move(parts), sporadic, reciprocal});
}

void Tallier::finish() {
  if (report_.by_spec.size() <= 64) {
    for (std::size_t s = 0; s < report_.by_spec.size(); ++s) {
      report_.by_spec[s].sporadic_classes = spec_classes_[s];
    }
  }
  std::sort(report_.classes.begin(), report_.classes.end(),
            [](const ClassRecord& a, const ClassRecord& b) { return a.parts < b.parts; });
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace detail

using detail::ClassEntry;
using detail::ClassMap;

// ------------------------------------------------------------- shard files

namespace {

constexpr char kShardMagic[8] = {'R', 'S', 'H', 'A', 'R', 'D', '0', '1'};
constexpr std::size_t kRecordBytes = 32 + 8 + 1;
constexpr std::size_t kMergeFanIn = 128;

struct ShardHeader {
  std::uint64_t spec = 0;
  std::uint64_t chunk = 0;
  std::uint64_t polynomials = 0;
  std::uint64_t sporadic_polynomials = 0;
  std::uint64_t records = 0;
};

struct Record {
  CompositionKey key;
  ClassEntry entry;
};

void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void write_header(std::ostream& out, const ShardHeader& h) {
  out.write(kShardMagic, sizeof kShardMagic);
  for (auto v : {h.spec, h.chunk, h.polynomials, h.sporadic_polynomials, h.records}) {
    write_u64(out, v);
  }
}

ShardHeader read_header(std::istream& in, const fs::path& path) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kShardMagic)) {
    throw InvalidArgument("not a census shard: " + path.string());
  }
  ShardHeader h;
  h.spec = read_u64(in);
  h.chunk = read_u64(in);
  h.polynomials = read_u64(in);
  h.sporadic_polynomials = read_u64(in);
  h.records = read_u64(in);
  if (!in) throw InvalidArgument("truncated census shard: " + path.string());
  return h;
}

void write_record(std::ostream& out, const Record& r) {
  for (auto w : r.key.words) write_u64(out, w);
  write_u64(out, r.entry.specs);
  out.put(static_cast<char>(r.entry.flags));
}

bool read_record(std::istream& in, Record& r) {
  char buf[kRecordBytes];
  if (!in.read(buf, sizeof buf)) return false;
  std::memcpy(r.key.words.data(), buf, 32);
  std::memcpy(&r.entry.specs, buf + 32, 8);
  r.entry.flags = static_cast<std::uint8_t>(buf[40]);
  return true;
}

// Writes sorted records atomically (temporary file, then rename).
void write_shard(const fs::path& path, ShardHeader header, const ClassMap& classes) {
  std::vector<Record> records;
  records.reserve(classes.size());
  for (const auto& [key, entry] : classes) records.push_back({key, entry});
  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.key < b.key; });
  header.records = records.size();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    write_header(out, header);
    for (const auto& r : records) write_record(out, r);
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

class ShardReader {
 public:
  explicit ShardReader(const fs::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw InvalidArgument("cannot open " + path.string());
    header_ = read_header(in_, path);
    advance();
  }
  bool done() const { return done_; }
  const Record& current() const { return current_; }
  void advance() { done_ = !read_record(in_, current_); }

 private:
  std::ifstream in_;
  ShardHeader header_;
  Record current_;
  bool done_ = false;
};

// k-way merge of sorted runs, combining equal keys.
template <typename Sink>
void merge_runs(const std::vector<fs::path>& runs, Sink&& sink) {
  std::vector<std::unique_ptr<ShardReader>> readers;
  readers.reserve(runs.size());
  for (const auto& path : runs) readers.push_back(std::make_unique<ShardReader>(path));
  auto greater = [&](std::size_t a, std::size_t b) {
    return readers[b]->current().key < readers[a]->current().key;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> heap(greater);
  for (std::size_t i = 0; i < readers.size(); ++i) {
    if (!readers[i]->done()) heap.push(i);
  }
  std::optional<Record> pending;
  while (!heap.empty()) {
    const auto i = heap.top();
    heap.pop();
    const Record& r = readers[i]->current();
    if (pending && pending->key == r.key) {
      pending->entry.specs |= r.entry.specs;
      pending->entry.flags |= r.entry.flags;
    } else {
      if (pending) sink(*pending);
      pending = r;
    }
    readers[i]->advance();
    if (!readers[i]->done()) heap.push(i);
  }
  if (pending) sink(*pending);
}

// Reduces the run list with bounded fan-in, then streams the final merge.
template <typename Sink>
void merge_all(std::vector<fs::path> runs, const fs::path& scratch, Sink&& sink) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  int pass = 0;
  while (runs.size() > kMergeFanIn) {
    std::vector<fs::path> next;
    for (std::size_t start = 0; start < runs.size(); start += kMergeFanIn) {
      const std::vector<fs::path> group(
          runs.begin() + static_cast<std::ptrdiff_t>(start),
          runs.begin() + static_cast<std::ptrdiff_t>(std::min(runs.size(), start + kMergeFanIn)));
      const fs::path out_path =
          scratch / ("pass" + std::to_string(pass) + "-" + std::to_string(next.size()) + ".run");
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      write_header(out, ShardHeader{});
      merge_runs(group, [&](const Record& r) { write_record(out, r); });
      next.push_back(out_path);
    }
    runs = std::move(next);
    ++pass;
  }
  merge_runs(runs, sink);
  fs::remove_all(scratch);
}

std::string shard_name(std::size_t spec, std::uint64_t chunk) {
  return "spec" + std::to_string(spec) + "-chunk" + std::to_string(chunk) + ".shard";
}

// Records n, chunk size and the spec list so that a resume cannot mix runs.
void check_manifest(const fs::path& dir, int n, std::uint64_t chunk_size,
                    const std::vector<ConstructionParams>& specs) {
  nlohmann::json manifest;
  manifest["n"] = n;
  manifest["chunk_size"] = chunk_size;
  manifest["specs"] = nlohmann::json::array();
  for (const auto& s : specs) manifest["specs"].push_back(s.str());
  const fs::path path = dir / "manifest.json";
  if (fs::exists(path)) {
    std::ifstream in(path);
    const auto existing = nlohmann::json::parse(in);
    if (existing != manifest) {
      throw InvalidArgument("checkpoint directory belongs to a different census: " + dir.string());
    }
    return;
  }
  std::ofstream out(path);
  out << manifest.dump(2) << '\n';
}

struct WorkItem {
  std::size_t spec;
  std::uint64_t chunk;
  std::uint64_t first;
  std::uint64_t last;
};

struct SpecCounters {
  std::uint64_t polynomials = 0;
  std::uint64_t sporadic_polynomials = 0;
};

}  // namespace

// ------------------------------------------------------------- construction census

double construction_cost(int n) {
  double total = 0;
  for (const auto& params : qualifying_params(n)) total += std::ldexp(1.0, params.index_bits());
  return total;
}

CensusReport construction_census(int n, const CensusOptions& options) {
  const auto specs = qualifying_params(n);
  if (specs.empty()) {
    throw UnsupportedN("n=" + std::to_string(n) +
                       " has no factorisation p*q*r with distinct odd primes p, q and r >= 2");
  }
  if (n > CompositionKey::kMaxN) {
    throw UnsupportedN("construction census supports n <= " +
                       std::to_string(CompositionKey::kMaxN));
  }
  CensusReport report;
  report.n = n;
  report.mode = "construction";
  report.estimated_cost = construction_cost(n);
  if (report.estimated_cost > options.budget && !options.budget_override) {
    throw BudgetExceeded("construction census for n=" + std::to_string(n) + " needs about " +
                             std::to_string(report.estimated_cost) + " polynomials",
                         report.estimated_cost, options.budget);
  }
  for (const auto& s : specs) report.by_spec.push_back({s, 0, 0, std::nullopt});

  std::vector<std::unique_ptr<SpecEnumerator>> enumerators;
  for (const auto& s : specs) enumerators.push_back(std::make_unique<SpecEnumerator>(s));

  const bool checkpoint = options.checkpoint_dir.has_value();
  const std::uint64_t chunk_size =
      std::max<std::uint64_t>(1, checkpoint ? options.chunk_size
                                            : std::min<std::uint64_t>(options.chunk_size, 1 << 20));
  std::vector<WorkItem> items;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    const auto count = enumerators[si]->count();
    for (std::uint64_t first = 0, chunk = 0; first < count; first += chunk_size, ++chunk) {
      items.push_back({si, chunk, first, std::min(count, first + chunk_size)});
    }
  }
  if (checkpoint) {
    fs::create_directories(*options.checkpoint_dir);
    check_manifest(*options.checkpoint_dir, n, chunk_size, specs);
  }

  const auto periods = detail::prime_periods(n);
  const unsigned workers = detail::resolve_workers(options.workers);
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> new_chunks{0};
  std::atomic<bool> stopped{false};
  std::mutex merge_mutex;
  ClassMap global;
  std::vector<SpecCounters> counters(specs.size());
  std::exception_ptr failure;

  auto work = [&] {
    try {
      ClassMap local;
      std::vector<SpecCounters> local_counters(specs.size());
      Canonicalizer canon;
      while (true) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= items.size()) break;
        const auto& item = items[idx];
        fs::path shard;
        if (checkpoint) {
          shard = *options.checkpoint_dir / shard_name(item.spec, item.chunk);
          if (fs::exists(shard)) continue;
          if (options.max_chunks && new_chunks.fetch_add(1) >= *options.max_chunks) {
            stopped = true;
            break;
          }
        }
        ClassMap chunk_classes;
        ClassMap& target = checkpoint ? chunk_classes : local;
        SpecCounters chunk_counters;
        const std::uint64_t bit = item.spec < 64 ? std::uint64_t{1} << item.spec : 0;
        enumerators[item.spec]->run(
            item.first, item.last, [&](std::uint64_t, std::span<const std::int8_t> coeffs) {
              const auto result = canon.from_coefficients(coeffs, n);
              const bool sporadic = !detail::any_period(coeffs, n, periods);
              auto& entry = target[result.key];
              entry.specs |= bit;
              entry.flags |= (sporadic ? detail::kSporadic : 0) |
                             (result.reciprocal ? detail::kReciprocal : 0);
              ++chunk_counters.polynomials;
              if (sporadic) ++chunk_counters.sporadic_polynomials;
            });
        if (checkpoint) {
          write_shard(shard,
                      {item.spec, item.chunk, chunk_counters.polynomials,
                       chunk_counters.sporadic_polynomials, 0},
                      chunk_classes);
        } else {
          local_counters[item.spec].polynomials += chunk_counters.polynomials;
          local_counters[item.spec].sporadic_polynomials += chunk_counters.sporadic_polynomials;
        }
      }
      if (!checkpoint) {
        std::lock_guard lock(merge_mutex);
        if (global.empty()) {
          global = std::move(local);
        } else {
          detail::merge_into(global, local);
        }
        for (std::size_t s = 0; s < specs.size(); ++s) {
          counters[s].polynomials += local_counters[s].polynomials;
          counters[s].sporadic_polynomials += local_counters[s].sporadic_polynomials;
        }
      }
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      next = items.size();
    }
  };

  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  if (stopped) {
    report.complete = false;
    return report;
  }

  detail::Tallier tallier(report, options.collect_classes, std::nullopt);
  if (checkpoint) {
    std::vector<fs::path> runs;
    for (const auto& item : items) {
      const auto path = *options.checkpoint_dir / shard_name(item.spec, item.chunk);
      std::ifstream in(path, std::ios::binary);
      const auto header = read_header(in, path);
      counters[item.spec].polynomials += header.polynomials;
      counters[item.spec].sporadic_polynomials += header.sporadic_polynomials;
      runs.push_back(path);
    }
    merge_all(runs, *options.checkpoint_dir / "merge-tmp",
              [&](const Record& r) { tallier.add(r.key, r.entry); });
  } else {
    // Sorted so that collected classes and iteration are deterministic.
    std::vector<Record> records;
    records.reserve(global.size());
    for (const auto& [key, entry] : global) records.push_back({key, entry});
    std::sort(records.begin(), records.end(),
              [](const Record& a, const Record& b) { return a.key < b.key; });
    for (const auto& r : records) tallier.add(r.key, r.entry);
  }
  for (std::size_t s = 0; s < specs.size(); ++s) {
    report.by_spec[s].polynomials = counters[s].polynomials;
    report.by_spec[s].sporadic_polynomials = counters[s].sporadic_polynomials;
  }
  tallier.finish();
  return report;
}

std::uint64_t reciprocal_census(int n, const CensusOptions& options) {
  return construction_census(n, options).reciprocal_sporadic_classes;
}

// ------------------------------------------------------------- serialization

std::string report_json(const CensusReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["mode"] = report.mode;
  j["complete"] = report.complete;
  j["E1"] = report.e1;
  j["E0"] = report.e0 ? nlohmann::ordered_json(*report.e0) : nlohmann::ordered_json(nullptr);
  j["largest_part"] = report.largest_part ? nlohmann::ordered_json(*report.largest_part)
                                          : nlohmann::ordered_json(nullptr);
  j["periodic_classes"] = report.periodic_classes;
  j["reciprocal_classes"] = report.reciprocal_classes;
  j["reciprocal_sporadic_classes"] = report.reciprocal_sporadic_classes;
  j["estimated_cost"] = report.estimated_cost;
  auto hist = nlohmann::ordered_json::object();
  for (const auto& [m, count] : report.e1_by_largest_part) hist[std::to_string(m)] = count;
  j["E1_by_largest_part"] = hist;
  auto specs = nlohmann::ordered_json::array();
  for (const auto& s : report.by_spec) {
    nlohmann::ordered_json e;
    e["p"] = s.params.p();
    e["q"] = s.params.q();
    e["r"] = s.params.r();
    e["c"] = s.params.composition().str();
    e["polynomials"] = s.polynomials;
    e["sporadic_polynomials"] = s.sporadic_polynomials;
    e["sporadic_classes"] = s.sporadic_classes ? nlohmann::ordered_json(*s.sporadic_classes)
                                               : nlohmann::ordered_json(nullptr);
    specs.push_back(std::move(e));
  }
  j["by_spec"] = std::move(specs);
  return j.dump();
}

void write_class_list(const CensusReport& report, std::ostream& out) {
  for (const auto& c : report.classes) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["composition"] = OddComposition(c.parts).str();
    j["sporadic"] = c.sporadic;
    j["reciprocal"] = c.reciprocal;
    out << j.dump() << '\n';
  }
}

}  // namespace reinhardt

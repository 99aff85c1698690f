#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"
#include "reinhardt/census.hpp"
#include "reinhardt/classify.hpp"
#include "reinhardt/errors.hpp"

namespace reinhardt {
namespace {

namespace fs = std::filesystem;

CensusOptions with_classes() {
  CensusOptions o;
  o.collect_classes = true;
  return o;
}

std::set<std::vector<int>> sporadic_set(const CensusReport& r) {
  std::set<std::vector<int>> out;
  for (const auto& c : r.classes) {
    if (c.sporadic) out.insert(c.parts);
  }
  return out;
}

TEST(Formulas, FermatQuotient) {
  EXPECT_EQ(fermat_quotient(3, 2), 1);
  EXPECT_EQ(fermat_quotient(5, 2), 3);
  EXPECT_EQ(fermat_quotient(7, 2), 9);
  EXPECT_EQ(fermat_quotient(11, 2), 93);
  EXPECT_EQ(fermat_quotient(5, 3), 16);
}

TEST(Formulas, TwoPQTable) {
  const std::vector<std::tuple<int, int, long>> table{
      {3, 5, 3},        {3, 7, 9},        {3, 11, 93},      {3, 13, 315},     {3, 17, 3855},
      {3, 19, 13797},   {3, 23, 182361},  {5, 7, 27},       {5, 11, 279},     {5, 13, 945},
      {5, 17, 11565},   {5, 19, 41391},   {5, 23, 547083},  {7, 11, 837},     {7, 13, 2835},
      {7, 17, 34695},   {7, 19, 124173},  {11, 13, 29295},  {11, 17, 358515}, {11, 19, 1283121}};
  for (const auto& [p, q, value] : table) {
    EXPECT_EQ(e1_formula_2pq(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q)), value)
        << p << "," << q;
  }
}

TEST(Formulas, ThirdPrimeAndUBound) {
  EXPECT_EQ(third_odd_prime(105, 5, 7), 3u);
  EXPECT_FALSE(third_odd_prime(60, 3, 5));
  EXPECT_EQ(u_bound(ConstructionParams(5, 7, EvenComposition({1, 2}))), 53264340);
  EXPECT_THROW(u_bound(ConstructionParams(3, 5, EvenComposition({1, 1}))), InvalidArgument);
}

TEST(Formulas, SporadicCountMatchesEnumeration) {
  for (int n : {30, 42, 45, 60, 66}) {
    const auto report = construction_census(n);
    for (const auto& t : report.by_spec) {
      EXPECT_EQ(sporadic_count_exact(t.params), t.sporadic_polynomials) << t.params.str();
      EXPECT_EQ(t.polynomials, std::uint64_t{1} << t.params.index_bits());
    }
  }
  EXPECT_THROW(sporadic_count_exact(ConstructionParams(3, 5, EvenComposition({3, 4}))),
               InvalidArgument);
}

TEST(Formulas, LowerBoundBelowSpecTally) {
  for (int n : {30, 45, 60}) {
    const auto report = construction_census(n);
    for (const auto& t : report.by_spec) {
      ASSERT_TRUE(t.sporadic_classes);
      EXPECT_LE(e1_lower_bound(t.params), mpq_class(*t.sporadic_classes)) << t.params.str();
    }
  }
}

TEST(Qualifying, Params) {
  EXPECT_TRUE(qualifying_params(15).empty());
  EXPECT_EQ(qualifying_params(30).size(), 2u);
  EXPECT_EQ(qualifying_params(60).size(), 8u);
  // Ordered pairs of 3, 5, 7 leave r = 7, 5 or 3, with 2^{r-2} even compositions each.
  EXPECT_EQ(qualifying_params(105).size(), 2u * (32u + 8u + 2u));
  EXPECT_THROW(construction_census(15), UnsupportedN);
}

TEST(Census, TwoPQMatchesFormula) {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{3, 5}, {3, 7}, {5, 7}, {3, 11}, {3, 13},
                                                       {3, 17}, {5, 11}, {5, 13}, {7, 11}}) {
    const auto r = construction_census(2 * p * q);
    EXPECT_EQ(r.e1, e1_formula_2pq(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q)))
        << p << "," << q;
  }
}

TEST(Census, Sixty) { EXPECT_EQ(construction_census(60).e1, 4392u); }

TEST(Census, DeterministicAcrossWorkerCounts) {
  CensusOptions one = with_classes();
  one.workers = 1;
  CensusOptions three = with_classes();
  three.workers = 3;
  const auto a = construction_census(45, one);
  const auto b = construction_census(45, three);
  EXPECT_EQ(a.e1, b.e1);
  EXPECT_EQ(a.classes, b.classes);
  EXPECT_EQ(report_json(a), report_json(b));
}

TEST(Oracle, Thirty) {
  const auto brute = brute_force_census(30, with_classes());
  EXPECT_EQ(brute.e1, 3u);
  EXPECT_EQ(brute.e0, 38u);
  const auto built = construction_census(30, with_classes());
  EXPECT_EQ(sporadic_set(built), sporadic_set(brute));
  std::set<std::vector<int>> drawn;
  for (const char* text : {"[7,6,1,1,1,1,2,1,1,1,1,1,4,1,1]", "[6,3,1,2,1,1,1,1,2,3,1,1,4,1,2]",
                           "[5,4,1,2,1,1,4,3,1,1,2,1,1,1,2]"}) {
    const auto c = canonicalize(OddComposition::parse(text));
    drawn.emplace(c.parts().begin(), c.parts().end());
  }
  EXPECT_EQ(sporadic_set(brute), drawn);
}

TEST(Oracle, FortyFive) {
  const auto brute = brute_force_census(45, with_classes());
  const auto built = construction_census(45, with_classes());
  EXPECT_EQ(brute.e1, 144u);
  EXPECT_EQ(built.e1, brute.e1);
  EXPECT_EQ(sporadic_set(built), sporadic_set(brute));
  EXPECT_EQ(built.reciprocal_sporadic_classes, brute.reciprocal_sporadic_classes);
}

TEST(Oracle, LargestPartSplit) {
  const auto all = brute_force_census(30);
  std::uint64_t sum = 0;
  for (const auto& [m, count] : all.e1_by_largest_part) {
    sum += count;
    CensusOptions o;
    o.largest_part = m;
    const auto part = brute_force_census(30, o);
    EXPECT_EQ(part.e1, count) << m;
  }
  EXPECT_EQ(sum, all.e1);
}

TEST(Oracle, BudgetRefusal) {
  EXPECT_THROW(brute_force_census(105), BudgetExceeded);
  CensusOptions tiny;
  tiny.budget = 10;
  EXPECT_THROW(construction_census(30, tiny), BudgetExceeded);
}

TEST(Reciprocal, FortyFive) { EXPECT_EQ(reciprocal_census(45), 48u); }

TEST(Periodic, NoThirtyFivePeriodic) {
  const ConstructionParams params(5, 7, EvenComposition({1, 2}));
  EXPECT_EQ(count_periodic_constructions(params, 35, true), 0u);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("reinhardt-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST(Checkpoint, ResumeAfterInterruption) {
  TempDir dir;
  CensusOptions o = with_classes();
  o.checkpoint_dir = dir.path;
  o.chunk_size = 1 << 12;
  o.max_chunks = 7;
  const auto partial = construction_census(60, o);
  EXPECT_FALSE(partial.complete);
  o.max_chunks.reset();
  const auto full = construction_census(60, o);
  EXPECT_TRUE(full.complete);
  EXPECT_EQ(full.e1, 4392u);
  const auto fresh = construction_census(60, with_classes());
  EXPECT_EQ(full.classes, fresh.classes);
  // A finished directory is reused without recomputation.
  const auto again = construction_census(60, o);
  EXPECT_EQ(again.e1, 4392u);
  // Different chunking cannot be mixed into the same directory.
  o.chunk_size = 1 << 13;
  EXPECT_THROW(construction_census(60, o), InvalidArgument);
}

TEST(Output, ReportAndClassList) {
  const auto r = construction_census(30, with_classes());
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j.at("n"), 30);
  EXPECT_EQ(j.at("E1"), 3);
  EXPECT_TRUE(j.at("E0").is_null());
  std::ostringstream out;
  write_class_list(r, out);
  std::istringstream in(out.str());
  std::string line;
  int sporadic = 0;
  while (std::getline(in, line)) {
    const auto rec = nlohmann::json::parse(line);
    EXPECT_EQ(rec.at("n"), 30);
    sporadic += rec.at("sporadic").get<bool>();
  }
  EXPECT_EQ(sporadic, 3);
}

}  // namespace
}  // namespace reinhardt

#pragma once

// Command-line front end: construct, census, render and verify.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace reinhardt::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kExpectationFailed = 2,
  kBudgetRefused = 3,
};

// Environment variable holding the default worker count.
inline constexpr const char* kWorkersEnv = "REINHARDT_WORKERS";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One line of `construct` output.
struct ConstructionRecord {
  int n = 0;
  int p = 0;
  int q = 0;
  std::string c;
  int s = 1;
  std::uint64_t index = 0;
  std::string coefficients;
  std::string composition;  // canonical
  bool sporadic = false;
  std::optional<int> period;
  bool reciprocal = false;

  friend bool operator==(const ConstructionRecord&, const ConstructionRecord&) = default;
};

std::string to_jsonl(const ConstructionRecord& record);
ConstructionRecord parse_record(std::string_view line);

}  // namespace reinhardt::cli

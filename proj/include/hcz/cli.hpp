#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hcz::cli {

enum class Format { Text, Json };

struct JobSpec {
  std::string command;  // hh, hc, rel-hc, gr-check, k-groups, reproduce-paper
  std::string ring;     // zmod:p^n, adic:p^n (gr-check) or a file path
  std::optional<int> max_degree;
  bool allow_unverified = false;
  int max_q = 3;
  long p = 0;  // k-groups
  int n = 0;
  std::vector<long> p_list{3, 5, 7};  // reproduce-paper
  std::vector<int> n_list{1, 2, 3};
  unsigned threads = 0;  // 0: hardware concurrency
  Format format = Format::Text;
};

enum Exit : int { Ok = 0, Failed = 1, InvalidArguments = 2, RangeError = 3, ParseError = 4 };

inline constexpr const char* kSchemaVersion = "hcz.report/1";

int run(const JobSpec& spec, std::ostream& out, std::ostream& err);

// Parses argv (without the program name) and runs the job.
int run_command_line(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcz::cli

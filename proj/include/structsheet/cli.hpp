#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "structsheet/chart.hpp"

namespace structsheet::cli {

enum class Command { Restructure, Audit, Eval, Diff };
enum class ReportFormat { Text, Json };

struct RunConfig {
  Command command = Command::Audit;
  std::vector<std::string> input_paths;
  std::string output_path;
  std::optional<std::string> overview_path;
  InputGrouping input_grouping = InputGrouping::Single;
  bool empty_as_zero = false;
  ReportFormat report_format = ReportFormat::Text;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDifferences = 1;
inline constexpr int kInputError = 2;
inline constexpr int kCycle = 3;
inline constexpr int kNotPreserved = 4;

int cmd_restructure(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv (argv[0] is the program name) and dispatches.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace structsheet::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twosided/core.hpp"

namespace twosided::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // infeasible instance or failed check
inline constexpr int kExitInput = 2;     // unreadable or malformed input
inline constexpr int kExitBudget = 3;    // budget below the minimum energy

// Malformed instance file; the message names the offending field.
class InputError : public Error {
 public:
  using Error::Error;
};

struct CostSpec {
  std::string kind = "inverse";  // "inverse" or "shannon"
  double bits = 1.0;             // shannon only

  CostModel model() const;
};

struct InstanceFile {
  int schema_version = 1;
  ProblemInstance instance;
  std::optional<CostSpec> cost;
  std::optional<double> w_max;
};

InstanceFile parse_instance(const std::string& json_text);
InstanceFile load_instance(const std::string& path);
// Canonical JSON: fixed key order, "inf" for unbounded delays.
std::string serialize_instance(const InstanceFile& file);

struct ScheduleOptions {
  std::string objective = "energy";  // "energy" or "time"
  bool oracle_check = false;
  std::string format = "json";       // "json" or "csv"
  std::optional<std::string> out_path;
};

struct SweepOptionsCli {
  std::optional<std::string> figure;  // "fig6" or "fig7"
  std::string objective = "energy";
  std::size_t packets = 5;
  double reference_time = 20.0;
  double window = 3.0;
  std::vector<double> axis;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int threads = 0;
  bool serial = false;
};

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_schedule(const std::string& path, const ScheduleOptions& options, std::ostream& out,
                 std::ostream& err);
int cmd_sweep(const SweepOptionsCli& options, std::ostream& out, std::ostream& err);

// Full command line; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace twosided::cli

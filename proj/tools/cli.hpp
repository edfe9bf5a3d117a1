#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "saft/expansion.hpp"

namespace saft::cli {

/// Bad command line: unknown flag, missing argument, out-of-range number.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

struct RunConfig {
  std::string command;
  std::string pair_path;
  std::optional<int> level;
  std::optional<int> reference_level;
  std::string windows;     // schedule text, empty = natural schedule
  std::string thresholds;  // schedule text, empty = derived from the support
  std::optional<double> s;
  int resolution = 1024;
  int max_iters = 200;
  std::string format = "pbm";
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 100000;
  std::uint64_t burn_in = 64;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  std::optional<double> cantor_n;
  std::optional<double> cantor_d;
  std::string cantor_op;
  std::vector<double> coeffs;
  int m_max = 12;
  std::uint64_t budget = kDefaultMassBudget;
  std::string output;  // empty or "-" = standard output
};

/// Parses and validates; throws UsageError. Returns nullopt when help or the
/// version was requested (and already printed to `out`).
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Throws UsageError for any numeric argument out of range or a flag missing
/// for the chosen command.
void validate(const RunConfig& config);

/// Exit status: 0 success, 1 domain error (reported on `err`).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace saft::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlab::cli {

enum class Command {
  Epr,
  EprSweep,
  Szilard,
  CtcDistinguish,
  CtcBb84,
  CtcSolve,
  CtcGrandfather,
  AuditLocality,
};

enum class Format { Table, Json, Csv };

std::string_view to_string(Command c) noexcept;
std::string_view to_string(Format f) noexcept;

struct CliInvocation {
  Command command = Command::Epr;
  /// Options given on the command line, keyed without the leading dashes.
  /// Switches map to "true".
  std::map<std::string, std::string> flags;
  Format format = Format::Table;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
};

/// Bad command line. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `--help` anywhere on the command line; carries the rendered help.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
CliInvocation parse(std::span<const std::string> args);

/// Runs a parsed invocation. Results go to `out`, diagnostics to `err`;
/// `in` is read only by `--prompt`.
int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err, std::istream& in);

/// parse + execute with the exit-code contract applied.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err, std::istream& in);
int run(int argc, char** argv, std::ostream& out, std::ostream& err, std::istream& in);

/// printf("%.*g") without negative zero.
std::string format_number(double x, int significant_digits);

}  // namespace qlab::cli

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace xling::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitConvergence = 4;

/// Runs one subcommand. args[0] is the program name. Every subcommand accepts
/// --config FILE with "key = value" lines naming long options; options given on
/// the command line take precedence over the file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Expands --config FILE into --key=value arguments placed right after the
/// subcommand, skipping keys already present on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

/// One table cell: a rounded human form and an exact machine form.
struct Cell {
  std::string human;
  std::string machine;
};

Cell text(std::string s);
Cell number(double v, int digits = 4);
Cell integer(long long v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  /// Space-padded columns, first column left-aligned, the rest right-aligned.
  void print(std::ostream& os) const;
  std::string csv() const;
};

}  // namespace xling::cli

#pragma once

// Subcommands of the esqpt tool. Each command maps a RunConfig to a Table; the
// table's metadata echoes the full config, so from_metadata(table.meta)
// reproduces the run.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esqpt/criticality.hpp"
#include "esqpt/io.hpp"
#include "esqpt/model.hpp"

namespace esqpt::cli {

inline constexpr std::string_view kCommands[] = {"spectrum", "le",     "le-dist", "avg-le", "work",
                                                 "work-scaling", "spectral", "pr", "dos"};

struct RunConfig {
  std::string command;
  int n_spins = 400;
  double alpha = 0.48;
  double delta_alpha = 0.01;
  std::optional<std::size_t> ini;  // ladder level; empty = critical
  bool ini_given = false;          // --ini on the command line (single-point mode without a grid)
  Parity parity = Parity::even;
  double t_max = 5000.0;
  std::size_t samples = 200000;
  std::optional<std::size_t> bins;  // default 50, 51 for dos
  std::optional<AlphaGrid> grid;
  std::vector<int> n_set{200, 300, 400, 500, 600, 800};
  double broadening = 0.0;
  Kappa2Window window{};
  std::string simd;  // backend used for the numbers; empty = active backend

  std::size_t bin_count() const { return bins ? *bins : (command == "dos" ? 51 : 50); }
};

// Throws std::invalid_argument describing the first violated precondition.
void validate(const RunConfig& c);

std::optional<std::size_t> parse_ini(std::string_view s);  // "critical" -> empty
std::string ini_text(const std::optional<std::size_t>& ini);
std::vector<int> parse_n_set(std::string_view s);
std::string n_set_text(const std::vector<int>& ns);

Metadata to_metadata(const RunConfig& c);
RunConfig from_metadata(const Metadata& meta);

// Runs the command. The SIMD backend named in the config (if any) is
// activated first.
Table run_command(const RunConfig& c, unsigned jobs = 0);

}  // namespace esqpt::cli

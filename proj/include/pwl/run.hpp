#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pwl/config.hpp"

namespace pwl {

struct RunOptions {
  std::string command;
  std::string out;  // artifact path; empty = print summary only
  int threads = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

// Dispatches one subcommand, writes declared artifacts, prints a one-line
// summary per result to `out`. Exit status: 0 ok, 1 operation error,
// 2 configuration error.
int run_command(const RunConfig& cfg, const RunOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace pwl

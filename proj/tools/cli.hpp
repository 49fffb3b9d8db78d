#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "taulab/emit.hpp"

namespace taulab::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kCapacityError = 2,
  kVerificationFailed = 3,
  kUsage = 64,
};

struct Config {
  natural sieve_limit = natural{1} << 20;
  double beta = 2.0;
  double c = 0.25;
  double theta = kDefaultTheta;
  std::uint64_t seed = kDefaultSplitSeed;
  Format output_format = Format::Table;
  unsigned threads = 0;  // 0: all cores

  /// Throws DomainError on a field outside its range.
  void validate() const;
};

/// Applies key=value lines ('#' starts a comment) onto cfg.
void load_config_file(const std::filesystem::path& path, Config& cfg);

/// Runs one command line. argv[0] is the program name.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace taulab::cli

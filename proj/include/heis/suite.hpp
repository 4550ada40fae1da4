#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heis/config.hpp"

namespace heis {

/// One emitted artifact of a reproduce-all run.
struct SuiteArtifact {
  std::string file;    // name relative to the output directory
  std::string family;  // check family the file belongs to
  int checks = 0;      // verify reports inside (0 for CSV tables)
  int failures = 0;
  double wall_ms = 0.0;
};

struct SuiteResult {
  std::vector<SuiteArtifact> artifacts;
  int checks_run = 0;
  int checks_failed = 0;
  std::uint64_t config_hash = 0;
  double wall_ms = 0.0;
  std::string manifest_path;
};

/// Runs the full verification suite in dependency order (formula oracles
/// first, then transport, then the set and density inequality families),
/// writing one JSON report file per family plus CSV plot tables and a
/// manifest.  Failures never abort the run; they are counted and reflected
/// in the manifest.  All randomness derives from `seed`.  `overrides` may
/// replace documented sample-size/grid parameters (unknown keys rejected);
/// the manifest's config hash covers the effective parameter set, so any
/// change to it changes the hash.  Wall-time fields are the only
/// nondeterministic bytes in the outputs.
SuiteResult reproduce_all(const std::string& outdir, std::uint64_t seed,
                          const Config* overrides = nullptr);

} // namespace heis

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "scriptid/gmm.hpp"

namespace scriptid {

// All knobs the command-line surface exposes. Every run is a pure function
// of this struct; the seed is the only source of randomness.
struct RunConfig {
  int side = 64;
  int order = 128;
  std::uint64_t seed = 42;
  double rel_tol = 1e-6;
  int max_iter = 200;
  double variance_floor = 1e-4;
  int per_class = 200;
  std::filesystem::path data;
  std::filesystem::path model;
  std::filesystem::path out;
  std::filesystem::path manifest;
  std::vector<int> orders = {2, 4, 8, 16, 32, 64, 128};

  EmOptions em_options() const { return {max_iter, rel_tol, variance_floor}; }
  void check() const;  // throws UsageError
};

// Each command validates the config, runs the pipeline and throws
// scriptid::Error on failure; the binary maps exceptions to exit codes.
void run_synth(const RunConfig& config, std::ostream& log);
void run_features(const RunConfig& config, const std::filesystem::path& image,
                  std::ostream& out);
void run_train(const RunConfig& config, std::ostream& log);
void run_classify(const RunConfig& config, const std::filesystem::path& image,
                  std::ostream& out);
void run_evaluate(const RunConfig& config, std::ostream& out);
void run_sweep(const RunConfig& config, std::ostream& out);

}  // namespace scriptid

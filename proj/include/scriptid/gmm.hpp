#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scriptid/errors.hpp"

namespace scriptid {

// Diagonal-covariance Gaussian mixture: weights on the simplex, one mean
// and one variance vector per component. Variances are kept at or above
// the configured floor by every operation that produces a model.
struct GmmModel {
  int order = 0;  // number of mixture components
  int dim = 0;    // feature dimension
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;

  bool shape_ok() const;
};

struct FitReport {
  int iterations = 0;  // M-steps performed
  std::vector<double> log_likelihood_trace;  // total log-likelihood per EM sweep
  bool converged = false;
};

struct EmOptions {
  int max_iter = 200;
  double rel_tol = 1e-6;
  double variance_floor = 1e-4;
};

// log p(y | model), evaluated with log-sum-exp; never NaN/Inf for finite
// inputs on a valid model.
double log_density(const GmmModel& model, std::span<const double> y);

// k-means++ seeding plus Lloyd iterations to a fixed point (or 100 rounds),
// then per-cluster moments. Deterministic for a fixed seed.
GmmModel kmeans_init(const std::vector<std::vector<double>>& data, int m,
                     std::uint64_t seed, double variance_floor = 1e-4);

// Expectation-maximization in the log domain. Stops when the relative
// improvement of the total log-likelihood drops below rel_tol.
std::pair<GmmModel, FitReport> em_fit(const std::vector<std::vector<double>>& data,
                                      const GmmModel& init,
                                      const EmOptions& opts = {});

// (1/T) sum_t log p(y_t | model).
double avg_log_likelihood(const GmmModel& model,
                          const std::vector<std::vector<double>>& frames);

// Versioned JSON persistence. Loading rejects unknown format versions.
nlohmann::json gmm_to_json(const GmmModel& model);
GmmModel gmm_from_json(const nlohmann::json& j);
void save_gmm(const GmmModel& model, const std::filesystem::path& path);
GmmModel load_gmm(const std::filesystem::path& path);

}  // namespace scriptid

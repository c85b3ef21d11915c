#include "scriptid/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "scriptid/rng.hpp"

namespace scriptid {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kWeightTol = 1e-9;
constexpr double kDeadMass = 1e-10;

double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

double log_gaussian(std::span<const double> y, const std::vector<double>& mean,
                    const std::vector<double>& var) {
  double quad = 0.0, log_det = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double d = y[j] - mean[j];
    quad += d * d / var[j];
    log_det += std::log(var[j]);
  }
  return -0.5 * (static_cast<double>(y.size()) * kLog2Pi + log_det + quad);
}

void check_data(const std::vector<std::vector<double>>& data, int dim, const char* who) {
  for (const auto& v : data)
    if (static_cast<int>(v.size()) != dim)
      throw DimensionMismatch(std::string(who) + ": vector dimension mismatch");
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

}  // namespace

bool GmmModel::shape_ok() const {
  if (order < 1 || dim < 1) return false;
  if (static_cast<int>(weights.size()) != order) return false;
  if (static_cast<int>(means.size()) != order) return false;
  if (static_cast<int>(variances.size()) != order) return false;
  for (int i = 0; i < order; ++i) {
    if (static_cast<int>(means[i].size()) != dim) return false;
    if (static_cast<int>(variances[i].size()) != dim) return false;
  }
  return true;
}

double log_density(const GmmModel& model, std::span<const double> y) {
  if (static_cast<int>(y.size()) != model.dim)
    throw DimensionMismatch("log_density: vector dimension mismatch");
  std::vector<double> terms(model.order);
  for (int i = 0; i < model.order; ++i) {
    terms[i] = model.weights[i] > 0.0
                   ? std::log(model.weights[i]) + log_gaussian(y, model.means[i], model.variances[i])
                   : -std::numeric_limits<double>::infinity();
  }
  return log_sum_exp(terms);
}

GmmModel kmeans_init(const std::vector<std::vector<double>>& data, int m,
                     std::uint64_t seed, double variance_floor) {
  const std::size_t t_count = data.size();
  if (m < 1) throw TooFewPoints("kmeans_init: component count must be >= 1");
  if (t_count < static_cast<std::size_t>(m))
    throw TooFewPoints("kmeans_init: fewer data points than components");
  const int dim = static_cast<int>(data.front().size());
  if (dim < 1) throw DimensionMismatch("kmeans_init: empty vectors");
  check_data(data, dim, "kmeans_init");

  Rng rng(seed);

  // k-means++ seeding.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(m);
  centroids.push_back(data[rng.index(t_count)]);
  std::vector<double> d2(t_count);
  for (std::size_t t = 0; t < t_count; ++t) d2[t] = sq_dist(data[t], centroids[0]);
  while (static_cast<int>(centroids.size()) < m) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.index(t_count);  // duplicates exhausted the distinct points
    } else {
      double r = rng.uniform() * total;
      pick = t_count - 1;
      for (std::size_t t = 0; t < t_count; ++t) {
        r -= d2[t];
        if (r <= 0.0) {
          pick = t;
          break;
        }
      }
    }
    centroids.push_back(data[pick]);
    for (std::size_t t = 0; t < t_count; ++t)
      d2[t] = std::min(d2[t], sq_dist(data[t], centroids.back()));
  }

  // Lloyd iterations; ties and empty clusters resolved by lowest index.
  std::vector<int> assign(t_count, -1);
  for (int round = 0; round < 100; ++round) {
    bool changed = false;
    for (std::size_t t = 0; t < t_count; ++t) {
      int best = 0;
      double best_d = sq_dist(data[t], centroids[0]);
      for (int i = 1; i < m; ++i) {
        const double d = sq_dist(data[t], centroids[i]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      if (assign[t] != best) {
        assign[t] = best;
        changed = true;
      }
    }
    if (!changed && round > 0) break;

    std::vector<std::size_t> counts(m, 0);
    for (int i = 0; i < m; ++i) std::fill(centroids[i].begin(), centroids[i].end(), 0.0);
    for (std::size_t t = 0; t < t_count; ++t) {
      ++counts[assign[t]];
      for (int j = 0; j < dim; ++j) centroids[assign[t]][j] += data[t][j];
    }
    std::vector<bool> taken(t_count, false);
    for (int i = 0; i < m; ++i) {
      if (counts[i] > 0) {
        for (int j = 0; j < dim; ++j) centroids[i][j] /= static_cast<double>(counts[i]);
      } else {
        // Relocate an empty cluster to the point farthest from its centroid.
        std::size_t far_t = 0;
        double far_d = -1.0;
        for (std::size_t t = 0; t < t_count; ++t) {
          if (taken[t]) continue;
          const double d = sq_dist(data[t], centroids[assign[t]]);
          if (d > far_d) {
            far_d = d;
            far_t = t;
          }
        }
        taken[far_t] = true;
        centroids[i] = data[far_t];
      }
    }
  }

  GmmModel model;
  model.order = m;
  model.dim = dim;
  model.weights.assign(m, 0.0);
  model.means = centroids;
  model.variances.assign(m, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(m, 0);
  for (std::size_t t = 0; t < t_count; ++t) ++counts[assign[t]];
  for (int i = 0; i < m; ++i)
    model.weights[i] = static_cast<double>(counts[i]) / static_cast<double>(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    const int i = assign[t];
    for (int j = 0; j < dim; ++j) {
      const double d = data[t][j] - model.means[i][j];
      model.variances[i][j] += d * d;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < dim; ++j) {
      if (counts[i] > 0) model.variances[i][j] /= static_cast<double>(counts[i]);
      model.variances[i][j] = std::max(model.variances[i][j], variance_floor);
    }
  return model;
}

std::pair<GmmModel, FitReport> em_fit(const std::vector<std::vector<double>>& data,
                                      const GmmModel& init, const EmOptions& opts) {
  if (data.empty()) throw EmptyData("em_fit: no data");
  if (!init.shape_ok()) throw Error("em_fit: malformed initial model");
  check_data(data, init.dim, "em_fit");

  const std::size_t t_count = data.size();
  const int m = init.order;
  const int dim = init.dim;

  GmmModel model = init;
  for (auto& var : model.variances)
    for (double& v : var) v = std::max(v, opts.variance_floor);

  // Global per-dimension variance, used when rescuing starved components.
  std::vector<double> global_mean(dim, 0.0), global_var(dim, 0.0);
  for (const auto& y : data)
    for (int j = 0; j < dim; ++j) global_mean[j] += y[j];
  for (int j = 0; j < dim; ++j) global_mean[j] /= static_cast<double>(t_count);
  for (const auto& y : data)
    for (int j = 0; j < dim; ++j) {
      const double d = y[j] - global_mean[j];
      global_var[j] += d * d;
    }
  for (int j = 0; j < dim; ++j)
    global_var[j] = std::max(global_var[j] / static_cast<double>(t_count), opts.variance_floor);

  FitReport report;
  std::vector<double> resp(t_count * static_cast<std::size_t>(m));
  std::vector<double> frame_ll(t_count);
  std::vector<double> terms(m);
  std::vector<double> log_w(m);
  double prev_ll = 0.0;
  int m_steps = 0;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // E-step.
    for (int i = 0; i < m; ++i)
      log_w[i] = model.weights[i] > 0.0 ? std::log(model.weights[i])
                                        : -std::numeric_limits<double>::infinity();
    double total_ll = 0.0;
    for (std::size_t t = 0; t < t_count; ++t) {
      for (int i = 0; i < m; ++i)
        terms[i] = log_w[i] + log_gaussian(data[t], model.means[i], model.variances[i]);
      const double lse = log_sum_exp(terms);
      frame_ll[t] = lse;
      total_ll += lse;
      for (int i = 0; i < m; ++i)
        resp[t * m + i] = std::isfinite(terms[i]) ? std::exp(terms[i] - lse) : 0.0;
    }
    report.log_likelihood_trace.push_back(total_ll);

    if (iter > 0) {
      const double improvement = total_ll - prev_ll;
      if (improvement < opts.rel_tol * std::max(std::abs(prev_ll), 1.0)) {
        report.converged = true;
        break;
      }
    }
    prev_ll = total_ll;

    // M-step.
    std::vector<int> dead;
    for (int i = 0; i < m; ++i) {
      double mass = 0.0;
      for (std::size_t t = 0; t < t_count; ++t) mass += resp[t * m + i];
      if (mass < kDeadMass) {
        dead.push_back(i);
        continue;
      }
      model.weights[i] = mass / static_cast<double>(t_count);
      auto& mean = model.means[i];
      auto& var = model.variances[i];
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t t = 0; t < t_count; ++t) {
        const double r = resp[t * m + i];
        for (int j = 0; j < dim; ++j) mean[j] += r * data[t][j];
      }
      for (int j = 0; j < dim; ++j) mean[j] /= mass;
      std::fill(var.begin(), var.end(), 0.0);
      for (std::size_t t = 0; t < t_count; ++t) {
        const double r = resp[t * m + i];
        for (int j = 0; j < dim; ++j) {
          const double d = data[t][j] - mean[j];
          var[j] += r * d * d;
        }
      }
      for (int j = 0; j < dim; ++j)
        var[j] = std::max(var[j] / mass, opts.variance_floor);
    }

    if (!dead.empty()) {
      // Starved components restart at the worst-explained frames with the
      // global spread and one frame's worth of weight.
      std::vector<std::size_t> order(t_count);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return frame_ll[a] < frame_ll[b];
      });
      for (std::size_t k = 0; k < dead.size(); ++k) {
        const int i = dead[k];
        model.means[i] = data[order[k % t_count]];
        model.variances[i] = global_var;
        model.weights[i] = 1.0 / static_cast<double>(t_count);
      }
      const double w_sum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
      for (double& w : model.weights) w /= w_sum;
    }
    ++m_steps;
  }

  report.iterations = m_steps;
  return {std::move(model), std::move(report)};
}

double avg_log_likelihood(const GmmModel& model,
                          const std::vector<std::vector<double>>& frames) {
  if (frames.empty()) throw EmptyFrames("avg_log_likelihood: no frames");
  double total = 0.0;
  for (const auto& y : frames) total += log_density(model, y);
  return total / static_cast<double>(frames.size());
}

nlohmann::json gmm_to_json(const GmmModel& model) {
  return nlohmann::json{{"format_version", 1},
                        {"dim", model.dim},
                        {"order", model.order},
                        {"weights", model.weights},
                        {"means", model.means},
                        {"variances", model.variances}};
}

GmmModel gmm_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("format_version"))
    throw ModelFormatError("model JSON: missing format_version");
  if (j.at("format_version") != 1)
    throw ModelFormatError("model JSON: unknown format_version");
  GmmModel model;
  try {
    model.dim = j.at("dim").get<int>();
    model.order = j.at("order").get<int>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.means = j.at("means").get<std::vector<std::vector<double>>>();
    model.variances = j.at("variances").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("model JSON: ") + e.what());
  }
  if (!model.shape_ok()) throw ModelFormatError("model JSON: inconsistent shapes");
  const double w_sum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
  if (std::abs(w_sum - 1.0) > kWeightTol)
    throw ModelFormatError("model JSON: weights do not sum to 1");
  for (const auto& var : model.variances)
    for (double v : var)
      if (!(v > 0.0)) throw ModelFormatError("model JSON: non-positive variance");
  return model;
}

void save_gmm(const GmmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path.string());
  out << gmm_to_json(model).dump(2) << "\n";
  if (!out) throw Error("failed writing model file: " + path.string());
}

GmmModel load_gmm(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open model file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError("model JSON parse error in " + path.string() + ": " + e.what());
  }
  return gmm_from_json(j);
}

}  // namespace scriptid

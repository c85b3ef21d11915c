#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <utility>

#include "scriptid/gmm.hpp"
#include "support/oracles.hpp"

using namespace scriptid;

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

GmmModel single(const std::vector<double>& mean, const std::vector<double>& var) {
  GmmModel m;
  m.order = 1;
  m.dim = static_cast<int>(mean.size());
  m.weights = {1.0};
  m.means = {mean};
  m.variances = {var};
  return m;
}

}  // namespace

TEST_CASE("log_density of a 2-D standard normal at its mean") {
  const GmmModel m = single({0, 0}, {1, 1});
  CHECK(log_density(m, std::vector<double>{0, 0}) ==
        doctest::Approx(-kLog2Pi).epsilon(1e-12));
}

TEST_CASE("duplicated components with split weights match a single component") {
  const GmmModel one = single({0.5, -1}, {2, 0.3});
  GmmModel two = one;
  two.order = 2;
  two.weights = {0.3, 0.7};
  two.means = {one.means[0], one.means[0]};
  two.variances = {one.variances[0], one.variances[0]};
  const std::vector<double> y{0.2, 0.1};
  CHECK(log_density(two, y) == doctest::Approx(log_density(one, y)).epsilon(1e-12));
}

TEST_CASE("log_density survives terms that underflow naive arithmetic") {
  // Choose means so each component's log density at y=0 is exactly -1000.
  const double mu = std::sqrt(2000.0 - kLog2Pi);
  GmmModel m;
  m.order = 2;
  m.dim = 1;
  m.weights = {0.5, 0.5};
  m.means = {{mu}, {-mu}};
  m.variances = {{1.0}, {1.0}};
  const double ld = log_density(m, std::vector<double>{0.0});
  CHECK(std::isfinite(ld));
  CHECK(ld == doctest::Approx(-1000.0).epsilon(1e-12));
}

TEST_CASE("log_density rejects wrong dimensions") {
  const GmmModel m = single({0, 0}, {1, 1});
  CHECK_THROWS_AS(log_density(m, std::vector<double>{1, 2, 3}), DimensionMismatch);
}

TEST_CASE("log_density is finite on random valid inputs") {
  std::mt19937 rng(31);
  for (int i = 0; i < 30; ++i) {
    const int dim = 1 + static_cast<int>(rng() % 6);
    const auto data = testing::random_dataset(rng, 20, dim);
    const GmmModel m = kmeans_init(data, 1 + static_cast<int>(rng() % 3), rng());
    for (const auto& y : data) CHECK(std::isfinite(log_density(m, y)));
  }
}

TEST_CASE("kmeans_init with one component returns the centroid") {
  const std::vector<std::vector<double>> data{{0, 4}, {2, 0}, {4, 2}};
  const GmmModel m = kmeans_init(data, 1, 7);
  REQUIRE(m.order == 1);
  CHECK(m.weights[0] == 1.0);
  CHECK(m.means[0][0] == doctest::Approx(2.0));
  CHECK(m.means[0][1] == doctest::Approx(2.0));
}

TEST_CASE("kmeans_init with m distinct points pins each as a centroid") {
  const std::vector<std::vector<double>> data{{0, 0}, {10, 0}, {0, 10}, {10, 10}};
  const GmmModel m = kmeans_init(data, 4, 99);
  std::multiset<std::pair<double, double>> got, want;
  for (int i = 0; i < 4; ++i) {
    got.emplace(m.means[i][0], m.means[i][1]);
    want.emplace(data[i][0], data[i][1]);
    CHECK(m.weights[i] == doctest::Approx(0.25));
    CHECK(m.variances[i][0] == 1e-4);  // floored: single-point cluster
  }
  CHECK(got == want);
}

TEST_CASE("kmeans_init is deterministic for a fixed seed") {
  std::mt19937 rng(17);
  const auto data = testing::random_dataset(rng, 60, 5);
  const GmmModel a = kmeans_init(data, 6, 12345);
  const GmmModel b = kmeans_init(data, 6, 12345);
  CHECK(a.weights == b.weights);
  CHECK(a.means == b.means);
  CHECK(a.variances == b.variances);
}

TEST_CASE("kmeans_init survives duplicate-only data via the variance floor") {
  const std::vector<std::vector<double>> data(6, std::vector<double>{2.0, -1.0});
  const GmmModel m = kmeans_init(data, 3, 13);
  double wsum = 0;
  for (double w : m.weights) {
    CHECK(w >= 0.0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& var : m.variances)
    for (double v : var) CHECK(v >= 1e-4);

  // EM on the same degenerate data stays finite
  const auto [fitted, report] = em_fit(data, m);
  for (const auto& y : data) CHECK(std::isfinite(log_density(fitted, y)));
}

TEST_CASE("kmeans_init rejects too few points") {
  const std::vector<std::vector<double>> data{{0}, {1}};
  CHECK_THROWS_AS(kmeans_init(data, 3, 1), TooFewPoints);
  CHECK_THROWS_AS(kmeans_init(data, 0, 1), TooFewPoints);
}

TEST_CASE("em_fit with one component reaches the closed-form MLE in one M-step") {
  const std::vector<std::vector<double>> data{{0.0}, {2.0}};
  const auto [model, report] = em_fit(data, kmeans_init(data, 1, 3));
  CHECK(model.weights[0] == doctest::Approx(1.0));
  CHECK(model.means[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(model.variances[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.converged);
}

TEST_CASE("em_fit single-component MLE matches the closed form on random data") {
  std::mt19937 rng(555);
  for (int i = 0; i < 10; ++i) {
    const int dim = 1 + static_cast<int>(rng() % 5);
    const auto data = testing::random_dataset(rng, 10 + static_cast<int>(rng() % 40), dim);
    const auto [model, report] = em_fit(data, kmeans_init(data, 1, rng()));

    for (int j = 0; j < dim; ++j) {
      double mean = 0;
      for (const auto& y : data) mean += y[j];
      mean /= static_cast<double>(data.size());
      double var = 0;
      for (const auto& y : data) var += (y[j] - mean) * (y[j] - mean);
      var = std::max(var / static_cast<double>(data.size()), 1e-4);
      CHECK(model.means[0][j] == doctest::Approx(mean).epsilon(1e-8));
      CHECK(model.variances[0][j] == doctest::Approx(var).epsilon(1e-8));
    }
  }
}

TEST_CASE("em_fit detects a fixed point after one M-step") {
  const std::vector<std::vector<double>> data{{0.0}, {2.0}};
  const GmmModel mle = single({1.0}, {1.0});
  const auto [model, report] = em_fit(data, mle);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  REQUIRE(report.log_likelihood_trace.size() == 2);
  CHECK(report.log_likelihood_trace[0] ==
        doctest::Approx(report.log_likelihood_trace[1]).epsilon(1e-12));
}

TEST_CASE("em_fit trace is monotone on random problems") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const int dim = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % 4);
    auto data = testing::random_dataset(rng, 30 + static_cast<int>(rng() % 50), dim);
    // splice in a second cluster to make the problem multimodal
    auto extra = testing::random_dataset(rng, 20, dim);
    data.insert(data.end(), extra.begin(), extra.end());

    const auto [model, report] = em_fit(data, kmeans_init(data, m, rng()));
    const auto& tr = report.log_likelihood_trace;
    REQUIRE(!tr.empty());
    for (std::size_t k = 1; k < tr.size(); ++k) CHECK(tr[k] >= tr[k - 1] - 1e-9);

    double sum = 0;
    for (double w : model.weights) {
      CHECK(w >= 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& var : model.variances)
      for (double v : var) CHECK(v >= 1e-4);
  }
}

TEST_CASE("em_fit rescues a starved component") {
  // Second component starts with zero weight, so its responsibility mass is
  // zero and the rescue path must revive it.
  std::vector<std::vector<double>> data;
  for (int i = 0; i < 20; ++i) data.push_back({static_cast<double>(i % 3)});
  data.push_back({50.0});  // outlier the dead component should adopt

  GmmModel init;
  init.order = 2;
  init.dim = 1;
  init.weights = {1.0, 0.0};
  init.means = {{1.0}, {0.0}};
  init.variances = {{1.0}, {1.0}};

  const auto [model, report] = em_fit(data, init);
  CHECK(model.weights[0] > 0.0);
  CHECK(model.weights[1] > 0.0);
  CHECK(model.weights[0] + model.weights[1] == doctest::Approx(1.0).epsilon(1e-9));
  // the revived component sits near the outlier
  const bool adopted = std::abs(model.means[0][0] - 50) < 1.0 ||
                       std::abs(model.means[1][0] - 50) < 1.0;
  CHECK(adopted);
}

TEST_CASE("em_fit error contracts") {
  const GmmModel m = single({0.0}, {1.0});
  CHECK_THROWS_AS(em_fit({}, m), EmptyData);
  CHECK_THROWS_AS(em_fit({{1.0, 2.0}}, m), DimensionMismatch);
}

TEST_CASE("avg_log_likelihood averages frame log densities") {
  const GmmModel m = single({0.0}, {1.0});
  const double y1 = std::sqrt(2.0 - kLog2Pi);   // log density -1
  const double y2 = std::sqrt(6.0 - kLog2Pi);   // log density -3
  CHECK(avg_log_likelihood(m, {{y1}}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(avg_log_likelihood(m, {{y1}, {y2}}) == doctest::Approx(-2.0).epsilon(1e-12));
  // duplication leaves the average unchanged
  CHECK(avg_log_likelihood(m, {{y1}, {y2}, {y1}, {y2}}) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK_THROWS_AS(avg_log_likelihood(m, {}), EmptyFrames);
}

TEST_CASE("1-D density integrates to one (Monte Carlo)") {
  std::mt19937 rng(808);
  GmmModel m;
  m.order = 3;
  m.dim = 1;
  std::uniform_real_distribution<double> uw(0.2, 1.0), umu(-3.0, 3.0), uvar(0.04, 2.0);
  double wsum = 0;
  for (int i = 0; i < 3; ++i) {
    m.weights.push_back(uw(rng));
    wsum += m.weights.back();
    m.means.push_back({umu(rng)});
    m.variances.push_back({uvar(rng)});
  }
  for (double& w : m.weights) w /= wsum;

  double lo = 1e9, hi = -1e9, sd = 0;
  for (int i = 0; i < 3; ++i) {
    lo = std::min(lo, m.means[i][0]);
    hi = std::max(hi, m.means[i][0]);
    sd = std::max(sd, std::sqrt(m.variances[i][0]));
  }
  lo -= 10 * sd;
  hi += 10 * sd;

  const int n = 1'000'000;
  std::uniform_real_distribution<double> ux(lo, hi);
  double acc = 0;
  for (int i = 0; i < n; ++i) acc += std::exp(log_density(m, std::vector<double>{ux(rng)}));
  const double integral = (hi - lo) * acc / n;
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gmm JSON round trip and format guard") {
  std::mt19937 rng(4);
  const auto data = testing::random_dataset(rng, 30, 3);
  const auto [model, report] = em_fit(data, kmeans_init(data, 2, 11));

  const auto j = gmm_to_json(model);
  const GmmModel back = gmm_from_json(j);
  CHECK(back.order == model.order);
  CHECK(back.dim == model.dim);
  CHECK(back.weights == model.weights);
  CHECK(back.means == model.means);
  CHECK(back.variances == model.variances);

  auto bad = j;
  bad["format_version"] = 2;
  CHECK_THROWS_AS(gmm_from_json(bad), ModelFormatError);

  auto skew = j;
  skew["weights"] = std::vector<double>{0.9, 0.9};
  CHECK_THROWS_AS(gmm_from_json(skew), ModelFormatError);

  const auto path = std::filesystem::temp_directory_path() / "scriptid_gmm_test.json";
  save_gmm(model, path);
  const GmmModel loaded = load_gmm(path);
  CHECK(loaded.means == model.means);
  CHECK_THROWS_AS(load_gmm(path.string() + ".missing"), FileNotFound);
}

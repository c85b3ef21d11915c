#include <doctest.h>

#include <map>
#include <random>

#include "scriptid/features.hpp"
#include "support/oracles.hpp"

using namespace scriptid;

namespace {

constexpr double kSqrt8 = 2.8284271247461903;
constexpr double kStd100 = 0.5773502691896258;  // std of {1,0,0}

SquareMatrix counting3x3() {
  SquareMatrix a(3);
  a.values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  return a;
}

std::map<double, int> multiset_of(const std::vector<double>& v) {
  std::map<double, int> m;
  for (double x : v) ++m[x];
  return m;
}

}  // namespace

TEST_CASE("std_dev basics") {
  CHECK(std_dev(std::vector<double>{0, 0, 0, 0}) == 0.0);
  CHECK(std_dev(std::vector<double>{1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std_dev(std::vector<double>{2, 6}) == doctest::Approx(kSqrt8).epsilon(1e-12));
  CHECK(std_dev(std::vector<double>{5}) == 0.0);
  CHECK_THROWS_AS(std_dev(std::vector<double>{}), EmptyVector);
}

TEST_CASE("extract_diagonals on the 3x3 counting matrix") {
  const DiagonalSet d = extract_diagonals(counting3x3());
  CHECK(d.principal == std::vector<double>{1, 5, 9});
  REQUIRE(d.upper.size() == 1);
  REQUIRE(d.lower.size() == 1);
  CHECK(d.upper[0] == std::vector<double>{2, 6});
  CHECK(d.lower[0] == std::vector<double>{4, 8});
  CHECK(d.element_count() == 9 - 2);
}

TEST_CASE("extract_diagonals on the identity") {
  SquareMatrix a(3);
  a.values = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const DiagonalSet d = extract_diagonals(a);
  CHECK(d.principal == std::vector<double>{1, 1, 1});
  CHECK(d.upper[0] == std::vector<double>{0, 0});
  CHECK(d.lower[0] == std::vector<double>{0, 0});
}

TEST_CASE("extract_diagonals rejects tiny matrices") {
  SquareMatrix a(2);
  a.values = {1, 2, 3, 4};
  CHECK_THROWS_AS(extract_diagonals(a), MatrixTooSmall);
}

TEST_CASE("diagonals plus excluded corners cover the matrix") {
  std::mt19937 rng(42);
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const SquareMatrix a = testing::random_matrix(rng, n, false);
    const DiagonalSet d = extract_diagonals(a);
    CHECK(d.element_count() == static_cast<std::size_t>(n) * n - 2);

    std::vector<double> collected = d.principal;
    for (const auto& v : d.upper) collected.insert(collected.end(), v.begin(), v.end());
    for (const auto& v : d.lower) collected.insert(collected.end(), v.begin(), v.end());
    collected.push_back(a.at(0, n - 1));
    collected.push_back(a.at(n - 1, 0));
    CHECK(multiset_of(collected) == multiset_of(a.values));
  }
}

TEST_CASE("diag_features on the 3x3 counting matrix") {
  const auto [f1, f2] = diag_features(counting3x3());
  REQUIRE(f1.size() == 3);
  REQUIRE(f2.size() == 3);
  CHECK(f1[0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(f1[1] == doctest::Approx(kSqrt8).epsilon(1e-9));
  CHECK(f1[2] == 0.0);
  CHECK(f2[0] == doctest::Approx(kSqrt8).epsilon(1e-9));
  CHECK(f2[1] == 0.0);
  CHECK(f2[2] == 0.0);
}

TEST_CASE("diag_features of the zero matrix is zero") {
  const auto [f1, f2] = diag_features(SquareMatrix(5));
  for (double v : f1) CHECK(v == 0.0);
  for (double v : f2) CHECK(v == 0.0);
}

TEST_CASE("diag_features padding pattern at N=3") {
  std::mt19937 rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto [f1, f2] = diag_features(testing::random_matrix(rng, 3, false));
    CHECK(f1[2] == 0.0);
    CHECK(f2[1] == 0.0);
    CHECK(f2[2] == 0.0);
  }
}

TEST_CASE("row_col_features hand case") {
  SquareMatrix a(3);
  a.values = {1, 1, 1, 0, 0, 0, 0, 0, 0};
  const auto [f5, f6] = row_col_features(a);
  CHECK(f5 == std::vector<double>{0, 0, 0});
  for (double v : f6) CHECK(v == doctest::Approx(kStd100).epsilon(1e-9));
}

TEST_CASE("transpose swaps f5 and f6") {
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const SquareMatrix a = testing::random_matrix(rng, n, false);
    SquareMatrix t(n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) t.at(c, r) = a.at(r, c);
    const auto [f5, f6] = row_col_features(a);
    const auto [g5, g6] = row_col_features(t);
    CHECK(f5 == g6);
    CHECK(f6 == g5);
  }
}

TEST_CASE("extract_word_features of the zero matrix is zero") {
  const WordFeatures f = extract_word_features(SquareMatrix(64));
  for (const auto* v : {&f.f1, &f.f2, &f.f3, &f.f4, &f.f5, &f.f6}) {
    REQUIRE(v->size() == 64);
    for (double x : *v) CHECK(x == 0.0);
  }
}

TEST_CASE("extract_word_features rejects non-binary input") {
  SquareMatrix a(3);
  a.values = {0, 1, 0, 1, 0.5, 0, 1, 0, 1};
  CHECK_THROWS_AS(extract_word_features(a), NonBinaryMatrix);
}

TEST_CASE("f3/f4 equal f1/f2 of the flipped matrix") {
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const SquareMatrix a = testing::random_matrix(rng, n, true);
    const WordFeatures f = extract_word_features(a);
    const auto [g1, g2] = diag_features(flip_horizontal(a));
    CHECK(f.f3 == g1);
    CHECK(f.f4 == g2);

    const WordFeatures ff = extract_word_features(flip_horizontal(a));
    CHECK(ff.f1 == f.f3);
    CHECK(ff.f2 == f.f4);
    CHECK(ff.f3 == f.f1);
    CHECK(ff.f4 == f.f2);
  }
}

TEST_CASE("identity matrix word features") {
  SquareMatrix a(3);
  a.values = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const WordFeatures f = extract_word_features(a);
  CHECK(f.f1 == std::vector<double>{0, 0, 0});
  CHECK(f.f2 == std::vector<double>{0, 0, 0});
  // flipped identity has principal (0,1,0) and zero off-diagonals
  CHECK(f.f3[0] == doctest::Approx(kStd100).epsilon(1e-9));
  CHECK(f.f3[1] == 0.0);
  CHECK(f.f3[2] == 0.0);
  CHECK(f.f4 == std::vector<double>{0, 0, 0});
  for (double v : f.f5) CHECK(v == doctest::Approx(kStd100).epsilon(1e-9));
  for (double v : f.f6) CHECK(v == doctest::Approx(kStd100).epsilon(1e-9));
}

TEST_CASE("features are non-negative with length N") {
  std::mt19937 rng(21);
  for (int i = 0; i < 20; ++i) {
    const int n = 3 + static_cast<int>(rng() % 30);
    const WordFeatures f = extract_word_features(testing::random_matrix(rng, n, true));
    CHECK(f.n == n);
    for (const auto* v : {&f.f1, &f.f2, &f.f3, &f.f4, &f.f5, &f.f6}) {
      CHECK(v->size() == static_cast<std::size_t>(n));
      for (double x : *v) CHECK(x >= 0.0);
    }
    CHECK(f.f1[n - 1] == 0.0);
    CHECK(f.f2[n - 2] == 0.0);
    CHECK(f.f2[n - 1] == 0.0);
    CHECK(f.f3[n - 1] == 0.0);
    CHECK(f.f4[n - 2] == 0.0);
    CHECK(f.f4[n - 1] == 0.0);
  }
}

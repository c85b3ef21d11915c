#include "scriptid/features.hpp"

#include <cmath>
#include <numeric>

namespace scriptid {

std::size_t DiagonalSet::element_count() const {
  std::size_t total = principal.size();
  for (const auto& d : upper) total += d.size();
  for (const auto& d : lower) total += d.size();
  return total;
}

double std_dev(std::span<const double> v) {
  if (v.empty()) throw EmptyVector("std_dev: empty vector");
  const std::size_t n = v.size();
  if (n == 1) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) {
    const double d = x - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

DiagonalSet extract_diagonals(const SquareMatrix& a) {
  const int n = a.n;
  if (n < 3) throw MatrixTooSmall("extract_diagonals: side must be >= 3");

  DiagonalSet out;
  out.principal.resize(n);
  for (int i = 0; i < n; ++i) out.principal[i] = a.at(i, i);

  out.upper.resize(n - 2);
  out.lower.resize(n - 2);
  for (int k = 1; k <= n - 2; ++k) {
    auto& up = out.upper[k - 1];
    auto& lo = out.lower[k - 1];
    up.resize(n - k);
    lo.resize(n - k);
    for (int i = 0; i + k < n; ++i) {
      up[i] = a.at(i, i + k);
      lo[i] = a.at(i + k, i);
    }
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> diag_features(const SquareMatrix& a) {
  const DiagonalSet diags = extract_diagonals(a);
  const int n = a.n;

  std::vector<double> f1, f2;
  f1.reserve(n);
  f2.reserve(n);

  f1.push_back(std_dev(diags.principal));
  for (const auto& d : diags.upper) f1.push_back(std_dev(d));
  f1.push_back(0.0);

  for (const auto& d : diags.lower) f2.push_back(std_dev(d));
  f2.push_back(0.0);
  f2.push_back(0.0);

  return {std::move(f1), std::move(f2)};
}

std::pair<std::vector<double>, std::vector<double>> row_col_features(const SquareMatrix& a) {
  const int n = a.n;
  if (n < 3) throw MatrixTooSmall("row_col_features: side must be >= 3");

  std::vector<double> f5(n), f6(n);
  std::vector<double> col(n);
  for (int i = 0; i < n; ++i) {
    f5[i] = std_dev(std::span<const double>(a.values).subspan(
        static_cast<std::size_t>(i) * n, n));
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = a.at(i, j);
    f6[j] = std_dev(col);
  }
  return {std::move(f5), std::move(f6)};
}

WordFeatures extract_word_features(const SquareMatrix& a) {
  if (a.n < 3) throw MatrixTooSmall("extract_word_features: side must be >= 3");
  for (double v : a.values)
    if (v != 0.0 && v != 1.0)
      throw NonBinaryMatrix("extract_word_features: matrix values must be 0 or 1");

  WordFeatures out;
  out.n = a.n;
  std::tie(out.f1, out.f2) = diag_features(a);
  std::tie(out.f3, out.f4) = diag_features(flip_horizontal(a));
  std::tie(out.f5, out.f6) = row_col_features(a);
  return out;
}

}  // namespace scriptid

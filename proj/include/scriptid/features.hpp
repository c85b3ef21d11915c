#pragma once

#include <span>
#include <utility>
#include <vector>

#include "scriptid/image.hpp"

namespace scriptid {

// Diagonals of a square matrix, excluding the two 1-element corner
// diagonals at offsets +-(n-1). upper[k-1] starts at (0,k), lower[m-1]
// starts at (m,0), k,m = 1..n-2.
struct DiagonalSet {
  std::vector<double> principal;
  std::vector<std::vector<double>> upper;
  std::vector<std::vector<double>> lower;

  std::size_t element_count() const;
};

// The six per-word directional feature vectors, each of length n:
//   f1 appends the principal-diagonal deviation, the upper-diagonal
//      deviations and one zero; f2 the lower-diagonal deviations and two
//      zeros; f3/f4 repeat f1/f2 on the horizontally flipped matrix;
//   f5/f6 are per-row and per-column deviations.
struct WordFeatures {
  int n = 0;
  std::vector<double> f1, f2, f3, f4, f5, f6;
};

// Sample standard deviation (n-1 denominator); 0 for a single element.
double std_dev(std::span<const double> v);

DiagonalSet extract_diagonals(const SquareMatrix& a);

// (f1, f2) of the matrix as-is.
std::pair<std::vector<double>, std::vector<double>> diag_features(const SquareMatrix& a);

// (f5, f6): per-row and per-column standard deviations.
std::pair<std::vector<double>, std::vector<double>> row_col_features(const SquareMatrix& a);

// Full feature bundle for a binary square matrix.
// Throws NonBinaryMatrix if any value is not exactly 0 or 1.
WordFeatures extract_word_features(const SquareMatrix& a);

}  // namespace scriptid

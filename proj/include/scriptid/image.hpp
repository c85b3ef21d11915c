#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "scriptid/errors.hpp"

namespace scriptid {

// 8-bit grayscale image, row-major.
struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int r, int c) const {
    return pixels[static_cast<std::size_t>(r) * cols + c];
  }
  bool valid() const {
    return rows >= 1 && cols >= 1 &&
           pixels.size() == static_cast<std::size_t>(rows) * cols;
  }
};

// Binary image; 1 = ink (foreground), 0 = background.
struct BinaryImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int r, int c) const {
    return pixels[static_cast<std::size_t>(r) * cols + c];
  }
  std::uint8_t& at(int r, int c) {
    return pixels[static_cast<std::size_t>(r) * cols + c];
  }
  bool valid() const {
    return rows >= 1 && cols >= 1 &&
           pixels.size() == static_cast<std::size_t>(rows) * cols;
  }
};

// Square real matrix, row-major. The word pipeline only ever stores {0,1}
// values here, but the type itself admits arbitrary reals.
struct SquareMatrix {
  int n = 0;
  std::vector<double> values;

  SquareMatrix() = default;
  explicit SquareMatrix(int side)
      : n(side), values(static_cast<std::size_t>(side) * side, 0.0) {}

  double at(int r, int c) const {
    return values[static_cast<std::size_t>(r) * n + c];
  }
  double& at(int r, int c) {
    return values[static_cast<std::size_t>(r) * n + c];
  }
};

// Decodes a PGM (P2/P5, maxval <= 255) or, when compiled in, PNG file.
// Color inputs are reduced to luminance with Rec. 601 weights, rounded to
// nearest.
GrayImage load_gray(const std::filesystem::path& path);

// Writes a binary (P5) PGM with maxval 255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// Renders ink as black (0) on a white (255) background, so that a saved
// image binarizes back to the same ink mask.
GrayImage binary_to_gray(const BinaryImage& img);

// Whether PNG decoding was compiled in.
bool png_supported();

// Otsu threshold over the 256-bin histogram: the smallest t maximizing the
// between-class variance of the split {p <= t} vs {p > t}. Comparisons are
// done in exact integer arithmetic, so ties are broken deterministically.
// Throws ConstantImage when the image has a single distinct value.
int otsu_threshold(const GrayImage& img);

// Dark pixels are ink: p <= threshold maps to 1.
BinaryImage binarize(const GrayImage& img, int threshold);

// Scales the image so its larger dimension equals `side` (nearest-neighbor,
// re-thresholded at 0.5), then pads with zero rows/columns at the bottom and
// right. Throws TargetTooSmall for side < 3.
SquareMatrix normalize_to_square(const BinaryImage& img, int side);

// Left-right mirror: output column j = input column n-1-j.
SquareMatrix flip_horizontal(const SquareMatrix& a);

}  // namespace scriptid

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scriptid/image.hpp"

namespace scriptid {

enum class Orientation { kHorizontal = 0, kVertical = 1, kRightDiagonal = 2, kLeftDiagonal = 3 };

// Recipe for one synthetic "script": a distribution over stroke
// orientations plus stroke count/length/thickness ranges.
struct SynthClassSpec {
  std::string label;
  // Weights over {horizontal, vertical, right-diagonal, left-diagonal}.
  std::array<double, 4> orientation_mix{};
  int min_strokes = 5;
  int max_strokes = 12;
  double min_length = 0.4;  // fraction of side
  double max_length = 0.9;
  int thickness = 2;
};

// Deterministic per (spec, side, count, seed); never emits a constant
// image (degenerate draws are resampled).
std::vector<BinaryImage> generate(const SynthClassSpec& spec, int side, int count,
                                  std::uint64_t seed);

// Four classes, one per dominant orientation (70/10/10/10 mix).
std::vector<SynthClassSpec> default_four_class();

// Writes <out_dir>/<label>/w###.pgm for each class, ink black on white.
void write_corpus(const std::vector<SynthClassSpec>& specs, int side, int per_class,
                  std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace scriptid

#include "scriptid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "scriptid/rng.hpp"

namespace scriptid {

namespace {

// Each orientation draws its stroke length from a fixed sub-band of the
// spec's [min_length, max_length] range. Classes that are mirror images of
// each other (horizontal/vertical, right/left diagonal) would otherwise
// produce the same unordered set of frame profiles, which the frame-pooled
// GMM cannot tell apart; per-orientation length signatures make the
// dominant orientation visible in every frame's statistics.
constexpr double kLenBand[4][2] = {
    {0.88, 1.00},  // horizontal
    {0.28, 0.40},  // vertical
    {0.56, 0.68},  // right diagonal
    {0.00, 0.12},  // left diagonal
};

void validate(const SynthClassSpec& spec, int side, int count) {
  if (side < 8) throw InvalidSpec("generate: side must be >= 8");
  if (count < 1) throw InvalidSpec("generate: count must be >= 1");
  if (spec.label.empty()) throw InvalidSpec("generate: empty label");
  double sum = 0.0;
  for (double w : spec.orientation_mix) {
    if (w < 0.0) throw InvalidSpec("generate: negative orientation weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidSpec("generate: orientation weights must sum to 1");
  if (spec.min_strokes < 1 || spec.max_strokes < spec.min_strokes)
    throw InvalidSpec("generate: bad stroke count range");
  if (!(spec.min_length > 0.0) || spec.max_length < spec.min_length || spec.max_length > 1.0)
    throw InvalidSpec("generate: stroke length range must be within (0, 1]");
  if (spec.thickness < 1 || spec.thickness > side / 2)
    throw InvalidSpec("generate: bad thickness");
}

// Largest-remainder apportionment of n strokes over the orientation mix,
// so every image carries the class proportions instead of a multinomial
// draw around them.
std::array<int, 4> orientation_counts(const std::array<double, 4>& mix, int n) {
  std::array<double, 4> raw{};
  std::array<int, 4> base{};
  int used = 0;
  for (int i = 0; i < 4; ++i) {
    raw[i] = mix[i] * n;
    base[i] = static_cast<int>(raw[i]);
    used += base[i];
  }
  std::array<int, 4> idx{0, 1, 2, 3};
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return raw[a] - base[a] > raw[b] - base[b];
  });
  for (int k = 0; k < n - used; ++k) ++base[idx[k % 4]];
  return base;
}

struct StrokePlan {
  int margin = 0;      // strokes stay within [margin, side - margin)
  int span = 0;
  int diag_band = 0;   // diagonal offset range around the principal/anti diagonal
  int dominant = 0;
  int dominant_count = 0;
  int slot_index = 0;  // next stratification slot for the dominant orientation
};

// Position for the dominant orientation, stratified across [lo, hi] so the
// stroke pattern covers the span evenly; free-uniform otherwise.
int place(Rng& rng, StrokePlan& plan, int lo, int hi, bool dominant) {
  if (!dominant || plan.dominant_count <= 0) return rng.uniform_int(lo, hi);
  const int width = hi - lo + 1;
  const int k = plan.slot_index++;
  const int s_lo = lo + (k * width) / plan.dominant_count;
  const int s_hi = lo + ((k + 1) * width) / plan.dominant_count - 1;
  return rng.uniform_int(s_lo, std::max(s_lo, s_hi));
}

void draw_stroke(BinaryImage& img, Rng& rng, const SynthClassSpec& spec,
                 StrokePlan& plan, int orientation, double length_scale) {
  const int side = img.rows;
  const int thick = spec.thickness;
  const int lo = plan.margin;
  const int hi = side - plan.margin;
  const int span = plan.span;

  const double band_lo = kLenBand[orientation][0];
  const double band_hi = kLenBand[orientation][1];
  double frac = spec.min_length +
                rng.uniform(band_lo, band_hi) * (spec.max_length - spec.min_length);
  frac = std::clamp(frac * length_scale, spec.min_length, spec.max_length);
  int len = std::max(2, static_cast<int>(std::lround(frac * side)));
  len = std::min(len, orientation >= 2 ? span - thick + 1 : span);
  const bool dominant = orientation == plan.dominant;

  switch (static_cast<Orientation>(orientation)) {
    case Orientation::kHorizontal: {
      const int r0 = place(rng, plan, lo, hi - thick, dominant);
      const int c0 = rng.uniform_int(lo, hi - len);
      for (int u = 0; u < thick; ++u)
        for (int t = 0; t < len; ++t) img.at(r0 + u, c0 + t) = 1;
      break;
    }
    case Orientation::kVertical: {
      const int c0 = place(rng, plan, lo, hi - thick, dominant);
      const int r0 = rng.uniform_int(lo, hi - len);
      for (int u = 0; u < thick; ++u)
        for (int t = 0; t < len; ++t) img.at(r0 + t, c0 + u) = 1;
      break;
    }
    case Orientation::kRightDiagonal: {
      // Runs top-left to bottom-right near the principal diagonal.
      int offset = place(rng, plan, -plan.diag_band, plan.diag_band, dominant);
      const int r_lo = std::max(lo, lo - offset);
      const int r_hi = std::min(hi - len, hi - len - thick + 1 - offset);
      int r0;
      if (r_hi < r_lo) {
        r0 = std::clamp((r_lo + r_hi) / 2, lo, hi - len);
        offset = std::clamp(offset, lo - r0, hi - len - thick + 1 - r0);
      } else {
        r0 = rng.uniform_int(r_lo, r_hi);
      }
      const int c0 = r0 + offset;
      for (int t = 0; t < len; ++t)
        for (int u = 0; u < thick; ++u) img.at(r0 + t, c0 + t + u) = 1;
      break;
    }
    case Orientation::kLeftDiagonal: {
      // Runs top-right to bottom-left near the anti-diagonal.
      int anti = side - 1 + place(rng, plan, -plan.diag_band, plan.diag_band, dominant);
      const int r_lo = std::max(lo, anti - (hi - thick));
      const int r_hi = std::min(hi - len, anti - (lo + len - 1));
      int r0;
      if (r_hi < r_lo) {
        r0 = std::clamp((r_lo + r_hi) / 2, lo, hi - len);
        anti = std::clamp(anti, r0 + lo + len - 1, r0 + hi - thick);
      } else {
        r0 = rng.uniform_int(r_lo, r_hi);
      }
      const int c0 = anti - r0;
      for (int t = 0; t < len; ++t)
        for (int u = 0; u < thick; ++u) img.at(r0 + t, c0 - t + u) = 1;
      break;
    }
  }
}

bool constant_image(const BinaryImage& img) {
  for (std::uint8_t p : img.pixels)
    if (p != img.pixels.front()) return false;
  return true;
}

}  // namespace

std::vector<BinaryImage> generate(const SynthClassSpec& spec, int side, int count,
                                  std::uint64_t seed) {
  validate(spec, side, count);

  const int dominant = static_cast<int>(
      std::max_element(spec.orientation_mix.begin(), spec.orientation_mix.end()) -
      spec.orientation_mix.begin());
  const int margin = std::max(1, side / 21);
  const double mid_count = 0.5 * (spec.min_strokes + spec.max_strokes);

  std::vector<BinaryImage> images;
  images.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    Rng rng(mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(idx) + 1)));
    BinaryImage img;
    for (int attempt = 0; attempt < 100; ++attempt) {
      img.rows = img.cols = side;
      img.pixels.assign(static_cast<std::size_t>(side) * side, 0);

      // Binomial within the declared range keeps the stroke count near the
      // middle; the length scale then holds total ink roughly steady.
      int strokes = spec.min_strokes;
      for (int k = spec.min_strokes; k < spec.max_strokes; ++k)
        strokes += rng.uniform() < 0.5 ? 1 : 0;
      const double length_scale = std::sqrt(mid_count / strokes);

      const auto counts = orientation_counts(spec.orientation_mix, strokes);
      std::vector<int> orientations;
      orientations.reserve(strokes);
      for (int o = 0; o < 4; ++o)
        orientations.insert(orientations.end(), counts[o], o);
      for (std::size_t i = orientations.size() - 1; i > 0; --i)
        std::swap(orientations[i], orientations[rng.index(i + 1)]);

      StrokePlan plan;
      plan.margin = margin;
      plan.span = side - 2 * margin;
      plan.diag_band = side / 4;
      plan.dominant = dominant;
      plan.dominant_count = counts[dominant];
      for (int o : orientations) draw_stroke(img, rng, spec, plan, o, length_scale);
      if (!constant_image(img)) break;
    }
    if (constant_image(img)) throw Error("generate: could not draw a non-constant image");
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<SynthClassSpec> default_four_class() {
  auto make = [](std::string label, int dominant) {
    SynthClassSpec spec;
    spec.label = std::move(label);
    spec.orientation_mix = {0.1, 0.1, 0.1, 0.1};
    spec.orientation_mix[dominant] = 0.7;
    return spec;
  };
  return {make("horizontal", 0), make("vertical", 1), make("rightdiag", 2),
          make("leftdiag", 3)};
}

void write_corpus(const std::vector<SynthClassSpec>& specs, int side, int per_class,
                  std::uint64_t seed, const std::filesystem::path& out_dir) {
  for (const auto& spec : specs) {
    const std::filesystem::path dir = out_dir / spec.label;
    std::filesystem::create_directories(dir);
    const std::uint64_t class_seed = mix_seed(seed ^ fnv1a(spec.label));
    const auto images = generate(spec, side, per_class, class_seed);
    for (std::size_t i = 0; i < images.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "w%04zu.pgm", i);
      save_pgm(binary_to_gray(images[i]), dir / name);
    }
  }
}

}  // namespace scriptid

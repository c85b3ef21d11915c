#include "scriptid/image.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#if SCRIPTID_WITH_PNG
#include <png.h>
#endif

namespace scriptid {

namespace {

// Next PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      break;
    }
  }
  if (tok.empty()) throw CorruptImage("truncated PNM header");
  while ((c = in.get()) != EOF) {
    if (std::isspace(c)) break;
    if (c == '#') {
      in.unget();
      break;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int pnm_int(std::istream& in, const char* what) {
  const std::string tok = pnm_token(in);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw CorruptImage(std::string("bad PNM ") + what + ": '" + tok + "'");
  }
}

GrayImage load_pgm(std::ifstream& in, bool ascii) {
  GrayImage img;
  img.cols = pnm_int(in, "width");
  img.rows = pnm_int(in, "height");
  const int maxval = pnm_int(in, "maxval");
  if (img.cols < 1 || img.rows < 1) throw CorruptImage("non-positive PGM dimensions");
  if (maxval > 255) throw UnsupportedFormat("16-bit PGM not supported");
  if (maxval < 1) throw CorruptImage("bad PGM maxval");

  const std::size_t count = static_cast<std::size_t>(img.rows) * img.cols;
  img.pixels.resize(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = pnm_int(in, "pixel");
      if (v < 0 || v > maxval) throw CorruptImage("PGM pixel out of range");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    // The maxval token reader already consumed the single separator byte.
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count)
      throw CorruptImage("truncated PGM pixel data");
    for (std::uint8_t p : img.pixels)
      if (p > maxval) throw CorruptImage("PGM pixel out of range");
  }
  return img;
}

#if SCRIPTID_WITH_PNG
GrayImage load_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.string().c_str()))
    throw CorruptImage("failed to read PNG: " + path.string());
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, rgb.data(), 0, nullptr)) {
    png_image_free(&png);
    throw CorruptImage("failed to decode PNG: " + path.string());
  }
  GrayImage img;
  img.rows = static_cast<int>(png.height);
  img.cols = static_cast<int>(png.width);
  if (img.rows < 1 || img.cols < 1) throw CorruptImage("empty PNG");
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(y));
  }
  return img;
}
#endif

// Exact between-class variance comparison. For the split {<= t} / {> t} with
// class sizes n0, n1 and intensity sums s0, s1, the variance is proportional
// to (s0*n1 - s1*n0)^2 / (n0*n1); scores are compared by cross-multiplying
// in 128-bit integers so equal splits compare exactly equal.
struct OtsuScore {
  __int128 num = -1;  // (s0*n1 - s1*n0)^2
  std::int64_t den = 1;  // n0*n1

  bool better_than(const OtsuScore& o) const {
    return num * o.den > o.num * den;
  }
};

OtsuScore otsu_score(std::int64_t n0, std::int64_t s0, std::int64_t n1, std::int64_t s1) {
  const std::int64_t e = s0 * n1 - s1 * n0;
  return OtsuScore{static_cast<__int128>(e) * e, n0 * n1};
}

}  // namespace

GrayImage load_gray(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || std::filesystem::is_directory(path, ec))
    throw FileNotFound("no such image file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open image file: " + path.string());

  std::array<char, 2> magic{};
  in.read(magic.data(), 2);
  if (in.gcount() != 2) throw CorruptImage("file too short: " + path.string());

  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5'))
    return load_pgm(in, magic[1] == '2');

  if (magic[0] == '\x89' && magic[1] == 'P') {
#if SCRIPTID_WITH_PNG
    in.close();
    return load_png(path);
#else
    throw UnsupportedFormat("PNG support not compiled in: " + path.string());
#endif
  }
  throw UnsupportedFormat("unsupported image format: " + path.string());
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  if (!img.valid()) throw Error("save_pgm: invalid image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw Error("failed writing file: " + path.string());
}

GrayImage binary_to_gray(const BinaryImage& img) {
  GrayImage g;
  g.rows = img.rows;
  g.cols = img.cols;
  g.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    g.pixels[i] = img.pixels[i] ? 0 : 255;
  return g;
}

bool png_supported() {
#if SCRIPTID_WITH_PNG
  return true;
#else
  return false;
#endif
}

int otsu_threshold(const GrayImage& img) {
  if (!img.valid()) throw Error("otsu_threshold: invalid image");
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t p : img.pixels) ++hist[p];

  int distinct = 0;
  for (std::int64_t h : hist) distinct += h > 0;
  if (distinct < 2)
    throw ConstantImage("otsu_threshold: image has a single intensity value");

  std::int64_t total_n = static_cast<std::int64_t>(img.pixels.size());
  std::int64_t total_s = 0;
  for (int v = 0; v < 256; ++v) total_s += static_cast<std::int64_t>(v) * hist[v];

  OtsuScore best;  // num = -1 loses to any reachable split
  int best_t = 0;
  std::int64_t n0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += static_cast<std::int64_t>(t) * hist[t];
    const std::int64_t n1 = total_n - n0;
    if (n0 == 0 || n1 == 0) continue;
    const OtsuScore score = otsu_score(n0, s0, n1, total_s - s0);
    if (score.better_than(best)) {
      best = score;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const GrayImage& img, int threshold) {
  if (!img.valid()) throw Error("binarize: invalid image");
  BinaryImage out;
  out.rows = img.rows;
  out.cols = img.cols;
  out.pixels.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    out.pixels[i] = img.pixels[i] <= threshold ? 1 : 0;
  return out;
}

SquareMatrix normalize_to_square(const BinaryImage& img, int side) {
  if (side < 3) throw TargetTooSmall("normalize_to_square: side must be >= 3");
  if (!img.valid()) throw Error("normalize_to_square: invalid image");

  const int max_dim = std::max(img.rows, img.cols);
  int new_r = img.rows, new_c = img.cols;
  if (max_dim != side) {
    const double scale = static_cast<double>(side) / max_dim;
    new_r = img.rows >= img.cols ? side : std::max(1, static_cast<int>(std::lround(img.rows * scale)));
    new_c = img.cols >= img.rows ? side : std::max(1, static_cast<int>(std::lround(img.cols * scale)));
  }

  SquareMatrix out(side);
  bool any_in = false, any_out = false;
  for (std::uint8_t p : img.pixels) any_in |= p != 0;
  for (int r = 0; r < new_r; ++r) {
    const int sr = std::min(img.rows - 1, static_cast<int>((r + 0.5) * img.rows / new_r));
    for (int c = 0; c < new_c; ++c) {
      const int sc = std::min(img.cols - 1, static_cast<int>((c + 0.5) * img.cols / new_c));
      if (img.at(sr, sc) >= 1) {  // nearest neighbor; 0.5 re-threshold is a no-op on {0,1}
        out.at(r, c) = 1.0;
        any_out = true;
      }
    }
  }
  // Nearest-neighbor downsampling can skip an isolated ink pixel; keep the
  // first one so ink never vanishes from a non-empty image.
  if (any_in && !any_out) {
    for (int r = 0; r < img.rows && !any_out; ++r) {
      for (int c = 0; c < img.cols && !any_out; ++c) {
        if (img.at(r, c)) {
          const int dr = std::min(new_r - 1, r * new_r / img.rows);
          const int dc = std::min(new_c - 1, c * new_c / img.cols);
          out.at(dr, dc) = 1.0;
          any_out = true;
        }
      }
    }
  }
  return out;
}

SquareMatrix flip_horizontal(const SquareMatrix& a) {
  SquareMatrix out(a.n);
  for (int r = 0; r < a.n; ++r)
    for (int c = 0; c < a.n; ++c) out.at(r, c) = a.at(r, a.n - 1 - c);
  return out;
}

}  // namespace scriptid

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polysim {

// 8-bit grayscale image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> px;

  static Image filled(int width, int height, std::uint8_t value);

  std::uint8_t at(int row, int col) const { return px[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t& at(int row, int col) { return px[static_cast<std::size_t>(row) * width + col]; }

  // Replicate border padding.
  std::uint8_t at_clamped(int row, int col) const;

  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height;
  }
};

// Binary 8-bit PGM (P5).
Image load_pgm(const std::string& path);
void save_pgm(const Image& img, const std::string& path);

// Deterministic synthetic test images. Specs: "gray:<v>", "ramp", "vramp",
// "stripes", "checkerboard", "random", "binary-random", "document". Anything
// containing '/' or ending in ".pgm" is loaded from disk instead.
Image make_image(const std::string& spec, int width, int height, std::uint64_t seed);

// Frame stack for the background-estimation circuit: a flat background with
// small per-frame pixel jitter, plus a current frame with a bright square.
std::vector<Image> make_kde_history(int width, int height, int frames, std::uint64_t seed);
Image make_kde_current(int width, int height, std::uint64_t seed);

}  // namespace polysim

#include "polysim/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "polysim/util.hpp"

namespace polysim {

Image Image::filled(int width, int height, std::uint8_t value) {
  Image img{width, height, {}};
  img.px.assign(static_cast<std::size_t>(width) * height, value);
  return img;
}

std::uint8_t Image::at_clamped(int row, int col) const {
  row = std::clamp(row, 0, height - 1);
  col = std::clamp(col, 0, width - 1);
  return at(row, col);
}

namespace {

int read_pnm_int(std::istream& in) {
  // Skips whitespace and '#' comments, then reads one decimal value.
  int c = in.get();
  for (;;) {
    while (c != EOF && std::isspace(c)) c = in.get();
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    break;
  }
  if (c == EOF || !std::isdigit(c)) throw IoError("pgm: malformed header");
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = in.get();
  }
  return v;
}

}  // namespace

Image load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path);
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') throw IoError("pgm: not a binary P5 file: " + path);
  int w = read_pnm_int(in);
  int h = read_pnm_int(in);
  int maxval = read_pnm_int(in);
  if (w <= 0 || h <= 0 || maxval != 255) throw IoError("pgm: unsupported geometry or depth: " + path);
  Image img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
  in.read(reinterpret_cast<char*>(img.px.data()), static_cast<std::streamsize>(img.px.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.px.size())) throw IoError("pgm: truncated pixel data: " + path);
  return img;
}

void save_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.px.data()), static_cast<std::streamsize>(img.px.size()));
  if (!out) throw IoError("pgm: write failed: " + path);
}

Image make_image(const std::string& spec, int width, int height, std::uint64_t seed) {
  if (spec.find('/') != std::string::npos ||
      (spec.size() > 4 && spec.substr(spec.size() - 4) == ".pgm")) {
    return load_pgm(spec);
  }
  if (width <= 0 || height <= 0) throw ConfigError("image dimensions must be positive");
  Image img = Image::filled(width, height, 0);

  auto hash_px = [&](int r, int c, std::uint64_t salt) {
    return mix64(seed ^ mix64((static_cast<std::uint64_t>(r) << 32) ^ static_cast<std::uint64_t>(c) ^ salt));
  };

  if (spec.rfind("gray:", 0) == 0) {
    int v = std::stoi(spec.substr(5));
    if (v < 0 || v > 255) throw ConfigError("gray level out of range: " + spec);
    std::fill(img.px.begin(), img.px.end(), static_cast<std::uint8_t>(v));
  } else if (spec == "ramp") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img.at(r, c) = static_cast<std::uint8_t>(width > 1 ? (255 * c) / (width - 1) : 0);
  } else if (spec == "vramp") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img.at(r, c) = static_cast<std::uint8_t>(height > 1 ? (255 * r) / (height - 1) : 0);
  } else if (spec == "stripes") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) img.at(r, c) = (c % 2 == 0) ? 0 : 255;
  } else if (spec == "checkerboard") {
    int block = std::max(1, std::min(width, height) / 8);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img.at(r, c) = (((r / block) + (c / block)) % 2 == 0) ? 0 : 255;
  } else if (spec == "random") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img.at(r, c) = static_cast<std::uint8_t>(hash_px(r, c, 0x72616e64) & 0xff);
  } else if (spec == "binary-random") {
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        img.at(r, c) = (hash_px(r, c, 0x62696e72) & 1) ? 255 : 0;
  } else if (spec == "document") {
    // White page with a black stroke grid: high-contrast windows everywhere,
    // the regime the mean-thresholding circuit is meant for.
    std::fill(img.px.begin(), img.px.end(), 255);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        if (r % 8 < 3 || c % 8 < 3) img.at(r, c) = 0;
  } else {
    throw ConfigError("unknown image spec: " + spec);
  }
  return img;
}

std::vector<Image> make_kde_history(int width, int height, int frames, std::uint64_t seed) {
  std::vector<Image> out;
  out.reserve(frames);
  for (int f = 0; f < frames; ++f) {
    Image img = Image::filled(width, height, 0);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        // Background level 100 with +-2 per-frame jitter.
        std::uint64_t h = mix64(seed ^ mix64((static_cast<std::uint64_t>(f) << 40) ^
                                             (static_cast<std::uint64_t>(r) << 20) ^
                                             static_cast<std::uint64_t>(c)));
        img.at(r, c) = static_cast<std::uint8_t>(100 + static_cast<int>(h % 5) - 2);
      }
    }
    out.push_back(std::move(img));
  }
  return out;
}

Image make_kde_current(int width, int height, std::uint64_t seed) {
  Image img = Image::filled(width, height, 100);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      std::uint64_t h = mix64(seed ^ 0x63757272ull ^
                              mix64((static_cast<std::uint64_t>(r) << 20) ^ static_cast<std::uint64_t>(c)));
      img.at(r, c) = static_cast<std::uint8_t>(100 + static_cast<int>(h % 5) - 2);
    }
  }
  // A bright square dropped on the jittered background: these pixels no
  // longer match the history model and should classify differently.
  int side = std::max(4, std::min(width, height) / 3);
  int r0 = (height - side) / 2, c0 = (width - side) / 2;
  for (int r = r0; r < r0 + side; ++r)
    for (int c = c0; c < c0 + side; ++c) img.at(r, c) = 250;
  return img;
}

}  // namespace polysim

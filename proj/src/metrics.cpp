#include "polysim/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace polysim {

double error_rate(const Image& golden, const Image& subject) {
  if (!golden.same_shape(subject)) throw std::invalid_argument("error_rate: image shapes differ");
  long long sum = 0;
  for (std::size_t i = 0; i < golden.px.size(); ++i)
    sum += std::abs(static_cast<int>(golden.px[i]) - static_cast<int>(subject.px[i]));
  return static_cast<double>(sum) / (255.0 * static_cast<double>(golden.px.size())) * 100.0;
}

Image oracle_robert(const Image& img) {
  Image out = Image::filled(img.width, img.height, 0);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      double a = img.at_clamped(r, c) / 255.0;
      double d = img.at_clamped(r + 1, c + 1) / 255.0;
      double b = img.at_clamped(r, c + 1) / 255.0;
      double e = img.at_clamped(r + 1, c) / 255.0;
      double s = 0.5 * (std::abs(a - d) + std::abs(b - e));
      out.at(r, c) = static_cast<std::uint8_t>(std::llround(s * 255.0));
    }
  }
  return out;
}

double bernstein_gamma(double x) {
  // Basis terms C(6,i) x^i (1-x)^(6-i).
  static constexpr double binom[7] = {1, 6, 15, 20, 15, 6, 1};
  double acc = 0.0;
  for (int i = 0; i <= 6; ++i)
    acc += kGammaCoeff[i] * binom[i] * std::pow(x, i) * std::pow(1.0 - x, 6 - i);
  return acc;
}

Image oracle_gamma(const Image& img) {
  Image out = Image::filled(img.width, img.height, 0);
  for (std::size_t i = 0; i < img.px.size(); ++i)
    out.px[i] = static_cast<std::uint8_t>(std::llround(bernstein_gamma(img.px[i] / 255.0) * 255.0));
  return out;
}

Image oracle_gamma_ideal(const Image& img) {
  Image out = Image::filled(img.width, img.height, 0);
  for (std::size_t i = 0; i < img.px.size(); ++i)
    out.px[i] = static_cast<std::uint8_t>(std::llround(std::pow(img.px[i] / 255.0, 0.45) * 255.0));
  return out;
}

Image oracle_threshold(const Image& img, int window_k) {
  if (window_k < 2 || window_k % 2 != 0) throw std::invalid_argument("threshold window must be even and >= 2");
  Image out = Image::filled(img.width, img.height, 0);
  const int lo = -window_k / 2, hi = window_k / 2 - 1;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      long long sum = 0;
      for (int dr = lo; dr <= hi; ++dr)
        for (int dc = lo; dc <= hi; ++dc) sum += img.at_clamped(r + dr, c + dc);
      double mean = static_cast<double>(sum) / (window_k * window_k);
      out.at(r, c) = (img.at(r, c) >= mean) ? 255 : 0;
    }
  }
  return out;
}

double kde_pdf(std::span<const Image> history, const Image& current, int row, int col) {
  double acc = 0.0;
  for (const Image& h : history) {
    double diff = std::abs(static_cast<int>(current.at(row, col)) - static_cast<int>(h.at(row, col))) / 255.0;
    acc += std::exp(-4.0 * diff);
  }
  return acc / static_cast<double>(history.size());
}

Image oracle_kde(std::span<const Image> history, const Image& current, double threshold) {
  if (history.empty()) throw std::invalid_argument("kde oracle: empty history");
  for (const Image& h : history)
    if (!h.same_shape(current)) throw std::invalid_argument("kde oracle: frame shapes differ");
  Image out = Image::filled(current.width, current.height, 0);
  for (int r = 0; r < current.height; ++r)
    for (int c = 0; c < current.width; ++c)
      out.at(r, c) = (kde_pdf(history, current, r, c) < threshold) ? 0 : 255;
  return out;
}

}  // namespace polysim

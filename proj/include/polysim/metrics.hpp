#pragma once

#include <array>
#include <span>

#include "polysim/image.hpp"

namespace polysim {

// Mean absolute pixel error as a percentage of full scale:
// sum(|g - s|) / (255 * H * W) * 100.
double error_rate(const Image& golden, const Image& subject);

// Edge magnitude 0.5 * (|r(i,j) - r(i+1,j+1)| + |r(i,j+1) - r(i+1,j)|) on
// [0,1]-normalized pixels, replicate padding past the bottom/right border.
Image oracle_robert(const Image& img);

// Degree-6 Bernstein approximation of x^0.45 used by the gamma circuit.
inline constexpr std::array<double, 7> kGammaCoeff = {0.0955, 0.7207, 0.3476, 0.9988,
                                                      0.7017, 0.9695, 0.9939};
double bernstein_gamma(double x);
Image oracle_gamma(const Image& img);

// The ideal power law itself, reported alongside the Bernstein target.
Image oracle_gamma_ideal(const Image& img);

// Binarization against the K x K window mean (rows i-K/2 .. i+K/2-1, same for
// columns), replicate padding; output 255 where pixel >= mean, else 0.
Image oracle_threshold(const Image& img, int window_k = 8);

// Density of the current pixel under its frame history,
// pdf = mean_i exp(-4 |x - h_i|) on normalized values. A pixel whose pdf
// falls below the threshold is labeled background (0); others 255.
Image oracle_kde(std::span<const Image> history, const Image& current, double threshold = 0.5);
double kde_pdf(std::span<const Image> history, const Image& current, int row, int col);

}  // namespace polysim

#pragma once

#include <span>
#include <vector>

#include "heliosweep/image.hpp"

namespace heliosweep {

// All metrics compare images of identical shape and disk, over in-disk pixels only
// (ShapeMismatch otherwise). Background pixels never influence a score.

double rmse(const SolarImage& a, const SolarImage& b);

/// 10 log10(peak^2 / MSE); +infinity when the images agree exactly.
double psnr(const SolarImage& a, const SolarImage& b, double peak = 1.0);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double peak = 1.0;
};

/// Mean local SSIM over windows centered in the disk. Local statistics use Gaussian
/// weights renormalized over the in-disk part of each window.
double ssim(const SolarImage& a, const SolarImage& b, const SsimOptions& options = {});

struct EvalRecord {
  double psnr = 0.0;
  double ssim = 0.0;
  double rmse = 0.0;
};

EvalRecord evaluate_pair(const SolarImage& cleaned, const SolarImage& target);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
};

/// Mean and population std. If any value is +inf the mean is +inf, and the std is 0
/// when every value is +inf (identical reconstructions), +inf otherwise.
Summary summarize(std::span<const double> values);

struct AggregateRecord {
  Summary psnr;
  Summary ssim;
  Summary rmse;
  std::size_t count = 0;
};

AggregateRecord aggregate(std::span<const EvalRecord> records);

}  // namespace heliosweep

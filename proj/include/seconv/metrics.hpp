#pragma once

#include <span>

#include "seconv/image.hpp"

namespace seconv {

enum class SsimMode { global, windowed };

// c1 = (k1 L)^2 and c2 = (k2 L)^2 stabilize the SSIM ratio. Windowed mode
// averages SSIM over every fully contained window_size x window_size
// Gaussian window.
struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
  SsimMode mode = SsimMode::global;
  int window_size = 11;
  double gaussian_sigma = 1.5;

  double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  void validate() const;
};

struct MetricReport {
  double psnr_db = 0.0;  // +infinity when mse == 0
  double ssim = 0.0;
  double mse = 0.0;
  double runtime_ms = 0.0;
};

// Mean over all C*H*W elements of the squared difference.
double mse(const Tensor& xhat, const Tensor& y);

// 10 log10(255^2 / MSE) with the peak fixed at 255; +infinity for MSE 0.
double psnr(const Tensor& xhat, const Tensor& y);

// Per-channel SSIM averaged over channels. Global mode evaluates the SSIM
// formula once with whole-channel means, (population) variances and
// covariance.
double ssim(const Tensor& xhat, const Tensor& y, const SsimParams& params = {});

// (1 / 2P) sum_i ||pred_i - target_i||^2 over a batch of P pairs.
double training_loss(std::span<const Tensor> pred_batch, std::span<const Tensor> target_batch);

MetricReport evaluate(const Tensor& xhat, const Tensor& y, const SsimParams& params = {});

}  // namespace seconv

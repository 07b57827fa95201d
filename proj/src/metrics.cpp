#include "seconv/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "seconv/errors.hpp"

namespace seconv {
namespace {

struct Moments {
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, weight = 0;

  void add(double x, double y, double w) {
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    syy += w * y * y;
    sxy += w * x * y;
    weight += w;
  }

  double ssim(double c1, double c2) const {
    const double mx = sx / weight;
    const double my = sy / weight;
    const double vx = sxx / weight - mx * mx;
    const double vy = syy / weight - my * my;
    const double cov = sxy / weight - mx * my;
    return ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
};

std::vector<double> gaussian_window(int size, double sigma) {
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  double total = 0.0;
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      const double d2 = static_cast<double>((u - r) * (u - r) + (v - r) * (v - r));
      total += w[static_cast<std::size_t>(u) * size + v] = std::exp(-d2 / (2 * sigma * sigma));
    }
  }
  for (double& x : w) x /= total;
  return w;
}

double channel_ssim_global(const Tensor& a, const Tensor& b, int k, const SsimParams& p) {
  Moments m;
  for (int i = 0; i < a.height(); ++i)
    for (int j = 0; j < a.width(); ++j) m.add(a(i, j, k), b(i, j, k), 1.0);
  return m.ssim(p.c1(), p.c2());
}

double channel_ssim_windowed(const Tensor& a, const Tensor& b, int k, const SsimParams& p,
                             const std::vector<double>& window) {
  const int s = p.window_size;
  double total = 0.0;
  std::size_t count = 0;
  for (int i = 0; i + s <= a.height(); ++i) {
    for (int j = 0; j + s <= a.width(); ++j) {
      Moments m;
      for (int u = 0; u < s; ++u)
        for (int v = 0; v < s; ++v)
          m.add(a(i + u, j + v, k), b(i + u, j + v, k), window[static_cast<std::size_t>(u) * s + v]);
      total += m.ssim(p.c1(), p.c2());
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace

void SsimParams::validate() const {
  if (!(c1() > 0.0) || !(c2() > 0.0)) throw ValidationError("SSIM constants must be positive");
  if (mode == SsimMode::windowed) {
    if (window_size < 1 || window_size % 2 == 0) {
      throw ValidationError("SSIM window size must be odd");
    }
    if (!(gaussian_sigma > 0.0)) throw ValidationError("SSIM gaussian sigma must be positive");
  }
}

static double squared_error_sum(const Tensor& a, const Tensor& b) {
  double sum = 0.0;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    const double d = a.values()[idx] - b.values()[idx];
    sum += d * d;
  }
  return sum;
}

double mse(const Tensor& xhat, const Tensor& y) {
  require_same_shape(xhat.shape(), y.shape(), "mse");
  return squared_error_sum(xhat, y) / static_cast<double>(xhat.size());
}

double psnr(const Tensor& xhat, const Tensor& y) {
  const double e = mse(xhat, y);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

double ssim(const Tensor& xhat, const Tensor& y, const SsimParams& params) {
  require_same_shape(xhat.shape(), y.shape(), "ssim");
  params.validate();
  double total = 0.0;
  if (params.mode == SsimMode::global) {
    for (int k = 0; k < xhat.channels(); ++k) total += channel_ssim_global(xhat, y, k, params);
  } else {
    if (xhat.height() < params.window_size || xhat.width() < params.window_size) {
      throw ValidationError("image is smaller than the SSIM window");
    }
    const auto window = gaussian_window(params.window_size, params.gaussian_sigma);
    for (int k = 0; k < xhat.channels(); ++k) {
      total += channel_ssim_windowed(xhat, y, k, params, window);
    }
  }
  return total / xhat.channels();
}

double training_loss(std::span<const Tensor> pred_batch, std::span<const Tensor> target_batch) {
  if (pred_batch.empty()) throw ValidationError("training_loss: empty batch");
  if (pred_batch.size() != target_batch.size()) {
    throw ShapeMismatch("training_loss: batch sizes differ");
  }
  double sum = 0.0;
  for (std::size_t p = 0; p < pred_batch.size(); ++p) {
    require_same_shape(pred_batch[p].shape(), target_batch[p].shape(), "training_loss");
    sum += squared_error_sum(pred_batch[p], target_batch[p]);
  }
  return sum / (2.0 * static_cast<double>(pred_batch.size()));
}

MetricReport evaluate(const Tensor& xhat, const Tensor& y, const SsimParams& params) {
  MetricReport r;
  r.mse = mse(xhat, y);
  r.psnr_db = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(255.0 * 255.0 / r.mse);
  r.ssim = ssim(xhat, y, params);
  return r;
}

}  // namespace seconv

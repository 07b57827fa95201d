#include <omp.h>

#include "pixel_ops.hpp"
#include "seconv/kernels.hpp"

namespace seconv::kernels {

Tensor conv2d_same(const Tensor& x, const Kernel& w, ChannelMode mode) {
  const Shape shape = x.shape();
  const bool across = mode == ChannelMode::across_channels;
  Tensor out(shape);
  const double* src = x.values().data();
  double* dst = out.values().data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      for (int k = 0; k < shape.channels; ++k) {
        dst[out.index(i, j, k)] = detail::convolve_at(src, shape, w, i, j, k, across);
      }
    }
  }
  return out;
}

Tensor selective_conv(const Tensor& x, const PixelMap& clean, const Kernel& w) {
  const Shape shape = x.shape();
  Tensor out(shape);
  const double* src = x.values().data();
  const std::uint8_t* mask = clean.bits().data();
  double* dst = out.values().data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      for (int k = 0; k < shape.channels; ++k) {
        dst[out.index(i, j, k)] =
            detail::ratio_or_zero(detail::window_sums(src, mask, shape, w, i, j, k));
      }
    }
  }
  return out;
}

BlockStep restore_block(const Tensor& x, const PixelMap& noisy, const Kernel& w, int eta) {
  const Shape shape = x.shape();
  const auto clean = detail::flip_bits(noisy);
  BlockStep step{x, noisy, 0};
  const double* src = x.values().data();
  const std::uint8_t* in_noisy = noisy.bits().data();
  double* dst = step.image.values().data();
  std::uint8_t* out_noisy = step.noisy.bits().data();
  std::size_t restored = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : restored)
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      for (int k = 0; k < shape.channels; ++k) {
        const std::size_t idx = x.index(i, j, k);
        if (!in_noisy[idx]) continue;
        const auto sums = detail::window_sums(src, clean.data(), shape, w, i, j, k);
        if (sums.clean < eta) continue;
        const double value = src[idx] + detail::ratio_or_zero(sums);
        dst[idx] = value;
        if (value != 0.0) {
          out_noisy[idx] = 0;
          ++restored;
        }
      }
    }
  }
  step.restored = restored;
  return step;
}

Tensor conv_layer(const Tensor& x, std::span<const double> weights, int out_channels,
                  int kernel_h, int kernel_w, std::span<const double> bias) {
  const Shape shape = x.shape();
  Tensor out(Shape{shape.height, shape.width, out_channels});
  const double* src = x.values().data();
  const double* b = bias.empty() ? nullptr : bias.data();
  double* dst = out.values().data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      detail::conv_layer_at(src, shape, weights.data(), out_channels, kernel_h, kernel_w, b, i, j,
                            dst + out.index(i, j, 0));
    }
  }
  return out;
}

Tensor median_filter(const Tensor& x, int window) {
  const Shape shape = x.shape();
  Tensor out(shape);
  const double* src = x.values().data();
  double* dst = out.values().data();
#pragma omp parallel
  {
    std::vector<double> scratch;
    scratch.reserve(static_cast<std::size_t>(window) * window);
#pragma omp for schedule(static)
    for (int i = 0; i < shape.height; ++i) {
      for (int j = 0; j < shape.width; ++j) {
        for (int k = 0; k < shape.channels; ++k) {
          dst[out.index(i, j, k)] = detail::window_median(src, shape, i, j, k, window, scratch);
        }
      }
    }
  }
  return out;
}

Tensor adaptive_median_filter(const Tensor& x, int max_window, double peak) {
  const Shape shape = x.shape();
  Tensor out(shape);
  const double* src = x.values().data();
  double* dst = out.values().data();
#pragma omp parallel
  {
    std::vector<double> scratch;
    scratch.reserve(static_cast<std::size_t>(max_window) * max_window);
#pragma omp for schedule(dynamic, 8)
    for (int i = 0; i < shape.height; ++i) {
      for (int j = 0; j < shape.width; ++j) {
        for (int k = 0; k < shape.channels; ++k) {
          dst[out.index(i, j, k)] =
              detail::adaptive_median_at(src, shape, i, j, k, max_window, peak, scratch);
        }
      }
    }
  }
  return out;
}

Tensor sap_noise(const Tensor& y, double salt_prob, double pepper_prob, std::uint64_t seed,
                 SapCounts& counts) {
  Tensor out = y;
  const std::uint64_t key = detail::splitmix64(seed);
  const auto n = static_cast<std::int64_t>(y.size());
  double* dst = out.values().data();
  std::size_t salt = 0;
  std::size_t pepper = 0;
#pragma omp parallel for schedule(static) reduction(+ : salt, pepper)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const double u = detail::counter_uniform(key, static_cast<std::uint64_t>(idx));
    switch (detail::sap_event(u, salt_prob, pepper_prob)) {
      case detail::SapEvent::salt:
        dst[idx] = 255.0;
        ++salt;
        break;
      case detail::SapEvent::pepper:
        dst[idx] = 0.0;
        ++pepper;
        break;
      case detail::SapEvent::none:
        break;
    }
  }
  counts = {salt, pepper};
  return out;
}

}  // namespace seconv::kernels

#include "pixel_ops.hpp"
#include "seconv/kernels.hpp"

namespace seconv::reference {

Tensor conv2d_same(const Tensor& x, const Kernel& w, ChannelMode mode) {
  const Shape shape = x.shape();
  const bool across = mode == ChannelMode::across_channels;
  Tensor out(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      for (int k = 0; k < shape.channels; ++k)
        out(i, j, k) = detail::convolve_at(x.values().data(), shape, w, i, j, k, across);
  return out;
}

Tensor selective_conv(const Tensor& x, const PixelMap& clean, const Kernel& w) {
  const Shape shape = x.shape();
  Tensor out(shape);
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      for (int k = 0; k < shape.channels; ++k)
        out(i, j, k) = detail::ratio_or_zero(
            detail::window_sums(x.values().data(), clean.bits().data(), shape, w, i, j, k));
  return out;
}

BlockStep restore_block(const Tensor& x, const PixelMap& noisy, const Kernel& w, int eta) {
  const Shape shape = x.shape();
  const auto clean = detail::flip_bits(noisy);
  BlockStep step{x, noisy, 0};
  for (int i = 0; i < shape.height; ++i) {
    for (int j = 0; j < shape.width; ++j) {
      for (int k = 0; k < shape.channels; ++k) {
        if (!noisy(i, j, k)) continue;
        const auto sums = detail::window_sums(x.values().data(), clean.data(), shape, w, i, j, k);
        if (sums.clean < eta) continue;
        const double value = x(i, j, k) + detail::ratio_or_zero(sums);
        step.image(i, j, k) = value;
        if (value != 0.0) {
          step.noisy(i, j, k) = 0;
          ++step.restored;
        }
      }
    }
  }
  return step;
}

Tensor conv_layer(const Tensor& x, std::span<const double> weights, int out_channels,
                  int kernel_h, int kernel_w, std::span<const double> bias) {
  const Shape shape = x.shape();
  Tensor out(Shape{shape.height, shape.width, out_channels});
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      detail::conv_layer_at(x.values().data(), shape, weights.data(), out_channels, kernel_h,
                            kernel_w, bias.empty() ? nullptr : bias.data(), i, j,
                            out.values().data() + out.index(i, j, 0));
  return out;
}

Tensor median_filter(const Tensor& x, int window) {
  const Shape shape = x.shape();
  Tensor out(shape);
  std::vector<double> scratch;
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      for (int k = 0; k < shape.channels; ++k)
        out(i, j, k) = detail::window_median(x.values().data(), shape, i, j, k, window, scratch);
  return out;
}

Tensor adaptive_median_filter(const Tensor& x, int max_window, double peak) {
  const Shape shape = x.shape();
  Tensor out(shape);
  std::vector<double> scratch;
  for (int i = 0; i < shape.height; ++i)
    for (int j = 0; j < shape.width; ++j)
      for (int k = 0; k < shape.channels; ++k)
        out(i, j, k) = detail::adaptive_median_at(x.values().data(), shape, i, j, k, max_window,
                                                  peak, scratch);
  return out;
}

Tensor sap_noise(const Tensor& y, double salt_prob, double pepper_prob, std::uint64_t seed,
                 SapCounts& counts) {
  Tensor out = y;
  counts = {};
  const std::uint64_t key = detail::splitmix64(seed);
  for (std::size_t idx = 0; idx < y.size(); ++idx) {
    const double u = detail::counter_uniform(key, idx);
    switch (detail::sap_event(u, salt_prob, pepper_prob)) {
      case detail::SapEvent::salt:
        out.values()[idx] = 255.0;
        ++counts.salt;
        break;
      case detail::SapEvent::pepper:
        out.values()[idx] = 0.0;
        ++counts.pepper;
        break;
      case detail::SapEvent::none:
        break;
    }
  }
  return out;
}

}  // namespace seconv::reference

#pragma once

#include <span>
#include <vector>

#include "seconv/image.hpp"

namespace seconv {

// Square s x s kernel with s odd, stored row-major. Entry (u, v) sits at
// spatial offset (u - radius, v - radius) from the window center.
class Kernel {
 public:
  Kernel(int size, std::vector<double> weights);

  static Kernel ones(int size);
  // 1 / euclidean distance to the center; the center itself weighs 1.
  static Kernel inverse_distance(int size);

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double operator()(int u, int v) const noexcept { return weights_[u * size_ + v]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  int size_ = 0;
  std::vector<double> weights_;
};

enum class ChannelMode {
  per_channel,      // each channel convolved on its own with the same 2-D kernel
  across_channels,  // kernel broadcast over the channel axis: every output channel sums all inputs
};

// Stride-1 true convolution (kernel flipped) with zero padding of radius on
// each side; the output has the input's shape.
Tensor conv2d_same(const Tensor& x, const Kernel& w, ChannelMode mode = ChannelMode::per_channel);

}  // namespace seconv

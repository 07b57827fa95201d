#include "seconv/conv.hpp"

#include <cmath>
#include <string>

#include "seconv/errors.hpp"
#include "seconv/kernels.hpp"

namespace seconv {

static void check_odd_size(int size) {
  if (size < 1 || size % 2 == 0) {
    throw ValidationError("kernel size must be a positive odd integer, got " +
                          std::to_string(size));
  }
}

Kernel::Kernel(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
  check_odd_size(size);
  if (weights_.size() != static_cast<std::size_t>(size) * size) {
    throw ValidationError("kernel of size " + std::to_string(size) + " needs " +
                          std::to_string(size * size) + " weights, got " +
                          std::to_string(weights_.size()));
  }
}

Kernel Kernel::ones(int size) {
  check_odd_size(size);
  return Kernel(size, std::vector<double>(static_cast<std::size_t>(size) * size, 1.0));
}

Kernel Kernel::inverse_distance(int size) {
  check_odd_size(size);
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      const int du = u - r;
      const int dv = v - r;
      w[static_cast<std::size_t>(u) * size + v] =
          (du == 0 && dv == 0) ? 1.0 : 1.0 / std::sqrt(static_cast<double>(du * du + dv * dv));
    }
  }
  return Kernel(size, std::move(w));
}

Tensor conv2d_same(const Tensor& x, const Kernel& w, ChannelMode mode) {
  return kernels::conv2d_same(x, w, mode);
}

}  // namespace seconv

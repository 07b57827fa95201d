#pragma once

// Hot loops of the toolkit. Every routine exists twice with identical
// signatures: seconv::kernels runs with OpenMP over output rows,
// seconv::reference is a plain serial loop nest kept for testing and
// benchmarking. Each output element is accumulated sequentially by one
// thread, so both produce bit-identical results for any thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "seconv/conv.hpp"
#include "seconv/image.hpp"

namespace seconv {

struct BlockStep {
  Tensor image;
  PixelMap noisy;
  std::size_t restored = 0;
};

struct SapCounts {
  std::size_t salt = 0;
  std::size_t pepper = 0;
};

#define SECONV_KERNEL_DECLARATIONS                                                               \
  Tensor conv2d_same(const Tensor& x, const Kernel& w, ChannelMode mode);                      \
  /* conv(x, w) / conv(clean, w) where the denominator is nonzero, else 0. */                  \
  Tensor selective_conv(const Tensor& x, const PixelMap& clean, const Kernel& w);              \
  /* One SeConv restoration pass with simultaneous update. */                                  \
  BlockStep restore_block(const Tensor& x, const PixelMap& noisy, const Kernel& w, int eta);   \
  /* Multi-channel cross-correlation; weights laid out [out][in][kh][kw]. */                   \
  Tensor conv_layer(const Tensor& x, std::span<const double> weights, int out_channels,        \
                    int kernel_h, int kernel_w, std::span<const double> bias);                 \
  Tensor median_filter(const Tensor& x, int window);                                           \
  Tensor adaptive_median_filter(const Tensor& x, int max_window, double peak);                 \
  Tensor sap_noise(const Tensor& y, double salt_prob, double pepper_prob, std::uint64_t seed,  \
                   SapCounts& counts);

namespace kernels {
SECONV_KERNEL_DECLARATIONS
}  // namespace kernels

namespace reference {
SECONV_KERNEL_DECLARATIONS
}  // namespace reference

#undef SECONV_KERNEL_DECLARATIONS

}  // namespace seconv

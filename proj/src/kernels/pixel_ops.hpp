#pragma once

// Per-element bodies shared by the parallel and serial loop nests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "seconv/conv.hpp"
#include "seconv/image.hpp"

namespace seconv::detail {

// Output (i, j, k) of a zero-padded true convolution. Kernel entry (u, v)
// multiplies the input at (i - (u - r), j - (v - r)).
template <typename Source>
inline double convolve_at(const Source& src, const Shape& shape, const Kernel& w, int i, int j,
                          int k, bool across_channels) {
  const int r = w.radius();
  const int s = w.size();
  const int c0 = across_channels ? 0 : k;
  const int c1 = across_channels ? shape.channels : k + 1;
  double acc = 0.0;
  for (int u = 0; u < s; ++u) {
    const int ii = i - (u - r);
    if (ii < 0 || ii >= shape.height) continue;
    for (int v = 0; v < s; ++v) {
      const int jj = j - (v - r);
      if (jj < 0 || jj >= shape.width) continue;
      const double wv = w(u, v);
      const std::size_t base = (static_cast<std::size_t>(ii) * shape.width + jj) * shape.channels;
      for (int c = c0; c < c1; ++c) acc += wv * static_cast<double>(src[base + c]);
    }
  }
  return acc;
}

struct WindowSums {
  double weighted = 0.0;  // [x * w]
  double weight = 0.0;    // [clean * w]
  int clean = 0;          // [clean * ones]
};

// Numerator, denominator and clean-pixel count of the selective convolution
// at (i, j, k); per channel, zero padded.
inline WindowSums window_sums(const double* x, const std::uint8_t* clean, const Shape& shape,
                              const Kernel& w, int i, int j, int k) {
  const int r = w.radius();
  const int s = w.size();
  WindowSums sums;
  for (int u = 0; u < s; ++u) {
    const int ii = i - (u - r);
    if (ii < 0 || ii >= shape.height) continue;
    for (int v = 0; v < s; ++v) {
      const int jj = j - (v - r);
      if (jj < 0 || jj >= shape.width) continue;
      const std::size_t idx =
          (static_cast<std::size_t>(ii) * shape.width + jj) * shape.channels + k;
      const double wv = w(u, v);
      sums.weighted += wv * x[idx];
      if (clean[idx]) {
        sums.weight += wv;
        ++sums.clean;
      }
    }
  }
  return sums;
}

inline double ratio_or_zero(const WindowSums& sums) {
  return sums.weight != 0.0 ? sums.weighted / sums.weight : 0.0;
}

// Clean flags derived from a noisy map: [M~] = 1 - [M].
inline std::vector<std::uint8_t> flip_bits(const PixelMap& noisy) {
  std::vector<std::uint8_t> clean(noisy.size());
  std::transform(noisy.bits().begin(), noisy.bits().end(), clean.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
  return clean;
}

// Cross-correlation of all input channels at (i, j) into out_channels values.
inline void conv_layer_at(const double* x, const Shape& shape, const double* weights,
                          int out_channels, int kh, int kw, const double* bias, int i, int j,
                          double* out) {
  const int rh = kh / 2;
  const int rw = kw / 2;
  const int cin = shape.channels;
  for (int o = 0; o < out_channels; ++o) {
    double acc = bias ? bias[o] : 0.0;
    const double* wo = weights + static_cast<std::size_t>(o) * cin * kh * kw;
    for (int c = 0; c < cin; ++c) {
      const double* woc = wo + static_cast<std::size_t>(c) * kh * kw;
      for (int u = 0; u < kh; ++u) {
        const int ii = i + u - rh;
        if (ii < 0 || ii >= shape.height) continue;
        for (int v = 0; v < kw; ++v) {
          const int jj = j + v - rw;
          if (jj < 0 || jj >= shape.width) continue;
          acc += woc[u * kw + v] *
                 x[(static_cast<std::size_t>(ii) * shape.width + jj) * cin + c];
        }
      }
    }
    out[o] = acc;
  }
}

inline int clamp_index(int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); }

// Edge-replicated window gather; returns the median of window^2 values.
inline double window_median(const double* x, const Shape& shape, int i, int j, int k, int window,
                            std::vector<double>& scratch) {
  const int r = window / 2;
  scratch.clear();
  for (int di = -r; di <= r; ++di) {
    const int ii = clamp_index(i + di, shape.height);
    for (int dj = -r; dj <= r; ++dj) {
      const int jj = clamp_index(j + dj, shape.width);
      scratch.push_back(x[(static_cast<std::size_t>(ii) * shape.width + jj) * shape.channels + k]);
    }
  }
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  return *mid;
}

// Only extreme-valued pixels (0 or peak) are candidates. The window grows
// from 3 until its median is not extreme; at max_window the last median is
// used as is.
inline double adaptive_median_at(const double* x, const Shape& shape, int i, int j, int k,
                                 int max_window, double peak, std::vector<double>& scratch) {
  const double v = x[(static_cast<std::size_t>(i) * shape.width + j) * shape.channels + k];
  if (v != 0.0 && v != peak) return v;
  double med = v;
  for (int w = 3; w <= max_window; w += 2) {
    med = window_median(x, shape, i, j, k, w, scratch);
    if (med != 0.0 && med != peak) return med;
  }
  return med;
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in [0, 1) keyed on (seed, element index), independent of the order
// in which elements are visited.
inline double counter_uniform(std::uint64_t seed_key, std::uint64_t counter) {
  return static_cast<double>(splitmix64(seed_key + counter) >> 11) * 0x1.0p-53;
}

enum class SapEvent { none, salt, pepper };

inline SapEvent sap_event(double u, double salt_prob, double pepper_prob) {
  if (u < pepper_prob) return SapEvent::pepper;
  if (u >= 1.0 - salt_prob) return SapEvent::salt;
  return SapEvent::none;
}

}  // namespace seconv::detail

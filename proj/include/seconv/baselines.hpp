#pragma once

#include "seconv/image.hpp"

namespace seconv {

struct MedianSpec {
  int window = 3;
  int max_window = 7;

  void validate() const;
};

// Each pixel replaced by the median of its window; borders replicate edges.
Image median_filter(const Image& x, int window);

// Only 0 or peak-valued pixels are touched. For such a pixel the window
// grows 3, 5, ... up to max_window until its median is not 0 or peak, and
// the pixel takes that median (or the last median once max_window is hit).
Image adaptive_median_filter(const Image& x, int max_window);

}  // namespace seconv

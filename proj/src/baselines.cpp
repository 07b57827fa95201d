#include "seconv/baselines.hpp"

#include <string>

#include "seconv/errors.hpp"
#include "seconv/kernels.hpp"

namespace seconv {

static void check_window(int window, const char* what) {
  if (window < 3 || window % 2 == 0) {
    throw ValidationError(std::string(what) + " must be an odd integer >= 3, got " +
                          std::to_string(window));
  }
}

void MedianSpec::validate() const {
  check_window(window, "median window");
  check_window(max_window, "adaptive median max window");
  if (max_window < window) throw ValidationError("max_window must be >= window");
}

Image median_filter(const Image& x, int window) {
  check_window(window, "median window");
  return Image(kernels::median_filter(x, window), x.scale());
}

Image adaptive_median_filter(const Image& x, int max_window) {
  check_window(max_window, "adaptive median max window");
  return Image(kernels::adaptive_median_filter(x, max_window, peak_value(x.scale())), x.scale());
}

}  // namespace seconv

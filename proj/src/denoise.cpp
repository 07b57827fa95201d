#include "seconv/denoise.hpp"

#include <string>

#include "seconv/baselines.hpp"
#include "seconv/errors.hpp"

namespace seconv {

std::string_view method_name(Method method) noexcept {
  switch (method) {
    case Method::none:
      return "none";
    case Method::mf:
      return "mf";
    case Method::amf:
      return "amf";
    case Method::cascade:
      return "cascade";
    case Method::network:
      return "network";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::none, Method::mf, Method::amf, Method::cascade, Method::network}) {
    if (method_name(m) == name) return m;
  }
  throw ValidationError("unknown method `" + std::string(name) +
                        "` (expected none, mf, amf, cascade or network)");
}

DenoiseOutcome denoise(const Image& noisy, const DenoiseOptions& options) {
  switch (options.method) {
    case Method::none:
      return {noisy, std::nullopt};
    case Method::mf:
      return {median_filter(noisy, options.median_window), std::nullopt};
    case Method::amf:
      return {adaptive_median_filter(noisy, options.amf_max_window), std::nullopt};
    case Method::cascade: {
      auto result = cascade_denoise_report(noisy, options.cascade);
      return {std::move(result.image), std::move(result.report)};
    }
    case Method::network:
      if (options.network == nullptr) {
        throw ValidationError("method `network` requires a weights file");
      }
      return {forward(*options.network, noisy), std::nullopt};
  }
  throw ValidationError("unhandled method");
}

}  // namespace seconv

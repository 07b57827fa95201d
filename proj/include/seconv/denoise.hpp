#pragma once

#include <optional>
#include <string_view>

#include "seconv/image.hpp"
#include "seconv/network.hpp"
#include "seconv/seconv_block.hpp"

namespace seconv {

// `none` passes the noisy image through; it scores the unrestored input.
enum class Method { none, mf, amf, cascade, network };

std::string_view method_name(Method method) noexcept;
// Throws ValidationError for unknown ids.
Method parse_method(std::string_view name);

struct DenoiseOptions {
  Method method = Method::cascade;
  int median_window = 3;
  int amf_max_window = 7;
  CascadeSpec cascade = CascadeSpec::standard();
  const NetworkGraph* network = nullptr;  // required for Method::network
};

struct DenoiseOutcome {
  Image image;
  std::optional<CascadeReport> cascade_report;
};

DenoiseOutcome denoise(const Image& noisy, const DenoiseOptions& options);

}  // namespace seconv

#pragma once

#include <cstddef>
#include <cstdint>

#include "seconv/image.hpp"

namespace seconv {

// Salt-and-pepper corruption parameters: a pixel becomes 255 with
// probability salt_prob, 0 with probability pepper_prob, and keeps its value
// otherwise. density = salt_prob + pepper_prob.
struct NoiseSpec {
  double density = 0.0;
  double salt_prob = 0.0;
  double pepper_prob = 0.0;
  std::uint64_t seed = 0;

  // Even salt/pepper split.
  static NoiseSpec symmetric(double density, std::uint64_t seed);
  static NoiseSpec split(double salt_prob, double pepper_prob, std::uint64_t seed);

  // Throws ValidationError on negative probabilities, density > 1, or a
  // density that disagrees with salt + pepper by more than 1e-12.
  void validate() const;
};

struct NoisyImage {
  Image image;
  std::size_t salt = 0;
  std::size_t pepper = 0;

  std::size_t corrupted() const noexcept { return salt + pepper; }
};

// One uniform draw u per element, keyed on (seed, element index):
// u < pepper_prob gives 0, u >= 1 - salt_prob gives 255. Channels are
// corrupted independently. The result does not depend on the thread count.
NoisyImage corrupt(const Image& clean, const NoiseSpec& spec);
Image add_sap_noise(const Image& clean, const NoiseSpec& spec);

// Maps every 255 to 0.
Image preprocess(const Image& x);

}  // namespace seconv

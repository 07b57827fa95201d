#include "seconv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seconv/errors.hpp"
#include "seconv/kernels.hpp"

namespace seconv {

NoiseSpec NoiseSpec::symmetric(double density, std::uint64_t seed) {
  NoiseSpec spec{density, density / 2.0, density / 2.0, seed};
  spec.validate();
  return spec;
}

NoiseSpec NoiseSpec::split(double salt_prob, double pepper_prob, std::uint64_t seed) {
  NoiseSpec spec{salt_prob + pepper_prob, salt_prob, pepper_prob, seed};
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(salt_prob) || !in_unit(pepper_prob)) {
    throw ValidationError("salt and pepper probabilities must lie in [0, 1]");
  }
  if (!in_unit(density)) {
    throw ValidationError("noise density must lie in [0, 1], got " + std::to_string(density));
  }
  if (std::abs(salt_prob + pepper_prob - density) > 1e-12) {
    throw ValidationError("salt + pepper probabilities must equal the density");
  }
}

NoisyImage corrupt(const Image& clean, const NoiseSpec& spec) {
  spec.validate();
  if (clean.scale() != Scale::u8) throw ValidationError("SAP noise expects a u8-scale image");
  SapCounts counts;
  Tensor noisy = kernels::sap_noise(clean, spec.salt_prob, spec.pepper_prob, spec.seed, counts);
  return {Image(std::move(noisy), Scale::u8), counts.salt, counts.pepper};
}

Image add_sap_noise(const Image& clean, const NoiseSpec& spec) {
  return corrupt(clean, spec).image;
}

Image preprocess(const Image& x) {
  if (x.scale() != Scale::u8) throw ValidationError("preprocess expects a u8-scale image");
  Image out = x;
  std::replace(out.values().begin(), out.values().end(), 255.0, 0.0);
  return out;
}

}  // namespace seconv

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seconv/cascade_config.hpp"
#include "seconv/errors.hpp"
#include "seconv/noise.hpp"
#include "seconv/seconv_block.hpp"

using namespace seconv;

namespace {

Image gray(int h, int w, std::vector<double> v) {
  return Image(Tensor(Shape{h, w, 1}, std::move(v)), Scale::u8);
}

Image smooth_gradient(int n) {
  Image img(Shape{n, n, 1}, Scale::u8);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) img(i, j, 0) = 20.0 + std::floor(200.0 * (i + j) / (2.0 * n));
  return img;
}

std::size_t zeros(const Tensor& t) {
  return static_cast<std::size_t>(std::count(t.values().begin(), t.values().end(), 0.0));
}

}  // namespace

TEST_CASE("selective convolution averages the non-noisy neighbours") {
  Image x = gray(3, 3, {100, 100, 100, 100, 0, 100, 100, 100, 100});
  CHECK(selective_conv(x, complement(noisy_map(x)), Kernel::ones(3))(1, 1, 0) == 100.0);

  x = gray(3, 3, {10, 20, 30, 40, 0, 50, 60, 70, 80});
  CHECK(selective_conv(x, complement(noisy_map(x)), Kernel::ones(3))(1, 1, 0) == 45.0);
}

TEST_CASE("mask-convolution form equals the direct sum form") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> density(0.1, 0.95);
  for (int trial = 0; trial < 60; ++trial) {
    const int s = 3 + 2 * (trial % 4);
    const int channels = trial % 3 == 0 ? 3 : 1;
    const Image x = oracle::random_preprocessed(rng, Shape{16, 16, channels}, density(rng));
    const auto w = oracle::random_weights(rng, static_cast<std::size_t>(s) * s);
    const Tensor got = selective_conv(x, complement(noisy_map(x)), Kernel(s, w));
    const Tensor want = oracle::selective_sum(x, w, s);
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(std::abs(got.values()[i] - want.values()[i]) <= 1e-6);
    }
  }
}

TEST_CASE("selective convolution is zero where no clean pixel is in reach") {
  const Image x(Shape{5, 5, 1}, Scale::u8, 0.0);
  const Tensor s = selective_conv(x, complement(noisy_map(x)), Kernel::ones(3));
  CHECK(s == Tensor(x.shape(), 0.0));
}

TEST_CASE("reliability counts clean pixels in the window") {
  const Shape shape{5, 5, 1};
  CHECK(reliability(PixelMap(shape, 1), 3, 1) == PixelMap(shape, 1));
  CHECK(reliability(PixelMap(shape, 0), 3, 1) == PixelMap(shape, 0));

  PixelMap single(shape, 0);
  single(2, 2, 0) = 1;
  const PixelMap r = reliability(single, 3, 1);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const bool near = std::abs(i - 2) <= 1 && std::abs(j - 2) <= 1;
      CHECK(r(i, j, 0) == (near ? 1 : 0));
    }

  // Borders count as noisy: a corner of an all-clean map sees 4 of 9.
  const PixelMap border = reliability(PixelMap(shape, 1), 3, 5);
  CHECK(border(0, 0, 0) == 0);
  CHECK(border(0, 2, 0) == 1);
  CHECK(border(2, 2, 0) == 1);
}

TEST_CASE("apply_block leaves clean images alone") {
  std::mt19937_64 rng(1);
  const Image x = oracle::random_u8(rng, Shape{12, 12, 3}, 1, 254);
  const RestorationState out = apply_block(RestorationState(x), SeConvBlockSpec::make(3));
  CHECK(out.image == x);
  CHECK(out.restored_count == 0);
}

TEST_CASE("apply_block respects the reliability gate") {
  Image x(Shape{5, 5, 1}, Scale::u8, 0.0);
  x(0, 0, 0) = 50;  // far from the centre pixel
  const RestorationState out = apply_block(RestorationState(x), SeConvBlockSpec::make(3));
  CHECK(out.image(2, 2, 0) == 0.0);
  CHECK(out.noisy(2, 2, 0) == 1);
  CHECK(out.image(1, 1, 0) == 50.0);
  CHECK(out.restored_count == 3);  // (0,1), (1,0), (1,1)
}

TEST_CASE("checkerboard of clean and noisy pixels is fully restored") {
  Image x(Shape{8, 8, 1}, Scale::u8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) x(i, j, 0) = (i + j) % 2 == 0 ? 100.0 : 0.0;
  const RestorationState out = apply_block(RestorationState(x), SeConvBlockSpec::make(3));
  CHECK(out.image == Image(Shape{8, 8, 1}, Scale::u8, 100.0));
  CHECK(out.restored_count == 32);
  CHECK(out.noisy.count() == 0);
}

TEST_CASE("restorations within one block do not feed each other") {
  const Image x = gray(1, 3, {100, 0, 0});
  const RestorationState out = apply_block(RestorationState(x), SeConvBlockSpec::make(3));
  CHECK(out.image(0, 1, 0) == 100.0);
  CHECK(out.image(0, 2, 0) == 0.0);
  CHECK(out.noisy == noisy_map(out.image));
}

TEST_CASE("standard cascade spec") {
  const CascadeSpec spec = CascadeSpec::standard();
  REQUIRE(spec.blocks.size() == 7);
  for (std::size_t b = 0; b < 7; ++b) {
    CHECK(spec.blocks[b].size() == 3 + 2 * static_cast<int>(b));
    CHECK(spec.blocks[b].eta == spec.blocks[b].size() - 2);
  }
  CHECK(SeConvBlockSpec::default_eta(3) == 1);
  CHECK(SeConvBlockSpec::default_eta(15) == 13);

  CascadeSpec bad = spec;
  std::swap(bad.blocks[0], bad.blocks[1]);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("cascade on a noise-free image only touches 255 pixels") {
  std::mt19937_64 rng(2);
  Image y = oracle::random_u8(rng, Shape{24, 24, 1}, 1, 254);
  y(10, 10, 0) = 255;
  const Image out = cascade_denoise(y, CascadeSpec::standard());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y.values()[i] != 255.0) REQUIRE(out.values()[i] == y.values()[i]);
  }
  CHECK(out(10, 10, 0) > 0.0);
  CHECK(out(10, 10, 0) < 255.0);
}

TEST_CASE("half-noisy smooth gradient is cleared by the blocks alone") {
  const Image y = smooth_gradient(256);
  CascadeSpec spec = CascadeSpec::standard(KernelChoice::ones, Finalize::leave);
  int cleared_by_size7 = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Image x = add_sap_noise(y, NoiseSpec::symmetric(0.5, seed));
    const CascadeResult r = cascade_denoise_report(x, spec);
    REQUIRE(zeros(r.image) == 0);
    cleared_by_size7 += r.report.stages[2].remaining == 0;
  }
  CHECK(cleared_by_size7 == 100);
}

TEST_CASE("repeat_last clears 95% noise") {
  const Image y = smooth_gradient(128);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Image x = add_sap_noise(y, NoiseSpec::symmetric(0.95, seed));
    const Image out = cascade_denoise(x, CascadeSpec::standard());
    CHECK(zeros(out) == 0);
  }
}

TEST_CASE("unrestorable images") {
  const Image all_noisy(Shape{6, 6, 1}, Scale::u8, 255.0);
  CHECK_THROWS_AS(
      cascade_denoise(all_noisy, CascadeSpec::standard(KernelChoice::ones, Finalize::global_mean_fill)),
      UnrestorableImage);
  CHECK_THROWS_AS(cascade_denoise(all_noisy, CascadeSpec::standard()), UnrestorableImage);
  const Image left = cascade_denoise(all_noisy, CascadeSpec::standard(KernelChoice::ones, Finalize::leave));
  CHECK(zeros(left) == left.size());
}

TEST_CASE("global mean fill uses the non-noisy mean") {
  Image x(Shape{1, 40, 1}, Scale::u8, 0.0);
  x(0, 0, 0) = 10;
  x(0, 1, 0) = 30;
  CascadeSpec spec;
  spec.blocks.push_back(SeConvBlockSpec::make(3));
  spec.finalize = Finalize::global_mean_fill;
  const CascadeResult r = cascade_denoise_report(x, spec);
  // The 3x3 block restores (0,2) to 30; the fill then uses mean(10, 30, 30).
  CHECK(r.image(0, 2, 0) == 30.0);
  CHECK(r.report.fill_value == doctest::Approx(70.0 / 3.0));
  CHECK(r.image(0, 39, 0) == doctest::Approx(70.0 / 3.0));
  CHECK(zeros(r.image) == 0);
}

TEST_CASE("cascade properties on random inputs") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> density(0.1, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const int channels = trial % 2 ? 3 : 1;
    const Image y = oracle::random_u8(rng, Shape{20 + trial % 5, 24, channels});
    const Image x = add_sap_noise(y, NoiseSpec::symmetric(density(rng), trial));
    const Image pre = preprocess(x);
    const CascadeSpec spec = CascadeSpec::standard();

    // clean pixels pass through exactly
    const Image out = cascade_denoise(x, spec);
    for (std::size_t i = 0; i < pre.size(); ++i) {
      if (pre.values()[i] != 0.0) REQUIRE(out.values()[i] == pre.values()[i]);
    }

    // zero count never grows; it shrinks whenever some noisy pixel is reliable
    RestorationState state(pre);
    for (const auto& block : spec.blocks) {
      const std::size_t before = zeros(state.image);
      const PixelMap r = reliability(complement(state.noisy), block.size(), block.eta);
      bool any_reliable = false;
      for (std::size_t i = 0; i < r.size(); ++i) any_reliable |= r.bits()[i] && state.noisy.bits()[i];
      state = apply_block(state, block);
      REQUIRE(zeros(state.image) <= before);
      if (any_reliable) REQUIRE(zeros(state.image) < before);
      REQUIRE(state.noisy == noisy_map(state.image));
    }

    // horizontal flip commutes with denoising
    Image flipped = x;
    for (int i = 0; i < x.height(); ++i)
      for (int j = 0; j < x.width(); ++j)
        for (int k = 0; k < channels; ++k) flipped(i, j, k) = x(i, x.width() - 1 - j, k);
    const Image out_flipped = cascade_denoise(flipped, spec);
    for (int i = 0; i < x.height(); ++i)
      for (int j = 0; j < x.width(); ++j)
        for (int k = 0; k < channels; ++k)
          REQUIRE(std::abs(out_flipped(i, x.width() - 1 - j, k) - out(i, j, k)) <= 1e-9);

    // idempotent once nothing is noisy
    CHECK(cascade_denoise(out, spec) == out);
  }
}

TEST_CASE("cascade config parsing") {
  const CascadeSpec spec = parse_cascade_config(
      "# comment\n"
      "sizes = 3, 7,11\n"
      "kernel = inverse_distance  # weighted\n"
      "finalize = leave\n");
  REQUIRE(spec.blocks.size() == 3);
  CHECK(spec.blocks[1].size() == 7);
  CHECK(spec.blocks[1].eta == 5);
  CHECK(spec.blocks[2].kernel == Kernel::inverse_distance(11));
  CHECK(spec.finalize == Finalize::leave);

  const CascadeSpec fixed = parse_cascade_config("eta = 2\n");
  CHECK(fixed.blocks.size() == 7);
  CHECK(fixed.blocks[6].eta == 2);
  CHECK(fixed.finalize == Finalize::repeat_last);

  CHECK_THROWS_AS(parse_cascade_config("sizes = 3,4\n"), ValidationError);
  CHECK_THROWS_AS(parse_cascade_config("sizes = 5,3\n"), ValidationError);
  CHECK_THROWS_AS(parse_cascade_config("colour = red\n"), ValidationError);
  CHECK_THROWS_AS(parse_cascade_config("finalize = never\n"), ValidationError);
  CHECK_THROWS_AS(parse_cascade_config("eta = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_cascade_config("sizes\n"), ValidationError);
}

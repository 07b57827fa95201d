#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "seconv/errors.hpp"
#include "seconv/metrics.hpp"

using namespace seconv;

TEST_CASE("mse examples") {
  const Shape s{4, 4, 1};
  CHECK(mse(Tensor(s, 7.0), Tensor(s, 7.0)) == 0.0);
  CHECK(mse(Tensor(s, 0.0), Tensor(s, 255.0)) == 65025.0);
  Tensor a(s, 10.0), b(s, 10.0);
  for (double& v : b.values()) v += 1.0;
  CHECK(mse(a, b) == 1.0);
  CHECK_THROWS_AS(mse(Tensor(s), Tensor(Shape{4, 4, 3})), ShapeMismatch);
}

TEST_CASE("psnr examples") {
  const Shape s{8, 8, 3};
  CHECK(std::isinf(psnr(Tensor(s, 3.0), Tensor(s, 3.0))));
  CHECK(psnr(Tensor(s, 0.0), Tensor(s, 255.0)) == doctest::Approx(0.0));
  CHECK(psnr(Tensor(s, 10.0), Tensor(s, 11.0)) == doctest::Approx(48.1308).epsilon(1e-6));
}

TEST_CASE("ssim fixed points") {
  std::mt19937_64 rng(3);
  const Tensor x = oracle::random_u8(rng, Shape{16, 16, 3});
  CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));

  const SsimParams p;
  const double expected = p.c1() / (255.0 * 255.0 + p.c1());
  const Shape s{8, 8, 1};
  CHECK(ssim(Tensor(s, 0.0), Tensor(s, 255.0)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.0e-4).epsilon(0.01));
  CHECK(p.c1() == doctest::Approx(6.5025));
  CHECK(p.c2() == doctest::Approx(58.5225));
}

TEST_CASE("metrics agree with two-pass oracles") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape s{8 + trial % 9, 8 + trial % 5, trial % 3 == 0 ? 3 : 1};
    const Tensor a = oracle::random_u8(rng, s);
    const Tensor b = oracle::random_u8(rng, s);
    REQUIRE(std::abs(mse(a, b) - oracle::mse(a, b)) <= 1e-9 * std::max(1.0, oracle::mse(a, b)));
    REQUIRE(std::abs(psnr(a, b) - oracle::psnr(a, b)) <= 1e-9);
    REQUIRE(std::abs(ssim(a, b) - oracle::ssim_global(a, b)) <= 1e-9);
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s{12, 12, trial % 2 ? 3 : 1};
    const Tensor a = oracle::random_u8(rng, s, 10, 240);
    const Tensor b = oracle::random_u8(rng, s, 10, 240);
    CHECK(mse(a, b) == mse(b, a));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    CHECK(ssim(a, b) <= 1.0 + 1e-12);
    CHECK(ssim(a, b) >= -1.0 - 1e-12);

    // A constant offset d adds exactly d^2 to the error.
    Tensor shifted = a;
    for (double& v : shifted.values()) v += 5.0;
    CHECK(mse(a, shifted) == doctest::Approx(25.0).epsilon(1e-12));

    // A batch of one is half the summed squared error.
    const std::vector<Tensor> pa{a}, pb{b};
    CHECK(training_loss(pa, pb) == doctest::Approx(0.5 * mse(a, b) * a.size()).epsilon(1e-12));
  }
}

TEST_CASE("training loss") {
  const Shape s{2, 2, 1};
  const std::vector<Tensor> pred{Tensor(s, 1.0), Tensor(s, 0.0)};
  const std::vector<Tensor> target{Tensor(s, 0.0), Tensor(s, 0.0)};
  CHECK(training_loss(pred, target) == 1.0);  // (4 + 0) / (2 * 2)

  std::mt19937_64 rng(31);
  std::vector<Tensor> p, t;
  for (int i = 0; i < 5; ++i) {
    p.push_back(oracle::random_u8(rng, Shape{6, 6, 3}));
    t.push_back(oracle::random_u8(rng, Shape{6, 6, 3}));
  }
  CHECK(training_loss(p, t) == doctest::Approx(oracle::loss(p, t)).epsilon(1e-12));
  CHECK_THROWS_AS(training_loss(std::span<const Tensor>(p).first(2), t), ShapeMismatch);
}

TEST_CASE("windowed ssim") {
  std::mt19937_64 rng(41);
  SsimParams p;
  p.mode = SsimMode::windowed;
  const Tensor x = oracle::random_u8(rng, Shape{20, 24, 1});
  CHECK(ssim(x, x, p) == doctest::Approx(1.0).epsilon(1e-12));

  // On an 11 x 11 image there is exactly one window.
  const Tensor a = oracle::random_u8(rng, Shape{11, 11, 1});
  const Tensor b = oracle::random_u8(rng, Shape{11, 11, 1});
  double wsum = 0, ma = 0, mb = 0;
  std::vector<double> w(121);
  for (int u = 0; u < 11; ++u)
    for (int v = 0; v < 11; ++v) wsum += w[u * 11 + v] = std::exp(-((u - 5) * (u - 5) + (v - 5) * (v - 5)) / 4.5);
  for (int u = 0; u < 11; ++u)
    for (int v = 0; v < 11; ++v) {
      ma += w[u * 11 + v] / wsum * a(u, v, 0);
      mb += w[u * 11 + v] / wsum * b(u, v, 0);
    }
  double va = 0, vb = 0, cov = 0;
  for (int u = 0; u < 11; ++u)
    for (int v = 0; v < 11; ++v) {
      const double g = w[u * 11 + v] / wsum;
      va += g * (a(u, v, 0) - ma) * (a(u, v, 0) - ma);
      vb += g * (b(u, v, 0) - mb) * (b(u, v, 0) - mb);
      cov += g * (a(u, v, 0) - ma) * (b(u, v, 0) - mb);
    }
  const double want = ((2 * ma * mb + p.c1()) * (2 * cov + p.c2())) /
                      ((ma * ma + mb * mb + p.c1()) * (va + vb + p.c2()));
  CHECK(ssim(a, b, p) == doctest::Approx(want).epsilon(1e-9));

  CHECK_THROWS_AS(ssim(Tensor(Shape{5, 5, 1}), Tensor(Shape{5, 5, 1}), p), ValidationError);
}

TEST_CASE("evaluate bundles the metrics") {
  std::mt19937_64 rng(43);
  const Tensor a = oracle::random_u8(rng, Shape{9, 9, 1});
  const Tensor b = oracle::random_u8(rng, Shape{9, 9, 1});
  const MetricReport r = evaluate(a, b);
  CHECK(r.mse == mse(a, b));
  CHECK(r.psnr_db == psnr(a, b));
  CHECK(r.ssim == ssim(a, b));
}

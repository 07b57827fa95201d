#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "seconv/baselines.hpp"
#include "seconv/cli.hpp"
#include "seconv/netpbm.hpp"
#include "seconv/noise.hpp"

using namespace seconv;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"seconv"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

const fs::path kGolden = SECONV_GOLDEN_DIR;

}  // namespace

TEST_CASE("add-noise") {
  TempDir dir("seconv_cli_noise");
  std::mt19937_64 rng(1);
  write_pnm(fs::path(dir / "clean.pgm"), oracle::random_u8(rng, Shape{512, 512, 1}, 1, 254));

  Run r = run({"add-noise", "--input", dir / "clean.pgm", "--output", dir / "zero.pgm", "--density", "0"});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "zero.pgm") == slurp(dir / "clean.pgm"));

  r = run({"add-noise", "--input", dir / "clean.pgm", "--output", dir / "a.pgm", "--density", "0.5",
           "--seed", "9"});
  CHECK(r.code == 0);
  run({"add-noise", "--input", dir / "clean.pgm", "--output", dir / "b.pgm", "--density", "0.5",
       "--seed", "9"});
  CHECK(slurp(dir / "a.pgm") == slurp(dir / "b.pgm"));

  const Image clean = read_pnm(fs::path(dir / "clean.pgm"));
  const Image noisy = read_pnm(fs::path(dir / "a.pgm"));
  std::size_t changed = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) changed += clean.values()[i] != noisy.values()[i];
  const double fraction = static_cast<double>(changed) / static_cast<double>(clean.size());
  CHECK(fraction == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.out.find("corrupted: ") == 0);

  r = run({"add-noise", "--input", dir / "clean.pgm", "--output", dir / "c.pgm", "--density", "1.5"});
  CHECK(r.code == 1);
}

TEST_CASE("denoise with mf matches the library filter") {
  TempDir dir("seconv_cli_mf");
  std::mt19937_64 rng(2);
  const Image noisy = add_sap_noise(oracle::random_u8(rng, Shape{20, 20, 3}), NoiseSpec::symmetric(0.3, 2));
  write_pnm(fs::path(dir / "noisy.ppm"), noisy);
  const Run r = run({"denoise", "--input", dir / "noisy.ppm", "--output", dir / "out.ppm",
                     "--method", "mf", "--window", "5"});
  CHECK(r.code == 0);
  CHECK(read_pnm(fs::path(dir / "out.ppm")) == median_filter(noisy, 5).quantized());
}

TEST_CASE("denoise rejects bad input") {
  TempDir dir("seconv_cli_bad");
  write_pnm(fs::path(dir / "x.pgm"), corpus::gradient(8, 0.0));
  Run r = run({"denoise", "--input", dir / "x.pgm", "--output", dir / "y.pgm", "--method", "bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.err.find("--method") != std::string::npos);

  r = run({"denoise", "--input", dir / "x.pgm", "--output", dir / "y.pgm", "--method", "network"});
  CHECK(r.code == 1);

  r = run({"denoise", "--input", dir / "missing.pgm", "--output", dir / "y.pgm"});
  CHECK(r.code == 2);

  r = run({"denoise", "--input", dir / "x.pgm", "--output", dir / "y.pgm", "--method", "network",
           "--weights", dir / "missing.scvw"});
  CHECK(r.code == 2);

  r = run({"denoise", "--output", dir / "y.pgm"});
  CHECK(r.code == 1);
}

TEST_CASE("eval") {
  TempDir dir("seconv_cli_eval");
  write_pnm(fs::path(dir / "a.pgm"), corpus::gradient(16, 0.5));
  write_pnm(fs::path(dir / "c.ppm"), corpus::smoothed_noise(16, 2, 1, 3));
  Run r = run({"eval", "--denoised", dir / "a.pgm", "--reference", dir / "a.pgm"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PSNR: inf\n") != std::string::npos);
  CHECK(r.out.find("SSIM: 1.000\n") != std::string::npos);
  CHECK(r.out.find("MSE: 0.0000\n") != std::string::npos);

  r = run({"eval", "--denoised", dir / "a.pgm", "--reference", dir / "c.ppm"});
  CHECK(r.code != 0);
}

TEST_CASE("network denoising through weights written by make-weights") {
  TempDir dir("seconv_cli_net");
  Run r = run({"make-weights", "--output", dir / "zero.scvw", "--depth", "9"});
  REQUIRE(r.code == 0);
  const Image noisy = add_sap_noise(corpus::gradient(12, 0.2), NoiseSpec::symmetric(0.4, 3));
  write_pnm(fs::path(dir / "noisy.pgm"), noisy);
  r = run({"denoise", "--input", dir / "noisy.pgm", "--output", dir / "out.pgm", "--method",
           "network", "--weights", dir / "zero.scvw"});
  CHECK(r.code == 0);
  CHECK(read_pnm(fs::path(dir / "out.pgm")) == preprocess(noisy));

  r = run({"make-weights", "--output", dir / "rgb.scvw", "--channels", "3", "--depth", "9"});
  REQUIRE(r.code == 0);
  r = run({"denoise", "--input", dir / "noisy.pgm", "--output", dir / "out.pgm", "--method",
           "network", "--weights", dir / "rgb.scvw"});
  CHECK(r.code == 1);
}

TEST_CASE("bench writes a versioned csv") {
  TempDir dir("seconv_cli_bench");
  corpus::write(dir.path / "data", 24);
  Run r = run({"bench", "--dataset", dir / "data", "--densities", "20,90", "--methods",
               "none,cascade", "--output", dir / "out.csv", "--plot-dir", dir / "plots"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(dir / "out.csv");
  CHECK(csv.rfind("# seconv-bench-csv v1\nimage,method,density,psnr_db,ssim,mse,runtime_ms,seed\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 10 * 2 * 2);
  CHECK(r.out.find("Mean") != std::string::npos);
  CHECK(fs::exists(dir.path / "plots" / "psnr.svg"));
  CHECK(fs::exists(dir.path / "plots" / "ssim.svg"));

  r = run({"bench", "--dataset", dir / "data", "--densities", "0", "--output", dir / "x.csv"});
  CHECK(r.code == 1);
  r = run({"bench", "--dataset", dir / "nowhere", "--output", dir / "x.csv"});
  CHECK(r.code == 2);
}

TEST_CASE("golden files") {
  TempDir dir("seconv_cli_golden");
  Run r = run({"add-noise", "--input", (kGolden / "clean.pgm").string(), "--output",
               dir / "noisy.pgm", "--density", "0.6", "--seed", "42"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "noisy.pgm") == slurp(kGolden / "noisy.pgm"));
  CHECK(r.out == slurp(kGolden / "add_noise.txt"));

  r = run({"denoise", "--input", (kGolden / "noisy.pgm").string(), "--output", dir / "out.pgm"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "out.pgm") == slurp(kGolden / "cascade.pgm"));
  CHECK(r.out == slurp(kGolden / "denoise.txt"));

  r = run({"eval", "--denoised", (kGolden / "cascade.pgm").string(), "--reference",
           (kGolden / "clean.pgm").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(kGolden / "eval.txt"));
}

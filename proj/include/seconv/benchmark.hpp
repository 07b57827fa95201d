#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seconv/denoise.hpp"
#include "seconv/metrics.hpp"
#include "seconv/seconv_block.hpp"

namespace seconv {

inline constexpr std::string_view kCsvVersionLine = "# seconv-bench-csv v1";
inline constexpr std::string_view kCsvHeader =
    "image,method,density,psnr_db,ssim,mse,runtime_ms,seed";

// 0.10, 0.20, ..., 0.90, 0.95
std::vector<double> default_densities();

struct BenchmarkConfig {
  std::filesystem::path dataset_dir;
  std::vector<double> densities = default_densities();
  std::vector<Method> methods = {Method::cascade};
  std::uint64_t seed = 0;
  std::filesystem::path output_csv;
  std::optional<std::filesystem::path> weights_path;
  int median_window = 3;
  int amf_max_window = 7;
  CascadeSpec cascade = CascadeSpec::standard();
  SsimParams ssim;
  // When false the runtime_ms column is left empty.
  bool record_runtime = false;

  void validate() const;
};

struct BenchmarkRow {
  std::string image_id;
  Method method = Method::none;
  double density = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t seed = 0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  std::vector<std::string> skipped;  // "<file>: <reason>"
};

// Noise seed of one (image, density) realization, shared by all methods.
// Depends only on its own inputs, so other images never perturb it.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view image_id, double density);

// For each readable .pgm/.ppm in dataset_dir, each density and each method:
// corrupt with the derived seed, denoise, quantize to 8 bits and score
// against the clean original. Rows come back sorted by (image, density,
// method order in the config). Unreadable files are skipped and reported.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, std::ostream& log);

void write_csv(std::ostream& out, std::span<const BenchmarkRow> rows, bool with_runtime);

// Per-(method, density) means and the mean over densities, as in a results
// table with a trailing "Mean" column.
struct BenchmarkSummary {
  std::vector<Method> methods;
  std::vector<double> densities;
  std::vector<std::vector<double>> psnr;  // [method][density]
  std::vector<std::vector<double>> ssim;
  std::vector<double> psnr_mean;          // [method]
  std::vector<double> ssim_mean;
};

BenchmarkSummary summarize(std::span<const BenchmarkRow> rows);
void write_summary(std::ostream& out, const BenchmarkSummary& summary);

// psnr.svg and ssim.svg line charts versus density.
void write_plots(const std::filesystem::path& dir, const BenchmarkSummary& summary);

}  // namespace seconv

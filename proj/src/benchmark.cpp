#include "seconv/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>

#include "seconv/errors.hpp"
#include "seconv/netpbm.hpp"
#include "seconv/noise.hpp"
#include "seconv/svg_chart.hpp"
#include "seconv/weights_io.hpp"

namespace seconv {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

bool is_netpbm(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

struct Sample {
  std::string id;
  Image clean;
};

}  // namespace

std::vector<double> default_densities() {
  std::vector<double> d;
  for (int p = 10; p <= 90; p += 10) d.push_back(p / 100.0);
  d.push_back(0.95);
  return d;
}

void BenchmarkConfig::validate() const {
  if (densities.empty()) throw ValidationError("at least one density is required");
  for (double d : densities) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw ValidationError("densities must lie in (0, 1], got " + format_fixed(d, 4));
    }
  }
  if (methods.empty()) throw ValidationError("at least one method is required");
  if (std::find(methods.begin(), methods.end(), Method::network) != methods.end() &&
      !weights_path) {
    throw ValidationError("method `network` requires --weights");
  }
  for (int w : {median_window, amf_max_window}) {
    if (w < 3 || w % 2 == 0) throw ValidationError("median windows must be odd integers >= 3");
  }
  cascade.validate();
  ssim.validate();
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view image_id, double density) {
  // FNV-1a over the id, then mixed with the seed and the density in parts per million.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : image_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  const auto ppm = static_cast<std::uint64_t>(std::llround(density * 1e6));
  return mix64(mix64(master_seed) ^ mix64(h) ^ mix64(ppm + 0x5851f42d4c957f2dULL));
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, std::ostream& log) {
  config.validate();
  if (!std::filesystem::is_directory(config.dataset_dir)) {
    throw IoError("dataset directory " + config.dataset_dir.string() + " does not exist");
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(config.dataset_dir)) {
    if (entry.is_regular_file() && is_netpbm(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  BenchmarkResult result;
  std::vector<Sample> samples;
  for (const auto& f : files) {
    try {
      samples.push_back({f.stem().string(), read_pnm(f)});
    } catch (const IoError& e) {
      log << "warning: skipping " << f.filename().string() << ": " << e.what() << '\n';
      result.skipped.push_back(f.filename().string() + ": " + e.what());
    }
  }
  if (samples.empty()) {
    throw ValidationError("dataset " + config.dataset_dir.string() +
                          " contains no readable images");
  }

  std::optional<NetworkGraph> network;
  if (config.weights_path) network = load_weights(*config.weights_path);

  DenoiseOptions base;
  base.median_window = config.median_window;
  base.amf_max_window = config.amf_max_window;
  base.cascade = config.cascade;
  base.network = network ? &*network : nullptr;

  struct Task {
    std::size_t sample;
    std::size_t density;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < samples.size(); ++s)
    for (std::size_t d = 0; d < config.densities.size(); ++d) tasks.push_back({s, d});

  std::vector<std::vector<BenchmarkRow>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  const auto n_tasks = static_cast<std::int64_t>(tasks.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n_tasks; ++t) {
    try {
      const auto& sample = samples[tasks[t].sample];
      const double density = config.densities[tasks[t].density];
      const std::uint64_t seed = derive_seed(config.seed, sample.id, density);
      const Image noisy = add_sap_noise(sample.clean, NoiseSpec::symmetric(density, seed));
      for (Method method : config.methods) {
        DenoiseOptions options = base;
        options.method = method;
        const auto start = std::chrono::steady_clock::now();
        const Image restored = denoise(noisy, options).image;
        const auto stop = std::chrono::steady_clock::now();
        const MetricReport m = evaluate(restored.quantized(), sample.clean, config.ssim);
        slots[t].push_back(
            {sample.id, method, density, m.psnr_db, m.ssim, m.mse,
             std::chrono::duration<double, std::milli>(stop - start).count(), seed});
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (auto& slot : slots) {
    result.rows.insert(result.rows.end(), slot.begin(), slot.end());
  }
  auto method_rank = [&](Method m) {
    return std::find(config.methods.begin(), config.methods.end(), m) - config.methods.begin();
  };
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [&](const BenchmarkRow& a, const BenchmarkRow& b) {
                     if (a.image_id != b.image_id) return a.image_id < b.image_id;
                     if (a.density != b.density) return a.density < b.density;
                     return method_rank(a.method) < method_rank(b.method);
                   });
  return result;
}

void write_csv(std::ostream& out, std::span<const BenchmarkRow> rows, bool with_runtime) {
  out << kCsvVersionLine << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.image_id << ',' << method_name(r.method) << ',' << format_fixed(r.density, 4) << ','
        << format_fixed(r.psnr_db, 4) << ',' << format_fixed(r.ssim, 6) << ','
        << format_fixed(r.mse, 6) << ',' << (with_runtime ? format_fixed(r.runtime_ms, 3) : "")
        << ',' << r.seed << '\n';
  }
}

BenchmarkSummary summarize(std::span<const BenchmarkRow> rows) {
  BenchmarkSummary s;
  for (const auto& r : rows) {
    if (std::find(s.methods.begin(), s.methods.end(), r.method) == s.methods.end()) {
      s.methods.push_back(r.method);
    }
    if (std::find(s.densities.begin(), s.densities.end(), r.density) == s.densities.end()) {
      s.densities.push_back(r.density);
    }
  }
  std::sort(s.densities.begin(), s.densities.end());

  const std::size_t nm = s.methods.size();
  const std::size_t nd = s.densities.size();
  std::vector<std::vector<double>> psnr_sum(nm, std::vector<double>(nd, 0.0));
  std::vector<std::vector<double>> ssim_sum = psnr_sum;
  std::vector<std::vector<std::size_t>> count(nm, std::vector<std::size_t>(nd, 0));
  for (const auto& r : rows) {
    const auto m = static_cast<std::size_t>(
        std::find(s.methods.begin(), s.methods.end(), r.method) - s.methods.begin());
    const auto d = static_cast<std::size_t>(
        std::find(s.densities.begin(), s.densities.end(), r.density) - s.densities.begin());
    psnr_sum[m][d] += r.psnr_db;
    ssim_sum[m][d] += r.ssim;
    ++count[m][d];
  }
  s.psnr.assign(nm, std::vector<double>(nd, std::nan("")));
  s.ssim = s.psnr;
  s.psnr_mean.assign(nm, 0.0);
  s.ssim_mean.assign(nm, 0.0);
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t d = 0; d < nd; ++d) {
      if (count[m][d] == 0) continue;
      s.psnr[m][d] = psnr_sum[m][d] / static_cast<double>(count[m][d]);
      s.ssim[m][d] = ssim_sum[m][d] / static_cast<double>(count[m][d]);
    }
    for (std::size_t d = 0; d < nd; ++d) {
      s.psnr_mean[m] += s.psnr[m][d];
      s.ssim_mean[m] += s.ssim[m][d];
    }
    s.psnr_mean[m] /= static_cast<double>(nd);
    s.ssim_mean[m] /= static_cast<double>(nd);
  }
  return s;
}

void write_summary(std::ostream& out, const BenchmarkSummary& s) {
  auto table = [&](const char* title, const std::vector<std::vector<double>>& values,
                   const std::vector<double>& means, int decimals) {
    char buf[64];
    out << title << '\n';
    std::snprintf(buf, sizeof buf, "%-10s", "method");
    out << buf;
    for (double d : s.densities) {
      std::snprintf(buf, sizeof buf, "%9s", (format_fixed(d * 100.0, 0) + "%").c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%9s", "Mean");
    out << buf << '\n';
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      std::snprintf(buf, sizeof buf, "%-10s", std::string(method_name(s.methods[m])).c_str());
      out << buf;
      for (double v : values[m]) {
        std::snprintf(buf, sizeof buf, "%9s", format_fixed(v, decimals).c_str());
        out << buf;
      }
      std::snprintf(buf, sizeof buf, "%9s", format_fixed(means[m], decimals).c_str());
      out << buf << '\n';
    }
  };
  table("PSNR (dB)", s.psnr, s.psnr_mean, 2);
  out << '\n';
  table("SSIM", s.ssim, s.ssim_mean, 3);
}

void write_plots(const std::filesystem::path& dir, const BenchmarkSummary& s) {
  std::filesystem::create_directories(dir);
  auto emit = [&](const char* file, const char* title, const char* y_label,
                  const std::vector<std::vector<double>>& values) {
    std::vector<ChartSeries> series;
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      ChartSeries cs{std::string(method_name(s.methods[m])), {}, values[m]};
      for (double d : s.densities) cs.x.push_back(d * 100.0);
      series.push_back(std::move(cs));
    }
    std::ofstream out(dir / file);
    if (!out) throw IoError("cannot write " + (dir / file).string());
    write_line_chart_svg(out, title, "noise density (%)", y_label, series);
  };
  emit("psnr.svg", "Mean PSNR versus noise density", "PSNR (dB)", s.psnr);
  emit("ssim.svg", "Mean SSIM versus noise density", "SSIM", s.ssim);
}

}  // namespace seconv

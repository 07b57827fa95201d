#include "seconv/cli.hpp"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seconv/benchmark.hpp"
#include "seconv/cascade_config.hpp"
#include "seconv/denoise.hpp"
#include "seconv/errors.hpp"
#include "seconv/metrics.hpp"
#include "seconv/netpbm.hpp"
#include "seconv/noise.hpp"
#include "seconv/weights_io.hpp"

namespace seconv {
namespace {

std::string fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    if (end > start) items.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<double> parse_percentages(const std::string& text) {
  std::vector<double> densities;
  for (const auto& item : split_list(text)) {
    double pct = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), pct);
    if (ec != std::errc{} || ptr != item.data() + item.size() || !(pct > 0.0 && pct <= 100.0)) {
      throw ValidationError("--densities expects percentages in (0, 100], got `" + item + "`");
    }
    densities.push_back(pct / 100.0);
  }
  if (densities.empty()) throw ValidationError("--densities is empty");
  return densities;
}

SsimMode parse_ssim_mode(const std::string& name) {
  if (name == "global") return SsimMode::global;
  if (name == "windowed") return SsimMode::windowed;
  throw ValidationError("--ssim-mode must be global or windowed");
}

struct AddNoiseArgs {
  std::string input, output;
  double density = 0.0;
  double salt_share = 0.5;
  std::uint64_t seed = 0;
};

struct DenoiseArgs {
  std::string input, output, method = "cascade", config, weights;
  int window = 3;
  int max_window = 7;
};

struct EvalArgs {
  std::string denoised, reference, ssim_mode = "global";
};

struct BenchArgs {
  std::string dataset, densities = "10,20,30,40,50,60,70,80,90,95", methods = "none,mf,amf,cascade";
  std::string output, weights, config, ssim_mode = "global", plot_dir;
  std::uint64_t seed = 0;
  int window = 3;
  int max_window = 7;
  bool timings = false;
};

struct MakeWeightsArgs {
  std::string output;
  int channels = 1;
  int depth = 27;
  bool random = false;
  double gain = 1.0;
  std::uint64_t seed = 0;
};

int cmd_add_noise(const AddNoiseArgs& a, std::ostream& out) {
  if (a.salt_share < 0.0 || a.salt_share > 1.0) {
    throw ValidationError("--salt-share must lie in [0, 1]");
  }
  const Image clean = read_pnm(a.input);
  const NoiseSpec spec =
      NoiseSpec::split(a.density * a.salt_share, a.density * (1.0 - a.salt_share), a.seed);
  const NoisyImage noisy = corrupt(clean, spec);
  write_pnm(a.output, noisy.image);
  out << "corrupted: " << noisy.corrupted() << " of " << clean.size() << " ("
      << fixed(static_cast<double>(noisy.corrupted()) / static_cast<double>(clean.size()), 4)
      << ")\n"
      << "salt: " << noisy.salt << "\npepper: " << noisy.pepper << '\n';
  return kExitOk;
}

int cmd_denoise(const DenoiseArgs& a, std::ostream& out) {
  DenoiseOptions options;
  options.method = parse_method(a.method);
  options.median_window = a.window;
  options.amf_max_window = a.max_window;
  if (!a.config.empty()) options.cascade = load_cascade_config(a.config);
  std::optional<NetworkGraph> graph;
  if (options.method == Method::network) {
    if (a.weights.empty()) throw ValidationError("method `network` requires --weights");
    graph = load_weights(a.weights);
    options.network = &*graph;
  }
  const Image noisy = read_pnm(a.input);
  const DenoiseOutcome result = denoise(noisy, options);
  write_pnm(a.output, result.image);
  if (result.cascade_report) {
    const auto& r = *result.cascade_report;
    out << "noisy pixels: " << r.initial_noisy << '\n';
    for (std::size_t s = 0; s < r.stages.size(); ++s) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s %2d: restored %zu, remaining %zu\n",
                    s < options.cascade.blocks.size() ? "block " : "repeat", r.stages[s].size,
                    r.stages[s].restored, r.stages[s].remaining);
      out << buf;
    }
    if (r.mean_filled > 0) {
      out << "mean fill: " << r.mean_filled << " pixels with " << fixed(r.fill_value, 4) << '\n';
    }
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  SsimParams params;
  params.mode = parse_ssim_mode(a.ssim_mode);
  const Image denoised = read_pnm(a.denoised);
  const Image reference = read_pnm(a.reference);
  const MetricReport m = evaluate(denoised, reference, params);
  out << "PSNR: " << fixed(m.psnr_db, 2) << '\n'
      << "SSIM: " << fixed(m.ssim, 3) << '\n'
      << "MSE: " << fixed(m.mse, 4) << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchmarkConfig config;
  config.dataset_dir = a.dataset;
  config.densities = parse_percentages(a.densities);
  config.methods.clear();
  for (const auto& m : split_list(a.methods)) config.methods.push_back(parse_method(m));
  config.seed = a.seed;
  config.output_csv = a.output;
  if (!a.weights.empty()) config.weights_path = a.weights;
  config.median_window = a.window;
  config.amf_max_window = a.max_window;
  if (!a.config.empty()) config.cascade = load_cascade_config(a.config);
  config.ssim.mode = parse_ssim_mode(a.ssim_mode);
  config.record_runtime = a.timings;

  const BenchmarkResult result = run_benchmark(config, err);
  {
    std::ofstream csv(config.output_csv, std::ios::binary);
    if (!csv) throw IoError("cannot open " + config.output_csv.string() + " for writing");
    write_csv(csv, result.rows, config.record_runtime);
    if (!csv) throw IoError("failed writing " + config.output_csv.string());
  }
  const BenchmarkSummary summary = summarize(result.rows);
  write_summary(out, summary);
  out << "\nrows: " << result.rows.size() << ", skipped files: " << result.skipped.size() << '\n';
  if (!a.plot_dir.empty()) write_plots(a.plot_dir, summary);
  return kExitOk;
}

int cmd_make_weights(const MakeWeightsArgs& a, std::ostream& out) {
  NetworkGraph graph = NetworkGraph::standard(a.channels, a.depth);
  if (a.random) {
    std::mt19937_64 rng(a.seed);
    for (auto& layer : graph.layers) {
      if (auto* conv = std::get_if<ConvLayer>(&layer)) {
        std::normal_distribution<double> dist(
            0.0, a.gain * std::sqrt(2.0 / (conv->in_channels * conv->kernel_h * conv->kernel_w)));
        for (double& w : conv->weights) w = static_cast<float>(dist(rng));
      }
    }
  }
  save_weights(a.output, graph);
  out << "wrote " << a.output << ": depth " << graph.depth() << ", " << graph.layers.size()
      << " layers\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Salt-and-pepper denoising toolkit: selective-convolution cascade, network "
               "inference, baselines and benchmark harness",
               "seconv"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (default: runtime choice)")
      ->check(CLI::NonNegativeNumber);

  AddNoiseArgs noise;
  auto* add_noise = app.add_subcommand("add-noise", "Corrupt an image with salt-and-pepper noise");
  add_noise->add_option("--input", noise.input, "Clean PGM/PPM image")->required();
  add_noise->add_option("--output", noise.output, "Noisy output image")->required();
  add_noise->add_option("--density", noise.density, "Noise density as a fraction in [0, 1]")
      ->required();
  add_noise->add_option("--salt-share", noise.salt_share, "Fraction of the density that is salt")
      ->capture_default_str();
  add_noise->add_option("--seed", noise.seed, "RNG seed")->capture_default_str();

  DenoiseArgs dn;
  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise an image");
  denoise_cmd->add_option("--input", dn.input, "Noisy PGM/PPM image")->required();
  denoise_cmd->add_option("--output", dn.output, "Denoised output image")->required();
  denoise_cmd->add_option("--method", dn.method, "none|mf|amf|cascade|network")
      ->capture_default_str();
  denoise_cmd->add_option("--window", dn.window, "Median filter window")->capture_default_str();
  denoise_cmd->add_option("--max-window", dn.max_window, "Adaptive median max window")
      ->capture_default_str();
  denoise_cmd->add_option("--config", dn.config, "Cascade key/value config file");
  denoise_cmd->add_option("--weights", dn.weights, "SCVW weights file (method network)");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score a denoised image against its reference");
  eval->add_option("--denoised", ev.denoised, "Denoised image")->required();
  eval->add_option("--reference", ev.reference, "Clean reference image")->required();
  eval->add_option("--ssim-mode", ev.ssim_mode, "global|windowed")->capture_default_str();

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Run the density sweep over a directory of images");
  bench->add_option("--dataset", bn.dataset, "Directory of clean PGM/PPM images")->required();
  bench->add_option("--densities", bn.densities, "Comma-separated percentages")
      ->capture_default_str();
  bench->add_option("--methods", bn.methods, "Comma-separated method ids")->capture_default_str();
  bench->add_option("--seed", bn.seed, "Master seed")->capture_default_str();
  bench->add_option("--output", bn.output, "CSV output path")->required();
  bench->add_option("--weights", bn.weights, "SCVW weights file (method network)");
  bench->add_option("--window", bn.window, "Median filter window")->capture_default_str();
  bench->add_option("--max-window", bn.max_window, "Adaptive median max window")
      ->capture_default_str();
  bench->add_option("--config", bn.config, "Cascade key/value config file");
  bench->add_option("--ssim-mode", bn.ssim_mode, "global|windowed")->capture_default_str();
  bench->add_flag("--timings", bn.timings, "Fill the runtime_ms column (not reproducible)");
  bench->add_option("--plot-dir", bn.plot_dir, "Write psnr.svg and ssim.svg here");

  MakeWeightsArgs mw;
  auto* make_weights =
      app.add_subcommand("make-weights", "Write a standard-layout SCVW weights file");
  make_weights->add_option("--output", mw.output, "Output .scvw path")->required();
  make_weights->add_option("--channels", mw.channels, "1 or 3")->capture_default_str();
  make_weights->add_option("--depth", mw.depth, "Network depth")->capture_default_str();
  make_weights->add_flag("--random", mw.random, "He-normal conv weights instead of zeros");
  make_weights->add_option("--gain", mw.gain, "Scale of the random weights")->capture_default_str();
  make_weights->add_option("--seed", mw.seed, "RNG seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (threads > 0) omp_set_num_threads(threads);

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == add_noise) return cmd_add_noise(noise, out);
    if (active == denoise_cmd) return cmd_denoise(dn, out);
    if (active == eval) return cmd_eval(ev, out);
    if (active == bench) return cmd_bench(bn, out, err);
    return cmd_make_weights(mw, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace seconv

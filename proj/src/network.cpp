#include "seconv/network.hpp"

#include <algorithm>
#include <cmath>

#include "seconv/errors.hpp"
#include "seconv/kernels.hpp"
#include "seconv/noise.hpp"
#include "seconv/seconv_block.hpp"

namespace seconv {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void layer_error(std::size_t index, const std::string& what) {
  throw ValidationError("layer " + std::to_string(index) + ": " + what);
}

bool odd_positive(int n) { return n > 0 && n % 2 == 1; }

}  // namespace

std::string layer_kind(const LayerSpec& layer) {
  return std::visit(overloaded{[](const SeConvLayer&) { return std::string("seconv"); },
                               [](const ConvLayer&) { return std::string("conv"); },
                               [](const BatchNormLayer&) { return std::string("batch_norm"); },
                               [](const ReluLayer&) { return std::string("relu"); },
                               [](const OutputCompose&) { return std::string("output_compose"); }},
                    layer);
}

int NetworkGraph::depth() const noexcept {
  return static_cast<int>(std::count_if(layers.begin(), layers.end(), [](const LayerSpec& l) {
    return std::holds_alternative<SeConvLayer>(l) || std::holds_alternative<ConvLayer>(l);
  }));
}

NetworkGraph NetworkGraph::standard(int input_channels, int depth) {
  if (input_channels != 1 && input_channels != 3) {
    throw ValidationError("network input must have 1 or 3 channels");
  }
  if (depth < 8) throw ValidationError("standard graph depth must be at least 8");
  NetworkGraph g;
  g.input_channels = input_channels;
  for (int s = 3; s <= 15; s += 2) {
    g.layers.emplace_back(SeConvLayer{Kernel::ones(s), SeConvBlockSpec::default_eta(s)});
  }
  auto zero_conv = [](int out, int in) {
    ConvLayer c{out, in, 3, 3, {}, {}};
    c.weights.assign(c.weight_count(), 0.0);
    c.bias.assign(static_cast<std::size_t>(out), 0.0);
    return c;
  };
  int channels = input_channels;
  for (int d = 0; d < depth - 8; ++d) {
    g.layers.emplace_back(zero_conv(64, channels));
    BatchNormLayer bn;
    bn.gamma.assign(64, 1.0);
    bn.beta.assign(64, 0.0);
    bn.moving_mean.assign(64, 0.0);
    bn.moving_var.assign(64, 1.0);
    g.layers.emplace_back(std::move(bn));
    g.layers.emplace_back(ReluLayer{});
    channels = 64;
  }
  g.layers.emplace_back(zero_conv(input_channels, channels));
  g.layers.emplace_back(OutputCompose{});
  return g;
}

bool NetworkGraph::has_standard_layout() const {
  std::size_t at = 0;
  for (int s = 3; s <= 15; s += 2, ++at) {
    if (at >= layers.size()) return false;
    const auto* sc = std::get_if<SeConvLayer>(&layers[at]);
    if (!sc || sc->kernel.size() != s) return false;
  }
  auto conv_with = [&](std::size_t i, int out) {
    const auto* c = i < layers.size() ? std::get_if<ConvLayer>(&layers[i]) : nullptr;
    return c && c->out_channels == out && c->kernel_h == 3 && c->kernel_w == 3;
  };
  while (at + 2 < layers.size() && conv_with(at, 64) &&
         std::holds_alternative<BatchNormLayer>(layers[at + 1]) &&
         std::holds_alternative<ReluLayer>(layers[at + 2])) {
    at += 3;
  }
  return conv_with(at, input_channels) && at + 2 == layers.size() &&
         std::holds_alternative<OutputCompose>(layers[at + 1]);
}

void NetworkGraph::validate() const {
  if (input_channels != 1 && input_channels != 3) {
    throw ValidationError("network input must have 1 or 3 channels");
  }
  if (layers.empty() || !std::holds_alternative<OutputCompose>(layers.back())) {
    throw ValidationError("network must end with an output_compose layer");
  }
  int channels = input_channels;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::visit(
        overloaded{
            [&](const SeConvLayer& l) {
              if (l.eta < 1) layer_error(i, "seconv eta must be >= 1");
            },
            [&](const ConvLayer& l) {
              if (l.out_channels <= 0) layer_error(i, "conv needs a positive output channel count");
              if (!odd_positive(l.kernel_h) || !odd_positive(l.kernel_w)) {
                layer_error(i, "conv kernel dimensions must be odd");
              }
              if (l.in_channels != channels) {
                layer_error(i, "conv expects " + std::to_string(l.in_channels) +
                                   " input channels but receives " + std::to_string(channels));
              }
              if (l.weights.size() != l.weight_count()) {
                layer_error(i, "conv weights have " + std::to_string(l.weights.size()) +
                                   " values, shape needs " + std::to_string(l.weight_count()));
              }
              if (!l.bias.empty() && l.bias.size() != static_cast<std::size_t>(l.out_channels)) {
                layer_error(i, "conv bias length differs from output channel count");
              }
              channels = l.out_channels;
            },
            [&](const BatchNormLayer& l) {
              const auto n = static_cast<std::size_t>(channels);
              if (l.gamma.size() != n || l.beta.size() != n || l.moving_mean.size() != n ||
                  l.moving_var.size() != n) {
                layer_error(i, "batch_norm arrays must have " + std::to_string(channels) +
                                   " entries");
              }
              if (std::any_of(l.moving_var.begin(), l.moving_var.end(),
                              [](double v) { return !(v > 0.0); })) {
                layer_error(i, "batch_norm moving variance must be positive");
              }
              if (!(l.epsilon >= 0.0)) layer_error(i, "batch_norm epsilon must be >= 0");
            },
            [&](const ReluLayer&) {},
            [&](const OutputCompose&) {
              if (i + 1 != layers.size()) layer_error(i, "output_compose must be the last layer");
              if (channels != input_channels) {
                layer_error(i, "output_compose receives " + std::to_string(channels) +
                                   " channels, image has " + std::to_string(input_channels));
              }
            }},
        layers[i]);
  }
}

Tensor batch_norm_inference(const Tensor& x, const BatchNormLayer& bn) {
  const auto c = static_cast<std::size_t>(x.channels());
  if (bn.gamma.size() != c || bn.beta.size() != c || bn.moving_mean.size() != c ||
      bn.moving_var.size() != c) {
    throw ShapeMismatch("batch_norm parameters do not match " + std::to_string(c) + " channels");
  }
  std::vector<double> scale(c);
  std::vector<double> shift(c);
  for (std::size_t k = 0; k < c; ++k) {
    if (!(bn.moving_var[k] > 0.0)) throw ValidationError("batch_norm variance must be positive");
    scale[k] = bn.gamma[k] / std::sqrt(bn.moving_var[k] + bn.epsilon);
    shift[k] = bn.beta[k] - bn.moving_mean[k] * scale[k];
  }
  Tensor out(x.shape());
  const auto in = x.values();
  auto dst = out.values();
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    const std::size_t k = idx % c;
    dst[idx] = in[idx] * scale[k] + shift[k];
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out(x.shape());
  std::transform(x.values().begin(), x.values().end(), out.values().begin(),
                 [](double v) { return v > 0.0 ? v : 0.0; });
  return out;
}

Tensor conv_layer(const Tensor& x, const ConvLayer& layer) {
  if (x.channels() != layer.in_channels) {
    throw ShapeMismatch("conv layer expects " + std::to_string(layer.in_channels) +
                        " input channels, got " + std::to_string(x.channels()));
  }
  if (layer.weights.size() != layer.weight_count()) {
    throw ValidationError("conv layer weight count does not match its shape");
  }
  return kernels::conv_layer(x, layer.weights, layer.out_channels, layer.kernel_h,
                             layer.kernel_w, layer.bias);
}

Image forward(const NetworkGraph& graph, const Image& x_noisy) {
  graph.validate();
  if (x_noisy.channels() != graph.input_channels) {
    throw ShapeMismatch("network expects " + std::to_string(graph.input_channels) +
                        " channels, image has " + std::to_string(x_noisy.channels()));
  }
  const Image input = preprocess(x_noisy);
  const PixelMap mask = noisy_map(input);

  Tensor act(input.shape());
  std::transform(input.values().begin(), input.values().end(), act.values().begin(),
                 [](double v) { return v / 255.0; });

  Image result = input;
  for (const auto& layer : graph.layers) {
    std::visit(overloaded{[&](const SeConvLayer& l) {
                            act = kernels::restore_block(act, noisy_map(act), l.kernel, l.eta).image;
                          },
                          [&](const ConvLayer& l) { act = conv_layer(act, l); },
                          [&](const BatchNormLayer& l) { act = batch_norm_inference(act, l); },
                          [&](const ReluLayer&) { act = relu(act); },
                          [&](const OutputCompose&) {
                            // input + 255 * (O (.) M) as a masked add.
                            for (std::size_t idx = 0; idx < result.size(); ++idx) {
                              if (mask.bits()[idx]) {
                                result.values()[idx] += 255.0 * act.values()[idx];
                              }
                            }
                          }},
               layer);
  }
  return result;
}

}  // namespace seconv

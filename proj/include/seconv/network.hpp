#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seconv/conv.hpp"
#include "seconv/image.hpp"

namespace seconv {

// Layer kinds of a SeConvNet-style graph. Activations flow as H x W x C
// tensors in the unit interval; every layer is "same" padded with stride 1.

struct SeConvLayer {
  Kernel kernel = Kernel::ones(3);
  int eta = 1;
};

// Cross-correlation (no kernel flip). weights are [out][in][kh][kw]; bias is
// empty or holds out_channels entries.
struct ConvLayer {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 3;
  int kernel_w = 3;
  std::vector<double> weights;
  std::vector<double> bias;

  std::size_t weight_count() const noexcept {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel_h * kernel_w;
  }
};

struct BatchNormLayer {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> moving_mean;
  std::vector<double> moving_var;
  double epsilon = 1e-3;

  int channels() const noexcept { return static_cast<int>(gamma.size()); }
};

struct ReluLayer {};

// Adds (activation x 255) (.) M to the preprocessed input.
struct OutputCompose {};

using LayerSpec = std::variant<SeConvLayer, ConvLayer, BatchNormLayer, ReluLayer, OutputCompose>;

std::string layer_kind(const LayerSpec& layer);

struct NetworkGraph {
  int input_channels = 1;
  std::vector<LayerSpec> layers;

  // Counts SeConv and Conv layers, the way layer depth is counted for the
  // standard graph (7 + 19 + 1 = 27).
  int depth() const noexcept;

  // Standard layout: SeConv blocks 3..15 with ones kernels, (depth - 8)
  // Conv(64)+BN+ReLU groups, Conv(input_channels), OutputCompose. Conv
  // weights and biases are zero, BN is gamma=1, beta=0, mean=0, var=1.
  static NetworkGraph standard(int input_channels, int depth = 27);

  bool has_standard_layout() const;

  // Channel bookkeeping, kernel parity, BN variance > 0, exactly one
  // OutputCompose at the end whose input has input_channels channels.
  // Throws ValidationError naming the offending layer index.
  void validate() const;
};

// y = gamma * (x - mean) / sqrt(var + epsilon) + beta per channel, evaluated
// as a folded per-channel scale and shift.
Tensor batch_norm_inference(const Tensor& x, const BatchNormLayer& bn);
Tensor relu(const Tensor& x);
Tensor conv_layer(const Tensor& x, const ConvLayer& layer);

// Runs the graph on a raw noisy u8 image: preprocess, noisy map M, scale to
// the unit interval, layers in order, and the masked residual
// result = preprocessed + 255 * O (.) M. Coordinates with M = 0 come back
// bit-identical to the preprocessed input.
Image forward(const NetworkGraph& graph, const Image& x_noisy);

}  // namespace seconv

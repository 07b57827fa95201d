#include "seconv/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include <json.hpp>

namespace seconv {
namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "SCVW1\n";
constexpr std::size_t kHeaderSize = 6 + 8;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const char* kind_label(WeightErrorKind kind) {
  switch (kind) {
    case WeightErrorKind::bad_magic:
      return "bad magic";
    case WeightErrorKind::truncated:
      return "truncated";
    case WeightErrorKind::bad_metadata:
      return "bad metadata";
    case WeightErrorKind::shape_mismatch:
      return "shape mismatch";
    case WeightErrorKind::trailing_data:
      return "trailing data";
  }
  return "error";
}

std::string describe(WeightErrorKind kind, long layer, const std::string& message) {
  std::string out = std::string("weights: ") + kind_label(kind);
  if (layer >= 0) out += " in layer " + std::to_string(layer);
  return out + ": " + message;
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_floats(std::vector<std::uint8_t>& out, std::span<const double> values) {
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
}

json layer_metadata(const LayerSpec& layer) {
  return std::visit(
      overloaded{[](const SeConvLayer& l) {
                   return json{{"kind", "seconv"},
                               {"size", l.kernel.size()},
                               {"eta", l.eta},
                               {"count", l.kernel.weights().size()}};
                 },
                 [](const ConvLayer& l) {
                   return json{{"kind", "conv"},
                               {"out", l.out_channels},
                               {"in", l.in_channels},
                               {"kh", l.kernel_h},
                               {"kw", l.kernel_w},
                               {"count", l.weights.size()},
                               {"bias", !l.bias.empty()}};
                 },
                 [](const BatchNormLayer& l) {
                   return json{{"kind", "batch_norm"},
                               {"channels", l.channels()},
                               {"epsilon", l.epsilon}};
                 },
                 [](const ReluLayer&) { return json{{"kind", "relu"}}; },
                 [](const OutputCompose&) { return json{{"kind", "output_compose"}}; }},
      layer);
}

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::vector<double> take(std::size_t count, long layer) {
    if (count > (bytes_.size() - pos_) / 4) {
      throw WeightFileError(WeightErrorKind::truncated, layer,
                            "payload ends before " + std::to_string(count) + " values");
    }
    std::vector<double> out(count);
    for (std::size_t n = 0; n < count; ++n, pos_ += 4) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
      out[n] = static_cast<double>(std::bit_cast<float>(bits));
    }
    return out;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int get_int(const json& meta, const char* key, long layer) {
  const auto it = meta.find(key);
  if (it == meta.end() || !it->is_number_integer()) {
    throw WeightFileError(WeightErrorKind::bad_metadata, layer,
                          std::string("missing integer field `") + key + "`");
  }
  return it->get<int>();
}

std::size_t expected_count(const json& meta, std::size_t expected, long layer) {
  const auto it = meta.find("count");
  if (it == meta.end() || !it->is_number_unsigned()) {
    throw WeightFileError(WeightErrorKind::bad_metadata, layer, "missing field `count`");
  }
  const auto declared = it->get<std::size_t>();
  if (declared != expected) {
    throw WeightFileError(WeightErrorKind::shape_mismatch, layer,
                          "declares " + std::to_string(declared) + " weights, shape needs " +
                              std::to_string(expected));
  }
  return declared;
}

LayerSpec read_layer(const json& meta, PayloadReader& payload, long index) {
  if (!meta.is_object() || !meta.contains("kind") || !meta["kind"].is_string()) {
    throw WeightFileError(WeightErrorKind::bad_metadata, index, "layer without `kind`");
  }
  const auto kind = meta["kind"].get<std::string>();
  if (kind == "seconv") {
    const int size = get_int(meta, "size", index);
    if (size < 1 || size % 2 == 0) {
      throw WeightFileError(WeightErrorKind::shape_mismatch, index, "seconv size must be odd");
    }
    const auto count = expected_count(meta, static_cast<std::size_t>(size) * size, index);
    return SeConvLayer{Kernel(size, payload.take(count, index)), get_int(meta, "eta", index)};
  }
  if (kind == "conv") {
    ConvLayer c;
    c.out_channels = get_int(meta, "out", index);
    c.in_channels = get_int(meta, "in", index);
    c.kernel_h = get_int(meta, "kh", index);
    c.kernel_w = get_int(meta, "kw", index);
    if (c.out_channels <= 0 || c.in_channels <= 0 || c.kernel_h <= 0 || c.kernel_w <= 0) {
      throw WeightFileError(WeightErrorKind::shape_mismatch, index, "non-positive conv shape");
    }
    c.weights = payload.take(expected_count(meta, c.weight_count(), index), index);
    if (meta.value("bias", false)) {
      c.bias = payload.take(static_cast<std::size_t>(c.out_channels), index);
    }
    return c;
  }
  if (kind == "batch_norm") {
    const int channels = get_int(meta, "channels", index);
    if (channels <= 0) {
      throw WeightFileError(WeightErrorKind::shape_mismatch, index, "non-positive channel count");
    }
    const auto n = static_cast<std::size_t>(channels);
    BatchNormLayer bn;
    bn.epsilon = meta.value("epsilon", 1e-3);
    bn.gamma = payload.take(n, index);
    bn.beta = payload.take(n, index);
    bn.moving_mean = payload.take(n, index);
    bn.moving_var = payload.take(n, index);
    return bn;
  }
  if (kind == "relu") return ReluLayer{};
  if (kind == "output_compose") return OutputCompose{};
  throw WeightFileError(WeightErrorKind::bad_metadata, index, "unknown layer kind `" + kind + "`");
}

}  // namespace

WeightFileError::WeightFileError(WeightErrorKind kind, long layer, const std::string& message)
    : IoError(describe(kind, layer, message)), kind_(kind), layer_(layer) {}

std::vector<std::uint8_t> serialize_weights(const NetworkGraph& graph) {
  graph.validate();
  json meta;
  meta["format"] = "SCVW1";
  meta["orientation"] = "cross_correlation";
  meta["scale"] = "unit_interval";
  meta["input_channels"] = graph.input_channels;
  meta["depth"] = graph.depth();
  meta["layers"] = json::array();
  for (const auto& layer : graph.layers) meta["layers"].push_back(layer_metadata(layer));
  const std::string text = meta.dump();

  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& layer : graph.layers) {
    std::visit(overloaded{[&](const SeConvLayer& l) { put_floats(out, l.kernel.weights()); },
                          [&](const ConvLayer& l) {
                            put_floats(out, l.weights);
                            put_floats(out, l.bias);
                          },
                          [&](const BatchNormLayer& l) {
                            put_floats(out, l.gamma);
                            put_floats(out, l.beta);
                            put_floats(out, l.moving_mean);
                            put_floats(out, l.moving_var);
                          },
                          [](const auto&) {}},
               layer);
  }
  return out;
}

NetworkGraph parse_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw WeightFileError(WeightErrorKind::bad_magic, -1, "file does not start with SCVW1");
  }
  if (bytes.size() < kHeaderSize) {
    throw WeightFileError(WeightErrorKind::truncated, -1, "header is incomplete");
  }
  std::uint64_t length = 0;
  for (int b = 0; b < 8; ++b) length |= static_cast<std::uint64_t>(bytes[6 + b]) << (8 * b);
  if (length > bytes.size() - kHeaderSize) {
    throw WeightFileError(WeightErrorKind::truncated, -1, "metadata runs past end of file");
  }

  json meta;
  try {
    meta = json::parse(bytes.begin() + kHeaderSize, bytes.begin() + kHeaderSize + length);
  } catch (const json::parse_error& e) {
    throw WeightFileError(WeightErrorKind::bad_metadata, -1, e.what());
  }
  if (!meta.is_object() || !meta.contains("layers") || !meta["layers"].is_array()) {
    throw WeightFileError(WeightErrorKind::bad_metadata, -1, "metadata lacks a layer list");
  }
  if (meta.value("orientation", std::string("cross_correlation")) != "cross_correlation") {
    throw WeightFileError(WeightErrorKind::bad_metadata, -1,
                          "only cross_correlation conv weights are supported");
  }

  NetworkGraph graph;
  graph.input_channels = get_int(meta, "input_channels", -1);
  PayloadReader payload(bytes.subspan(kHeaderSize + length));
  const auto& layers = meta["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    graph.layers.push_back(read_layer(layers[i], payload, static_cast<long>(i)));
  }
  if (meta.contains("depth") && meta["depth"] != graph.depth()) {
    throw WeightFileError(WeightErrorKind::shape_mismatch, -1,
                          "declared depth does not match the layer list");
  }
  if (payload.remaining() != 0) {
    throw WeightFileError(WeightErrorKind::trailing_data, -1,
                          std::to_string(payload.remaining()) + " bytes after the last layer");
  }
  try {
    graph.validate();
  } catch (const ValidationError& e) {
    // validate() prefixes "layer N: " when a layer is at fault.
    long layer = -1;
    std::string_view msg = e.what();
    if (msg.starts_with("layer ")) layer = std::stol(std::string(msg.substr(6)));
    throw WeightFileError(WeightErrorKind::shape_mismatch, layer, e.what());
  }
  return graph;
}

NetworkGraph load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights file " + path.string());
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                        std::istreambuf_iterator<char>()};
  return parse_weights(bytes);
}

void save_weights(const std::filesystem::path& path, const NetworkGraph& graph) {
  const auto bytes = serialize_weights(graph);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace seconv

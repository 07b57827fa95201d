#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seconv/errors.hpp"
#include "seconv/network.hpp"

namespace seconv {

// SCVW weight container:
//   bytes 0-5   magic "SCVW1\n"
//   bytes 6-13  metadata length L, unsigned 64-bit little-endian
//   L bytes     UTF-8 JSON metadata: ordered layer list with shapes, value
//               counts, epsilon, orientation and scale conventions
//   payload     float32 little-endian, row-major, per layer in metadata
//               order (seconv: s*s kernel; conv: [out][in][kh][kw] then
//               bias; batch_norm: gamma, beta, moving_mean, moving_var)
// The file length must match the metadata exactly.

enum class WeightErrorKind { bad_magic, truncated, bad_metadata, shape_mismatch, trailing_data };

class WeightFileError : public IoError {
 public:
  WeightFileError(WeightErrorKind kind, long layer, const std::string& message);

  WeightErrorKind kind() const noexcept { return kind_; }
  // Offending layer index, or -1 when the error is not tied to a layer.
  long layer() const noexcept { return layer_; }

 private:
  WeightErrorKind kind_;
  long layer_;
};

std::vector<std::uint8_t> serialize_weights(const NetworkGraph& graph);
NetworkGraph parse_weights(std::span<const std::uint8_t> bytes);

NetworkGraph load_weights(const std::filesystem::path& path);
void save_weights(const std::filesystem::path& path, const NetworkGraph& graph);

}  // namespace seconv

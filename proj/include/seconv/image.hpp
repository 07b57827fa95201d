#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seconv {

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
           static_cast<std::size_t>(channels);
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& shape);

// Dense H x W x C array of doubles, row-major with the channel index varying
// fastest (the interleaved layout of PPM files).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  const Shape& shape() const noexcept { return shape_; }
  int height() const noexcept { return shape_.height; }
  int width() const noexcept { return shape_.width; }
  int channels() const noexcept { return shape_.channels; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_.width) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(shape_.channels) +
           static_cast<std::size_t>(k);
  }
  double& operator()(int i, int j, int k) noexcept { return values_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const noexcept { return values_[index(i, j, k)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

enum class Scale { u8, unit };

// 255 for u8, 1 for unit.
double peak_value(Scale scale) noexcept;

// A Tensor with 1 or 3 channels and a declared intensity scale. Images coming
// from I/O, noise generation and the classical filters stay inside
// [0, peak_value(scale)]; network outputs may leave that range and are only
// clamped when serialized.
class Image : public Tensor {
 public:
  Image() = default;
  Image(Shape shape, Scale scale, double fill = 0.0);
  Image(Tensor pixels, Scale scale);

  static Image from_u8(Shape shape, std::span<const std::uint8_t> bytes);

  Scale scale() const noexcept { return scale_; }
  bool in_range() const noexcept;

  // Rounds to nearest and clamps to [0, 255]; unit images are rescaled first.
  std::vector<std::uint8_t> to_u8() const;
  Image quantized() const;
  Image rescaled(Scale target) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Scale scale_ = Scale::u8;
};

// Binary map over a tensor's coordinates; houses the noisy map M and its
// complement.
class PixelMap {
 public:
  PixelMap() = default;
  explicit PixelMap(Shape shape, std::uint8_t fill = 0);
  PixelMap(Shape shape, std::vector<std::uint8_t> bits);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t count() const noexcept;

  std::uint8_t& operator()(int i, int j, int k) noexcept { return bits_[index(i, j, k)]; }
  std::uint8_t operator()(int i, int j, int k) const noexcept { return bits_[index(i, j, k)]; }
  std::span<std::uint8_t> bits() noexcept { return bits_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const PixelMap&, const PixelMap&) = default;

 private:
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(shape_.width) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(shape_.channels) +
           static_cast<std::size_t>(k);
  }

  Shape shape_;
  std::vector<std::uint8_t> bits_;
};

// 1 where x is exactly zero.
PixelMap noisy_map(const Tensor& x);
PixelMap complement(const PixelMap& m);
Tensor to_tensor(const PixelMap& m);

// Throw ShapeMismatch when shapes differ.
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const PixelMap& m);

void require_same_shape(const Shape& a, const Shape& b, const char* what);

}  // namespace seconv

#include "seconv/image.hpp"

#include <algorithm>
#include <cmath>

#include "seconv/errors.hpp"

namespace seconv {

std::string to_string(const Shape& shape) {
  return std::to_string(shape.height) + "x" + std::to_string(shape.width) + "x" +
         std::to_string(shape.channels);
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    throw ShapeMismatch(std::string(what) + ": incompatible shapes " + to_string(a) + " and " +
                        to_string(b));
  }
}

static void check_dims(const Shape& shape) {
  if (shape.height <= 0 || shape.width <= 0 || shape.channels <= 0) {
    throw ValidationError("tensor dimensions must be positive, got " + to_string(shape));
  }
}

Tensor::Tensor(Shape shape, double fill) : shape_(shape) {
  check_dims(shape_);
  values_.assign(shape_.size(), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
  check_dims(shape_);
  if (values_.size() != shape_.size()) {
    throw ValidationError("tensor of shape " + to_string(shape_) + " needs " +
                          std::to_string(shape_.size()) + " values, got " +
                          std::to_string(values_.size()));
  }
}

double peak_value(Scale scale) noexcept { return scale == Scale::u8 ? 255.0 : 1.0; }

static void check_image_channels(const Shape& shape) {
  if (shape.channels != 1 && shape.channels != 3) {
    throw ValidationError("images have 1 or 3 channels, got " + std::to_string(shape.channels));
  }
}

Image::Image(Shape shape, Scale scale, double fill) : Tensor(shape, fill), scale_(scale) {
  check_image_channels(shape);
}

Image::Image(Tensor pixels, Scale scale) : Tensor(std::move(pixels)), scale_(scale) {
  check_image_channels(this->shape());
}

Image Image::from_u8(Shape shape, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != shape.size()) {
    throw ValidationError("expected " + std::to_string(shape.size()) + " bytes for " +
                          to_string(shape) + ", got " + std::to_string(bytes.size()));
  }
  std::vector<double> values(bytes.begin(), bytes.end());
  return Image(Tensor(shape, std::move(values)), Scale::u8);
}

bool Image::in_range() const noexcept {
  const double hi = peak_value(scale_);
  return std::all_of(values().begin(), values().end(),
                     [hi](double v) { return v >= 0.0 && v <= hi; });
}

std::vector<std::uint8_t> Image::to_u8() const {
  const double factor = scale_ == Scale::u8 ? 1.0 : 255.0;
  std::vector<std::uint8_t> out(size());
  std::transform(values().begin(), values().end(), out.begin(), [factor](double v) {
    const double r = std::nearbyint(std::clamp(v * factor, 0.0, 255.0));
    return static_cast<std::uint8_t>(std::isnan(r) ? 0.0 : r);
  });
  return out;
}

Image Image::quantized() const {
  Image q = from_u8(shape(), to_u8());
  return scale_ == Scale::u8 ? q : q.rescaled(scale_);
}

Image Image::rescaled(Scale target) const {
  if (target == scale_) return *this;
  const double factor = peak_value(target) / peak_value(scale_);
  Image out(shape(), target);
  std::transform(values().begin(), values().end(), out.values().begin(),
                 [factor](double v) { return v * factor; });
  return out;
}

PixelMap::PixelMap(Shape shape, std::uint8_t fill) : shape_(shape) {
  check_dims(shape_);
  if (fill > 1) throw ValidationError("pixel map entries must be 0 or 1");
  bits_.assign(shape_.size(), fill);
}

PixelMap::PixelMap(Shape shape, std::vector<std::uint8_t> bits)
    : shape_(shape), bits_(std::move(bits)) {
  check_dims(shape_);
  if (bits_.size() != shape_.size()) {
    throw ValidationError("pixel map of shape " + to_string(shape_) + " needs " +
                          std::to_string(shape_.size()) + " entries");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw ValidationError("pixel map entries must be 0 or 1");
  }
}

std::size_t PixelMap::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PixelMap noisy_map(const Tensor& x) {
  PixelMap m(x.shape());
  std::transform(x.values().begin(), x.values().end(), m.bits().begin(),
                 [](double v) { return static_cast<std::uint8_t>(v == 0.0); });
  return m;
}

PixelMap complement(const PixelMap& m) {
  PixelMap out(m.shape());
  std::transform(m.bits().begin(), m.bits().end(), out.bits().begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
  return out;
}

Tensor to_tensor(const PixelMap& m) {
  Tensor out(m.shape());
  std::copy(m.bits().begin(), m.bits().end(), out.values().begin());
  return out;
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
  require_same_shape(a.shape(), b.shape(), "hadamard");
  Tensor out(a.shape());
  std::transform(a.values().begin(), a.values().end(), b.values().begin(), out.values().begin(),
                 [](double x, double y) { return x * y; });
  return out;
}

Tensor hadamard(const Tensor& a, const PixelMap& m) {
  require_same_shape(a.shape(), m.shape(), "hadamard");
  Tensor out(a.shape());
  std::transform(a.values().begin(), a.values().end(), m.bits().begin(), out.values().begin(),
                 [](double x, std::uint8_t b) { return x * static_cast<double>(b); });
  return out;
}

}  // namespace seconv

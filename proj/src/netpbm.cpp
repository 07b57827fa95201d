#include "seconv/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "seconv/errors.hpp"

namespace seconv {
namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* field) {
  skip_space_and_comments(in);
  long value = 0;
  bool any = false;
  while (std::isdigit(in.peek())) {
    value = value * 10 + (in.get() - '0');
    any = true;
    if (value > std::numeric_limits<int>::max()) break;
  }
  if (!any || value <= 0 || value > std::numeric_limits<int>::max()) {
    throw IoError(std::string("netpbm: bad ") + field);
  }
  return static_cast<int>(value);
}

}  // namespace

Image read_pnm(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    throw IoError("netpbm: expected P5 or P6 magic");
  }
  const int channels = magic[1] == '5' ? 1 : 3;
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (maxval != 255) {
    throw IoError("netpbm: only maxval 255 is supported, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) throw IoError("netpbm: malformed header");

  const Shape shape{height, width, channels};
  std::vector<std::uint8_t> bytes(shape.size());
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw IoError("netpbm: truncated raster, expected " + std::to_string(bytes.size()) + " bytes");
  }
  return Image::from_u8(shape, bytes);
}

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_pnm(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_pnm(std::ostream& out, const Image& image) {
  const auto bytes = image.to_u8();
  out << (image.channels() == 1 ? "P5" : "P6") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << 255 << '\n';
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("netpbm: write failed");
}

void write_pnm(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_pnm(out, image);
}

}  // namespace seconv

#pragma once

#include <filesystem>
#include <iosfwd>

#include "seconv/image.hpp"

namespace seconv {

// Binary PGM (P5, one channel) and PPM (P6, three channels), 8-bit with
// maxval 255. Writing rounds and clamps; reading a file written here gives
// back the same bytes.
Image read_pnm(std::istream& in);
Image read_pnm(const std::filesystem::path& path);

void write_pnm(std::ostream& out, const Image& image);
void write_pnm(const std::filesystem::path& path, const Image& image);

}  // namespace seconv

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "seconv/seconv_block.hpp"

namespace seconv {

// Plain-text key/value cascade description, one `key = value` per line,
// `#` starts a comment:
//
//   sizes    = 3,5,7,9,11,13,15
//   kernel   = ones            # ones | inverse_distance
//   eta      = auto            # auto (max(1, s-2)) | positive integer
//   finalize = repeat_last     # leave | repeat_last | global_mean_fill
//
// Missing keys take the values shown. Unknown keys are rejected.
CascadeSpec parse_cascade_config(std::string_view text);
CascadeSpec load_cascade_config(const std::filesystem::path& path);

Finalize parse_finalize(std::string_view name);
std::string_view finalize_name(Finalize finalize) noexcept;

}  // namespace seconv

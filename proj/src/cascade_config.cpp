#include "seconv/cascade_config.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "seconv/errors.hpp"

namespace seconv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view text, std::string_view key) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("cascade config: `" + std::string(key) + "` expects an integer, got `" +
                          std::string(text) + "`");
  }
  return value;
}

std::vector<int> parse_sizes(std::string_view text) {
  std::vector<int> sizes;
  while (!text.empty()) {
    const auto comma = text.find(',');
    sizes.push_back(parse_int(trim(text.substr(0, comma)), "sizes"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (sizes.empty()) throw ValidationError("cascade config: `sizes` is empty");
  return sizes;
}

KernelChoice parse_kernel_choice(std::string_view name) {
  if (name == "ones") return KernelChoice::ones;
  if (name == "inverse_distance") return KernelChoice::inverse_distance;
  throw ValidationError("cascade config: unknown kernel `" + std::string(name) + "`");
}

}  // namespace

Finalize parse_finalize(std::string_view name) {
  if (name == "leave") return Finalize::leave;
  if (name == "repeat_last") return Finalize::repeat_last;
  if (name == "global_mean_fill") return Finalize::global_mean_fill;
  throw ValidationError("unknown finalize policy `" + std::string(name) + "`");
}

std::string_view finalize_name(Finalize finalize) noexcept {
  switch (finalize) {
    case Finalize::leave:
      return "leave";
    case Finalize::repeat_last:
      return "repeat_last";
    case Finalize::global_mean_fill:
      return "global_mean_fill";
  }
  return "?";
}

CascadeSpec parse_cascade_config(std::string_view text) {
  std::vector<int> sizes = {3, 5, 7, 9, 11, 13, 15};
  KernelChoice kernel = KernelChoice::ones;
  std::optional<int> fixed_eta;
  Finalize finalize = Finalize::repeat_last;

  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("cascade config line " + std::to_string(line_no) +
                            ": expected `key = value`");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "sizes") {
      sizes = parse_sizes(value);
    } else if (key == "kernel") {
      kernel = parse_kernel_choice(value);
    } else if (key == "eta") {
      if (value == "auto") {
        fixed_eta.reset();
      } else {
        fixed_eta = parse_int(value, key);
      }
    } else if (key == "finalize") {
      finalize = parse_finalize(value);
    } else {
      throw ValidationError("cascade config line " + std::to_string(line_no) + ": unknown key `" +
                            std::string(key) + "`");
    }
  }

  CascadeSpec spec;
  spec.finalize = finalize;
  for (int s : sizes) {
    SeConvBlockSpec block{make_kernel(kernel, s), fixed_eta.value_or(SeConvBlockSpec::default_eta(s))};
    spec.blocks.push_back(std::move(block));
  }
  spec.validate();
  return spec;
}

CascadeSpec load_cascade_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cascade config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_cascade_config(buffer.str());
}

}  // namespace seconv

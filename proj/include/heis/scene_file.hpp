#pragma once
// Plain-text scene files:
//
//   [surface]
//   u      = "x3"
//   chart  = "s1", "s2", "0"
//   domain = disk(0, 0, 1)          # or rectangle(a, b, c, d)
//   [boundary.1]
//   gamma    = "cos(t)", "sin(t)", "0"
//   interval = 0, 2*pi
//   [options]
//   euler_characteristic = 1
//
// See docs/scene-format.md for every key.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "heis/gauss_bonnet.hpp"

namespace heis {

Scene parse_scene(std::string_view text, std::string name = "scene");
Scene load_scene(const std::filesystem::path& path);

/// Splits on commas outside quotes and parentheses; surrounding blanks are trimmed.
std::vector<std::string> split_top_level(std::string_view s);

}  // namespace heis

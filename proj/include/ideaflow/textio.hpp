#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ideaflow {

// Shortest round-trip decimal form via std::to_chars. Every artifact writer
// goes through this so reruns are byte-identical.
std::string fmt_double(double v);

std::vector<std::string> split(std::string_view line, char sep);

// Detects ',' vs whitespace separation and splits accordingly.
std::vector<std::string> split_auto(std::string_view line);

bool is_valid_utf8(std::string_view s);

}  // namespace ideaflow

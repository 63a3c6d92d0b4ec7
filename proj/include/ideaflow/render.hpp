#pragma once

#include <string>

#include "ideaflow/flow.hpp"

namespace ideaflow {

// Static stripe diagram: one horizontal stripe per idea with width encoding
// hotness, links between correlated segment midpoints annotated with the
// segment's lead-lag time. Byte-identical output for identical input.
std::string render_flow_svg(const FlowReport& report);

}  // namespace ideaflow

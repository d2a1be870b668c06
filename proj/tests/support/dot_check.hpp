#pragma once

#include <string>
#include <string_view>

namespace sessub::testing {

/// Checks `text` against the DOT language grammar (graph, statements,
/// attribute lists, the four ID forms, comments). HTML IDs must also be
/// balanced markup. Returns an empty string when valid, else a message.
std::string dot_error(std::string_view text);

}  // namespace sessub::testing

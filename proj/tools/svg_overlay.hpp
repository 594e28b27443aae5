#pragma once

#include "edgematch/edge_model.hpp"
#include "edgematch/verification.hpp"

#include <string>

namespace edgematch {

/// Static SVG in A's frame. Each edge is a 6 px segment centered on it along
/// theta. Classes: "ref" (unmatched A), "probe" (unmatched N after the
/// transform), "match" (both members of a matched pair), "basis" (the two
/// basis couples, drawn last).
std::string render_overlay(const EdgeSet& a, const EdgeSet& n, const MatchResult& result);

} // namespace edgematch

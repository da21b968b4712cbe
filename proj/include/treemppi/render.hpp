#pragma once

#include <string>

#include "treemppi/controller.hpp"
#include "treemppi/io.hpp"

namespace treemppi {

/// SVG drawing of the environment, optionally with a tree (every edge as one
/// <line class="edge">, the min path as class "min-path") and an executed
/// trial (class "trajectory"; terminal nodes as red class "terminal" dots).
/// Terminal node indices refer to the tree and are skipped without one.
std::string render_svg(const Environment& env, const TreeFile* tree = nullptr, const TrialRecord* trial = nullptr);

}  // namespace treemppi

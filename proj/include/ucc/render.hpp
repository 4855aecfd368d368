#pragma once

#include "ucc/tower.hpp"

namespace ucc {

// Deterministic SVG of the level tree. Uses the declared planar embedding
// when every level node has coordinates, otherwise a radial auto-layout.
// Markers are drawn as labeled circles.
std::string render_svg(const Model& m, int level,
                       const std::vector<std::pair<std::string, TowerCoord>>& markers = {});

}  // namespace ucc

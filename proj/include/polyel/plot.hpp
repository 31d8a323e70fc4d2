#pragma once

#include <string>

#include "polyel/model.hpp"

namespace polyel {

/// SVG rendering of a planar instance: demand points, translated foci and
/// the level curve {z : sum_u w_u ||z - u - x|| = r}, extracted by marching
/// squares on a resolution x resolution grid and refined so every emitted
/// contour vertex satisfies |phi - r| <= grid cell diagonal. Fixed
/// 1000x1000 viewBox; output bytes depend only on the inputs.
std::string render_levelset_svg(const Instance& inst, Span x, double r, std::size_t resolution = 128);

/// render_levelset_svg written to a file.
void plot_levelset(const Instance& inst, Span x, double r, const std::string& out_path,
                   std::size_t resolution = 128);

}  // namespace polyel

#pragma once

#include "textarea/core.hpp"

namespace textarea {

/// Signed shoelace area; positive for counter-clockwise (y up) vertex order.
double polygon_area(const Polygon& poly);

/// Even-odd test; points exactly on an edge may fall either way.
bool polygon_contains(const Polygon& poly, Point p);

/// Intersection over union of two simple polygons, measured by sampling cell
/// centres on a grid over their joint bounding box. The cell is one pixel,
/// shrunk when needed so the box spans at least 512 cells. 0 when both are
/// empty.
double polygon_iou(const Polygon& a, const Polygon& b);

}  // namespace textarea

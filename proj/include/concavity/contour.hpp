#pragma once

#include <string>
#include <vector>

#include "concavity/vec2.hpp"

namespace concavity {

// Scalar field on a uniform lattice, reconstructed from a field CSV
// (columns x, y, value; one row per interior node).  Nodes absent from the
// CSV are exterior and carry the Dirichlet value 0.
struct RasterField {
    long nx = 0;
    long ny = 0;
    double x0 = 0.0;  // position of lattice node (0, 0)
    double y0 = 0.0;
    double h = 0.0;
    std::vector<double> values;  // row-major by (iy, ix), 0 where exterior
    std::vector<char> inside;

    double at(long ix, long iy) const { return values[static_cast<size_t>(iy * nx + ix)]; }
    double max_value() const;
};

RasterField raster_from_csv(const std::string& csv_path);

struct ContourLine {
    double level = 0.0;
    std::vector<Vec2> points;
    bool closed = false;
};

// Marching squares with linear edge interpolation; ambiguous saddle cells are
// resolved by the cell-average rule.  Output order is deterministic: cells
// scanned row-major, chains started from the lowest-indexed unused segment.
std::vector<ContourLine> extract_contours(const RasterField& field, double level);

// Level curves at `levels` equispaced values strictly between 0 and the field
// maximum, rendered as an SVG document.  Byte-deterministic for fixed input.
void render_contours(const std::string& csv_path, int levels,
                     const std::string& svg_path);

}  // namespace concavity

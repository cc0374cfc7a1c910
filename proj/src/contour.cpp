#include "concavity/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace concavity {

double RasterField::max_value() const {
    // true maximum over interior nodes: negative for all-negative fields, so
    // "levels between 0 and max" still yields meaningful curves there
    double m = 0.0;
    bool seen = false;
    for (size_t i = 0; i < values.size(); ++i) {
        if (!inside[i]) continue;
        if (!seen || values[i] > m) m = values[i];
        seen = true;
    }
    return m;
}

namespace {

struct Row {
    double x, y, value;
};

std::vector<Row> parse_rows(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("cli.render_contours: cannot open " + csv_path);
    std::vector<Row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Row r{};
        if (!(ss >> r.x >> r.y >> r.value)) {
            if (first) {
                first = false;  // header line
                continue;
            }
            throw std::runtime_error("cli.render_contours: malformed CSV row '" +
                                     line + "'");
        }
        first = false;
        rows.push_back(r);
    }
    return rows;
}

double infer_spacing(std::vector<double> coords) {
    std::sort(coords.begin(), coords.end());
    double h = 0.0;
    for (size_t i = 1; i < coords.size(); ++i) {
        double d = coords[i] - coords[i - 1];
        if (d > 1e-12 && (h == 0.0 || d < h)) h = d;
    }
    return h;
}

}  // namespace

RasterField raster_from_csv(const std::string& csv_path) {
    std::vector<Row> rows = parse_rows(csv_path);
    if (rows.empty())
        throw std::runtime_error("cli.render_contours: empty field");

    std::vector<double> xs(rows.size()), ys(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        xs[i] = rows[i].x;
        ys[i] = rows[i].y;
    }
    double hx = infer_spacing(xs);
    double hy = infer_spacing(ys);
    double h = std::max(hx, hy);  // equal up to roundoff on a square lattice
    if (!(h > 0.0))
        throw std::runtime_error("cli.render_contours: degenerate lattice");

    double xmin = *std::min_element(xs.begin(), xs.end());
    double ymin = *std::min_element(ys.begin(), ys.end());
    double xmax = *std::max_element(xs.begin(), xs.end());
    double ymax = *std::max_element(ys.begin(), ys.end());

    RasterField f;
    f.h = h;
    // pad one exterior ring so every contour closes through the zero region
    f.x0 = xmin - h;
    f.y0 = ymin - h;
    f.nx = static_cast<long>(std::lround((xmax - xmin) / h)) + 3;
    f.ny = static_cast<long>(std::lround((ymax - ymin) / h)) + 3;
    f.values.assign(static_cast<size_t>(f.nx * f.ny), 0.0);
    f.inside.assign(static_cast<size_t>(f.nx * f.ny), 0);
    for (const Row& r : rows) {
        long ix = std::lround((r.x - f.x0) / h);
        long iy = std::lround((r.y - f.y0) / h);
        if (ix < 0 || ix >= f.nx || iy < 0 || iy >= f.ny ||
            std::abs(f.x0 + ix * h - r.x) > 1e-6 * h ||
            std::abs(f.y0 + iy * h - r.y) > 1e-6 * h)
            throw std::runtime_error(
                "cli.render_contours: rows do not lie on a uniform lattice");
        f.values[static_cast<size_t>(iy * f.nx + ix)] = r.value;
        f.inside[static_cast<size_t>(iy * f.nx + ix)] = 1;
    }
    return f;
}

namespace {

// unique key for a lattice edge carrying an interpolated contour point
long edge_key(const RasterField& f, long ix, long iy, bool vertical) {
    return vertical ? (iy * f.nx + ix) * 2 + 1 : (iy * (f.nx - 1) + ix) * 2;
}

Vec2 edge_point(const RasterField& f, long ix, long iy, bool vertical,
                double level) {
    double va = f.at(ix, iy);
    double vb = vertical ? f.at(ix, iy + 1) : f.at(ix + 1, iy);
    double t = (level - va) / (vb - va);
    t = std::clamp(t, 0.0, 1.0);
    if (vertical)
        return {f.x0 + ix * f.h, f.y0 + (iy + t) * f.h};
    return {f.x0 + (ix + t) * f.h, f.y0 + iy * f.h};
}

struct Segment {
    long a, b;  // edge keys
};

}  // namespace

std::vector<ContourLine> extract_contours(const RasterField& f, double level) {
    std::vector<Segment> segments;
    std::map<long, Vec2> points;
    std::map<long, std::vector<long>> adjacency;  // edge key -> segment ids

    auto emit = [&](long ix0, long iy0, bool v0, long ix1, long iy1, bool v1) {
        long ka = edge_key(f, ix0, iy0, v0);
        long kb = edge_key(f, ix1, iy1, v1);
        points.emplace(ka, edge_point(f, ix0, iy0, v0, level));
        points.emplace(kb, edge_point(f, ix1, iy1, v1, level));
        long id = static_cast<long>(segments.size());
        segments.push_back({ka, kb});
        adjacency[ka].push_back(id);
        adjacency[kb].push_back(id);
    };

    for (long iy = 0; iy + 1 < f.ny; ++iy) {
        for (long ix = 0; ix + 1 < f.nx; ++ix) {
            double v00 = f.at(ix, iy), v10 = f.at(ix + 1, iy);
            double v01 = f.at(ix, iy + 1), v11 = f.at(ix + 1, iy + 1);
            int c = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) |
                    (v11 > level ? 4 : 0) | (v01 > level ? 8 : 0);
            if (c == 0 || c == 15) continue;
            // edges: B = bottom (ix,iy,h), R = right (ix+1,iy,v),
            //        T = top (ix,iy+1,h), L = left (ix,iy,v)
            auto B = [&](long& x, long& y, bool& v) { x = ix; y = iy; v = false; };
            auto R = [&](long& x, long& y, bool& v) { x = ix + 1; y = iy; v = true; };
            auto T = [&](long& x, long& y, bool& v) { x = ix; y = iy + 1; v = false; };
            auto L = [&](long& x, long& y, bool& v) { x = ix; y = iy; v = true; };
            auto seg = [&](auto e1, auto e2) {
                long x1, y1, x2, y2;
                bool u1, u2;
                e1(x1, y1, u1);
                e2(x2, y2, u2);
                emit(x1, y1, u1, x2, y2, u2);
            };
            switch (c) {
                case 1: case 14: seg(L, B); break;
                case 2: case 13: seg(B, R); break;
                case 3: case 12: seg(L, R); break;
                case 4: case 11: seg(T, R); break;
                case 6: case 9:  seg(B, T); break;
                case 7: case 8:  seg(L, T); break;
                case 5: {  // saddle: corners 00 and 11 above
                    double mid = 0.25 * (v00 + v10 + v01 + v11);
                    if (mid > level) { seg(L, T); seg(B, R); }
                    else             { seg(L, B); seg(T, R); }
                    break;
                }
                case 10: {  // saddle: corners 10 and 01 above
                    double mid = 0.25 * (v00 + v10 + v01 + v11);
                    if (mid > level) { seg(L, B); seg(T, R); }
                    else             { seg(L, T); seg(B, R); }
                    break;
                }
                default: break;
            }
        }
    }

    std::vector<ContourLine> lines;
    std::vector<char> used(segments.size(), 0);
    for (size_t start = 0; start < segments.size(); ++start) {
        if (used[start]) continue;
        used[start] = 1;
        std::vector<long> chain{segments[start].a, segments[start].b};
        // extend forward from chain.back(), then backward from chain.front()
        for (int pass = 0; pass < 2; ++pass) {
            for (;;) {
                long tip = pass == 0 ? chain.back() : chain.front();
                long next_seg = -1;
                for (long id : adjacency[tip])
                    if (!used[static_cast<size_t>(id)]) { next_seg = id; break; }
                if (next_seg < 0) break;
                used[static_cast<size_t>(next_seg)] = 1;
                const Segment& s = segments[static_cast<size_t>(next_seg)];
                long other = s.a == tip ? s.b : s.a;
                if (pass == 0)
                    chain.push_back(other);
                else
                    chain.insert(chain.begin(), other);
            }
        }
        ContourLine line;
        line.level = level;
        line.closed = chain.size() > 2 && chain.front() == chain.back();
        if (line.closed) chain.pop_back();
        line.points.reserve(chain.size());
        for (long k : chain) line.points.push_back(points[k]);
        lines.push_back(std::move(line));
    }
    return lines;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void render_contours(const std::string& csv_path, int levels,
                     const std::string& svg_path) {
    if (levels < 1)
        throw std::runtime_error("cli.render_contours: levels must be >= 1");
    RasterField f = raster_from_csv(csv_path);
    double vmax = f.max_value();

    const double w = (f.nx - 1) * f.h;
    const double hgt = (f.ny - 1) * f.h;
    const double stroke = 0.004 * std::max(w, hgt);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    svg += fmt(f.x0) + " " + fmt(-(f.y0 + hgt)) + " " + fmt(w) + " " + fmt(hgt);
    svg += "\" width=\"640\" height=\"" + fmt(640.0 * hgt / w) + "\">\n";
    svg += "<rect x=\"" + fmt(f.x0) + "\" y=\"" + fmt(-(f.y0 + hgt)) +
           "\" width=\"" + fmt(w) + "\" height=\"" + fmt(hgt) +
           "\" fill=\"#ffffff\"/>\n";

    for (int i = 0; i < levels; ++i) {
        double level = vmax * (i + 1) / (levels + 1);
        std::vector<ContourLine> lines = extract_contours(f, level);
        for (const ContourLine& line : lines) {
            if (line.points.size() < 2) continue;
            std::string d = "M";
            for (size_t k = 0; k < line.points.size(); ++k) {
                if (k > 0) d += " L";
                // flip y: SVG's axis points down
                d += " " + fmt(line.points[k].x) + " " + fmt(-line.points[k].y);
            }
            if (line.closed) d += " Z";
            svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"#20507a\" "
                   "stroke-width=\"" + fmt(stroke) + "\"/>\n";
        }
    }
    svg += "</svg>\n";

    std::ofstream out(svg_path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cli.render_contours: cannot write " + svg_path);
    out << svg;
}

}  // namespace concavity

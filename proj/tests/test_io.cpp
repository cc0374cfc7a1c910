#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "concavity/contour.hpp"
#include "concavity/io.hpp"
#include "doctest.h"

using namespace concavity;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("concavity-io-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int counter;
};
int TempDir::counter = 0;

}  // namespace

TEST_CASE("format_float round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0, -0.0,
                     0.24999999999987157, M_PI}) {
        std::string s = io::format_float(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
    CHECK(io::format_float(1.0) == "1");
    CHECK(io::format_float(0.5) == "0.5");
}

TEST_CASE("field CSV round-trips bit-exactly and deterministically") {
    TempDir tmp;
    double h = 1.0 / 12;
    auto grid = build_grid(make_domain(DomainSpec::disk(1.0)), h);
    Field u = torsion_function(grid);
    std::string p1 = tmp.file("u1.csv"), p2 = tmp.file("u2.csv");
    io::write_field_csv(u, p1);
    io::write_field_csv(u, p2);
    CHECK(io::read_text(p1) == io::read_text(p2));

    auto rows = io::read_field_csv(p1);
    REQUIRE(rows.size() == grid->size());
    for (size_t i = 0; i < rows.size(); ++i) {
        Vec2 p = grid->position(grid->nodes[i]);
        CHECK(rows[i].x == p.x);
        CHECK(rows[i].y == p.y);
        CHECK(rows[i].value == u.values[i]);
    }
}

TEST_CASE("radial, sweep, and histogram CSV writers re-parse") {
    TempDir tmp;
    RadialSolution v = solve_radial(Nonlinearity::constant(1.0), 1.0, 2);
    std::string rp = tmp.file("radial.csv");
    io::write_radial_csv(v, rp);
    auto rows = io::read_columns_csv(rp, 2);
    REQUIRE(rows.size() == v.r.size());
    CHECK(rows.front().x == 0.0);
    CHECK(rows.back().x == 1.0);
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].x == v.r[i]);
        CHECK(rows[i].y == v.values[i]);
    }

    SweepResult sweep;
    sweep.rows = {{2.0, -0.2, std::log(0.2)}, {4.0, -0.05, std::log(0.05)}};
    sweep.slope = -1.0;
    sweep.intercept = 0.3;
    sweep.r_squared = 0.999;
    sweep.all_negative = true;
    std::string sp = tmp.file("sweep.csv");
    io::write_sweep_csv(sweep, sp);
    auto srows = io::read_columns_csv(sp, 3);
    REQUIRE(srows.size() == 2);
    CHECK(srows[1].x == 4.0);
    CHECK(srows[1].y == -0.05);

    std::vector<HistogramBin> bins = {{0.0, 10}, {1.5, 32}, {3.0, 7}};
    std::string hp = tmp.file("hist.csv");
    io::write_histogram_csv(bins, hp);
    auto hrows = io::read_columns_csv(hp, 2);
    REQUIRE(hrows.size() == 3);
    CHECK(hrows[1].x == 1.5);
    CHECK(hrows[1].y == 32.0);
}

TEST_CASE("estimate JSON round-trips") {
    Estimate e;
    e.mean = 0.37507;
    e.std_error = 1.25e-4;
    e.n_walks = 100000;
    e.seed = 42;
    Estimate back = io::estimate_from_json(io::to_json(e));
    CHECK(back.mean == e.mean);
    CHECK(back.std_error == e.std_error);
    CHECK(back.n_walks == e.n_walks);
    CHECK(back.seed == e.seed);
}

TEST_CASE("condition and concavity reports survive JSON round-trips") {
    Domain disk = make_domain(DomainSpec::disk(1.0));
    ConditionReport cond = check_condition(
        Nonlinearity::affine(1.0, 1.0), disk.stats(), 2,
        TheoremCondition::ConcavityPropagation);
    ConditionReport cback = io::condition_from_json(io::to_json(cond));
    CHECK(cback.passes == cond.passes);
    CHECK(cback.threshold == cond.threshold);
    CHECK(cback.tested_value == cond.tested_value);
    CHECK(cback.margin == cond.margin);

    double h = 1.0 / 24;
    auto grid = build_grid(disk, h);
    Field u = torsion_function(grid);
    ConcavityReport rep = concavity_report(u, default_tolerances(u));
    ConcavityReport rback = io::concavity_from_json(io::to_json(rep));
    CHECK(rback.interior_nsd == rep.interior_nsd);
    CHECK(rback.boundary_nsd == rep.boundary_nsd);
    CHECK(rback.min_lambda_interior == rep.min_lambda_interior);
    CHECK(rback.peak_value == rep.peak_value);
    CHECK(rback.interior_evaluated == rep.interior_evaluated);
}

TEST_CASE("representation and sweep JSON round-trips") {
    RepresentationCheck c;
    c.probe = {0.3, -0.1};
    c.direction = {1.0, 0.0};
    c.lhs = -0.52;
    c.rhs_occupation = {0.01, 0.002, 50000, 7};
    c.rhs_boundary = {-0.53, 0.003, 50000, 7};
    c.rhs_total = {-0.52, 0.0036, 50000, 7};
    c.z_score = 0.1;
    c.discard_rate = 0.0;
    RepresentationCheck back = io::representation_from_json(io::to_json(c));
    CHECK(back.probe.x == c.probe.x);
    CHECK(back.direction.y == c.direction.y);
    CHECK(back.lhs == c.lhs);
    CHECK(back.rhs_total.std_error == c.rhs_total.std_error);
    CHECK(back.z_score == c.z_score);

    SweepResult s;
    s.rows = {{2.0, -0.21, std::log(0.21)}, {4.0, -0.06, std::log(0.06)},
              {8.0, -0.015, std::log(0.015)}};
    s.slope = -0.95;
    s.intercept = 0.1;
    s.r_squared = 0.998;
    s.all_negative = true;
    SweepResult sb = io::sweep_from_json(io::to_json(s));
    REQUIRE(sb.rows.size() == 3);
    CHECK(sb.rows[2].aspect == 8.0);
    CHECK(sb.rows[2].lambda_max_at_peak == -0.015);
    CHECK(sb.slope == s.slope);
    CHECK(sb.all_negative == s.all_negative);
}

TEST_CASE("JSON parsers reject missing fields") {
    CHECK_THROWS_AS((void)io::estimate_from_json("{\"mean\": 1.0}"),
                    std::runtime_error);
    CHECK_THROWS_AS((void)io::estimate_from_json("not json"), std::runtime_error);
}

TEST_CASE("contours of a radial field are closed nested loops") {
    TempDir tmp;
    double h = 1.0 / 32;
    auto grid = build_grid(make_domain(DomainSpec::disk(1.0)), h);
    Field u = torsion_function(grid);
    std::string csv = tmp.file("u.csv");
    io::write_field_csv(u, csv);

    RasterField raster = raster_from_csv(csv);
    CHECK(raster.h == doctest::Approx(h).epsilon(1e-12));
    CHECK(raster.max_value() == doctest::Approx(0.25).epsilon(1e-2));

    // level set {u = t} is the circle r = sqrt(1 - 4t)
    for (double t : {0.05, 0.12, 0.2}) {
        auto lines = extract_contours(raster, t);
        REQUIRE(lines.size() == 1);
        CHECK(lines.front().closed);
        double r_exact = std::sqrt(1.0 - 4.0 * t);
        for (const Vec2& p : lines.front().points) {
            CHECK(std::abs(std::hypot(p.x, p.y) - r_exact) <= 2.0 * h);
        }
    }

    std::string svg1 = tmp.file("u1.svg"), svg2 = tmp.file("u2.svg");
    render_contours(csv, 5, svg1);
    render_contours(csv, 5, svg2);
    std::string doc = io::read_text(svg1);
    CHECK(doc == io::read_text(svg2));
    CHECK(doc.find("<svg") != std::string::npos);
    CHECK(doc.find("<path d=\"M") != std::string::npos);
}

TEST_CASE("raster loader rejects an empty CSV") {
    TempDir tmp;
    std::string p = tmp.file("empty.csv");
    io::write_text(p, "x,y,value\n");
    CHECK_THROWS_AS((void)raster_from_csv(p), std::runtime_error);
    CHECK_THROWS_AS((void)io::read_text(tmp.file("missing.csv")),
                    std::runtime_error);
}

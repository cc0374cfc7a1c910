#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "concavity/analysis.hpp"
#include "concavity/fdsolver.hpp"
#include "concavity/nonlinearity.hpp"
#include "concavity/radial.hpp"
#include "concavity/rearrange.hpp"
#include "concavity/stochastic.hpp"

namespace concavity::io {

// 17-significant-digit decimal form; round-trips exactly through strtod
std::string format_float(double v);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// ---- CSV ----------------------------------------------------------------
// field CSV: columns x, y, value; one row per interior node, row-major (iy, ix)
void write_field_csv(const Field& u, const std::string& path);
// same layout for a derived nodal quantity; rows restricted by `mask`
void write_scalar_field_csv(const Grid& grid, const std::vector<double>& values,
                            const std::vector<uint8_t>& mask,
                            const std::string& path);

struct FieldRow {
    double x, y, value;
};
std::vector<FieldRow> read_field_csv(const std::string& path);

// radial CSV: columns r, value
void write_radial_csv(const RadialSolution& v, const std::string& path);
std::vector<FieldRow> read_columns_csv(const std::string& path, int columns);

// profiles CSV: columns r, u_star, psi, v on the rearranged profile's mesh
void write_profiles_csv(const RearrangedProfile& u_star,
                        const RadialSolution& psi, const RadialSolution& v,
                        const std::string& path);

// sweep CSV: columns aspect, lambda_max, log_abs_lambda_max
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

// histogram CSV: columns bin_start_arclength, count
void write_histogram_csv(const std::vector<HistogramBin>& bins,
                         const std::string& path);

// ---- JSON ----------------------------------------------------------------
std::string to_json(const Estimate& e);
std::string to_json(const ConditionReport& r);
std::string to_json(const ConcavityReport& r);
std::string to_json(const RepresentationCheck& c);
std::string to_json(const SweepResult& s);
std::string to_json(const RearrangementExperiment& e, const TalentiReport& t);

Estimate estimate_from_json(const std::string& text);
ConditionReport condition_from_json(const std::string& text);
ConcavityReport concavity_from_json(const std::string& text);
RepresentationCheck representation_from_json(const std::string& text);
SweepResult sweep_from_json(const std::string& text);

}  // namespace concavity::io

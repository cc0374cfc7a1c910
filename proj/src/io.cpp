#include "concavity/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace concavity::io {

std::string format_float(double v) {
    if (!std::isfinite(v)) return "null";  // JSON has no non-finite literals
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io.write_text: cannot write " + path);
    out << content;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io.read_text: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- CSV ------------------------------------------------------------------

void write_field_csv(const Field& u, const std::string& path) {
    const Grid& g = *u.grid;
    std::string out = "x,y,value\n";
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        Vec2 p = g.position(g.nodes[i]);
        out += format_float(p.x) + "," + format_float(p.y) + "," +
               format_float(u.values[i]) + "\n";
    }
    write_text(path, out);
}

void write_scalar_field_csv(const Grid& grid, const std::vector<double>& values,
                            const std::vector<uint8_t>& mask,
                            const std::string& path) {
    std::string out = "x,y,value\n";
    for (size_t i = 0; i < grid.nodes.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        Vec2 p = grid.position(grid.nodes[i]);
        out += format_float(p.x) + "," + format_float(p.y) + "," +
               format_float(values[i]) + "\n";
    }
    write_text(path, out);
}

namespace {

std::vector<FieldRow> parse_numeric_rows(const std::string& path, int columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io.read_csv: cannot open " + path);
    std::vector<FieldRow> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::string spaced = line;
        for (char& c : spaced)
            if (c == ',') c = ' ';
        std::istringstream ss(spaced);
        FieldRow r{0.0, 0.0, 0.0};
        bool ok = static_cast<bool>(ss >> r.x);
        if (ok && columns >= 2) ok = static_cast<bool>(ss >> r.y);
        if (ok && columns >= 3) ok = static_cast<bool>(ss >> r.value);
        if (!ok) {
            if (first) {
                first = false;  // header
                continue;
            }
            throw std::runtime_error("io.read_csv: malformed row '" + line +
                                     "' in " + path);
        }
        first = false;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

std::vector<FieldRow> read_field_csv(const std::string& path) {
    return parse_numeric_rows(path, 3);
}

std::vector<FieldRow> read_columns_csv(const std::string& path, int columns) {
    return parse_numeric_rows(path, columns);
}

void write_radial_csv(const RadialSolution& v, const std::string& path) {
    std::string out = "r,value\n";
    for (size_t i = 0; i < v.r.size(); ++i)
        out += format_float(v.r[i]) + "," + format_float(v.values[i]) + "\n";
    write_text(path, out);
}

void write_profiles_csv(const RearrangedProfile& u_star,
                        const RadialSolution& psi, const RadialSolution& v,
                        const std::string& path) {
    std::string out = "r,u_star,psi,v\n";
    for (size_t i = 0; i < u_star.radii.size(); ++i) {
        double r = u_star.radii[i];
        out += format_float(r) + "," + format_float(u_star.values[i]) + "," +
               format_float(psi(r)) + "," + format_float(v(r)) + "\n";
    }
    write_text(path, out);
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::string out = "aspect,lambda_max,log_abs_lambda_max\n";
    for (const SweepRow& row : sweep.rows)
        out += format_float(row.aspect) + "," +
               format_float(row.lambda_max_at_peak) + "," +
               format_float(row.log_abs_lambda_max) + "\n";
    write_text(path, out);
}

void write_histogram_csv(const std::vector<HistogramBin>& bins,
                         const std::string& path) {
    std::string out = "bin_start_arclength,count\n";
    for (const HistogramBin& b : bins)
        out += format_float(b.start_arclength) + "," + std::to_string(b.count) +
               "\n";
    write_text(path, out);
}

// ---- JSON writer ------------------------------------------------------------
// hand-rolled emitter so floats carry the same 17-significant-digit form as
// the CSV surface

namespace {

class JsonWriter {
  public:
    JsonWriter& begin() { return open("{"); }
    std::string end() {
        close("}");
        return out_;
    }
    std::string take() { return out_; }
    JsonWriter& open(const char* bracket) {
        sep();
        out_ += bracket;
        need_comma_ = false;
        return *this;
    }
    JsonWriter& close(const char* bracket) {
        out_ += bracket;
        need_comma_ = true;
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        sep();
        out_ += '"' + k + "\":";
        need_comma_ = false;
        return *this;
    }
    JsonWriter& value(double v) { return token(format_float(v)); }
    JsonWriter& value(bool v) { return token(v ? "true" : "false"); }
    JsonWriter& value(long v) { return token(std::to_string(v)); }
    JsonWriter& value(unsigned long long v) { return token(std::to_string(v)); }
    JsonWriter& value(int v) { return token(std::to_string(v)); }
    JsonWriter& value(const std::string& s) {
        std::string escaped;
        for (char c : s) {
            if (c == '"' || c == '\\') escaped += '\\';
            escaped += c;
        }
        return token('"' + escaped + '"');
    }
    JsonWriter& value(Vec2 p) {
        open("[");
        value(p.x);
        value(p.y);
        return close("]");
    }

  private:
    JsonWriter& token(const std::string& s) {
        sep();
        out_ += s;
        need_comma_ = true;
        return *this;
    }
    void sep() {
        if (need_comma_) out_ += ',';
        need_comma_ = false;
    }
    std::string out_;
    bool need_comma_ = false;
};

void put_estimate(JsonWriter& w, const Estimate& e) {
    w.open("{");
    w.key("mean").value(e.mean);
    w.key("std_error").value(e.std_error);
    w.key("n_walks").value(e.n_walks);
    w.key("seed").value(static_cast<unsigned long long>(e.seed));
    w.close("}");
}

void put_condition(JsonWriter& w, const ConditionReport& r) {
    w.open("{");
    w.key("condition").value(std::string(
        r.condition == TheoremCondition::ConcavityPropagation
            ? "concavity-propagation"
            : "rearrangement"));
    w.key("passes").value(r.passes);
    w.key("tested_value").value(r.tested_value);
    w.key("threshold").value(r.threshold);
    w.key("margin").value(r.margin);
    w.key("violated").open("[");
    for (const std::string& s : r.violated) w.value(s);
    w.close("]");
    w.close("}");
}

}  // namespace

std::string to_json(const Estimate& e) {
    JsonWriter w;
    w.begin();
    w.key("mean").value(e.mean);
    w.key("std_error").value(e.std_error);
    w.key("n_walks").value(e.n_walks);
    w.key("seed").value(static_cast<unsigned long long>(e.seed));
    return w.end();
}

std::string to_json(const ConditionReport& r) {
    JsonWriter w;
    put_condition(w, r);
    return w.take();
}

std::string to_json(const ConcavityReport& r) {
    JsonWriter w;
    w.begin();
    w.key("boundary_nsd").value(r.boundary_nsd);
    w.key("boundary_strictly_negative").value(r.boundary_strictly_negative);
    w.key("interior_nsd").value(r.interior_nsd);
    w.key("max_lambda_interior").value(r.max_lambda_interior);
    w.key("argmax_interior").value(r.argmax_interior);
    w.key("min_lambda_interior").value(r.min_lambda_interior);
    w.key("argmin_interior").value(r.argmin_interior);
    w.key("max_lambda_boundary").value(r.max_lambda_boundary);
    w.key("argmax_boundary_arclength").value(r.argmax_boundary_arclength);
    w.key("lambda_max_at_peak").value(r.lambda_max_at_peak);
    w.key("peak").value(r.peak);
    w.key("peak_value").value(r.peak_value);
    w.key("tau_interior").value(r.tolerances.interior);
    w.key("tau_boundary").value(r.tolerances.boundary);
    w.key("interior_evaluated").value(r.interior_evaluated);
    w.key("interior_rejected").value(r.interior_rejected);
    w.key("boundary_evaluated").value(r.boundary_evaluated);
    w.key("boundary_rejected").value(r.boundary_rejected);
    w.key("boundary_checked").value(r.boundary_checked);
    w.key("verdict_kind").value(r.verdict_kind);
    w.key("transform").value(r.transform);
    w.key("implication_holds").value(r.implication_holds());
    return w.end();
}

std::string to_json(const RepresentationCheck& c) {
    JsonWriter w;
    w.begin();
    w.key("probe").value(c.probe);
    w.key("direction").value(c.direction);
    w.key("lhs").value(c.lhs);
    w.key("rhs_occupation");
    put_estimate(w, c.rhs_occupation);
    w.key("rhs_boundary");
    put_estimate(w, c.rhs_boundary);
    w.key("rhs_total");
    put_estimate(w, c.rhs_total);
    w.key("z_score").value(c.z_score);
    w.key("discard_rate").value(c.discard_rate);
    return w.end();
}

std::string to_json(const SweepResult& s) {
    JsonWriter w;
    w.begin();
    w.key("rows").open("[");
    for (const SweepRow& row : s.rows) {
        w.open("{");
        w.key("aspect").value(row.aspect);
        w.key("lambda_max").value(row.lambda_max_at_peak);
        w.key("log_abs_lambda_max").value(row.log_abs_lambda_max);
        w.key("peak_value").value(row.peak_value);
        w.close("}");
    }
    w.close("]");
    w.key("slope").value(s.slope);
    w.key("intercept").value(s.intercept);
    w.key("r_squared").value(s.r_squared);
    w.key("all_negative").value(s.all_negative);
    return w.end();
}

std::string to_json(const RearrangementExperiment& e, const TalentiReport& t) {
    JsonWriter w;
    w.begin();
    w.key("max_u").value(e.max_u);
    w.key("max_psi").value(e.max_psi);
    w.key("condition");
    put_condition(w, e.condition);
    w.key("exploratory").value(e.exploratory);
    w.key("pass").value(e.pass);
    w.key("tolerance").value(e.tolerance);
    w.key("min_profile_gap").value(e.min_profile_gap);
    w.key("talenti_min_gap").value(t.min_gap);
    w.key("talenti_max_v").value(t.max_v);
    w.key("talenti_certified").value(t.certified);
    return w.end();
}

// ---- JSON parsers -----------------------------------------------------------

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* op) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::runtime_error(std::string("io.") + op + ": malformed JSON");
    return j;
}

// translate missing-key/type accidents into runtime_error with the op name
template <typename Fn>
auto guarded(const char* op, const std::string& text, Fn&& fn) {
    json j = parse(text, op);
    try {
        return fn(j);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("io.") + op + ": " + e.what());
    }
}

Vec2 vec2_of(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

double num_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                       : j.get<double>();
}

Estimate estimate_of(const json& j) {
    Estimate e;
    e.mean = j.at("mean").get<double>();
    e.std_error = j.at("std_error").get<double>();
    e.n_walks = j.at("n_walks").get<long>();
    e.seed = j.at("seed").get<uint64_t>();
    return e;
}

ConditionReport condition_of(const json& j) {
    ConditionReport r;
    r.condition = j.at("condition").get<std::string>() == "rearrangement"
                      ? TheoremCondition::Rearrangement
                      : TheoremCondition::ConcavityPropagation;
    r.passes = j.at("passes").get<bool>();
    r.tested_value = j.at("tested_value").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.margin = j.at("margin").get<double>();
    for (const auto& s : j.at("violated")) r.violated.push_back(s.get<std::string>());
    return r;
}

}  // namespace

Estimate estimate_from_json(const std::string& text) {
    return guarded("estimate_from_json", text,
                   [](const json& j) { return estimate_of(j); });
}

ConditionReport condition_from_json(const std::string& text) {
    return guarded("condition_from_json", text,
                   [](const json& j) { return condition_of(j); });
}

ConcavityReport concavity_from_json(const std::string& text) {
    return guarded("concavity_from_json", text, [](const json& j) {
        ConcavityReport r;
        r.boundary_nsd = j.at("boundary_nsd").get<bool>();
        r.boundary_strictly_negative = j.at("boundary_strictly_negative").get<bool>();
        r.interior_nsd = j.at("interior_nsd").get<bool>();
        r.max_lambda_interior = j.at("max_lambda_interior").get<double>();
        r.argmax_interior = vec2_of(j.at("argmax_interior"));
        r.min_lambda_interior = j.at("min_lambda_interior").get<double>();
        r.argmin_interior = vec2_of(j.at("argmin_interior"));
        r.max_lambda_boundary = j.at("max_lambda_boundary").get<double>();
        r.argmax_boundary_arclength = j.at("argmax_boundary_arclength").get<double>();
        r.lambda_max_at_peak = j.at("lambda_max_at_peak").get<double>();
        r.peak = vec2_of(j.at("peak"));
        r.peak_value = j.at("peak_value").get<double>();
        r.tolerances.interior = j.at("tau_interior").get<double>();
        r.tolerances.boundary = j.at("tau_boundary").get<double>();
        r.interior_evaluated = j.at("interior_evaluated").get<int>();
        r.interior_rejected = j.at("interior_rejected").get<int>();
        r.boundary_evaluated = j.at("boundary_evaluated").get<int>();
        r.boundary_rejected = j.at("boundary_rejected").get<int>();
        r.boundary_checked = j.at("boundary_checked").get<bool>();
        r.verdict_kind = j.at("verdict_kind").get<std::string>();
        r.transform = j.at("transform").get<std::string>();
        return r;
    });
}

RepresentationCheck representation_from_json(const std::string& text) {
    return guarded("representation_from_json", text, [](const json& j) {
        RepresentationCheck c;
        c.probe = vec2_of(j.at("probe"));
        c.direction = vec2_of(j.at("direction"));
        c.lhs = j.at("lhs").get<double>();
        c.rhs_occupation = estimate_of(j.at("rhs_occupation"));
        c.rhs_boundary = estimate_of(j.at("rhs_boundary"));
        c.rhs_total = estimate_of(j.at("rhs_total"));
        c.z_score = j.at("z_score").get<double>();
        c.discard_rate = j.at("discard_rate").get<double>();
        return c;
    });
}

SweepResult sweep_from_json(const std::string& text) {
    return guarded("sweep_from_json", text, [](const json& j) {
        SweepResult s;
        for (const auto& row : j.at("rows")) {
            SweepRow r;
            r.aspect = num_or_nan(row.at("aspect"));
            r.lambda_max_at_peak = num_or_nan(row.at("lambda_max"));
            r.log_abs_lambda_max = num_or_nan(row.at("log_abs_lambda_max"));
            r.peak_value = num_or_nan(row.at("peak_value"));
            s.rows.push_back(r);
        }
        s.slope = num_or_nan(j.at("slope"));
        s.intercept = num_or_nan(j.at("intercept"));
        s.r_squared = num_or_nan(j.at("r_squared"));
        s.all_negative = j.at("all_negative").get<bool>();
        return s;
    });
}

}  // namespace concavity::io

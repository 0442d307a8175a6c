#include "cocycle/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace cocycle {

void JsonWriter::comma() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

void JsonWriter::begin_object() {
    comma();
    out_ += '{';
    first_.push_back(true);
}

void JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
}

void JsonWriter::begin_array() {
    comma();
    out_ += '[';
    first_.push_back(true);
}

void JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
}

void JsonWriter::key(const std::string& name) {
    comma();
    out_ += '"';
    out_ += name;
    out_ += "\":";
    after_key_ = true;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::value(double v) {
    comma();
    if (std::isfinite(v)) {
        out_ += format_double(v);
    } else {
        out_ += '"';
        out_ += format_double(v);
        out_ += '"';
    }
}

void JsonWriter::value(long long v) {
    comma();
    out_ += std::to_string(v);
}

void JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
}

void JsonWriter::value(const std::string& v) {
    comma();
    out_ += '"';
    for (char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default: out_ += c;
        }
    }
    out_ += '"';
}

namespace {

using nlohmann::json;

double read_double(const json& v) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "-inf") return kNegInf;
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw ConfigError("unexpected string where a number was expected: " + s);
    }
    return v.get<double>();
}

void write_header(JsonWriter& w, const ReportHeader& header) {
    w.key("command");
    w.value(header.command);
    w.key("overrides");
    w.begin_array();
    for (const auto& ov : header.overrides) w.value(ov);
    w.end_array();
}

void write_double_array(JsonWriter& w, const std::vector<double>& v) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
}

std::vector<double> read_double_array(const json& v) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(read_double(x));
    return out;
}

void write_matrix(JsonWriter& w, const Matrix& m) {
    w.begin_array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        w.begin_array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) w.value(m(i, j));
        w.end_array();
    }
    w.end_array();
}

Matrix read_matrix(const json& v) {
    const int rows = static_cast<int>(v.size());
    const int cols = rows > 0 ? static_cast<int>(v[0].size()) : 0;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = read_double(v[i][j]);
    return m;
}

void write_blocks(JsonWriter& w, const LyapunovSpectrum& s) {
    w.begin_array();
    for (const auto& b : s.blocks()) {
        w.begin_object();
        w.key("exponent");
        w.value(b.exponent);
        w.key("multiplicity");
        w.value(b.multiplicity);
        w.end_object();
    }
    w.end_array();
}

LyapunovSpectrum read_spectrum_from(const json& exponents, double gap = 1e-12) {
    return LyapunovSpectrum::group(read_double_array(exponents), gap);
}

} // namespace

std::string spectrum_to_json(const ErgodicSpectrum& s, const ReportHeader& header) {
    JsonWriter w;
    w.begin_object();
    w.key("kind");
    w.value("spectrum");
    write_header(w, header);
    w.key("horizon");
    w.value(s.horizon);
    w.key("samples");
    w.value(s.samples);
    w.key("exponents");
    write_double_array(w, s.exponents);
    w.key("std_errors");
    write_double_array(w, s.std_errors);
    w.key("blocks");
    write_blocks(w, s.spectrum);
    w.end_object();
    return w.str();
}

ErgodicSpectrum parse_spectrum_json(const std::string& text) {
    const json j = json::parse(text);
    ErgodicSpectrum s;
    s.horizon = j.at("horizon").get<int>();
    s.samples = j.at("samples").get<int>();
    s.exponents = read_double_array(j.at("exponents"));
    s.std_errors = read_double_array(j.at("std_errors"));
    std::vector<double> expanded;
    for (const auto& b : j.at("blocks")) {
        const double e = read_double(b.at("exponent"));
        for (int i = 0; i < b.at("multiplicity").get<int>(); ++i) expanded.push_back(e);
    }
    s.spectrum = LyapunovSpectrum::group(expanded, 1e-12);
    return s;
}

std::string splitting_to_json(const SplittingEstimate& s, const ReportHeader& header) {
    JsonWriter w;
    w.begin_object();
    w.key("kind");
    w.value("splitting");
    write_header(w, header);
    w.key("horizon");
    w.value(s.horizon);
    w.key("exponents");
    write_double_array(w, s.spectrum.exponents());
    w.key("blocks");
    write_blocks(w, s.spectrum);
    auto spaces = [&](const char* name, const std::vector<Subspace>& list) {
        w.key(name);
        w.begin_array();
        for (const auto& sub : list) write_matrix(w, sub.basis());
        w.end_array();
    };
    spaces("spaces", s.spaces);
    spaces("fast", s.fast);
    spaces("slow", s.slow);
    w.key("equivariance_defect");
    w.value(s.equivariance_defect);
    w.key("duality_defect");
    w.value(s.duality_defect);
    w.end_object();
    return w.str();
}

SplittingEstimate parse_splitting_json(const std::string& text) {
    const json j = json::parse(text);
    SplittingEstimate s;
    s.horizon = j.at("horizon").get<int>();
    s.spectrum = read_spectrum_from(j.at("exponents"));
    // regroup with the original block structure
    std::vector<double> expanded;
    for (const auto& b : j.at("blocks")) {
        const double e = read_double(b.at("exponent"));
        for (int i = 0; i < b.at("multiplicity").get<int>(); ++i) expanded.push_back(e);
    }
    s.spectrum = LyapunovSpectrum::group(expanded, 1e-12);
    auto read_spaces = [&](const char* name) {
        std::vector<Subspace> out;
        for (const auto& m : j.at(name)) out.push_back(Subspace::from_orthonormal(read_matrix(m)));
        return out;
    };
    s.spaces = read_spaces("spaces");
    s.fast = read_spaces("fast");
    s.slow = read_spaces("slow");
    s.equivariance_defect = read_double(j.at("equivariance_defect"));
    s.duality_defect = read_double(j.at("duality_defect"));
    return s;
}

std::string report_to_json(const ApproximationReport& r, const ReportHeader& header) {
    JsonWriter w;
    w.begin_object();
    w.key("kind");
    w.value("approximation_report");
    write_header(w, header);
    w.key("mu_exponents");
    write_double_array(w, r.mu_exponents);
    w.key("mu_std_errors");
    write_double_array(w, r.mu_std_errors);
    w.key("mu_multiplicities");
    w.begin_array();
    for (int m : r.mu_multiplicities) w.value(m);
    w.end_array();
    w.key("sample_count");
    w.value(r.sample_count);
    w.key("structure_matched_samples");
    w.value(r.structure_matched_samples);
    w.key("epsilon_ladder");
    write_double_array(w, r.epsilon_ladder);
    w.key("periods");
    w.begin_array();
    for (const auto& p : r.periods) {
        w.begin_object();
        w.key("period");
        w.value(p.period);
        w.key("word");
        w.value(p.word);
        w.key("score");
        w.value(p.score);
        w.key("weak_star");
        w.value(p.weak_star);
        w.key("exponent_errors");
        write_double_array(w, p.exponent_errors);
        w.key("max_exponent_error");
        w.value(p.max_exponent_error);
        w.key("structure_match");
        w.value(p.structure_match);
        w.key("skipped_orbits");
        w.value(p.skipped_orbits);
        w.key("best_angles");
        write_double_array(w, p.best_angles);
        w.key("best_rotation");
        w.begin_array();
        for (int t : p.best_rotation) w.value(t);
        w.end_array();
        w.key("flag_angles");
        write_double_array(w, p.flag_angles);
        w.key("angle_quantiles");
        write_double_array(w, p.angle_quantiles);
        w.key("good_fraction");
        write_double_array(w, p.good_fraction);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

ApproximationReport parse_report_json(const std::string& text) {
    const json j = json::parse(text);
    ApproximationReport r;
    r.mu_exponents = read_double_array(j.at("mu_exponents"));
    r.mu_std_errors = read_double_array(j.at("mu_std_errors"));
    for (const auto& m : j.at("mu_multiplicities")) r.mu_multiplicities.push_back(m.get<int>());
    r.sample_count = j.at("sample_count").get<int>();
    r.structure_matched_samples = j.at("structure_matched_samples").get<int>();
    r.epsilon_ladder = read_double_array(j.at("epsilon_ladder"));
    for (const auto& pj : j.at("periods")) {
        PeriodEntry p;
        p.period = pj.at("period").get<int>();
        p.word = pj.at("word").get<std::string>();
        p.score = read_double(pj.at("score"));
        p.weak_star = read_double(pj.at("weak_star"));
        p.exponent_errors = read_double_array(pj.at("exponent_errors"));
        p.max_exponent_error = read_double(pj.at("max_exponent_error"));
        p.structure_match = pj.at("structure_match").get<bool>();
        p.skipped_orbits = pj.at("skipped_orbits").get<int>();
        p.best_angles = read_double_array(pj.at("best_angles"));
        for (const auto& t : pj.at("best_rotation")) p.best_rotation.push_back(t.get<int>());
        p.flag_angles = read_double_array(pj.at("flag_angles"));
        p.angle_quantiles = read_double_array(pj.at("angle_quantiles"));
        p.good_fraction = read_double_array(pj.at("good_fraction"));
        r.periods.push_back(std::move(p));
    }
    return r;
}

std::string report_to_csv(const ApproximationReport& r) {
    std::string out = "period,word,score,weak_star,max_exponent_error";
    const std::size_t d = r.mu_exponents.size();
    for (std::size_t j = 1; j <= d; ++j) out += ",exp_err_" + std::to_string(j);
    out += ",structure_match,skipped_orbits,angle_min,angle_q25,angle_median,angle_q75,"
           "angle_max,flag_angle_median";
    for (std::size_t k = 1; k <= r.epsilon_ladder.size(); ++k)
        out += ",good_frac_" + std::to_string(k);
    out += "\n";

    for (const auto& p : r.periods) {
        out += std::to_string(p.period) + "," + p.word + "," + format_double(p.score) + "," +
               format_double(p.weak_star) + "," + format_double(p.max_exponent_error);
        for (double e : p.exponent_errors) out += "," + format_double(e);
        out += std::string(",") + (p.structure_match ? "1" : "0") + "," +
               std::to_string(p.skipped_orbits);
        if (p.angle_quantiles.size() == 5) {
            for (double q : p.angle_quantiles) out += "," + format_double(q);
        } else {
            for (int i = 0; i < 5; ++i) out += ",nan";
        }
        std::vector<double> flags = p.flag_angles;
        if (!flags.empty()) {
            std::sort(flags.begin(), flags.end());
            const double med = flags.size() % 2 == 1
                                   ? flags[flags.size() / 2]
                                   : 0.5 * (flags[flags.size() / 2 - 1] +
                                            flags[flags.size() / 2]);
            out += "," + format_double(med);
        } else {
            out += ",nan";
        }
        if (!p.good_fraction.empty()) {
            for (double g : p.good_fraction) out += "," + format_double(g);
        } else {
            for (std::size_t k = 0; k < r.epsilon_ladder.size(); ++k) out += ",nan";
        }
        out += "\n";
    }
    return out;
}

std::string periodic_table_to_json(const std::vector<PeriodicData>& table,
                                   const ReportHeader& header) {
    JsonWriter w;
    w.begin_object();
    w.key("kind");
    w.value("periodic_table");
    write_header(w, header);
    w.key("orbits");
    w.begin_array();
    for (const auto& data : table) {
        w.begin_object();
        w.key("word");
        w.value(word_to_string(data.orbit.word()));
        w.key("period");
        w.value(data.period());
        w.key("exponents");
        write_double_array(w, data.spectrum.exponents());
        w.key("blocks");
        write_blocks(w, data.spectrum);
        w.key("spaces");
        w.begin_array();
        for (int t = 0; t < data.period(); ++t) {
            w.begin_array();
            for (int j = 0; j < data.spectrum.block_count(); ++j)
                write_matrix(w, data.space(t, j).basis());
            w.end_array();
        }
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string closing_to_json(const ClosingReport& r, const ReportHeader& header) {
    JsonWriter w;
    w.begin_object();
    w.key("kind");
    w.value("closing_report");
    write_header(w, header);
    w.key("spearman_distance_vs_error");
    w.value(r.spearman_distance_vs_error);
    w.key("events");
    w.begin_array();
    for (const auto& ev : r.events) {
        w.begin_object();
        w.key("sample");
        w.value(ev.sample);
        w.key("return_time");
        w.value(ev.return_time);
        w.key("return_distance");
        w.value(ev.return_distance);
        w.key("top_exponent_error");
        w.value(ev.top_exponent_error);
        w.key("max_exponent_error");
        w.value(ev.max_exponent_error);
        w.key("best_angle");
        w.value(ev.best_angle);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

} // namespace cocycle

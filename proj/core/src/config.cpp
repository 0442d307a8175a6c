#include "cocycle/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cocycle {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    // section -> key -> raw value text
    std::map<std::string, std::map<std::string, std::string>> sections;

    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections[section][key] = value;
    }
};

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside a section");
        raw.set(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return raw;
}

json parse_value(const std::string& text) {
    json v = json::parse(text, nullptr, false);
    if (v.is_discarded()) return json(text); // bare string
    return v;
}

class SectionReader {
public:
    SectionReader(const RawConfig& raw, std::string section)
        : section_(std::move(section)) {
        auto it = raw.sections.find(section_);
        if (it != raw.sections.end()) entries_ = it->second;
    }

    bool present() const { return !entries_.empty(); }
    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    json take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError("missing key " + section_ + "." + key);
        json v = parse_value(it->second);
        entries_.erase(it);
        return v;
    }

    template <typename T>
    T take_or(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return take(key).get<T>();
    }

    void expect_empty() const {
        if (!entries_.empty())
            throw ConfigError("unknown key " + section_ + "." + entries_.begin()->first);
    }

private:
    std::string section_;
    std::map<std::string, std::string> entries_;
};

Matrix json_to_matrix(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty() || !v[0].is_array())
        throw ConfigError(what + " must be a nested array");
    const int rows = static_cast<int>(v.size());
    const int cols = static_cast<int>(v[0].size());
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(v[i].size()) != cols)
            throw ConfigError(what + " has ragged rows");
        for (int j = 0; j < cols; ++j) {
            if (!v[i][j].is_number())
                throw ConfigError(what + " has a non-numeric entry");
            m(i, j) = v[i][j].get<double>();
        }
    }
    return m;
}

std::vector<Matrix> json_to_matrices(const json& v, const std::string& what) {
    if (!v.is_array() || v.empty())
        throw ConfigError(what + " must be an array of matrices");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(json_to_matrix(v[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

SubshiftSpec read_subshift(SectionReader& sec) {
    if (!sec.present()) throw ConfigError("missing [subshift] section");
    std::vector<std::vector<bool>> transitions;
    if (sec.has("transitions")) {
        const json t = sec.take("transitions");
        if (!t.is_array()) throw ConfigError("subshift.transitions must be an array");
        for (const auto& row : t) {
            std::vector<bool> r;
            for (const auto& cell : row) r.push_back(cell.get<int>() != 0);
            transitions.push_back(std::move(r));
        }
        if (sec.has("alphabet")) {
            const int alphabet = sec.take("alphabet").get<int>();
            if (alphabet != static_cast<int>(transitions.size()))
                throw ConfigError("subshift.alphabet disagrees with subshift.transitions");
        }
    } else {
        const int alphabet = sec.take("alphabet").get<int>();
        transitions.assign(alphabet, std::vector<bool>(alphabet, true));
    }
    sec.expect_empty();
    return SubshiftSpec(std::move(transitions));
}

CocycleGenerator read_generator(SectionReader& sec, const SubshiftSpec& spec) {
    if (!sec.present()) throw ConfigError("missing [generator] section");
    const std::string kind = sec.take_or<std::string>("kind", "locally_constant");
    if (kind == "locally_constant") {
        const int depth = sec.take_or<int>("depth", 1);
        auto mats = json_to_matrices(sec.take("matrices"), "generator.matrices");
        sec.expect_empty();
        try {
            return CocycleGenerator::locally_constant(spec, depth, std::move(mats));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("generator.matrices: ") + e.what());
        }
    }
    if (kind == "coordinate_series") {
        auto base = json_to_matrices(sec.take("base"), "generator.base");
        auto pert = json_to_matrices(sec.take("perturbation"), "generator.perturbation");
        const double alpha = sec.take("alpha").get<double>();
        const int window = sec.take("window").get<int>();
        sec.expect_empty();
        try {
            return CocycleGenerator::coordinate_series(spec, std::move(base),
                                                       std::move(pert), alpha, window);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("generator: ") + e.what());
        }
    }
    throw ConfigError("generator.kind must be locally_constant or coordinate_series");
}

MarkovMeasure read_measure(SectionReader& sec, const SubshiftSpec& spec) {
    if (!sec.present()) throw ConfigError("missing [measure] section");
    const std::string type = sec.take_or<std::string>("type", "bernoulli");
    if (type == "bernoulli") {
        const json pj = sec.take("p");
        std::vector<double> p;
        for (const auto& v : pj) p.push_back(v.get<double>());
        sec.expect_empty();
        return MarkovMeasure::bernoulli(spec, std::move(p));
    }
    if (type == "markov") {
        Matrix stochastic = json_to_matrix(sec.take("stochastic"), "measure.stochastic");
        sec.expect_empty();
        return MarkovMeasure(spec, std::move(stochastic));
    }
    throw ConfigError("measure.type must be bernoulli or markov");
}

void read_experiment(SectionReader& sec, ExperimentConfig& cfg) {
    cfg.period_min = sec.take_or<int>("period_min", cfg.period_min);
    cfg.period_max = sec.take_or<int>("period_max", cfg.period_max);
    cfg.horizon = sec.take_or<int>("horizon", cfg.horizon);
    cfg.sample_count = sec.take_or<int>("samples", cfg.sample_count);
    cfg.spectrum_samples = sec.take_or<int>("spectrum_samples", cfg.sample_count);
    cfg.weak_star_depth = sec.take_or<int>("weak_star_depth", cfg.weak_star_depth);
    cfg.seed = static_cast<std::uint64_t>(sec.take_or<long long>("seed", 0));
    cfg.enumeration_cap = static_cast<std::uint64_t>(
        sec.take_or<long long>("enumeration_cap",
                               static_cast<long long>(cfg.enumeration_cap)));
    if (sec.has("epsilon_ladder")) {
        const json lad = sec.take("epsilon_ladder");
        cfg.epsilon_ladder.clear();
        for (const auto& v : lad) cfg.epsilon_ladder.push_back(v.get<double>());
    }
    cfg.estimator.grouping_gap = sec.take_or<double>("grouping_gap", cfg.estimator.grouping_gap);
    cfg.estimator.intersect_tol = sec.take_or<double>("intersect_tol", cfg.estimator.intersect_tol);
    cfg.estimator.qr_block = sec.take_or<int>("qr_block", cfg.estimator.qr_block);
    cfg.estimator.floor = sec.take_or<double>("floor", cfg.estimator.floor);
    cfg.estimator.min_gap_ratio = sec.take_or<double>("min_gap_ratio", cfg.estimator.min_gap_ratio);
    cfg.closing.c1 = sec.take_or<double>("c1", cfg.closing.c1);
    cfg.closing.theta = sec.take_or<double>("theta", cfg.closing.theta);
    cfg.closing.eps0 = sec.take_or<double>("eps0", cfg.closing.eps0);
    cfg.estimator.threads = static_cast<unsigned>(sec.take_or<int>("threads", 0));
    sec.expect_empty();

    if (cfg.period_min < 1 || cfg.period_max < cfg.period_min)
        throw ConfigError("experiment period range is invalid");
    if (cfg.horizon < 1) throw ConfigError("experiment.horizon must be >= 1");
    if (cfg.sample_count < 1) throw ConfigError("experiment.samples must be >= 1");
    if (cfg.weak_star_depth < 1) throw ConfigError("experiment.weak_star_depth must be >= 1");
    for (double e : cfg.epsilon_ladder)
        if (e <= 0.0) throw ConfigError("experiment.epsilon_ladder entries must be positive");
    if (cfg.estimator.grouping_gap <= 0.0 || cfg.estimator.intersect_tol <= 0.0)
        throw ConfigError("experiment tolerances must be positive");
}

} // namespace

ConfigFile ConfigFile::parse_text(const std::string& text,
                                  const std::vector<std::string>& overrides) {
    RawConfig raw = parse_raw(text);
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError("override must look like section.key=value: " + ov);
        raw.set(trim(ov.substr(0, dot)), trim(ov.substr(dot + 1, eq - dot - 1)),
                trim(ov.substr(eq + 1)));
    }

    SectionReader sub(raw, "subshift");
    SubshiftSpec spec = read_subshift(sub);
    SectionReader gen_sec(raw, "generator");
    CocycleGenerator gen = read_generator(gen_sec, spec);
    SectionReader meas_sec(raw, "measure");
    MarkovMeasure measure = read_measure(meas_sec, spec);

    ExperimentConfig cfg(std::move(spec), std::move(gen), std::move(measure));
    SectionReader exp_sec(raw, "experiment");
    if (exp_sec.present()) read_experiment(exp_sec, cfg);

    ConfigFile file(std::move(cfg));
    SectionReader out_sec(raw, "output");
    if (out_sec.present()) {
        file.json_path = out_sec.take_or<std::string>("json", "");
        file.csv_path = out_sec.take_or<std::string>("csv", "");
        file.orbits_path = out_sec.take_or<std::string>("orbits", "");
        out_sec.expect_empty();
    }
    for (const auto& [name, entries] : raw.sections) {
        if (name != "subshift" && name != "generator" && name != "measure" &&
            name != "experiment" && name != "output")
            throw ConfigError("unknown section [" + name + "]");
    }
    file.applied_overrides = overrides;
    return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path,
                                  const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), overrides);
}

} // namespace cocycle

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "cocycle/config.hpp"
#include "cocycle/exterior.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/report_io.hpp"

namespace {

using namespace cocycle;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

unsigned resolve_threads(bool flag_given, unsigned flag_value, unsigned config_value) {
    if (flag_given) return flag_value;
    if (config_value != 0) return config_value;
    return default_thread_count();
}

ShiftPoint parse_point(const ExperimentConfig& cfg, const std::string& text, long horizon) {
    if (text.rfind("seed:", 0) == 0) {
        const std::uint64_t seed = std::stoull(text.substr(5));
        return sample_point(cfg.subshift, cfg.measure, horizon, seed);
    }
    const auto first = text.find(';');
    const auto second = text.find(';', first == std::string::npos ? 0 : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw ConfigError("point must be 'left;core;right' digit words or 'seed:<n>'");
    return ShiftPoint(cfg.subshift, word_from_string(text.substr(0, first)),
                      word_from_string(text.substr(first + 1, second - first - 1)),
                      word_from_string(text.substr(second + 1)));
}

int cmd_spectrum(const ConfigFile& file, const std::string& json_path) {
    const ExperimentConfig& cfg = file.experiment;
    const ErgodicSpectrum s =
        ergodic_spectrum(cfg.generator, cfg.subshift, cfg.measure, cfg.horizon,
                         cfg.spectrum_samples, cfg.seed, cfg.estimator);
    std::cout << "lyapunov spectrum (horizon " << cfg.horizon << ", " << s.samples
              << " samples)\n";
    int k = 0;
    for (const auto& b : s.spectrum.blocks()) {
        std::cout << "  block " << ++k << ": exponent " << format_double(b.exponent)
                  << "  multiplicity " << b.multiplicity;
        double se = 0.0;
        const int lo = s.spectrum.boundary(k) - b.multiplicity;
        for (int i = lo; i < s.spectrum.boundary(k); ++i)
            se = std::max(se, s.std_errors[i]);
        std::cout << "  stderr " << format_double(se) << "\n";
    }
    const std::string out =
        spectrum_to_json(s, {"spectrum", file.applied_overrides});
    if (!json_path.empty())
        write_file(json_path, out);
    else
        std::cout << out << "\n";
    return 0;
}

int cmd_split(const ConfigFile& file, const std::string& point_spec,
              const std::string& json_path) {
    const ExperimentConfig& cfg = file.experiment;
    const auto [lo, hi] = cfg.generator.read_window();
    const long margin = std::max(std::abs(lo), std::abs(hi)) + 2;
    const ShiftPoint x = parse_point(cfg, point_spec, 2L * cfg.horizon + margin);
    const SplittingEstimate est =
        oseledets_splitting(cfg.generator, x, cfg.horizon, cfg.estimator);
    std::cout << "splitting at horizon " << cfg.horizon << ": " << est.spectrum.block_count()
              << " blocks, equivariance defect " << format_double(est.equivariance_defect)
              << ", duality defect " << format_double(est.duality_defect) << "\n";
    const std::string out = splitting_to_json(est, {"split", file.applied_overrides});
    if (!json_path.empty())
        write_file(json_path, out);
    else
        std::cout << out << "\n";
    return 0;
}

int cmd_periodic(const ConfigFile& file, int period, bool words_only,
                 const std::string& out_path, const std::string& json_path) {
    const ExperimentConfig& cfg = file.experiment;
    EnumerateOptions opts;
    opts.cap = cfg.enumeration_cap;
    const auto orbits = enumerate_periodic(cfg.subshift, period, opts);
    std::string text;
    std::vector<PeriodicData> table;
    for (const auto& p : orbits) {
        text += word_to_string(p.word());
        if (!words_only) {
            PeriodicData pd =
                periodic_data(cfg.subshift, cfg.generator, p, cfg.estimator.grouping_gap);
            for (int j = 0; j < pd.spectrum.dimension(); ++j)
                text += " " + format_double(pd.spectrum.exponent(j));
            if (!json_path.empty()) table.push_back(std::move(pd));
        }
        text += "\n";
    }
    if (!out_path.empty())
        write_file(out_path, text);
    else
        std::cout << text;
    if (!json_path.empty())
        write_file(json_path,
                   periodic_table_to_json(table, {"periodic", file.applied_overrides}));
    std::cout << orbits.size() << " periodic points of period " << period << "\n";
    return 0;
}

int cmd_approx(const ConfigFile& file, const std::string& json_path,
               const std::string& csv_path) {
    const ApproximationReport report = splitting_report(file.experiment);
    const std::string json =
        report_to_json(report, {"approx", file.applied_overrides});
    const std::string csv = report_to_csv(report);
    if (!json_path.empty()) write_file(json_path, json);
    if (!csv_path.empty()) write_file(csv_path, csv);
    if (json_path.empty() && csv_path.empty()) std::cout << csv;
    std::cout << "approx: " << report.periods.size() << " periods, "
              << report.structure_matched_samples << "/" << report.sample_count
              << " samples matched the measure block structure\n";
    return 0;
}

// built-in invariant suites for `verify`

struct VerifySuite {
    std::string name;
    double tol;
    void (*run)(double tol);
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(what);
}

void suite_periodic_counting(double) {
    const auto full = SubshiftSpec::full_shift(2);
    const SubshiftSpec golden({{true, true}, {true, false}});
    for (int n = 1; n <= 10; ++n) {
        require(enumerate_periodic(full, n).size() == full.periodic_point_count(n),
                "full-shift periodic count mismatch at n=" + std::to_string(n));
        require(enumerate_periodic(golden, n).size() == golden.periodic_point_count(n),
                "golden-mean periodic count mismatch at n=" + std::to_string(n));
    }
}

void suite_shift_metric(double) {
    const auto spec = SubshiftSpec::full_shift(2);
    const auto mu = MarkovMeasure::bernoulli(spec, {0.5, 0.5});
    for (int i = 0; i < 30; ++i) {
        const auto x = sample_point(spec, mu, 24, mix_seed(3, 3 * i));
        const auto y = sample_point(spec, mu, 24, mix_seed(3, 3 * i + 1));
        const auto z = sample_point(spec, mu, 24, mix_seed(3, 3 * i + 2));
        const double xy = shift_distance(x, y), yx = shift_distance(y, x);
        require(xy == yx, "shift distance is not symmetric");
        require(shift_distance(x, x) == 0.0, "shift distance of a point to itself");
        const double xz = shift_distance(x, z), yz = shift_distance(y, z);
        require(xz <= std::max(xy, yz) + 1e-15, "ultrametric inequality violated");
    }
}

void suite_closing_inequality(double) {
    const auto spec = SubshiftSpec::full_shift(2);
    const auto mu = MarkovMeasure::bernoulli(spec, {0.5, 0.5});
    int events = 0;
    for (int s = 0; s < 400 && events < 50; ++s) {
        const auto x = sample_point(spec, mu, 40, mix_seed(11, s));
        for (int n = 4; n <= 12; ++n) {
            if (shift_distance(x.shifted(n), x) < 0.5) {
                anosov_close(spec, x, n, {}); // throws when the inequality fails
                ++events;
            }
        }
    }
    require(events >= 50, "too few closing events found");
}

void suite_cocycle_law(double tol) {
    const auto spec = SubshiftSpec::full_shift(2);
    const auto mu = MarkovMeasure::bernoulli(spec, {0.5, 0.5});
    std::vector<Matrix> table(2);
    table[0] = (Matrix(2, 2) << 1.1, 0.3, -0.2, 0.9).finished();
    table[1] = (Matrix(2, 2) << 0.8, -0.4, 0.5, 1.2).finished();
    const auto gen = CocycleGenerator::per_symbol(spec, table);
    const auto x = sample_point(spec, mu, 80, 5);
    for (int n : {3, 7, 16}) {
        for (int m : {2, 9, 21}) {
            const Matrix lhs = cocycle_product(gen, x, n + m);
            const Matrix rhs = cocycle_product(gen, x.shifted(n), m) * cocycle_product(gen, x, n);
            require((lhs - rhs).norm() <= tol * std::max(1.0, lhs.norm()),
                    "cocycle law violated at n=" + std::to_string(n) +
                        ", m=" + std::to_string(m));
        }
    }
}

void suite_exterior_functoriality(double tol) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 3);
        Matrix l(d, d), m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                l(i, j) = 2.0 * uniform01(rng()) - 1.0;
                m(i, j) = 2.0 * uniform01(rng()) - 1.0;
            }
        for (int j = 1; j <= d; ++j) {
            const Matrix lhs = exterior_power(l * m, j);
            const Matrix rhs = exterior_power(l, j) * exterior_power(m, j);
            require((lhs - rhs).norm() <= tol * std::max(1.0, rhs.norm()),
                    "exterior power functoriality violated");
        }
    }
}

void suite_plucker_equivalence(double) {
    std::mt19937_64 rng(7);
    auto random_subspace = [&](int d, int k) {
        Matrix m(d, k);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) m(i, j) = 2.0 * uniform01(rng()) - 1.0;
        return Subspace(m);
    };
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 3 + static_cast<int>(rng() % 2);
        const int k = 1 + static_cast<int>(rng() % 2);
        const Subspace e = random_subspace(d, k), f = random_subspace(d, k);
        const double g = projective_sine_distance(plucker(e), plucker(f));
        const double s = subspace_distance(e, f);
        require(g <= 3.0 * s + 1e-12 && s <= 3.0 * g + 1e-12,
                "grassmannian and sup distances are not 3-equivalent");
    }
}

void suite_adjoint_identity(double) {
    const auto spec = SubshiftSpec::full_shift(2);
    std::vector<Matrix> table(2);
    table[0] = (Matrix(2, 2) << 1, 1, 0, 1).finished();
    table[1] = (Matrix(2, 2) << 2, 0, 1, 1).finished();
    const auto gen = CocycleGenerator::per_symbol(spec, table);
    const PeriodicOrbit orbit(spec, word_from_string("0110101"));
    const auto x = orbit.point_at(spec, 2);
    for (int n : {1, 3, 5, 8}) {
        const Matrix lhs = adjoint_product(gen, x, n);
        const Matrix rhs = cocycle_product(gen, x.shifted(-n), n).transpose();
        require(lhs == rhs, "adjoint product identity is not exact on integer matrices");
    }
}

void suite_spectrum_constants(double tol) {
    const auto spec1 = SubshiftSpec::full_shift(1);
    const auto x = PeriodicOrbit(spec1, {0}).point_at(spec1, 0);
    const auto diag = CocycleGenerator::constant(
        (Matrix(2, 2) << 2.0, 0.0, 0.0, 0.5).finished());
    const auto s1 = finite_time_spectrum(diag, x, 256);
    require(std::abs(s1.exponent(0) - std::log(2.0)) <= tol &&
                std::abs(s1.exponent(1) + std::log(2.0)) <= tol,
            "diagonal spectrum is off");
    const double c = std::cos(1.0), s = std::sin(1.0);
    const auto rot = CocycleGenerator::constant((Matrix(2, 2) << c, -s, s, c).finished());
    const auto s2 = finite_time_spectrum(rot, x, 256);
    require(s2.block_count() == 1 && std::abs(s2.exponent(0)) <= tol,
            "rotation spectrum is off");
    const auto nil = CocycleGenerator::constant((Matrix(2, 2) << 0, 1, 0, 0).finished());
    const auto s3 = finite_time_spectrum(nil, x, 8);
    require(s3.exponent(0) == kNegInf && s3.exponent(1) == kNegInf,
            "nilpotent spectrum is not collapsed");
}

void suite_duality(double tol) {
    const auto spec1 = SubshiftSpec::full_shift(1);
    const auto x = PeriodicOrbit(spec1, {0}).point_at(spec1, 0);
    const auto gen = CocycleGenerator::constant(
        (Matrix(2, 2) << 2.0, 1.0, 0.0, 0.5).finished());
    const auto est = oseledets_splitting(gen, x, 40);
    Vector slow_dir(2);
    slow_dir << 2.0, -3.0;
    require(subspace_angle(est.spaces[1], Subspace::span(slow_dir)) <= tol,
            "slow space via adjoint duality is off");
}

const VerifySuite kSuites[] = {
    {"periodic_counting", 0.0, suite_periodic_counting},
    {"shift_metric", 0.0, suite_shift_metric},
    {"closing_inequality", 0.0, suite_closing_inequality},
    {"cocycle_law", 1e-10, suite_cocycle_law},
    {"exterior_functoriality", 1e-10, suite_exterior_functoriality},
    {"plucker_equivalence", 0.0, suite_plucker_equivalence},
    {"adjoint_identity", 0.0, suite_adjoint_identity},
    {"spectrum_constants", 1e-9, suite_spectrum_constants},
    {"duality", 1e-6, suite_duality},
};

int cmd_verify(const std::string& config_path, bool list_only) {
    if (list_only) {
        for (const auto& s : kSuites) std::cout << s.name << "\n";
        return 0;
    }
    if (!config_path.empty()) ConfigFile::parse_file(config_path); // validate only
    double tol_override = -1.0;
    if (const char* env = std::getenv("COCYCLE_VERIFY_TOL")) tol_override = std::atof(env);
    for (const auto& s : kSuites) {
        const double tol = tol_override >= 0.0 && s.tol > 0.0 ? tol_override : s.tol;
        try {
            s.run(tol);
            std::cout << "ok " << s.name << "\n";
        } catch (const std::exception& e) {
            std::cout << "FAIL " << s.name << ": " << e.what() << "\n";
            return 3;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix cocycles over subshifts: spectra, splittings, periodic approximation"};
    app.require_subcommand(1);

    std::string config_path, point_spec, json_path, csv_path, out_path;
    std::vector<std::string> overrides;
    unsigned threads = 0;
    int period = 1;
    bool words_only = false, list_only = false;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config)
            sub->add_option("config", config_path, "experiment config file")->required();
        sub->add_option("--set", overrides, "override a config key: section.key=value");
        sub->add_option("--threads", threads, "worker pool size (default: machine parallelism)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "Lyapunov spectrum of the measure");
    add_common(spectrum);
    spectrum->add_option("--json", json_path, "write the JSON report here");

    auto* split = app.add_subcommand("split", "Oseledets splitting at a point");
    add_common(split);
    split->add_option("--point", point_spec, "'left;core;right' words or seed:<n>")
        ->required();
    split->add_option("--json", json_path, "write the JSON report here");

    auto* periodic = app.add_subcommand("periodic", "periodic points and their exponents");
    add_common(periodic);
    periodic->add_option("-n,--period", period, "period")->required();
    periodic->add_flag("--words-only", words_only, "one cyclic word per line, no exponents");
    periodic->add_option("--out", out_path, "write the table here");
    periodic->add_option("--json", json_path,
                         "write full orbit data (blocks and subspaces) here");

    auto* approx = app.add_subcommand("approx", "periodic approximation experiment");
    add_common(approx);
    approx->add_option("--json", json_path, "write the JSON report here");
    approx->add_option("--csv", csv_path, "write the CSV table here");

    auto* verify = app.add_subcommand("verify", "run the built-in invariant suites");
    verify->add_option("config", config_path, "optional config to validate");
    verify->add_flag("--list", list_only, "print suite names and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(config_path, list_only);

        ConfigFile file = ConfigFile::parse_file(config_path, overrides);
        const bool threads_flag_given =
            spectrum->count("--threads") > 0 || split->count("--threads") > 0 ||
            periodic->count("--threads") > 0 || approx->count("--threads") > 0;
        file.experiment.estimator.threads =
            resolve_threads(threads_flag_given, threads, file.experiment.estimator.threads);
        if (!json_path.empty()) file.json_path = json_path;
        if (!csv_path.empty()) file.csv_path = csv_path;

        if (spectrum->parsed()) return cmd_spectrum(file, file.json_path);
        if (split->parsed()) return cmd_split(file, point_spec, file.json_path);
        if (periodic->parsed())
            return cmd_periodic(file, period, words_only, out_path, file.json_path);
        if (approx->parsed()) return cmd_approx(file, file.json_path, file.csv_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

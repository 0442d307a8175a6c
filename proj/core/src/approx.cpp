#include "cocycle/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocycle/parallel.hpp"

namespace cocycle {

namespace {

double exponent_diff(double a, double b) {
    if (a == kNegInf && b == kNegInf) return 0.0;
    if (a == kNegInf || b == kNegInf) return std::numeric_limits<double>::infinity();
    return std::abs(a - b);
}

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

long experiment_horizon_margin(const CocycleGenerator& gen) {
    const auto [lo, hi] = gen.read_window();
    return std::max(std::abs(lo), std::abs(hi)) + 2;
}

} // namespace

OrbitScore best_periodic_orbit(const ExperimentConfig& config, int n,
                               const ErgodicSpectrum& mu_spectrum) {
    EnumerateOptions opts;
    opts.dedupe_rotations = true;
    opts.cap = config.enumeration_cap;
    const auto orbits = enumerate_periodic(config.subshift, n, opts);
    if (orbits.empty())
        throw NoAdmissibleOrbitError("no admissible orbit of period " + std::to_string(n));

    const int d = config.generator.dimension();
    struct Candidate {
        bool ok = false;
        double weak_star = 0.0;
        double exp_err = 0.0;
        double score = 0.0;
    };
    std::vector<Candidate> scored(orbits.size());
    parallel_for(orbits.size(), config.estimator.threads, [&](std::size_t i) {
        Candidate c;
        try {
            const PeriodicData pd =
                periodic_data(config.subshift, config.generator, orbits[i],
                              config.estimator.grouping_gap);
            double err = 0.0;
            for (int j = 0; j < d; ++j)
                err += exponent_diff(pd.spectrum.exponent(j), mu_spectrum.exponents[j]);
            c.exp_err = err / d;
            c.weak_star = weak_star_distance(config.subshift, CylinderSource(orbits[i]),
                                             CylinderSource(config.measure),
                                             config.weak_star_depth);
            c.score = c.weak_star + c.exp_err;
            c.ok = true;
        } catch (const ModulusTieError&) {
            c.ok = false;
        }
        scored[i] = c;
    });

    // distinct words that tie within roundoff (mirror words do, exactly)
    // resolve to the lexicographically smallest, which comes first
    const double tie_eps = 1e-6;
    int skipped = 0;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        if (!scored[i].ok) {
            ++skipped;
            continue;
        }
        if (!best || scored[i].score < scored[*best].score - tie_eps) best = i;
    }
    if (!best)
        throw NoAdmissibleOrbitError("every orbit of period " + std::to_string(n) +
                                     " was skipped");
    OrbitScore out{orbits[*best], scored[*best].weak_star, scored[*best].exp_err,
                   scored[*best].score, skipped};
    return out;
}

ApproximationReport splitting_report(const ExperimentConfig& config) {
    const long margin = experiment_horizon_margin(config.generator);
    const ErgodicSpectrum mu =
        ergodic_spectrum(config.generator, config.subshift, config.measure, config.horizon,
                         config.spectrum_samples, config.seed, config.estimator);
    const int l = mu.spectrum.block_count();

    ApproximationReport report;
    report.mu_exponents = mu.exponents;
    report.mu_std_errors = mu.std_errors;
    report.mu_multiplicities = mu.spectrum.multiplicities();
    report.sample_count = config.sample_count;
    report.epsilon_ladder = config.epsilon_ladder;

    // per-sample splittings, computed once and reused across periods
    struct SampleSplit {
        bool ok = false;
        SplittingEstimate est;
    };
    std::vector<SampleSplit> splits(config.sample_count);
    SplittingOptions bare{false, false};
    parallel_for(static_cast<std::size_t>(config.sample_count), config.estimator.threads,
                 [&](std::size_t s) {
                     const ShiftPoint x =
                         sample_point(config.subshift, config.measure,
                                      config.horizon + margin,
                                      mix_seed(config.seed, 0x100000 + s));
                     try {
                         SplittingEstimate est = oseledets_splitting(
                             config.generator, x, config.horizon, config.estimator, bare);
                         if (est.spectrum.same_structure(mu.spectrum))
                             splits[s] = {true, std::move(est)};
                     } catch (const Error&) {
                         // excluded sample; recorded through the matched count
                     }
                 });
    for (const auto& s : splits) report.structure_matched_samples += s.ok ? 1 : 0;

    for (int n = config.period_min; n <= config.period_max; ++n) {
        PeriodEntry entry;
        entry.period = n;
        const OrbitScore best = best_periodic_orbit(config, n, mu);
        entry.word = word_to_string(best.orbit.word());
        entry.score = best.score;
        entry.weak_star = best.weak_star;
        entry.skipped_orbits = best.skipped_orbits;

        const PeriodicData pd = periodic_data(config.subshift, config.generator, best.orbit,
                                              config.estimator.grouping_gap);
        for (int j = 0; j < config.generator.dimension(); ++j)
            entry.exponent_errors.push_back(
                exponent_diff(pd.spectrum.exponent(j), mu.exponents[j]));
        entry.max_exponent_error =
            *std::max_element(entry.exponent_errors.begin(), entry.exponent_errors.end());
        entry.structure_match = pd.spectrum.same_structure(mu.spectrum);

        if (entry.structure_match) {
            for (int s = 0; s < config.sample_count; ++s) {
                if (!splits[s].ok) continue;
                const SplittingEstimate& est = splits[s].est;
                double best_angle = std::numeric_limits<double>::infinity();
                int best_t = 0;
                for (int t = 0; t < pd.period(); ++t) {
                    double worst = 0.0;
                    for (int j = 0; j < l; ++j)
                        worst = std::max(worst,
                                         subspace_angle(est.spaces[j], pd.space(t, j)));
                    if (worst < best_angle) {
                        best_angle = worst;
                        best_t = t;
                    }
                }
                double flag_angle = 0.0;
                for (int j = 1; j < l; ++j) {
                    flag_angle = std::max(
                        flag_angle, subspace_angle(est.fast[j - 1], pd.fast_sum(best_t, j)));
                    flag_angle = std::max(
                        flag_angle, subspace_angle(est.slow[j - 1], pd.slow_sum(best_t, j)));
                }
                entry.best_angles.push_back(best_angle);
                entry.best_rotation.push_back(best_t);
                entry.flag_angles.push_back(flag_angle);
            }
            std::vector<double> sorted = entry.best_angles;
            std::sort(sorted.begin(), sorted.end());
            for (double q : {0.0, 0.25, 0.5, 0.75, 1.0})
                entry.angle_quantiles.push_back(quantile(sorted, q));
            for (double eps : config.epsilon_ladder) {
                int good = 0;
                for (double a : entry.best_angles) good += (a < eps) ? 1 : 0;
                entry.good_fraction.push_back(
                    entry.best_angles.empty()
                        ? 0.0
                        : static_cast<double>(good) / config.sample_count);
            }
        }
        report.periods.push_back(std::move(entry));
    }
    return report;
}

namespace {

// y agrees with x strictly inside (-inf, k) and differs at coordinate k;
// nullopt when the successor at k is forced.
std::optional<ShiftPoint> mutate_at(const SubshiftSpec& spec, const ShiftPoint& x, long k,
                                    long core_lo) {
    const Symbol prev = x.at(k - 1);
    const Symbol old = x.at(k);
    std::optional<Symbol> repl;
    for (int b = 0; b < spec.alphabet_size(); ++b) {
        if (static_cast<Symbol>(b) != old && spec.allowed(prev, static_cast<Symbol>(b))) {
            repl = static_cast<Symbol>(b);
            break;
        }
    }
    if (!repl) return std::nullopt;

    Word core = x.window(core_lo, k);
    core.push_back(*repl);
    const TailWords tail = admissible_continuation(spec, *repl, /*forward=*/true);
    core.insert(core.end(), tail.bridge.begin(), tail.bridge.end());
    return ShiftPoint(spec, x.left_period(), std::move(core), tail.period, -core_lo);
}

} // namespace

HolderAudit holder_audit(const SubshiftSpec& spec, const CocycleGenerator& gen,
                         const MarkovMeasure& measure, int sample_pairs,
                         std::uint64_t seed) {
    if (sample_pairs < 10) throw ConfigError("holder audit needs at least 10 pairs");
    HolderAudit audit;

    if (gen.kind() == CocycleGenerator::Kind::LocallyConstant) {
        audit.locally_constant = true;
        audit.alpha_hat = gen.holder_alpha();
        audit.c2_hat = gen.holder_constant();
    }

    const int max_k = gen.kind() == CocycleGenerator::Kind::LocallyConstant
                          ? std::max(gen.depth(), 2)
                          : std::min(gen.series_window(), 10);
    std::vector<double> log_d, log_diff;
    int used = 0;
    for (int i = 0; i < sample_pairs; ++i) {
        const int k = 1 + (i % max_k);
        const long horizon = k + experiment_horizon_margin(gen) + 4;
        const ShiftPoint x = sample_point(spec, measure, horizon, mix_seed(seed, i));
        const auto y = mutate_at(spec, x, k, x.left_tail_end());
        if (!y) continue;
        const double dist = shift_distance(x, *y);
        const double diff =
            Eigen::JacobiSVD<Matrix>(gen.evaluate(x) - gen.evaluate(*y)).singularValues()(0);
        ++used;
        if (gen.kind() == CocycleGenerator::Kind::CoordinateSeries) {
            audit.max_violation = std::max(
                audit.max_violation,
                diff - gen.holder_constant() * std::pow(dist, gen.holder_alpha()));
        } else {
            audit.max_violation = std::max(
                audit.max_violation, diff - gen.holder_constant() * dist);
        }
        if (diff > 0.0 && dist > 0.0) {
            log_d.push_back(std::log(dist));
            log_diff.push_back(std::log(diff));
        }
    }
    audit.pairs_used = used;
    audit.max_violation = std::max(audit.max_violation, 0.0);

    if (!audit.locally_constant && log_d.size() >= 2) {
        const double n = static_cast<double>(log_d.size());
        const double mx = std::accumulate(log_d.begin(), log_d.end(), 0.0) / n;
        const double my = std::accumulate(log_diff.begin(), log_diff.end(), 0.0) / n;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_d.size(); ++i) {
            sxx += (log_d[i] - mx) * (log_d[i] - mx);
            sxy += (log_d[i] - mx) * (log_diff[i] - my);
        }
        audit.alpha_hat = sxx > 0.0 ? sxy / sxx : 0.0;
        double max_intercept = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < log_d.size(); ++i)
            max_intercept = std::max(max_intercept,
                                     log_diff[i] - audit.alpha_hat * log_d[i]);
        audit.c2_hat = std::exp(max_intercept);
    } else if (!audit.locally_constant) {
        audit.alpha_hat = gen.holder_alpha();
        audit.c2_hat = 0.0;
    }
    return audit;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw ConfigError("spearman needs two equally sized lists of length >= 2");
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
        sab += (ra[i] - ma) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

ClosingReport closing_experiment(const ExperimentConfig& config) {
    for (int a = 0; a < config.subshift.alphabet_size(); ++a)
        for (int b = 0; b < config.subshift.alphabet_size(); ++b)
            if (!config.subshift.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b)))
                throw ConfigError("the closing experiment needs a full shift");

    const long margin = experiment_horizon_margin(config.generator);
    const long horizon = std::max<long>(config.period_max, config.horizon) + margin;

    ClosingReport report;
    for (int s = 0; s < config.sample_count; ++s) {
        const ShiftPoint x = sample_point(config.subshift, config.measure, horizon,
                                          mix_seed(config.seed, 0x200000 + s));
        std::optional<SplittingEstimate> split; // computed lazily per sample
        for (int n = config.period_min; n <= config.period_max; ++n) {
            const double dist = shift_distance(x.shifted(n), x);
            if (dist >= config.closing.eps0) continue;
            PeriodicOrbit p = anosov_close(config.subshift, x, n, config.closing);
            ClosingEvent ev;
            ev.sample = s;
            ev.return_time = n;
            ev.return_distance = dist;

            // the same finite-horizon estimator on both sides of the window,
            // so an exactly periodic point reports error zero
            const LyapunovSpectrum at_x =
                finite_time_spectrum(config.generator, x, n, config.estimator);
            const LyapunovSpectrum at_p = finite_time_spectrum(
                config.generator, p.point_at(config.subshift, 0), n, config.estimator);
            ev.top_exponent_error = exponent_diff(at_x.exponent(0), at_p.exponent(0));
            double worst = 0.0;
            for (int j = 0; j < at_x.dimension(); ++j)
                worst = std::max(worst,
                                 exponent_diff(at_x.exponent(j), at_p.exponent(j)));
            ev.max_exponent_error = worst;

            try {
                const PeriodicData pd = periodic_data(config.subshift, config.generator, p,
                                                      config.estimator.grouping_gap);
                if (!split) {
                    SplittingOptions bare{false, false};
                    split = oseledets_splitting(config.generator, x, config.horizon,
                                                config.estimator, bare);
                }
                if (split->spectrum.same_structure(pd.spectrum)) {
                    double best_angle = std::numeric_limits<double>::infinity();
                    for (int t = 0; t < pd.period(); ++t) {
                        double worst_angle = 0.0;
                        for (int j = 0; j < split->spectrum.block_count(); ++j)
                            worst_angle = std::max(
                                worst_angle,
                                subspace_angle(split->spaces[j], pd.space(t, j)));
                        best_angle = std::min(best_angle, worst_angle);
                    }
                    ev.best_angle = best_angle;
                }
            } catch (const ModulusTieError&) {
                // angle comparison skipped; the exponent record stands
            }
            report.events.push_back(ev);
        }
    }

    if (report.events.size() >= 2) {
        std::vector<double> dists, errs;
        for (const auto& ev : report.events) {
            dists.push_back(ev.return_distance);
            errs.push_back(ev.top_exponent_error);
        }
        report.spearman_distance_vs_error = spearman(dists, errs);
    }
    return report;
}

} // namespace cocycle

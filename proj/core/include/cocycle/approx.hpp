#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocycle/oseledets.hpp"

namespace cocycle {

/// Everything one approximation experiment needs.
struct ExperimentConfig {
    SubshiftSpec subshift;
    CocycleGenerator generator;
    MarkovMeasure measure;

    int period_min = 4;
    int period_max = 14;
    int horizon = 1024;           // splitting horizon
    int sample_count = 50;
    int spectrum_samples = 50;    // Monte-Carlo size for the measure spectrum
    int weak_star_depth = 4;
    std::vector<double> epsilon_ladder = {0.5, 1.0 / 3.0, 0.25, 0.2};
    std::uint64_t seed = 0;
    std::uint64_t enumeration_cap = 4'000'000;
    ClosingParams closing;
    EstimatorParams estimator;

    ExperimentConfig(SubshiftSpec s, CocycleGenerator g, MarkovMeasure m)
        : subshift(std::move(s)), generator(std::move(g)), measure(std::move(m)) {}
};

struct OrbitScore {
    PeriodicOrbit orbit;
    double weak_star = 0.0;
    double exponent_error = 0.0; // mean |gamma_j(p) - gamma_j(mu)| over j
    double score = 0.0;
    int skipped_orbits = 0;      // ModulusTie casualties at this period
};

/// Exhaustive search over the orbits of period n for the minimizer of
///   weak_star(mu_p, mu) + mean_j |gamma_j(A,p) - gamma_j(A,mu)|,
/// ties broken by the lexicographically smallest word. ModulusTie orbits are
/// skipped and counted.
OrbitScore best_periodic_orbit(const ExperimentConfig& config, int n,
                               const ErgodicSpectrum& mu_spectrum);

struct PeriodEntry {
    int period = 0;
    std::string word;                // chosen orbit, canonical rotation
    double score = 0.0;
    double weak_star = 0.0;
    std::vector<double> exponent_errors; // per gamma index
    double max_exponent_error = 0.0;
    bool structure_match = false;    // orbit blocks == measure blocks
    int skipped_orbits = 0;

    // per-sample best-over-orbit angles (block level), empty on mismatch
    std::vector<double> best_angles;
    std::vector<int> best_rotation;      // minimizing q as a rotation index
    std::vector<double> flag_angles;     // flag-level max angle at the same q
    std::vector<double> angle_quantiles; // min, q25, median, q75, max
    std::vector<double> good_fraction;   // one entry per ladder epsilon
};

struct ApproximationReport {
    std::vector<double> mu_exponents;
    std::vector<double> mu_std_errors;
    std::vector<int> mu_multiplicities;
    int sample_count = 0;
    int structure_matched_samples = 0;
    std::vector<double> epsilon_ladder;
    std::vector<PeriodEntry> periods;
};

/// The full experiment: measure spectrum, per-sample splittings, exhaustive
/// orbit choice per period, block- and flag-level angles against every orbit
/// point, and empirical good-set fractions for the epsilon ladder.
ApproximationReport splitting_report(const ExperimentConfig& config);

struct HolderAudit {
    double c2_hat = 0.0;
    double alpha_hat = 0.0;
    double max_violation = 0.0;
    bool locally_constant = false; // exact statement: zero below 2^-depth
    int pairs_used = 0;
};

/// Regresses log ||A(x) - A(y)|| on log d(x, y) over pairs at dyadic
/// distances. Locally constant generators report their exact Hoelder data.
HolderAudit holder_audit(const SubshiftSpec& spec, const CocycleGenerator& gen,
                         const MarkovMeasure& measure, int sample_pairs,
                         std::uint64_t seed);

struct ClosingEvent {
    int sample = 0;
    int return_time = 0;
    double return_distance = 0.0;
    double top_exponent_error = 0.0;
    double max_exponent_error = 0.0;
    double best_angle = -1.0; // -1 when block structures differ
};

struct ClosingReport {
    std::vector<ClosingEvent> events;
    double spearman_distance_vs_error = 0.0; // over top exponent errors
};

/// Samples points, detects near-returns, closes them into periodic orbits
/// and compares finite-time data at the point with the exact orbit data.
ClosingReport closing_experiment(const ExperimentConfig& config);

/// Spearman rank correlation; ties get average ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace cocycle

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cocycle/subshift.hpp"

namespace cocycle {

/// Stationary Markov measure on a subshift: a row-stochastic matrix
/// compatible with the transition structure together with its stationary
/// row vector. Bernoulli measures are the equal-rows special case.
class MarkovMeasure {
public:
    /// Validates compatibility and solves pi P = pi.
    MarkovMeasure(const SubshiftSpec& spec, Eigen::MatrixXd stochastic);

    /// Product measure with weights p over a full shift.
    static MarkovMeasure bernoulli(const SubshiftSpec& spec, std::vector<double> p);

    int alphabet_size() const { return static_cast<int>(stochastic_.rows()); }
    const Eigen::MatrixXd& stochastic() const { return stochastic_; }
    const Eigen::VectorXd& stationary() const { return stationary_; }

    /// Time reversal: same stationary vector, transitions run backwards.
    MarkovMeasure reversed(const SubshiftSpec& spec) const;

private:
    MarkovMeasure() = default;
    Eigen::MatrixXd stochastic_;
    Eigen::VectorXd stationary_;
};

/// Draws a point whose coordinates on [-horizon, horizon] follow the
/// stationary chain; tails beyond the window are a fixed admissible
/// periodic word. Deterministic in the seed.
ShiftPoint sample_point(const SubshiftSpec& spec, const MarkovMeasure& measure,
                        long horizon, std::uint64_t seed);

double cylinder_frequency(const MarkovMeasure& m, const Word& word);
double cylinder_frequency(const PeriodicOrbit& p, const Word& word);

using CylinderSource = std::variant<MarkovMeasure, PeriodicOrbit>;

double cylinder_frequency(const CylinderSource& src, const Word& word);

/// Depth-weighted total cylinder discrepancy
///   sum_{L=1..depth} 2^-L / |W_L| * sum_{w in W_L} |freq1(w) - freq2(w)|
/// over the admissible words W_L of the subshift.
double weak_star_distance(const SubshiftSpec& spec, const CylinderSource& m1,
                          const CylinderSource& m2, int depth);

/// Deterministic cross-platform uniform variate in [0, 1).
double uniform01(std::uint64_t raw_bits);

/// Stable per-sample seed derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

} // namespace cocycle

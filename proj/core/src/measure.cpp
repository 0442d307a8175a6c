#include "cocycle/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cocycle {

namespace {

constexpr double kStochasticTol = 1e-12;

} // namespace

MarkovMeasure::MarkovMeasure(const SubshiftSpec& spec, Eigen::MatrixXd stochastic) {
    const int k = spec.alphabet_size();
    if (stochastic.rows() != k || stochastic.cols() != k)
        throw ConfigError("stochastic matrix size does not match the alphabet");
    for (int a = 0; a < k; ++a) {
        double row_sum = 0.0;
        for (int b = 0; b < k; ++b) {
            const double p = stochastic(a, b);
            if (p < 0.0) throw ConfigError("stochastic matrix has a negative entry");
            if (p > 0.0 && !spec.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b)))
                throw ConfigError("stochastic matrix puts mass on a forbidden transition");
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kStochasticTol)
            throw ConfigError("stochastic matrix row " + std::to_string(a) +
                              " sums to " + std::to_string(row_sum));
    }
    stochastic_ = std::move(stochastic);

    // pi P = pi, sum pi = 1
    Eigen::MatrixXd m = stochastic_.transpose() - Eigen::MatrixXd::Identity(k, k);
    m.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(0) = 1.0;
    stationary_ = m.fullPivLu().solve(rhs);

    for (int a = 0; a < k; ++a) {
        if (stationary_(a) < -1e-9)
            throw ConfigError("stationary vector has a negative entry");
        stationary_(a) = std::max(stationary_(a), 0.0);
    }
    stationary_ /= stationary_.sum();
    const double defect = (stationary_.transpose() * stochastic_ - stationary_.transpose()).norm();
    if (defect > 1e-10)
        throw ConfigError("failed to solve the stationarity equation");
}

MarkovMeasure MarkovMeasure::bernoulli(const SubshiftSpec& spec, std::vector<double> p) {
    const int k = spec.alphabet_size();
    if (static_cast<int>(p.size()) != k)
        throw ConfigError("bernoulli weights size does not match the alphabet");
    Eigen::MatrixXd stochastic(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) stochastic(a, b) = p[b];
    return MarkovMeasure(spec, std::move(stochastic));
}

MarkovMeasure MarkovMeasure::reversed(const SubshiftSpec& spec) const {
    const int k = alphabet_size();
    Eigen::MatrixXd rev = Eigen::MatrixXd::Zero(k, k);
    std::vector<std::vector<bool>> rev_trans(k, std::vector<bool>(k, false));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            rev_trans[a][b] = spec.allowed(static_cast<Symbol>(b), static_cast<Symbol>(a));
    for (int a = 0; a < k; ++a) {
        if (stationary_(a) > 0.0) {
            for (int b = 0; b < k; ++b)
                rev(a, b) = stationary_(b) * stochastic_(b, a) / stationary_(a);
        } else {
            int allowed_count = 0;
            for (int b = 0; b < k; ++b) allowed_count += rev_trans[a][b] ? 1 : 0;
            for (int b = 0; b < k; ++b)
                if (rev_trans[a][b]) rev(a, b) = 1.0 / allowed_count;
        }
    }
    return MarkovMeasure(SubshiftSpec(rev_trans), std::move(rev));
}

double uniform01(std::uint64_t raw_bits) {
    return static_cast<double>(raw_bits >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

Symbol sample_index(const Eigen::VectorXd& weights, double u) {
    double acc = 0.0;
    const int k = static_cast<int>(weights.size());
    for (int i = 0; i < k; ++i) {
        acc += weights(i);
        if (u < acc) return static_cast<Symbol>(i);
    }
    for (int i = k - 1; i >= 0; --i)
        if (weights(i) > 0.0) return static_cast<Symbol>(i);
    return 0;
}

} // namespace

ShiftPoint sample_point(const SubshiftSpec& spec, const MarkovMeasure& measure,
                        long horizon, std::uint64_t seed) {
    if (horizon < 0) throw ConfigError("horizon must be nonnegative");
    std::mt19937_64 rng(seed);
    auto draw = [&] { return uniform01(rng()); };

    Word window;
    window.reserve(static_cast<std::size_t>(2 * horizon + 1));
    Symbol cur = sample_index(measure.stationary(), draw());
    window.push_back(cur);
    for (long j = 1; j <= 2 * horizon; ++j) {
        cur = sample_index(measure.stochastic().row(window.back()).transpose(), draw());
        window.push_back(cur);
    }

    const TailWords right = admissible_continuation(spec, window.back(), /*forward=*/true);
    const Word& bridge_right = right.bridge;
    const Word& right_period = right.period;

    TailWords left = admissible_continuation(spec, window.front(), /*forward=*/false);
    std::reverse(left.bridge.begin(), left.bridge.end());
    std::reverse(left.period.begin(), left.period.end());
    const Word& bridge_left = left.bridge;
    const Word& left_period = left.period;

    Word core;
    core.reserve(bridge_left.size() + window.size() + bridge_right.size());
    core.insert(core.end(), bridge_left.begin(), bridge_left.end());
    core.insert(core.end(), window.begin(), window.end());
    core.insert(core.end(), bridge_right.begin(), bridge_right.end());

    const long offset = static_cast<long>(bridge_left.size()) + horizon;
    return ShiftPoint(spec, left_period, std::move(core), right_period, offset);
}

double cylinder_frequency(const MarkovMeasure& m, const Word& word) {
    if (word.empty()) return 1.0;
    double p = m.stationary()(word.front());
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        p *= m.stochastic()(word[i], word[i + 1]);
    return p;
}

double cylinder_frequency(const PeriodicOrbit& orbit, const Word& word) {
    if (word.empty()) return 1.0;
    const Word& w = orbit.word();
    const int n = orbit.period();
    int count = 0;
    for (int t = 0; t < n; ++t) {
        bool match = true;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (w[(t + i) % n] != word[i]) { match = false; break; }
        }
        if (match) ++count;
    }
    return static_cast<double>(count) / n;
}

double cylinder_frequency(const CylinderSource& src, const Word& word) {
    return std::visit([&](const auto& s) { return cylinder_frequency(s, word); }, src);
}

double weak_star_distance(const SubshiftSpec& spec, const CylinderSource& m1,
                          const CylinderSource& m2, int depth) {
    if (depth < 1) throw ConfigError("weak-star depth must be >= 1");
    double total = 0.0;
    for (int len = 1; len <= depth; ++len) {
        const auto words = spec.admissible_words(len);
        if (words.empty()) continue;
        double layer = 0.0;
        for (const Word& w : words)
            layer += std::abs(cylinder_frequency(m1, w) - cylinder_frequency(m2, w));
        total += std::ldexp(layer / static_cast<double>(words.size()), -len);
    }
    return total;
}

} // namespace cocycle

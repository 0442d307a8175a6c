#pragma once

#include <random>

#include "cocycle/approx.hpp"
#include "cocycle/exterior.hpp"
#include "cocycle/measure.hpp"
#include "cocycle/oseledets.hpp"

namespace cocycle::test {

inline SubshiftSpec full2() { return SubshiftSpec::full_shift(2); }

inline SubshiftSpec golden_mean() {
    return SubshiftSpec({{true, true}, {true, false}});
}

inline Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

/// Point of the one-symbol full shift, for constant cocycles.
inline ShiftPoint constant_point() {
    static const SubshiftSpec one = SubshiftSpec::full_shift(1);
    return PeriodicOrbit(one, {0}).point_at(one, 0);
}

/// Diag-dominant pair of 2x2 matrices over the full 2-shift; one strongly
/// expanding and one strongly contracting direction at every symbol.
inline CocycleGenerator hyperbolic_gen() {
    static const SubshiftSpec spec = full2();
    return CocycleGenerator::per_symbol(
        spec, {mat2(3.0, 0.25, 0.1, 0.35), mat2(2.2, -0.2, 0.15, 0.45)});
}

/// Same skeleton with one exactly singular matrix.
inline CocycleGenerator singular_gen() {
    static const SubshiftSpec spec = full2();
    return CocycleGenerator::per_symbol(
        spec, {mat2(2.0, 0.0, 0.0, 0.0), mat2(1.8, 0.3, 0.2, 0.6)});
}

/// Hoelder (non locally constant) generator for closing experiments.
inline CocycleGenerator holder_gen() {
    static const SubshiftSpec spec = full2();
    return CocycleGenerator::coordinate_series(
        spec, {mat2(3.0, 0.25, 0.1, 0.35), mat2(2.2, -0.2, 0.15, 0.45)},
        {mat2(0.3, 0.1, 0.05, 0.2), mat2(-0.25, 0.08, 0.1, -0.15)}, 2.0, 8);
}

inline Matrix random_matrix(int d, std::mt19937_64& rng, double scale = 1.0) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = scale * (2.0 * uniform01(rng()) - 1.0);
    return m;
}

inline Subspace random_subspace(int d, int k, std::mt19937_64& rng) {
    Matrix m(d, k);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = 2.0 * uniform01(rng()) - 1.0;
    return Subspace(m);
}

/// Rotation-conjugated diagonal generators: R_s diag(...) R_s^T per symbol.
inline CocycleGenerator conjugated_diagonal_gen(const SubshiftSpec& spec,
                                                const std::vector<double>& diag,
                                                std::uint64_t seed) {
    const int d = static_cast<int>(diag.size());
    std::mt19937_64 rng(seed);
    std::vector<Matrix> table;
    for (int s = 0; s < spec.alphabet_size(); ++s) {
        const Matrix q =
            Eigen::HouseholderQR<Matrix>(random_matrix(d, rng)).householderQ();
        Matrix m = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = diag[i];
        table.push_back(q * m * q.transpose());
    }
    return CocycleGenerator::locally_constant(spec, 1, table);
}

} // namespace cocycle::test

#pragma once

#include <vector>

#include "cocycle/subspace.hpp"

namespace cocycle {

/// Index tuples 0 <= i_1 < ... < i_j < d in lexicographic order: the wedge
/// basis e_{i_1} ^ ... ^ e_{i_j} of the j-th exterior power.
std::vector<std::vector<int>> wedge_basis_indices(int d, int j);

long binomial(int n, int k);

/// The induced map on the j-th exterior power in the lexicographic wedge
/// basis; entry (I, J) is the minor det L[I, J].
Matrix exterior_power(const Matrix& L, int j);

/// Wedge of an orthonormal basis of V as a unit vector of the j-th exterior
/// power, sign fixed so the first coordinate above 1e-12 is positive.
Vector plucker(const Subspace& V);

/// Sine of the projective angle between two nonzero vectors.
double projective_sine_distance(const Vector& u, const Vector& v);

} // namespace cocycle

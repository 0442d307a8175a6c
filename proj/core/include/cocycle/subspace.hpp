#pragma once

#include <utility>

#include <Eigen/Dense>

#include "cocycle/errors.hpp"

namespace cocycle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A linear subspace of R^d carried by a column-orthonormal basis matrix.
/// Dimension 0 encodes the zero subspace (legal only as a signaling value).
class Subspace {
public:
    /// Orthonormalizes the columns of `spanning` (rank-revealing); columns
    /// below `rank_tol` relative to the largest are dropped.
    explicit Subspace(const Matrix& spanning, double rank_tol = 1e-10);

    static Subspace zero(int ambient);
    static Subspace full(int ambient);
    static Subspace span(const Vector& v);
    /// Coordinate subspace spanned by the given standard basis vectors.
    static Subspace coordinate(int ambient, std::initializer_list<int> axes);
    /// Adopts a basis that is already column-orthonormal (checked to 1e-10).
    static Subspace from_orthonormal(Matrix basis);

    int ambient_dimension() const { return static_cast<int>(basis_.rows()); }
    int dimension() const { return static_cast<int>(basis_.cols()); }
    bool is_zero() const { return dimension() == 0; }
    const Matrix& basis() const { return basis_; }

    /// Orthogonal projection of a vector onto the subspace.
    Vector project(const Vector& v) const;

    /// Smallest subspace containing both (orthonormalized union of bases).
    Subspace sum(const Subspace& other) const;

private:
    Subspace() = default;
    Matrix basis_;
};

/// sup over unit v in E of ||v - Proj_F v||: the sine of the largest
/// principal angle when dim E <= dim F, and exactly 1 otherwise.
double directed_distance(const Subspace& E, const Subspace& F);

/// The symmetric sup-distance (max of the two directed values) and the
/// corresponding angle asin(dist). Throws ZeroSubspaceError on zero inputs.
std::pair<double, double> subspace_distance_angle(const Subspace& E, const Subspace& F);

double subspace_distance(const Subspace& E, const Subspace& F);
double subspace_angle(const Subspace& E, const Subspace& F);

/// Orthogonal complement; FullSpaceError when V is the whole space.
Subspace orthogonal_complement(const Subspace& V);

/// Span of the common directions of E and F: principal directions whose
/// angle sine is <= tol, i.e. singular values of E^T F >= cos(asin(tol)).
/// The zero subspace signals an empty intersection.
Subspace intersect_subspaces(const Subspace& E, const Subspace& F, double tol);

/// Open cone of the given radius around a subspace.
struct Cone {
    Subspace axis;
    double radius;
};

/// True iff ||w/||w|| - Proj_axis(w/||w||)|| < radius.
bool cone_contains(const Cone& cone, const Vector& w);

} // namespace cocycle

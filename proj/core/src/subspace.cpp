#include "cocycle/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

Subspace::Subspace(const Matrix& spanning, double rank_tol) {
    const int d = static_cast<int>(spanning.rows());
    if (d < 1) throw ConfigError("subspace needs a positive ambient dimension");
    if (spanning.cols() == 0) {
        basis_ = Matrix::Zero(d, 0);
        return;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(spanning);
    qr.setThreshold(rank_tol);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0) {
        basis_ = Matrix::Zero(d, 0);
        return;
    }
    Matrix q = qr.householderQ() * Matrix::Identity(d, rank);
    // one re-orthonormalization pass tightens Q^T Q to working precision
    Eigen::HouseholderQR<Matrix> refine(q);
    basis_ = refine.householderQ() * Matrix::Identity(d, rank);
}

Subspace Subspace::zero(int ambient) {
    Subspace s;
    s.basis_ = Matrix::Zero(ambient, 0);
    return s;
}

Subspace Subspace::full(int ambient) {
    Subspace s;
    s.basis_ = Matrix::Identity(ambient, ambient);
    return s;
}

Subspace Subspace::span(const Vector& v) {
    if (v.norm() == 0.0) throw ZeroVectorError("span of the zero vector");
    Subspace s;
    s.basis_ = v / v.norm();
    return s;
}

Subspace Subspace::coordinate(int ambient, std::initializer_list<int> axes) {
    Matrix b = Matrix::Zero(ambient, static_cast<Eigen::Index>(axes.size()));
    int col = 0;
    for (int axis : axes) b(axis, col++) = 1.0;
    Subspace s;
    s.basis_ = std::move(b);
    return s;
}

Subspace Subspace::from_orthonormal(Matrix basis) {
    const int k = static_cast<int>(basis.cols());
    const double defect =
        (basis.transpose() * basis - Matrix::Identity(k, k)).norm();
    if (defect > 1e-10)
        throw ConfigError("basis is not orthonormal (defect " + std::to_string(defect) + ")");
    Subspace s;
    s.basis_ = std::move(basis);
    return s;
}

Vector Subspace::project(const Vector& v) const {
    if (is_zero()) return Vector::Zero(ambient_dimension());
    return basis_ * (basis_.transpose() * v);
}

Subspace Subspace::sum(const Subspace& other) const {
    if (ambient_dimension() != other.ambient_dimension())
        throw ConfigError("subspace sum over mismatched ambient dimensions");
    Matrix joint(ambient_dimension(), dimension() + other.dimension());
    joint << basis_, other.basis();
    return Subspace(joint);
}

double directed_distance(const Subspace& E, const Subspace& F) {
    if (E.ambient_dimension() != F.ambient_dimension())
        throw ConfigError("subspace distance over mismatched ambient dimensions");
    if (E.is_zero() || F.is_zero())
        throw ZeroSubspaceError("directed distance from or to the zero subspace");
    if (E.dimension() > F.dimension()) return 1.0;
    // sup over unit v in E of ||v - Proj_F v|| is the top singular value of
    // (I - B_F B_F^T) B_E; the residual form is accurate for small angles,
    // unlike sqrt(1 - cos^2)
    const Matrix residual =
        E.basis() - F.basis() * (F.basis().transpose() * E.basis());
    const double s = Eigen::JacobiSVD<Matrix>(residual).singularValues()(0);
    return std::min(s, 1.0);
}

std::pair<double, double> subspace_distance_angle(const Subspace& E, const Subspace& F) {
    const double dist = std::max(directed_distance(E, F), directed_distance(F, E));
    return {dist, std::asin(std::min(dist, 1.0))};
}

double subspace_distance(const Subspace& E, const Subspace& F) {
    return subspace_distance_angle(E, F).first;
}

double subspace_angle(const Subspace& E, const Subspace& F) {
    return subspace_distance_angle(E, F).second;
}

Subspace orthogonal_complement(const Subspace& V) {
    const int d = V.ambient_dimension();
    if (V.dimension() >= d)
        throw FullSpaceError("orthogonal complement of the full space is zero");
    if (V.is_zero()) return Subspace::full(d);
    Eigen::HouseholderQR<Matrix> qr(V.basis());
    const Matrix q = qr.householderQ();
    return Subspace(q.rightCols(d - V.dimension()));
}

Subspace intersect_subspaces(const Subspace& E, const Subspace& F, double tol) {
    if (E.ambient_dimension() != F.ambient_dimension())
        throw ConfigError("subspace intersection over mismatched ambient dimensions");
    const int d = E.ambient_dimension();
    if (E.is_zero() || F.is_zero()) return Subspace::zero(d);

    // keep principal directions with sin(theta_i) <= cut, i.e. singular
    // values of B_E^T B_F >= cos(asin(cut)); the sines come from projection
    // residuals so that near-zero angles are not lost to cancellation
    const double sine_cut = std::max(tol, 1e-10);

    Eigen::JacobiSVD<Matrix> svd(E.basis().transpose() * F.basis(), Eigen::ComputeFullU);
    const Matrix principal = E.basis() * svd.matrixU(); // unit principal vectors in E
    const Matrix residual =
        principal - F.basis() * (F.basis().transpose() * principal);
    int keep = 0;
    while (keep < residual.cols() && residual.col(keep).norm() <= sine_cut) ++keep;
    if (keep == 0) return Subspace::zero(d);
    return Subspace(principal.leftCols(keep));
}

bool cone_contains(const Cone& cone, const Vector& w) {
    const double norm = w.norm();
    if (norm == 0.0) throw ZeroVectorError("cone membership of the zero vector");
    const Vector u = w / norm;
    return (u - cone.axis.project(u)).norm() < cone.radius;
}

} // namespace cocycle

#include "cocycle/exterior.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<std::vector<int>> wedge_basis_indices(int d, int j) {
    std::vector<std::vector<int>> out;
    std::vector<int> tuple;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(tuple.size()) == j) {
            out.push_back(tuple);
            return;
        }
        for (int i = next; i < d; ++i) {
            tuple.push_back(i);
            self(self, i + 1);
            tuple.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

Matrix exterior_power(const Matrix& L, int j) {
    const int d = static_cast<int>(L.rows());
    if (L.cols() != d) throw ConfigError("exterior power of a non-square matrix");
    if (j < 1 || j > d) throw ConfigError("exterior power order out of range");
    const auto tuples = wedge_basis_indices(d, j);
    const int m = static_cast<int>(tuples.size());
    Matrix out(m, m);
    Matrix minor(j, j);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            for (int a = 0; a < j; ++a)
                for (int b = 0; b < j; ++b) minor(a, b) = L(tuples[r][a], tuples[c][b]);
            out(r, c) = minor.determinant();
        }
    return out;
}

Vector plucker(const Subspace& V) {
    if (V.is_zero()) throw ZeroSubspaceError("plucker coordinates of the zero subspace");
    const int d = V.ambient_dimension();
    const int j = V.dimension();
    const auto tuples = wedge_basis_indices(d, j);
    Vector coords(static_cast<Eigen::Index>(tuples.size()));
    Matrix rows(j, j);
    for (std::size_t t = 0; t < tuples.size(); ++t) {
        for (int a = 0; a < j; ++a) rows.row(a) = V.basis().row(tuples[t][a]);
        coords(static_cast<Eigen::Index>(t)) = rows.determinant();
    }
    coords.normalize();
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
        if (std::abs(coords(i)) > 1e-12) {
            if (coords(i) < 0.0) coords = -coords;
            break;
        }
    }
    return coords;
}

double projective_sine_distance(const Vector& u, const Vector& v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw ZeroVectorError("projective distance of a zero vector");
    const double c = std::clamp(std::abs(u.dot(v)) / (nu * nv), 0.0, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - c * c));
}

} // namespace cocycle

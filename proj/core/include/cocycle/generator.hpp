#pragma once

#include <vector>

#include "cocycle/subshift.hpp"
#include "cocycle/subspace.hpp"

namespace cocycle {

/// A matrix-valued map on the shift space. Two concrete kinds:
///
/// LocallyConstant: a table over the words of length `depth` read in the
/// window [-floor(depth/2), ceil(depth/2)) around index 0.
///
/// CoordinateSeries: A(x) = B_{x_0} + sum over 1 <= |j| <= window of
/// 2^(-alpha |j|) P_{x_j}, which is alpha-Hoelder with a constant recorded
/// at construction. Matrices may be singular.
class CocycleGenerator {
public:
    enum class Kind { LocallyConstant, CoordinateSeries };

    /// `table` is indexed by the mixed-radix rank of the word (first window
    /// symbol most significant) and must cover alphabet^depth entries.
    static CocycleGenerator locally_constant(const SubshiftSpec& spec, int depth,
                                             std::vector<Matrix> table);

    /// Depth-1 convenience: one matrix per symbol.
    static CocycleGenerator per_symbol(const SubshiftSpec& spec, std::vector<Matrix> table);

    /// Constant generator over a one-symbol full shift.
    static CocycleGenerator constant(const Matrix& a);

    static CocycleGenerator coordinate_series(const SubshiftSpec& spec,
                                              std::vector<Matrix> base,
                                              std::vector<Matrix> perturbation,
                                              double alpha, int window);

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    int alphabet_size() const { return alphabet_; }
    int depth() const { return depth_; }
    int series_window() const { return window_; }
    double holder_alpha() const { return alpha_; }
    double holder_constant() const { return holder_c2_; }
    const std::vector<Matrix>& table() const { return table_; }
    const std::vector<Matrix>& series_base() const { return base_; }
    const std::vector<Matrix>& series_perturbation() const { return perturbation_; }

    /// A(x).
    Matrix evaluate(const ShiftPoint& x) const;

    /// Coordinates of x read by evaluate: [lo, hi).
    std::pair<long, long> read_window() const;

private:
    CocycleGenerator() = default;

    Kind kind_ = Kind::LocallyConstant;
    int dimension_ = 0;
    int alphabet_ = 0;
    int depth_ = 1;
    std::vector<Matrix> table_;

    std::vector<Matrix> base_;
    std::vector<Matrix> perturbation_;
    double alpha_ = 1.0;
    int window_ = 0;
    double holder_c2_ = 0.0;
};

/// A^n(x) = A(f^{n-1} x) ... A(f x) A(x); the identity for n = 0.
Matrix cocycle_product(const CocycleGenerator& gen, const ShiftPoint& x, int n);

/// A*(x) = transpose of A(f^{-1} x): the generator of the adjoint cocycle,
/// which runs over the inverse shift.
Matrix adjoint_evaluate(const CocycleGenerator& gen, const ShiftPoint& x);

/// (A*)^n(x) over the inverse shift; equals (A^n(f^{-n} x))^T.
Matrix adjoint_product(const CocycleGenerator& gen, const ShiftPoint& x, int n);

/// Uniform view of the cocycles derived from one generator: the forward
/// cocycle, its adjoint over the inverse base map, and exterior powers of
/// either. Spectrum and flag estimators run on views.
class CocycleView {
public:
    static CocycleView forward(const CocycleGenerator& gen);
    static CocycleView adjoint(const CocycleGenerator& gen);
    CocycleView wedge(int j) const;

    int dimension() const;
    bool runs_backward() const { return backward_; }

    /// Generator value at x for this view.
    Matrix eval(const ShiftPoint& x) const;
    /// One application of the view's base map.
    ShiftPoint step(const ShiftPoint& x) const { return x.shifted(backward_ ? -1 : 1); }
    ShiftPoint step_n(const ShiftPoint& x, long n) const {
        return x.shifted(backward_ ? -n : n);
    }

    const CocycleGenerator& generator() const { return *gen_; }

private:
    const CocycleGenerator* gen_ = nullptr;
    bool backward_ = false;
    int wedge_order_ = 0; // 0 = plain
};

} // namespace cocycle

#include "cocycle/generator.hpp"

#include <cmath>

#include "cocycle/exterior.hpp"

namespace cocycle {

namespace {

void check_square_same_size(const std::vector<Matrix>& mats, const char* what) {
    if (mats.empty()) throw ConfigError(std::string(what) + ": no matrices given");
    const auto d = mats.front().rows();
    for (const Matrix& m : mats) {
        if (m.rows() != d || m.cols() != d)
            throw ConfigError(std::string(what) + ": matrices must be square and equally sized");
        if (!m.allFinite())
            throw ConfigError(std::string(what) + ": matrix entries must be finite");
    }
}

double operator_norm(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

} // namespace

CocycleGenerator CocycleGenerator::locally_constant(const SubshiftSpec& spec, int depth,
                                                    std::vector<Matrix> table) {
    if (depth < 1) throw ConfigError("locally constant depth must be >= 1");
    check_square_same_size(table, "locally constant table");
    std::size_t expected = 1;
    for (int i = 0; i < depth; ++i) expected *= static_cast<std::size_t>(spec.alphabet_size());
    if (table.size() != expected)
        throw ConfigError("locally constant table must have alphabet^depth entries");
    CocycleGenerator g;
    g.kind_ = Kind::LocallyConstant;
    g.alphabet_ = spec.alphabet_size();
    g.depth_ = depth;
    g.dimension_ = static_cast<int>(table.front().rows());
    g.table_ = std::move(table);
    // locally constant maps are Hoelder for every exponent; record alpha = 1
    double max_diff = 0.0;
    for (const Matrix& a : g.table_)
        for (const Matrix& b : g.table_) max_diff = std::max(max_diff, operator_norm(a - b));
    g.alpha_ = 1.0;
    g.holder_c2_ = std::ldexp(max_diff, depth);
    return g;
}

CocycleGenerator CocycleGenerator::per_symbol(const SubshiftSpec& spec,
                                              std::vector<Matrix> table) {
    return locally_constant(spec, 1, std::move(table));
}

CocycleGenerator CocycleGenerator::constant(const Matrix& a) {
    static const SubshiftSpec one = SubshiftSpec::full_shift(1);
    return per_symbol(one, {a});
}

CocycleGenerator CocycleGenerator::coordinate_series(const SubshiftSpec& spec,
                                                     std::vector<Matrix> base,
                                                     std::vector<Matrix> perturbation,
                                                     double alpha, int window) {
    if (alpha <= 0.0) throw ConfigError("series Hoelder exponent must be positive");
    if (window < 1) throw ConfigError("series window must be >= 1");
    check_square_same_size(base, "series base");
    check_square_same_size(perturbation, "series perturbation");
    if (base.size() != static_cast<std::size_t>(spec.alphabet_size()) ||
        perturbation.size() != base.size())
        throw ConfigError("series needs one base and one perturbation matrix per symbol");
    if (base.front().rows() != perturbation.front().rows())
        throw ConfigError("series base and perturbation dimensions differ");

    CocycleGenerator g;
    g.kind_ = Kind::CoordinateSeries;
    g.alphabet_ = spec.alphabet_size();
    g.dimension_ = static_cast<int>(base.front().rows());
    g.base_ = std::move(base);
    g.perturbation_ = std::move(perturbation);
    g.alpha_ = alpha;
    g.window_ = window;

    double max_base = 0.0, max_pert = 0.0;
    for (const Matrix& m : g.base_) max_base = std::max(max_base, operator_norm(m));
    for (const Matrix& m : g.perturbation_) max_pert = std::max(max_pert, operator_norm(m));
    // ||A(x) - A(y)|| <= C2 d(x,y)^alpha with this constant, by summing the
    // geometric tails of the series
    g.holder_c2_ = 2.0 * max_base + 4.0 * max_pert / (1.0 - std::pow(2.0, -alpha));
    return g;
}

Matrix CocycleGenerator::evaluate(const ShiftPoint& x) const {
    if (x.alphabet_size() != alphabet_)
        throw ConfigError("point alphabet does not match the generator");
    if (kind_ == Kind::LocallyConstant) {
        const long lo = -(depth_ / 2);
        std::size_t rank = 0;
        for (int i = 0; i < depth_; ++i)
            rank = rank * static_cast<std::size_t>(alphabet_) +
                   static_cast<std::size_t>(x.at(lo + i));
        return table_[rank];
    }
    Matrix a = base_[x.at(0)];
    for (int j = 1; j <= window_; ++j) {
        const double scale = std::pow(2.0, -alpha_ * j);
        a += scale * (perturbation_[x.at(j)] + perturbation_[x.at(-j)]);
    }
    return a;
}

std::pair<long, long> CocycleGenerator::read_window() const {
    if (kind_ == Kind::LocallyConstant) return {-(depth_ / 2), depth_ - depth_ / 2};
    return {-window_, window_ + 1};
}

Matrix cocycle_product(const CocycleGenerator& gen, const ShiftPoint& x, int n) {
    if (n < 0) throw ConfigError("cocycle power must be nonnegative");
    Matrix p = Matrix::Identity(gen.dimension(), gen.dimension());
    ShiftPoint z = x;
    for (int k = 0; k < n; ++k) {
        p = gen.evaluate(z) * p;
        z = z.shifted(1);
    }
    return p;
}

Matrix adjoint_evaluate(const CocycleGenerator& gen, const ShiftPoint& x) {
    return gen.evaluate(x.shifted(-1)).transpose();
}

Matrix adjoint_product(const CocycleGenerator& gen, const ShiftPoint& x, int n) {
    if (n < 0) throw ConfigError("cocycle power must be nonnegative");
    Matrix p = Matrix::Identity(gen.dimension(), gen.dimension());
    ShiftPoint z = x;
    for (int k = 0; k < n; ++k) {
        p = adjoint_evaluate(gen, z) * p;
        z = z.shifted(-1);
    }
    return p;
}

CocycleView CocycleView::forward(const CocycleGenerator& gen) {
    CocycleView v;
    v.gen_ = &gen;
    return v;
}

CocycleView CocycleView::adjoint(const CocycleGenerator& gen) {
    CocycleView v;
    v.gen_ = &gen;
    v.backward_ = true;
    return v;
}

CocycleView CocycleView::wedge(int j) const {
    if (j < 1 || j > gen_->dimension())
        throw ConfigError("wedge order out of range");
    CocycleView v = *this;
    v.wedge_order_ = (j == 1) ? 0 : j;
    return v;
}

int CocycleView::dimension() const {
    const int d = gen_->dimension();
    return wedge_order_ == 0 ? d : static_cast<int>(binomial(d, wedge_order_));
}

Matrix CocycleView::eval(const ShiftPoint& x) const {
    Matrix a = backward_ ? adjoint_evaluate(*gen_, x) : gen_->evaluate(x);
    if (wedge_order_ != 0) a = exterior_power(a, wedge_order_);
    return a;
}

} // namespace cocycle

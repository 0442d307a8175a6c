#pragma once

#include <limits>
#include <vector>

#include "cocycle/errors.hpp"

namespace cocycle {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SpectrumBlock {
    double exponent = 0.0; // kNegInf for the collapsed block
    int multiplicity = 1;
    bool neg_inf() const { return exponent == kNegInf; }
};

/// Decreasing Lyapunov exponents grouped into blocks of equal exponent.
/// At most the last block carries -inf.
class LyapunovSpectrum {
public:
    /// Groups a decreasing list of exponents: consecutive entries merge when
    /// their gap is below `grouping_gap`; -inf entries form the final block.
    static LyapunovSpectrum group(std::vector<double> decreasing, double grouping_gap);

    const std::vector<SpectrumBlock>& blocks() const { return blocks_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int dimension() const { return dimension_; }

    /// Cumulative dimension d_i of the fast sum through block i (1-based).
    int boundary(int i) const;

    /// gamma_k with repeats, k = 0..d-1.
    double exponent(int k) const { return full_[k]; }
    const std::vector<double>& exponents() const { return full_; }

    std::vector<int> multiplicities() const;
    bool same_structure(const LyapunovSpectrum& other) const;
    bool has_neg_inf() const { return !blocks_.empty() && blocks_.back().neg_inf(); }

private:
    std::vector<SpectrumBlock> blocks_;
    std::vector<double> full_;
    int dimension_ = 0;
};

} // namespace cocycle

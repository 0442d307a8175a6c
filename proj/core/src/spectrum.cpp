#include "cocycle/spectrum.hpp"

#include <cmath>
#include <string>

namespace cocycle {

LyapunovSpectrum LyapunovSpectrum::group(std::vector<double> decreasing,
                                         double grouping_gap) {
    if (decreasing.empty()) throw ConfigError("cannot group an empty exponent list");
    for (double g : decreasing)
        if (std::isnan(g)) throw ConfigError("exponent list contains NaN");
    for (std::size_t i = 0; i + 1 < decreasing.size(); ++i)
        if (decreasing[i] < decreasing[i + 1])
            throw ConfigError("exponent list must be decreasing");

    LyapunovSpectrum s;
    s.full_ = std::move(decreasing);
    s.dimension_ = static_cast<int>(s.full_.size());

    double prev = 0.0;
    for (double g : s.full_) {
        bool merge = false;
        if (!s.blocks_.empty()) {
            SpectrumBlock& last = s.blocks_.back();
            // consecutive raw exponents decide the merge, -inf only with -inf
            merge = (last.neg_inf() && g == kNegInf) ||
                    (!last.neg_inf() && g != kNegInf && (prev - g) < grouping_gap);
        }
        if (merge) {
            SpectrumBlock& last = s.blocks_.back();
            last.exponent = last.neg_inf() ? kNegInf
                                           : (last.exponent * last.multiplicity + g) /
                                                 (last.multiplicity + 1);
            ++last.multiplicity;
        } else {
            s.blocks_.push_back({g, 1});
        }
        prev = g;
    }
    return s;
}

int LyapunovSpectrum::boundary(int i) const {
    if (i < 1 || i > block_count())
        throw ConfigError("block index " + std::to_string(i) + " out of range");
    int d = 0;
    for (int k = 0; k < i; ++k) d += blocks_[k].multiplicity;
    return d;
}

std::vector<int> LyapunovSpectrum::multiplicities() const {
    std::vector<int> m;
    m.reserve(blocks_.size());
    for (const auto& b : blocks_) m.push_back(b.multiplicity);
    return m;
}

bool LyapunovSpectrum::same_structure(const LyapunovSpectrum& other) const {
    return multiplicities() == other.multiplicities() &&
           has_neg_inf() == other.has_neg_inf();
}

} // namespace cocycle

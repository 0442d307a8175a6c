#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocycle/errors.hpp"

namespace cocycle {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

Word word_from_string(const std::string& digits);
std::string word_to_string(const Word& w);

/// A subshift of finite type: bi-infinite symbol sequences where the pair
/// (a, b) may occur consecutively iff transitions[a][b] is true.
class SubshiftSpec {
public:
    /// Validates the transition matrix. Every symbol must have at least one
    /// successor and one predecessor; otherwise DeadSymbolError.
    explicit SubshiftSpec(std::vector<std::vector<bool>> transitions);

    /// Full shift on `alphabet` symbols (all transitions allowed).
    static SubshiftSpec full_shift(int alphabet);

    int alphabet_size() const { return alphabet_; }
    bool allowed(Symbol a, Symbol b) const { return transitions_[a][b]; }
    bool irreducible() const { return irreducible_; }
    const std::vector<std::vector<bool>>& transitions() const { return transitions_; }

    bool word_admissible(const Word& w) const;
    bool cyclic_word_admissible(const Word& w) const;

    /// Number of fixed points of the n-th shift power, i.e. trace of the
    /// n-th power of the transition matrix, in exact integer arithmetic.
    std::uint64_t periodic_point_count(int n) const;

    /// All admissible words of the given length.
    std::vector<Word> admissible_words(int length) const;

private:
    int alphabet_ = 0;
    std::vector<std::vector<bool>> transitions_;
    bool irreducible_ = false;
};

/// An eventually periodic two-sided sequence
///   ... L L L | core | R R R ...
/// shifted by `offset`: coordinate j of the point is coordinate j + offset
/// of the pinned representation, whose index 0 sits at the first core
/// symbol (first right-period symbol when the core is empty).
class ShiftPoint {
public:
    ShiftPoint(const SubshiftSpec& spec, Word left_period, Word core, Word right_period,
               long offset = 0);

    /// Coordinate access, total for every integer index.
    Symbol at(long j) const;

    /// The image under the k-th power of the shift map.
    ShiftPoint shifted(long k) const;

    int alphabet_size() const { return alphabet_; }
    const Word& left_period() const { return left_; }
    const Word& core() const { return core_; }
    const Word& right_period() const { return right_; }
    long offset() const { return offset_; }

    /// Indices >= this bound lie in the right periodic tail.
    long right_tail_start() const { return static_cast<long>(core_.size()) - offset_; }
    /// Indices < this bound lie in the left periodic tail.
    long left_tail_end() const { return -offset_; }

    Word window(long lo, long hi) const; // symbols at indices [lo, hi)

private:
    int alphabet_ = 0;
    Word left_, core_, right_;
    long offset_ = 0;
};

/// 2^(-k) where k is the smallest |j| with x_j != y_j; 0 iff equal
/// (decidable for eventually periodic points).
double shift_distance(const ShiftPoint& x, const ShiftPoint& y);

/// A point of least or non-least period n given by an admissible cyclic word.
class PeriodicOrbit {
public:
    PeriodicOrbit(const SubshiftSpec& spec, Word cyclic_word);

    int period() const { return static_cast<int>(word_.size()); }
    const Word& word() const { return word_; }
    int alphabet_size() const { return alphabet_; }

    /// The orbit point f^t(p) as a ShiftPoint.
    ShiftPoint point_at(const SubshiftSpec& spec, int t = 0) const;

    /// Lexicographically smallest rotation of the word.
    Word canonical_rotation() const;

private:
    int alphabet_ = 0;
    Word word_;
};

/// Deterministic admissible continuation of a symbol: the pre-cycle bridge
/// and the cycle reached by always taking the first allowed successor
/// (predecessor when forward is false). Both exclude the start symbol and
/// are in walk order.
struct TailWords {
    Word bridge;
    Word period;
};
TailWords admissible_continuation(const SubshiftSpec& spec, Symbol start, bool forward);

struct EnumerateOptions {
    bool dedupe_rotations = false;          // one representative per orbit
    std::uint64_t cap = 4'000'000;          // EnumerationOverflowError above this
};

/// All fixed points of f^n (all admissible cyclic words of length n),
/// sorted lexicographically. With dedupe_rotations, one representative per
/// orbit (the lexicographically smallest rotation).
std::vector<PeriodicOrbit> enumerate_periodic(const SubshiftSpec& spec, int n,
                                              const EnumerateOptions& opts = {});

struct ClosingParams {
    double c1 = 1.0;
    double theta = 0.6931471805599453; // ln 2
    double eps0 = 0.5;
};

/// Periodizes the first n coordinates of a near-returning point and checks
/// the exponential shadowing inequality
///   d(f^j z, f^j p) <= C1 exp(-theta min(j, n-j)) d(f^n z, z),  j = 0..n.
/// Requires d(f^n x, x) < eps0 and an admissible wrap for the cyclic word.
PeriodicOrbit anosov_close(const SubshiftSpec& spec, const ShiftPoint& x, int n,
                           const ClosingParams& params = {});

} // namespace cocycle

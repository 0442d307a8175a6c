#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cocycle/generator.hpp"
#include "cocycle/measure.hpp"
#include "cocycle/spectrum.hpp"
#include "cocycle/subspace.hpp"

namespace cocycle {

struct EstimatorParams {
    int qr_block = 16;           // re-orthonormalize every this many steps
    double grouping_gap = 0.05;  // block detection threshold on exponents
    double floor = -30.0;        // exponents below this report -inf
    double intersect_tol = 1e-3; // principal-angle cutoff for E^j recovery
    double min_gap_ratio = 10.0; // sigma_{d_i}/sigma_{d_i+1} below this fails
    unsigned threads = 1;        // Monte-Carlo worker count
};

/// Overflow-safe factorization of an n-step cocycle product
///   P = Q diag(exp(l)) T
/// with Q orthogonal, l the accumulated log scales (entries may be -inf)
/// and T upper triangular with unit-modulus diagonal, built by blocked QR.
class ProductFactorization {
public:
    static ProductFactorization accumulate_from(const CocycleView& view,
                                                const ShiftPoint& x, int n,
                                                int qr_block = 16);
    static ProductFactorization accumulate_ending_at(const CocycleView& view,
                                                     const ShiftPoint& x, int n,
                                                     int qr_block = 16);

    int dimension() const { return static_cast<int>(log_scales_.size()); }
    int steps() const { return steps_; }
    const Matrix& q() const { return q_; }
    const Vector& log_scales() const { return log_scales_; }

    /// log singular values of the accumulated product, descending, -inf for
    /// collapsed directions. Exact SVD refinement when the scale spread is
    /// small enough to be representable, QR diagonal sums otherwise.
    std::vector<double> log_singular_values() const;

    /// Span of the top-k left singular directions of the product.
    Subspace top_left_subspace(int k) const;

    /// sigma_k / sigma_{k+1} estimated from the accumulated scales.
    double gap_ratio(int k) const;

private:
    void push_block(const Matrix& block, bool exact_kernel);
    void finalize();

    Matrix q_, t_;
    Vector log_scales_;
    int steps_ = 0;
    int block_size_ = 16;
    Matrix pending_;
    int pending_count_ = 0;
    bool pending_kernel_ = false;

    // sorted view, built by finalize()
    std::vector<int> order_;
    bool small_spread_ = false;
    Matrix small_u_;       // left singular vectors of the scaled product
    Vector small_log_sv_;  // log singular values, descending
};

/// Estimated Lyapunov spectrum of the n-step product at x: grouped
/// (1/n) log sigma_k with -inf below the floor.
LyapunovSpectrum finite_time_spectrum(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, const EstimatorParams& params = {});
LyapunovSpectrum finite_time_spectrum(const CocycleView& view, const ShiftPoint& x,
                                      int n, const EstimatorParams& params = {});

struct ErgodicSpectrum {
    LyapunovSpectrum spectrum;        // grouped mean exponents
    std::vector<double> exponents;    // mean gamma_k, k = 1..d
    std::vector<double> std_errors;   // per exponent; 0 for -inf entries
    int samples = 0;
    int horizon = 0;
};

/// Monte-Carlo mean of finite-time spectra over points sampled from the
/// measure. Throws InconsistentBlockStructureError when samples disagree on
/// the block structure at the configured gap.
ErgodicSpectrum ergodic_spectrum(const CocycleView& view, const SubshiftSpec& spec,
                                 const MarkovMeasure& measure, int n, int samples,
                                 std::uint64_t seed, const EstimatorParams& params = {});
ErgodicSpectrum ergodic_spectrum(const CocycleGenerator& gen, const SubshiftSpec& spec,
                                 const MarkovMeasure& measure, int n, int samples,
                                 std::uint64_t seed, const EstimatorParams& params = {});

struct ProjectiveRun {
    double exponent = 0.0;
    int restarts = 0;
    int steps_used = 0;
};

/// Birkhoff average of log ||A(x_k) v_k|| along the projective iteration
/// v -> A v / ||A v||. When the image collapses (relative to ||A||), the
/// direction restarts from a seeded random unit vector and the accumulation
/// begins again; the restart count is reported. Throws
/// AllDirectionsCollapsedError when no direction survives.
ProjectiveRun top_exponent_projective(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, std::uint64_t seed,
                                      std::optional<Vector> initial = std::nullopt);

/// Fast flag E^{u_1} subset ... subset E^{u_{l-1}} at x from the left
/// singular subspaces of the n-step product ending at x.
std::vector<Subspace> fast_flag(const CocycleGenerator& gen, const ShiftPoint& x,
                                const LyapunovSpectrum& spectrum, int n,
                                const EstimatorParams& params = {});

/// Slow flag E^{s_1} superset ... superset E^{s_{l-1}} at x: orthogonal
/// complements of the adjoint cocycle's fast flag at x.
std::vector<Subspace> slow_flag(const CocycleGenerator& gen, const ShiftPoint& x,
                                const LyapunovSpectrum& spectrum, int n,
                                const EstimatorParams& params = {});

struct SplittingEstimate {
    LyapunovSpectrum spectrum;
    std::vector<Subspace> spaces;     // E^1 ... E^l
    std::vector<Subspace> fast;       // E^{u_1} ... E^{u_{l-1}}
    std::vector<Subspace> slow;       // E^{s_1} ... E^{s_{l-1}}
    int horizon = 0;
    double equivariance_defect = -1.0; // -1 when not computed
    double duality_defect = -1.0;
};

struct SplittingOptions {
    bool compute_equivariance = true;
    bool compute_duality = true;
};

/// Full splitting estimate at x: spectrum, both flags, and the individual
/// spaces E^j = E^{u_j} cap E^{s_{j-1}} recovered by tolerant intersection
/// (E^1 and E^l are flag ends and need no intersection).
SplittingEstimate oseledets_splitting(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, const EstimatorParams& params = {},
                                      const SplittingOptions& opts = {});

/// max over finite blocks of angle(A(x) E^j_x, E^j_{f x}); the -inf block
/// contributes the directed distance of its (possibly collapsed) image only.
double equivariance_defect(const CocycleGenerator& gen, const ShiftPoint& x, int n,
                           const EstimatorParams& params = {});

struct PeriodicData {
    PeriodicOrbit orbit;
    LyapunovSpectrum spectrum;              // exponents (1/n) log |eigenvalue|
    std::vector<std::vector<Subspace>> spaces; // [orbit point t][block j]

    int period() const { return orbit.period(); }
    const Subspace& space(int t, int j) const { return spaces[t][j]; }
    Subspace fast_sum(int t, int j) const;  // F^{u_j} at f^t(p)
    Subspace slow_sum(int t, int j) const;  // F^{s_j} at f^t(p)
};

/// Exact per-orbit data: eigenvalues of the cyclic product grouped by
/// modulus on the exponent scale, with the real invariant subspace of each
/// group recomputed at every orbit point from its own cyclic product.
PeriodicData periodic_data(const SubshiftSpec& spec, const CocycleGenerator& gen,
                           const PeriodicOrbit& p, double grouping_gap = 0.05);

struct ExteriorCheck {
    ErgodicSpectrum wedge_spectrum;        // spectrum of the j-th wedge cocycle
    std::vector<double> reconstructed;     // j-fold sums of base exponents, descending
    double top_space_angle = -1.0;         // wedge top space vs plucker(E^{u_j});
                                           // -1 when j is not a block boundary
};

/// Runs the induced exterior-power cocycle and compares its spectrum with
/// the j-fold sums of the base spectrum; when j is a fast-flag boundary also
/// compares the wedge top space with the Pluecker image of E^{u_j}.
ExteriorCheck exterior_spectrum_check(const CocycleGenerator& gen, const SubshiftSpec& spec,
                                      const MarkovMeasure& measure, int j, int n,
                                      int samples, std::uint64_t seed,
                                      const EstimatorParams& params = {});

} // namespace cocycle

#include "cocycle/oseledets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cocycle/exterior.hpp"
#include "cocycle/parallel.hpp"

namespace cocycle {

namespace {

// Log-scale spread below which the product is representable after a single
// common rescaling, so exact singular values are available.
constexpr double kSmallSpread = 30.0;

constexpr double kBlockFlushNorm = 1e120;

} // namespace

ProductFactorization ProductFactorization::accumulate_from(const CocycleView& view,
                                                           const ShiftPoint& x, int n,
                                                           int qr_block) {
    if (n < 0) throw ConfigError("product length must be nonnegative");
    const int d = view.dimension();
    ProductFactorization f;
    f.q_ = Matrix::Identity(d, d);
    f.t_ = Matrix::Identity(d, d);
    f.log_scales_ = Vector::Zero(d);
    f.block_size_ = std::max(qr_block, 1);
    f.pending_ = Matrix::Identity(d, d);

    ShiftPoint z = x;
    for (int k = 0; k < n; ++k) {
        const Matrix a = view.eval(z);
        // an exactly singular factor certifies collapsed directions in this
        // block, which would otherwise drown in roundoff
        if (d <= 4 && a.determinant() == 0.0) f.pending_kernel_ = true;
        f.pending_ = a * f.pending_;
        ++f.pending_count_;
        ++f.steps_;
        if (f.pending_count_ >= f.block_size_ ||
            f.pending_.cwiseAbs().maxCoeff() > kBlockFlushNorm) {
            f.push_block(f.pending_, f.pending_kernel_);
            f.pending_ = Matrix::Identity(d, d);
            f.pending_count_ = 0;
            f.pending_kernel_ = false;
        }
        z = view.step(z);
    }
    if (f.pending_count_ > 0) {
        f.push_block(f.pending_, f.pending_kernel_);
        f.pending_ = Matrix::Identity(d, d);
        f.pending_count_ = 0;
        f.pending_kernel_ = false;
    }
    f.finalize();
    return f;
}

ProductFactorization ProductFactorization::accumulate_ending_at(const CocycleView& view,
                                                                const ShiftPoint& x, int n,
                                                                int qr_block) {
    return accumulate_from(view, view.step_n(x, -n), n, qr_block);
}

void ProductFactorization::push_block(const Matrix& block, bool exact_kernel) {
    const int d = dimension();
    const Matrix w = block * q_;

    Eigen::HouseholderQR<Matrix> qr(w);
    Matrix qn = qr.householderQ();
    Matrix r = qn.transpose() * w; // upper triangular up to roundoff
    for (int i = 0; i < d; ++i) {
        if (r(i, i) < 0.0) {
            r.row(i) = -r.row(i);
            qn.col(i) = -qn.col(i);
        }
        for (int j = 0; j < i; ++j) r(i, j) = 0.0;
    }
    if (exact_kernel) {
        // rows at roundoff level are images of certified kernel directions
        const double cut = 32.0 * d * std::numeric_limits<double>::epsilon() * w.norm();
        for (int i = 0; i < d; ++i)
            if (r.row(i).cwiseAbs().maxCoeff() <= cut) r.row(i).setZero();
    }
    q_ = qn;

    // New trailing factor: rows of R diag(exp(l)) T, rescaled row by row so
    // entries stay representable. Row i's scale is tracked in log form.
    Matrix t_new = Matrix::Zero(d, d);
    Vector l_new(d);
    for (int i = 0; i < d; ++i) {
        double mu = kNegInf;
        for (int j = i; j < d; ++j) {
            if (r(i, j) != 0.0 && log_scales_(j) != kNegInf)
                mu = std::max(mu, std::log(std::abs(r(i, j))) + log_scales_(j));
        }
        if (mu == kNegInf) {
            l_new(i) = kNegInf;
            t_new(i, i) = 1.0; // placeholder row; its scale is zero
            continue;
        }
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d);
        for (int j = i; j < d; ++j) {
            if (r(i, j) == 0.0 || log_scales_(j) == kNegInf) continue;
            row += r(i, j) * std::exp(log_scales_(j) - mu) * t_.row(j);
        }
        const double row_max = row.cwiseAbs().maxCoeff();
        const double diag = std::abs(row(i));
        const double delta = (diag >= 0.5 * row_max && diag > 0.0) ? diag : row_max;
        if (delta == 0.0) {
            l_new(i) = kNegInf;
            t_new(i, i) = 1.0;
            continue;
        }
        l_new(i) = mu + std::log(delta);
        t_new.row(i) = row / delta;
    }
    log_scales_ = l_new;
    t_ = t_new;
}

void ProductFactorization::finalize() {
    const int d = dimension();
    order_.resize(d);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
        const double la = log_scales_(a), lb = log_scales_(b);
        if (la == lb) return a < b;
        if (la == kNegInf) return false;
        if (lb == kNegInf) return true;
        return la > lb;
    });

    double lmax = kNegInf, lmin = kNegInf;
    bool any_inf = false;
    for (int i = 0; i < d; ++i) {
        if (log_scales_(i) == kNegInf) { any_inf = true; continue; }
        if (lmax == kNegInf || log_scales_(i) > lmax) lmax = log_scales_(i);
        if (lmin == kNegInf || log_scales_(i) < lmin) lmin = log_scales_(i);
    }
    small_spread_ = !any_inf && lmax != kNegInf && (lmax - lmin) <= kSmallSpread;
    if (steps_ == 0) small_spread_ = true; // identity product

    if (!small_spread_) return;

    Matrix scaled = Matrix::Zero(d, d);
    const double base = (lmax == kNegInf) ? 0.0 : lmax;
    for (int i = 0; i < d; ++i)
        scaled.row(i) = std::exp(log_scales_(i) - base) * t_.row(i);
    Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeFullU);
    small_u_ = svd.matrixU();
    small_log_sv_.resize(d);
    for (int i = 0; i < d; ++i) {
        const double s = svd.singularValues()(i);
        small_log_sv_(i) = s > 0.0 ? base + std::log(s) : kNegInf;
    }
}

std::vector<double> ProductFactorization::log_singular_values() const {
    const int d = dimension();
    std::vector<double> out(d);
    if (small_spread_) {
        for (int i = 0; i < d; ++i) out[i] = small_log_sv_(i);
    } else {
        for (int i = 0; i < d; ++i) out[i] = log_scales_(order_[i]);
    }
    return out;
}

Subspace ProductFactorization::top_left_subspace(int k) const {
    const int d = dimension();
    if (k < 1 || k > d) throw ConfigError("left subspace order out of range");
    if (small_spread_) return Subspace::from_orthonormal(q_ * small_u_.leftCols(k));
    Matrix cols(d, k);
    for (int i = 0; i < k; ++i) cols.col(i) = q_.col(order_[i]);
    return Subspace::from_orthonormal(std::move(cols));
}

double ProductFactorization::gap_ratio(int k) const {
    const auto lsv = log_singular_values();
    if (k < 1 || k >= dimension()) throw ConfigError("gap index out of range");
    const double hi = lsv[k - 1], lo = lsv[k];
    if (hi == kNegInf) return 1.0;
    if (lo == kNegInf) return std::numeric_limits<double>::infinity();
    return std::exp(hi - lo);
}

LyapunovSpectrum finite_time_spectrum(const CocycleView& view, const ShiftPoint& x,
                                      int n, const EstimatorParams& params) {
    if (n < 1) throw ConfigError("spectrum horizon must be >= 1");
    const auto fact = ProductFactorization::accumulate_from(view, x, n, params.qr_block);
    const auto lsv = fact.log_singular_values();
    std::vector<double> exps(lsv.size());
    for (std::size_t k = 0; k < lsv.size(); ++k) {
        const double e = lsv[k] == kNegInf ? kNegInf : lsv[k] / n;
        exps[k] = (e < params.floor) ? kNegInf : e;
    }
    return LyapunovSpectrum::group(std::move(exps), params.grouping_gap);
}

LyapunovSpectrum finite_time_spectrum(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, const EstimatorParams& params) {
    return finite_time_spectrum(CocycleView::forward(gen), x, n, params);
}

namespace {

long sampling_horizon(const CocycleView& view, int n) {
    const auto [lo, hi] = view.generator().read_window();
    return n + std::max(std::abs(lo), std::abs(hi)) + 2;
}

} // namespace

ErgodicSpectrum ergodic_spectrum(const CocycleView& view, const SubshiftSpec& spec,
                                 const MarkovMeasure& measure, int n, int samples,
                                 std::uint64_t seed, const EstimatorParams& params) {
    if (samples < 1) throw ConfigError("sample count must be >= 1");
    const int d = view.dimension();
    const long horizon = sampling_horizon(view, n);

    std::vector<std::vector<double>> per_sample(samples);
    std::vector<std::vector<int>> structures(samples);
    parallel_for(static_cast<std::size_t>(samples), params.threads, [&](std::size_t s) {
        const ShiftPoint x =
            sample_point(spec, measure, horizon, mix_seed(seed, s));
        const LyapunovSpectrum sp = finite_time_spectrum(view, x, static_cast<int>(n), params);
        per_sample[s] = sp.exponents();
        structures[s] = sp.multiplicities();
        structures[s].push_back(sp.has_neg_inf() ? 1 : 0);
    });

    for (int s = 1; s < samples; ++s) {
        if (structures[s] != structures[0])
            throw InconsistentBlockStructureError(
                "sample " + std::to_string(s) +
                " disagrees on the block structure; raise the horizon or adjust the gap");
    }

    ErgodicSpectrum out;
    out.samples = samples;
    out.horizon = n;
    out.exponents.assign(d, 0.0);
    out.std_errors.assign(d, 0.0);
    for (int k = 0; k < d; ++k) {
        bool inf = false;
        double mean = 0.0;
        for (int s = 0; s < samples; ++s) {
            if (per_sample[s][k] == kNegInf) { inf = true; break; }
            mean += per_sample[s][k];
        }
        if (inf) {
            out.exponents[k] = kNegInf;
            continue;
        }
        mean /= samples;
        double var = 0.0;
        for (int s = 0; s < samples; ++s) {
            const double dev = per_sample[s][k] - mean;
            var += dev * dev;
        }
        out.exponents[k] = mean;
        out.std_errors[k] =
            samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
    }
    out.spectrum = LyapunovSpectrum::group(out.exponents, params.grouping_gap);
    return out;
}

ErgodicSpectrum ergodic_spectrum(const CocycleGenerator& gen, const SubshiftSpec& spec,
                                 const MarkovMeasure& measure, int n, int samples,
                                 std::uint64_t seed, const EstimatorParams& params) {
    return ergodic_spectrum(CocycleView::forward(gen), spec, measure, n, samples, seed,
                            params);
}

namespace {

Vector random_unit_vector(int d, std::mt19937_64& rng) {
    // Box-Muller over our own uniforms keeps the draw platform-stable
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        double u1 = uniform01(rng());
        const double u2 = uniform01(rng());
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        v(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    const double norm = v.norm();
    if (norm == 0.0) {
        v.setZero();
        v(0) = 1.0;
        return v;
    }
    return v / norm;
}

} // namespace

ProjectiveRun top_exponent_projective(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, std::uint64_t seed,
                                      std::optional<Vector> initial) {
    if (n < 1) throw ConfigError("projective horizon must be >= 1");
    const int d = gen.dimension();
    std::mt19937_64 rng(mix_seed(seed, 0x70726f6aULL));
    Vector v = initial.value_or(random_unit_vector(d, rng));
    if (v.norm() == 0.0) throw ZeroVectorError("initial direction must be nonzero");
    v.normalize();

    const int max_restarts = 8 * d + 8;
    ProjectiveRun run;
    double sum = 0.0;
    int steps = 0;
    ShiftPoint z = x;
    int k = 0;
    while (k < n) {
        const Matrix a = gen.evaluate(z);
        const Vector w = a * v;
        const double wn = w.norm();
        if (wn < 1e-14 * std::max(a.norm(), 1e-300)) {
            // kernel event: the summand is -inf; restart from a fresh
            // direction and estimate from the surviving tail
            ++run.restarts;
            if (run.restarts > max_restarts)
                throw AllDirectionsCollapsedError(
                    "every direction collapsed within the horizon; top exponent is -inf");
            v = random_unit_vector(d, rng);
            sum = 0.0;
            steps = 0;
            continue; // retry the same step with the new direction
        }
        sum += std::log(wn);
        ++steps;
        v = w / wn;
        z = z.shifted(1);
        ++k;
    }
    if (steps == 0)
        throw AllDirectionsCollapsedError("no surviving steps in the projective run");
    run.exponent = sum / steps;
    run.steps_used = steps;
    return run;
}

std::vector<Subspace> fast_flag(const CocycleGenerator& gen, const ShiftPoint& x,
                                const LyapunovSpectrum& spectrum, int n,
                                const EstimatorParams& params) {
    if (n < 1) throw ConfigError("flag horizon must be >= 1");
    const auto fact = ProductFactorization::accumulate_ending_at(
        CocycleView::forward(gen), x, n, params.qr_block);
    std::vector<Subspace> flag;
    for (int i = 1; i < spectrum.block_count(); ++i) {
        const int k = spectrum.boundary(i);
        if (fact.gap_ratio(k) < params.min_gap_ratio)
            throw SpectralGapError("singular value ratio at boundary " + std::to_string(k) +
                                   " is below " + std::to_string(params.min_gap_ratio) +
                                   "; raise the horizon");
        flag.push_back(fact.top_left_subspace(k));
    }
    return flag;
}

std::vector<Subspace> slow_flag(const CocycleGenerator& gen, const ShiftPoint& x,
                                const LyapunovSpectrum& spectrum, int n,
                                const EstimatorParams& params) {
    if (n < 1) throw ConfigError("flag horizon must be >= 1");
    const auto fact = ProductFactorization::accumulate_ending_at(
        CocycleView::adjoint(gen), x, n, params.qr_block);
    std::vector<Subspace> flag;
    for (int i = 1; i < spectrum.block_count(); ++i) {
        const int k = spectrum.boundary(i);
        if (fact.gap_ratio(k) < params.min_gap_ratio)
            throw SpectralGapError("adjoint singular value ratio at boundary " +
                                   std::to_string(k) + " is below " +
                                   std::to_string(params.min_gap_ratio) +
                                   "; raise the horizon");
        flag.push_back(orthogonal_complement(fact.top_left_subspace(k)));
    }
    return flag;
}

namespace {

double block_image_angle(const Matrix& a, const Subspace& space, const Subspace& target,
                         bool containment_only) {
    const Matrix image_raw = a * space.basis();
    const Subspace image(image_raw);
    if (image.is_zero()) return 0.0; // collapsed image is trivially contained
    if (containment_only || image.dimension() < space.dimension()) {
        return std::asin(std::min(directed_distance(image, target), 1.0));
    }
    return subspace_angle(image, target);
}

SplittingEstimate splitting_impl(const CocycleGenerator& gen, const ShiftPoint& x, int n,
                                 const EstimatorParams& params,
                                 const SplittingOptions& opts);

double defect_against_shifted(const CocycleGenerator& gen, const ShiftPoint& x,
                              const SplittingEstimate& here, int n,
                              const EstimatorParams& params) {
    SplittingOptions bare{false, false};
    const SplittingEstimate next = splitting_impl(gen, x.shifted(1), n, params, bare);
    if (!next.spectrum.same_structure(here.spectrum))
        return std::numeric_limits<double>::quiet_NaN();
    const Matrix a = gen.evaluate(x);
    double defect = 0.0;
    const int l = here.spectrum.block_count();
    for (int j = 0; j < l; ++j) {
        const bool neg_inf_block = here.spectrum.blocks()[j].neg_inf();
        defect = std::max(defect, block_image_angle(a, here.spaces[j], next.spaces[j],
                                                    neg_inf_block));
    }
    return defect;
}

SplittingEstimate splitting_impl(const CocycleGenerator& gen, const ShiftPoint& x, int n,
                                 const EstimatorParams& params,
                                 const SplittingOptions& opts) {
    SplittingEstimate est;
    est.horizon = n;
    est.spectrum = finite_time_spectrum(gen, x, n, params);
    const int l = est.spectrum.block_count();
    const int d = est.spectrum.dimension();

    for (int j = 0; j + 1 < l; ++j) {
        if (est.spectrum.blocks()[j].neg_inf())
            throw DimensionMismatchError("only the last block may carry -inf");
    }

    if (l == 1) {
        est.spaces.push_back(Subspace::full(d));
    } else {
        est.fast = fast_flag(gen, x, est.spectrum, n, params);
        est.slow = slow_flag(gen, x, est.spectrum, n, params);
        est.spaces.push_back(est.fast.front());
        for (int j = 2; j <= l - 1; ++j) {
            Subspace ej = intersect_subspaces(est.fast[j - 1], est.slow[j - 2],
                                              params.intersect_tol);
            const int want = est.spectrum.blocks()[j - 1].multiplicity;
            if (ej.dimension() != want)
                throw DimensionMismatchError(
                    "intersection at block " + std::to_string(j) + " has dimension " +
                    std::to_string(ej.dimension()) + ", expected " + std::to_string(want) +
                    "; raise the horizon or loosen the intersection tolerance");
            est.spaces.push_back(std::move(ej));
        }
        est.spaces.push_back(est.slow.back());
    }

    int total = 0;
    for (const Subspace& s : est.spaces) total += s.dimension();
    if (total != d && !est.spectrum.has_neg_inf())
        throw DimensionMismatchError("splitting dimensions sum to " + std::to_string(total) +
                                     " instead of " + std::to_string(d));

    if (opts.compute_equivariance)
        est.equivariance_defect = defect_against_shifted(gen, x, est, n, params);

    if (opts.compute_duality && l >= 2) {
        const auto far = slow_flag(gen, x, est.spectrum, 2 * n, params);
        double defect = 0.0;
        for (std::size_t i = 0; i < est.slow.size(); ++i)
            defect = std::max(defect, subspace_angle(est.slow[i], far[i]));
        est.duality_defect = defect;
    } else if (opts.compute_duality) {
        est.duality_defect = 0.0;
    }
    return est;
}

} // namespace

SplittingEstimate oseledets_splitting(const CocycleGenerator& gen, const ShiftPoint& x,
                                      int n, const EstimatorParams& params,
                                      const SplittingOptions& opts) {
    return splitting_impl(gen, x, n, params, opts);
}

double equivariance_defect(const CocycleGenerator& gen, const ShiftPoint& x, int n,
                           const EstimatorParams& params) {
    SplittingOptions opts{true, false};
    return oseledets_splitting(gen, x, n, params, opts).equivariance_defect;
}

namespace {

struct EigenGroup {
    std::vector<std::complex<double>> values; // members, conjugates included
    double exponent;                          // (1/n) log modulus, -inf for zero
    int multiplicity;
};

std::vector<EigenGroup> group_eigenvalues(const Eigen::VectorXcd& eig, int n,
                                          double grouping_gap) {
    const int d = static_cast<int>(eig.size());
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> exps(d);
    double scale = 0.0;
    for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(eig(i)));
    for (int i = 0; i < d; ++i) {
        const double m = std::abs(eig(i));
        // eigenvalues indistinguishable from zero at working precision are
        // exact zeros of the cyclic product
        exps[i] = (m <= 1e-13 * std::max(scale, 1e-300)) ? kNegInf : std::log(m) / n;
    }
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (exps[a] == exps[b]) return a < b;
        if (exps[a] == kNegInf) return false;
        if (exps[b] == kNegInf) return true;
        return exps[a] > exps[b];
    });

    std::vector<EigenGroup> groups;
    for (int r = 0; r < d; ++r) {
        const int i = idx[r];
        const bool merge =
            !groups.empty() &&
            ((groups.back().exponent == kNegInf && exps[i] == kNegInf) ||
             (groups.back().exponent != kNegInf && exps[i] != kNegInf &&
              exps[idx[r - 1]] - exps[i] < grouping_gap));
        if (merge) {
            groups.back().values.push_back(eig(i));
            ++groups.back().multiplicity;
        } else {
            groups.push_back({{eig(i)}, exps[i], 1});
        }
    }
    // a chain of near-ties that spans more than the gap is ambiguous
    for (const auto& g : groups) {
        if (g.exponent == kNegInf) continue;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& v : g.values) {
            const double e = std::log(std::abs(v)) / n;
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        if (hi - lo >= grouping_gap)
            throw ModulusTieError("eigenvalue moduli straddle the grouping gap");
    }
    return groups;
}

// Real polynomial in B annihilating every group except `keep`; its range is
// the invariant subspace of the kept group.
Subspace group_space(const Matrix& b, const std::vector<EigenGroup>& groups,
                     std::size_t keep) {
    const int d = static_cast<int>(b.rows());
    Matrix p = Matrix::Identity(d, d);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g == keep) continue;
        std::vector<std::complex<double>> todo = groups[g].values;
        std::vector<bool> used(todo.size(), false);
        const double imag_tol = 1e-9;
        for (std::size_t i = 0; i < todo.size(); ++i) {
            if (used[i]) continue;
            const auto v = todo[i];
            if (std::abs(v.imag()) <= imag_tol * std::max(1.0, std::abs(v))) {
                p = (b - v.real() * Matrix::Identity(d, d)) * p;
            } else {
                // pair with the nearest conjugate and use the real quadratic
                std::size_t mate = i;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t k = i + 1; k < todo.size(); ++k) {
                    if (used[k]) continue;
                    const double err = std::abs(todo[k] - std::conj(v));
                    if (err < best) { best = err; mate = k; }
                }
                used[mate] = true;
                p = (b * b - 2.0 * v.real() * b +
                     std::norm(v) * Matrix::Identity(d, d)) *
                    p;
            }
            used[i] = true;
            const double pn = p.norm();
            if (pn > 0.0) p /= pn;
        }
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(p);
    const Matrix q = qr.householderQ();
    return Subspace(q.leftCols(groups[keep].multiplicity));
}

} // namespace

Subspace PeriodicData::fast_sum(int t, int j) const {
    Subspace s = spaces[t][0];
    for (int i = 1; i < j; ++i) s = s.sum(spaces[t][i]);
    return s;
}

Subspace PeriodicData::slow_sum(int t, int j) const {
    const int l = static_cast<int>(spaces[t].size());
    if (j >= l) return Subspace::zero(spaces[t][0].ambient_dimension());
    Subspace s = spaces[t][j];
    for (int i = j + 1; i < l; ++i) s = s.sum(spaces[t][i]);
    return s;
}

PeriodicData periodic_data(const SubshiftSpec& spec, const CocycleGenerator& gen,
                           const PeriodicOrbit& p, double grouping_gap) {
    const int n = p.period();

    const Matrix b0 = cocycle_product(gen, p.point_at(spec, 0), n);
    Eigen::EigenSolver<Matrix> es0(b0);
    const auto groups0 = group_eigenvalues(es0.eigenvalues(), n, grouping_gap);

    std::vector<double> exps;
    for (const auto& g : groups0)
        for (int i = 0; i < g.multiplicity; ++i) exps.push_back(g.exponent);
    LyapunovSpectrum spectrum = LyapunovSpectrum::group(exps, grouping_gap);
    if (static_cast<int>(groups0.size()) != spectrum.block_count())
        throw ModulusTieError("eigenvalue grouping is ambiguous for this orbit");

    PeriodicData data{p, std::move(spectrum), {}};
    data.spaces.resize(n);
    for (int t = 0; t < n; ++t) {
        const Matrix bt = t == 0 ? b0 : cocycle_product(gen, p.point_at(spec, t), n);
        Eigen::EigenSolver<Matrix> es(bt);
        const auto groups = group_eigenvalues(es.eigenvalues(), n, grouping_gap);
        if (groups.size() != groups0.size())
            throw ModulusTieError("orbit points disagree on the modulus grouping");
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].multiplicity != groups0[g].multiplicity)
                throw ModulusTieError("orbit points disagree on the modulus grouping");
        }
        data.spaces[t].reserve(groups.size());
        // for the zero-modulus group the annihilator of the other groups has
        // the generalized null space as its range, so one construction covers
        // finite and collapsed blocks alike
        for (std::size_t g = 0; g < groups.size(); ++g)
            data.spaces[t].push_back(group_space(bt, groups, g));
        if (static_cast<int>(data.spaces[t].size()) != data.spectrum.block_count())
            throw ModulusTieError("group count changed along the orbit");
    }
    return data;
}

ExteriorCheck exterior_spectrum_check(const CocycleGenerator& gen, const SubshiftSpec& spec,
                                      const MarkovMeasure& measure, int j, int n,
                                      int samples, std::uint64_t seed,
                                      const EstimatorParams& params) {
    if (j < 1 || j > gen.dimension()) throw ConfigError("wedge order out of range");
    const CocycleView base_view = CocycleView::forward(gen);
    const CocycleView wedge_view = base_view.wedge(j);

    ExteriorCheck out;
    const ErgodicSpectrum base =
        ergodic_spectrum(base_view, spec, measure, n, samples, seed, params);
    out.wedge_spectrum =
        ergodic_spectrum(wedge_view, spec, measure, n, samples, seed, params);

    // multiset of j-fold sums of the base exponents
    const auto tuples = wedge_basis_indices(gen.dimension(), j);
    for (const auto& tuple : tuples) {
        double sum = 0.0;
        for (int idx : tuple) {
            if (base.exponents[idx] == kNegInf) { sum = kNegInf; break; }
            sum += base.exponents[idx];
        }
        out.reconstructed.push_back(sum);
    }
    std::sort(out.reconstructed.begin(), out.reconstructed.end(), std::greater<>());

    // top induced space vs the Pluecker image of the matching fast space
    for (int i = 1; i <= base.spectrum.block_count(); ++i) {
        if (base.spectrum.boundary(i) != j) continue;
        const ShiftPoint x =
            sample_point(spec, measure, sampling_horizon(base_view, n), mix_seed(seed, 77));
        const auto fact = ProductFactorization::accumulate_ending_at(
            base_view, x, n, params.qr_block);
        const Subspace eu = fact.top_left_subspace(j);
        const auto wfact = ProductFactorization::accumulate_ending_at(
            wedge_view, x, n, params.qr_block);
        const Subspace wedge_top = wfact.top_left_subspace(1);
        out.top_space_angle =
            projective_sine_distance(plucker(eu), wedge_top.basis().col(0));
        break;
    }
    return out;
}

} // namespace cocycle

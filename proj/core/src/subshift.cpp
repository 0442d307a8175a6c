#include "cocycle/subshift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cocycle {

Word word_from_string(const std::string& digits) {
    Word w;
    w.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c > '9') throw ConfigError("word symbols must be digits: " + digits);
        w.push_back(static_cast<Symbol>(c - '0'));
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol a : w) s.push_back(static_cast<char>('0' + a));
    return s;
}

SubshiftSpec::SubshiftSpec(std::vector<std::vector<bool>> transitions)
    : transitions_(std::move(transitions)) {
    alphabet_ = static_cast<int>(transitions_.size());
    if (alphabet_ < 1) throw ConfigError("transition matrix must have size >= 1");
    for (const auto& row : transitions_)
        if (static_cast<int>(row.size()) != alphabet_)
            throw ConfigError("transition matrix must be square");

    for (int a = 0; a < alphabet_; ++a) {
        bool has_succ = false, has_pred = false;
        for (int b = 0; b < alphabet_; ++b) {
            has_succ = has_succ || transitions_[a][b];
            has_pred = has_pred || transitions_[b][a];
        }
        if (!has_succ)
            throw DeadSymbolError("symbol " + std::to_string(a) + " has no successor");
        if (!has_pred)
            throw DeadSymbolError("symbol " + std::to_string(a) + " has no predecessor");
    }

    // reachability closure
    auto reach = transitions_;
    for (int k = 0; k < alphabet_; ++k)
        for (int i = 0; i < alphabet_; ++i)
            if (reach[i][k])
                for (int j = 0; j < alphabet_; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    irreducible_ = true;
    for (int i = 0; i < alphabet_ && irreducible_; ++i)
        for (int j = 0; j < alphabet_; ++j)
            if (!reach[i][j]) { irreducible_ = false; break; }
}

SubshiftSpec SubshiftSpec::full_shift(int alphabet) {
    return SubshiftSpec(std::vector<std::vector<bool>>(
        alphabet, std::vector<bool>(alphabet, true)));
}

bool SubshiftSpec::word_admissible(const Word& w) const {
    for (Symbol a : w)
        if (a >= alphabet_) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!transitions_[w[i]][w[i + 1]]) return false;
    return true;
}

bool SubshiftSpec::cyclic_word_admissible(const Word& w) const {
    if (w.empty() || !word_admissible(w)) return false;
    return transitions_[w.back()][w.front()];
}

std::uint64_t SubshiftSpec::periodic_point_count(int n) const {
    // integer matrix power; saturates instead of wrapping
    const std::uint64_t kSat = UINT64_MAX / 2;
    auto mul = [&](const std::vector<std::vector<std::uint64_t>>& A,
                   const std::vector<std::vector<std::uint64_t>>& B) {
        std::vector<std::vector<std::uint64_t>> C(
            alphabet_, std::vector<std::uint64_t>(alphabet_, 0));
        for (int i = 0; i < alphabet_; ++i)
            for (int k = 0; k < alphabet_; ++k) {
                if (A[i][k] == 0) continue;
                for (int j = 0; j < alphabet_; ++j) {
                    if (B[k][j] == 0) continue;
                    std::uint64_t prod =
                        (A[i][k] > kSat / B[k][j]) ? kSat : A[i][k] * B[k][j];
                    C[i][j] = (C[i][j] > kSat - prod) ? kSat : C[i][j] + prod;
                }
            }
        return C;
    };
    std::vector<std::vector<std::uint64_t>> P(alphabet_,
                                              std::vector<std::uint64_t>(alphabet_, 0)),
        T = P;
    for (int i = 0; i < alphabet_; ++i) {
        P[i][i] = 1;
        for (int j = 0; j < alphabet_; ++j) T[i][j] = transitions_[i][j] ? 1 : 0;
    }
    int e = n;
    while (e > 0) {
        if (e & 1) P = mul(P, T);
        T = mul(T, T);
        e >>= 1;
    }
    std::uint64_t tr = 0;
    for (int i = 0; i < alphabet_; ++i) tr += P[i][i];
    return tr;
}

std::vector<Word> SubshiftSpec::admissible_words(int length) const {
    std::vector<Word> out;
    if (length <= 0) return out;
    Word w;
    w.reserve(length);
    auto dfs = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.push_back(w);
            return;
        }
        for (int b = 0; b < alphabet_; ++b) {
            if (!w.empty() && !transitions_[w.back()][b]) continue;
            w.push_back(static_cast<Symbol>(b));
            self(self, remaining - 1);
            w.pop_back();
        }
    };
    dfs(dfs, length);
    return out;
}

ShiftPoint::ShiftPoint(const SubshiftSpec& spec, Word left_period, Word core,
                       Word right_period, long offset)
    : alphabet_(spec.alphabet_size()),
      left_(std::move(left_period)),
      core_(std::move(core)),
      right_(std::move(right_period)),
      offset_(offset) {
    if (left_.empty() || right_.empty())
        throw ConfigError("shift point needs nonempty periodic tails");
    if (!spec.cyclic_word_admissible(left_))
        throw InadmissibleWrapError("left periodic tail is not an admissible cycle");
    if (!spec.cyclic_word_admissible(right_))
        throw InadmissibleWrapError("right periodic tail is not an admissible cycle");
    if (!spec.word_admissible(core_))
        throw InadmissibleWrapError("core word is not admissible");
    const Symbol after_left = core_.empty() ? right_.front() : core_.front();
    if (!spec.allowed(left_.back(), after_left))
        throw InadmissibleWrapError("junction left|core is not admissible");
    if (!core_.empty() && !spec.allowed(core_.back(), right_.front()))
        throw InadmissibleWrapError("junction core|right is not admissible");
}

Symbol ShiftPoint::at(long j) const {
    const long r = j + offset_;
    const long core_len = static_cast<long>(core_.size());
    if (r >= core_len) {
        const long rlen = static_cast<long>(right_.size());
        return right_[static_cast<std::size_t>((r - core_len) % rlen)];
    }
    if (r >= 0) return core_[static_cast<std::size_t>(r)];
    const long llen = static_cast<long>(left_.size());
    const long back = (-r - 1) % llen; // 0 = last symbol of the left word
    return left_[static_cast<std::size_t>(llen - 1 - back)];
}

ShiftPoint ShiftPoint::shifted(long k) const {
    ShiftPoint p = *this;
    p.offset_ += k;
    return p;
}

Word ShiftPoint::window(long lo, long hi) const {
    Word w;
    if (hi <= lo) return w;
    w.reserve(static_cast<std::size_t>(hi - lo));
    for (long j = lo; j < hi; ++j) w.push_back(at(j));
    return w;
}

double shift_distance(const ShiftPoint& x, const ShiftPoint& y) {
    if (x.alphabet_size() != y.alphabet_size())
        throw ConfigError("shift_distance over mismatched alphabets");

    const long right_from = std::max({x.right_tail_start(), y.right_tail_start(), 0L});
    const long left_to = std::min({x.left_tail_end(), y.left_tail_end(), 0L});
    const long lcm_r = std::lcm(static_cast<long>(x.right_period().size()),
                                static_cast<long>(y.right_period().size()));
    const long lcm_l = std::lcm(static_cast<long>(x.left_period().size()),
                                static_cast<long>(y.left_period().size()));
    // Beyond this window both points are jointly periodic on each side, so
    // agreement on the window implies agreement everywhere.
    const long bound = std::max(right_from + lcm_r, -left_to + lcm_l) + 1;

    for (long k = 0; k <= bound; ++k) {
        if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k))
            return std::ldexp(1.0, static_cast<int>(-std::min(k, 1074L)));
    }
    return 0.0;
}

TailWords admissible_continuation(const SubshiftSpec& spec, Symbol start, bool forward) {
    const int k = spec.alphabet_size();
    auto step = [&](Symbol c) -> Symbol {
        for (int b = 0; b < k; ++b) {
            const Symbol s = static_cast<Symbol>(b);
            if (forward ? spec.allowed(c, s) : spec.allowed(s, c)) return s;
        }
        return c; // unreachable on validated specs
    };
    std::vector<int> seen_at(k, -1);
    Word walk{start};
    seen_at[start] = 0;
    Symbol cur = start;
    for (;;) {
        cur = step(cur);
        if (seen_at[cur] >= 0) break;
        seen_at[cur] = static_cast<int>(walk.size());
        walk.push_back(cur);
    }
    const int p = seen_at[cur];
    TailWords out;
    out.bridge.assign(walk.begin() + 1, walk.begin() + std::max(p, 1));
    out.period.assign(walk.begin() + p, walk.end());
    if (p == 0) {
        // the cycle passes through `start`; rotate so the tail continues
        // after it
        out.bridge.clear();
        std::rotate(out.period.begin(), out.period.begin() + 1, out.period.end());
    }
    return out;
}

PeriodicOrbit::PeriodicOrbit(const SubshiftSpec& spec, Word cyclic_word)
    : alphabet_(spec.alphabet_size()), word_(std::move(cyclic_word)) {
    if (word_.empty()) throw ConfigError("periodic orbit word must be nonempty");
    if (!spec.cyclic_word_admissible(word_))
        throw InadmissibleWrapError("cyclic word " + word_to_string(word_) +
                                    " violates a transition");
}

ShiftPoint PeriodicOrbit::point_at(const SubshiftSpec& spec, int t) const {
    return ShiftPoint(spec, word_, {}, word_, 0).shifted(t);
}

Word PeriodicOrbit::canonical_rotation() const {
    const int n = period();
    Word best = word_;
    Word rot = word_;
    for (int t = 1; t < n; ++t) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

std::vector<PeriodicOrbit> enumerate_periodic(const SubshiftSpec& spec, int n,
                                              const EnumerateOptions& opts) {
    if (n < 1) throw ConfigError("period must be >= 1");
    const std::uint64_t count = spec.periodic_point_count(n);
    if (count > opts.cap)
        throw EnumerationOverflowError(
            "periodic point count " + std::to_string(count) + " exceeds enumeration cap " +
            std::to_string(opts.cap) + "; choose a smaller period or sampling mode");

    std::vector<PeriodicOrbit> out;
    Word w;
    w.reserve(n);
    auto dfs = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            if (spec.allowed(w.back(), w.front())) {
                if (opts.dedupe_rotations) {
                    PeriodicOrbit cand(spec, w);
                    if (cand.canonical_rotation() == w) out.push_back(std::move(cand));
                } else {
                    out.emplace_back(spec, w);
                }
            }
            return;
        }
        for (int b = 0; b < spec.alphabet_size(); ++b) {
            if (!w.empty() && !spec.allowed(w.back(), static_cast<Symbol>(b))) continue;
            w.push_back(static_cast<Symbol>(b));
            self(self, remaining - 1);
            w.pop_back();
        }
    };
    dfs(dfs, n);
    return out; // DFS order is lexicographic
}

PeriodicOrbit anosov_close(const SubshiftSpec& spec, const ShiftPoint& x, int n,
                           const ClosingParams& params) {
    if (n < 1) throw ConfigError("closing period must be >= 1");
    const double return_dist = shift_distance(x.shifted(n), x);
    if (return_dist >= params.eps0)
        throw NotCloseError("return distance " + std::to_string(return_dist) +
                            " is not below eps0 = " + std::to_string(params.eps0));

    Word w = x.window(0, n);
    if (!spec.cyclic_word_admissible(w))
        throw InadmissibleWrapError("periodization of " + word_to_string(w) +
                                    " violates a transition");
    PeriodicOrbit p(spec, w);

    for (int j = 0; j <= n; ++j) {
        const double lhs = shift_distance(x.shifted(j), p.point_at(spec, j));
        const double rhs =
            params.c1 * std::exp(-params.theta * std::min(j, n - j)) * return_dist;
        if (lhs > rhs + 1e-15)
            throw Error("closing inequality violated at step " + std::to_string(j));
    }
    return p;
}

} // namespace cocycle

#include "cm/heights.hpp"

#include <cmath>

#include "cm/errors.hpp"

namespace cm {

namespace {
constexpr double kLog2E = 1.4426950408889634;
constexpr double kJTail = 2114.567;
} // namespace

double bik(const Discriminant& D, const Int& A) {
    if (A < 1)
        throw Error("bik: A >= 1 required");
    double absd = mpz_get_d(Int(-D.value()).get_mpz_t());
    double a = mpz_get_d(A.get_mpz_t());
    double y = M_PI * std::sqrt(absd) / a;
    if (y > 40.0) {
        // exp(y) dominates; fold the additive tail in via log1p
        return y * kLog2E + std::log1p(kJTail * std::exp(-y)) * kLog2E;
    }
    return std::log2(std::exp(y) + kJTail);
}

HeightProfile height_profile(const Discriminant& D, const CosetDecomposition& cd) {
    HeightProfile hp;
    hp.m = cd.m;
    hp.n = cd.n;
    hp.s.reserve(cd.m);
    hp.t.reserve(cd.m);
    for (const auto& coset : cd.cosets) {
        double s = 0, t = 0;
        for (const Form& f : coset) {
            double b = bik(D, f.a);
            s += b;
            t = std::max(t, b);
        }
        hp.s.push_back(s);
        hp.t.push_back(t);
    }
    return hp;
}

long height_bound_opt(const Discriminant& D, const CosetDecomposition& cd) {
    HeightProfile hp = height_profile(D, cd);
    double m = static_cast<double>(hp.m);
    double n = static_cast<double>(hp.n);
    double sum_t = 0, max_gap = 0;
    for (size_t i = 0; i < hp.s.size(); ++i) {
        sum_t += hp.t[i];
        max_gap = std::max(max_gap, hp.s[i] - hp.t[i]);
    }
    if (hp.n == 1) {
        // With one element per coset the binomial cushions collapse: every
        // coefficient of V is at most prod_i (1 + 2^{b_i1}), and since each
        // b_i1 exceeds lg 2114.567 the excess over 2^{sum b_i1} is below
        // lg m; the W_0 bound is lg m + sum_i b_i1 directly.
        return static_cast<long>(std::ceil(std::log2(m) + sum_t));
    }
    double b = std::log2(m) + m + n + m * std::log2(n) + sum_t + max_gap;
    return static_cast<long>(std::ceil(b));
}

long height_bound_general(const Discriminant& D, const CosetDecomposition& cd) {
    HeightProfile hp = height_profile(D, cd);
    double h = static_cast<double>(hp.m) * static_cast<double>(hp.n);
    double sum_all = 0;
    for (double s : hp.s)
        sum_all += s;
    double b = 5 * h + 2 * h * std::log2(h) + 2 * sum_all;
    return static_cast<long>(std::ceil(b));
}

std::pair<SubgroupSpec, long> best_subgroup(const Discriminant& D, const Presentation& P,
                                            const std::vector<SubgroupSpec>& candidates) {
    if (candidates.empty())
        throw Error("best_subgroup: no candidates");
    bool have = false;
    SubgroupSpec best;
    long best_b = 0;
    for (const auto& g : candidates) {
        long b = height_bound_opt(D, decompose(P, g));
        bool take = !have || b < best_b ||
                    (b == best_b && (g.n > best.n || (g.n == best.n && g.d < best.d)));
        if (take) {
            best = g;
            best_b = b;
            have = true;
        }
    }
    return {best, best_b};
}

} // namespace cm

#ifndef CM_HEIGHTS_HPP
#define CM_HEIGHTS_HPP

#include <utility>
#include <vector>

#include "cm/arith.hpp"
#include "cm/clgroup.hpp"
#include "cm/qform.hpp"

namespace cm {

// lg(exp(pi*sqrt(|D|)/A) + 2114.567): bit bound for |j| at a class with
// leading form coefficient A. Positive and strictly decreasing in A.
double bik(const Discriminant& D, const Int& A);

// Per-coset sums s_i and maxima t_i of the b_ik.
struct HeightProfile {
    unsigned long m = 1, n = 1;
    std::vector<double> s;
    std::vector<double> t;
};

HeightProfile height_profile(const Discriminant& D, const CosetDecomposition& cd);

// Bound for s = +-e1 (used when sizing S for the e1 policies):
//   ceil(lg m + m + n + m lg n + sum_i t_i + max_i(s_i - t_i))
long height_bound_opt(const Discriminant& D, const CosetDecomposition& cd);

// Bound valid for any random s with coefficients in [0, 2m^2 - 1]:
//   ceil(5h + 2h lg h + 2 sum_ik b_ik)
long height_bound_general(const Discriminant& D, const CosetDecomposition& cd);

// Candidate minimizing height_bound_opt; ties broken by larger n, then
// smaller d. Returns the winning spec and its bound in bits.
std::pair<SubgroupSpec, long> best_subgroup(const Discriminant& D, const Presentation& P,
                                            const std::vector<SubgroupSpec>& candidates);

} // namespace cm

#endif

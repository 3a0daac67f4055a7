#ifndef CM_MODPOLY_HPP
#define CM_MODPOLY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cm/arith.hpp"
#include "cm/fp64.hpp"
#include "cm/fppoly.hpp"

namespace cm {

// Classical modular polynomial Phi_ell(X, Y): symmetric, degree ell+1 in
// each variable, integer coefficients. Stored dense.
//
// Text format (one monomial per line, symmetric pairs listed once):
//   level <ell>
//   [i,j] c     with i >= j, c a decimal integer; absent monomials are zero
class ModPoly {
public:
    long level() const { return ell_; }

    const Int& coeff(long i, long j) const {
        if (i < j)
            std::swap(i, j);
        return tab_[static_cast<size_t>(i) * (ell_ + 2) + j];
    }

    // checks the degree law, symmetry (inherent), monicity, and the
    // Kronecker congruence Phi_ell(X,Y) ≡ (X^ell - Y)(X - Y^ell) mod ell
    void validate() const;

    std::string to_text() const;

    static ModPoly parse(std::istream& in);
    static ModPoly load_file(const std::string& path);

    // construct Phi_ell from the integer q-expansion of j
    static ModPoly compute(long ell);

    // coefficient table reduced mod p, Montgomery form, row-major
    std::vector<uint64_t> reduce64(const Fp64& k) const;

private:
    ModPoly(long ell) : ell_(ell), tab_((ell + 2) * (ell + 2), Int(0)) {}

    void set(long i, long j, const Int& v) {
        tab_[static_cast<size_t>(i) * (ell_ + 2) + j] = v;
        tab_[static_cast<size_t>(j) * (ell_ + 2) + i] = v;
    }

    long ell_;
    std::vector<Int> tab_;
};

// Phi_ell(X, j) over F_p from a reduced table: monic-up-to-lead polynomial
// in X of degree ell+1 (the X^{ell+1} coefficient is 1).
Poly<Fp64> modpoly_eval64(const Fp64& k, long ell, const std::vector<uint64_t>& tab,
                          uint64_t j_mont);

// q-expansion of j to terms q^-1 .. q^hi (exact integers);
// out[i] is the coefficient of q^(i-1)
std::vector<Int> j_qexpansion(long hi);

} // namespace cm

#endif

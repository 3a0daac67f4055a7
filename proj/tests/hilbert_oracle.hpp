#ifndef CM_TESTS_HILBERT_ORACLE_HPP
#define CM_TESTS_HILBERT_ORACLE_HPP

// Complex-analytic reference for H_D: evaluate j(tau) at each reduced form
// with high-precision floating point and round the expanded product to
// integers. Independent of the CRT/isogeny pipeline under test (only the
// exact q-expansion coefficients of j are shared data).

#include <cmath>
#include <vector>

#include <mpfr.h>

#include "cm/arith.hpp"
#include "cm/modpoly.hpp"
#include "cm/qform.hpp"

namespace cm_tests {

using cm::Int;

class Real {
public:
    explicit Real(mpfr_prec_t prec) {
        mpfr_init2(v, prec);
        mpfr_set_zero(v, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    Real& operator=(const Real& o) {
        mpfr_set_prec(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Real() { mpfr_clear(v); }
    mpfr_t v;
};

struct Cx {
    Real re, im;
    explicit Cx(mpfr_prec_t prec) : re(prec), im(prec) {}
};

inline void cx_mul(Cx& out, const Cx& a, const Cx& b, mpfr_prec_t prec) {
    Real t1(prec), t2(prec), re(prec);
    mpfr_mul(t1.v, a.re.v, b.re.v, MPFR_RNDN);
    mpfr_mul(t2.v, a.im.v, b.im.v, MPFR_RNDN);
    mpfr_sub(re.v, t1.v, t2.v, MPFR_RNDN);
    mpfr_mul(t1.v, a.re.v, b.im.v, MPFR_RNDN);
    mpfr_mul(t2.v, a.im.v, b.re.v, MPFR_RNDN);
    mpfr_add(out.im.v, t1.v, t2.v, MPFR_RNDN);
    mpfr_set(out.re.v, re.v, MPFR_RNDN);
}

inline void cx_add(Cx& out, const Cx& a, const Cx& b) {
    mpfr_add(out.re.v, a.re.v, b.re.v, MPFR_RNDN);
    mpfr_add(out.im.v, a.im.v, b.im.v, MPFR_RNDN);
}

// j(tau) for tau = (-B + sqrt(D))/(2A), via the q-expansion
inline Cx j_at_form(const cm::Form& f, const std::vector<Int>& jc, mpfr_prec_t prec) {
    Real pi(prec), sqd(prec), t(prec), rho(prec), theta(prec);
    mpfr_const_pi(pi.v, MPFR_RNDN);
    Int absd = -f.discriminant();
    mpfr_set_z(t.v, absd.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(sqd.v, t.v, MPFR_RNDN);
    // |q| = exp(-pi sqrt|D| / A), arg q = -pi B / A
    Real a(prec);
    mpfr_set_z(a.v, f.a.get_mpz_t(), MPFR_RNDN);
    mpfr_mul(rho.v, pi.v, sqd.v, MPFR_RNDN);
    mpfr_div(rho.v, rho.v, a.v, MPFR_RNDN);
    mpfr_neg(rho.v, rho.v, MPFR_RNDN);
    mpfr_exp(rho.v, rho.v, MPFR_RNDN); // |q|
    Real bb(prec);
    mpfr_set_z(bb.v, f.b.get_mpz_t(), MPFR_RNDN);
    mpfr_mul(theta.v, pi.v, bb.v, MPFR_RNDN);
    mpfr_div(theta.v, theta.v, a.v, MPFR_RNDN);
    mpfr_neg(theta.v, theta.v, MPFR_RNDN);
    Cx q(prec);
    Real s(prec), c(prec);
    mpfr_sin_cos(s.v, c.v, theta.v, MPFR_RNDN);
    mpfr_mul(q.re.v, rho.v, c.v, MPFR_RNDN);
    mpfr_mul(q.im.v, rho.v, s.v, MPFR_RNDN);

    // 1/q
    Real den(prec);
    mpfr_mul(den.v, q.re.v, q.re.v, MPFR_RNDN);
    Real t2(prec);
    mpfr_mul(t2.v, q.im.v, q.im.v, MPFR_RNDN);
    mpfr_add(den.v, den.v, t2.v, MPFR_RNDN);
    Cx acc(prec);
    mpfr_div(acc.re.v, q.re.v, den.v, MPFR_RNDN);
    mpfr_div(acc.im.v, q.im.v, den.v, MPFR_RNDN);
    mpfr_neg(acc.im.v, acc.im.v, MPFR_RNDN);

    // + 744 + sum c_n q^n
    Cx qn(prec), term(prec);
    mpfr_set_ui(qn.re.v, 1, MPFR_RNDN);
    mpfr_set_ui(qn.im.v, 0, MPFR_RNDN);
    Real cn(prec);
    for (size_t n = 1; n < jc.size(); ++n) {
        if (n == 1) {
            mpfr_add_ui(acc.re.v, acc.re.v, 744, MPFR_RNDN);
            continue;
        }
        cx_mul(qn, qn, q, prec);
        mpfr_set_z(cn.v, jc[n].get_mpz_t(), MPFR_RNDN);
        mpfr_mul(term.re.v, qn.re.v, cn.v, MPFR_RNDN);
        mpfr_mul(term.im.v, qn.im.v, cn.v, MPFR_RNDN);
        cx_add(acc, acc, term);
    }
    return acc;
}

// H_D by the complex-analytic method; prec_bits should comfortably exceed
// the coefficient height
inline std::vector<Int> hilbert_oracle(const Int& D, mpfr_prec_t prec_bits) {
    cm::Discriminant disc(D);
    auto forms = cm::enumerate_reduced(disc);
    // series length: terms decay like exp(4 pi sqrt(n) - n pi sqrt|D|/A_max)
    double absd = mpz_get_d(Int(-D).get_mpz_t());
    double amax = 1;
    for (const auto& f : forms)
        amax = std::max(amax, mpz_get_d(f.a.get_mpz_t()));
    double decay = 3.141592653589793 * std::sqrt(absd) / amax;
    long terms = 16;
    while (4 * 3.141592653589793 * std::sqrt((double)terms) - decay * terms >
           -((double)prec_bits + 40) * 0.6931471805599453)
        ++terms;
    auto jc = cm::j_qexpansion(terms + 2);

    mpfr_prec_t prec = prec_bits + 64;
    std::vector<Cx> coeffs; // poly coefficients low-to-high, complex
    coeffs.emplace_back(prec);
    mpfr_set_ui(coeffs[0].re.v, 1, MPFR_RNDN);
    mpfr_set_ui(coeffs[0].im.v, 0, MPFR_RNDN);
    for (const auto& f : forms) {
        Cx j = j_at_form(f, jc, prec);
        // multiply by (X - j)
        std::vector<Cx> next;
        next.reserve(coeffs.size() + 1);
        for (size_t i = 0; i <= coeffs.size(); ++i)
            next.emplace_back(prec);
        for (size_t i = 0; i < coeffs.size(); ++i) {
            // X * c_i contributes to next[i+1]
            cx_add(next[i + 1], next[i + 1], coeffs[i]);
            // -j * c_i contributes to next[i]
            Cx prod(prec);
            cx_mul(prod, coeffs[i], j, prec);
            mpfr_sub(next[i].re.v, next[i].re.v, prod.re.v, MPFR_RNDN);
            mpfr_sub(next[i].im.v, next[i].im.v, prod.im.v, MPFR_RNDN);
        }
        coeffs = std::move(next);
    }
    std::vector<Int> out;
    out.reserve(coeffs.size());
    for (auto& c : coeffs) {
        // imaginary parts must vanish, real parts must be near integers
        Real absim(prec);
        mpfr_abs(absim.v, c.im.v, MPFR_RNDN);
        if (mpfr_cmp_d(absim.v, 0.25) > 0)
            throw cm::Error("hilbert_oracle: imaginary residue too large");
        Real rounded(prec), dist(prec);
        mpfr_rint(rounded.v, c.re.v, MPFR_RNDN);
        mpfr_sub(dist.v, rounded.v, c.re.v, MPFR_RNDN);
        mpfr_abs(dist.v, dist.v, MPFR_RNDN);
        if (mpfr_cmp_d(dist.v, 0.25) > 0)
            throw cm::Error("hilbert_oracle: real part is not near an integer");
        Int z;
        mpfr_get_z(z.get_mpz_t(), rounded.v, MPFR_RNDN);
        out.push_back(z);
    }
    return out;
}

} // namespace cm_tests

#endif

#include "cm/modpoly.hpp"

#include <fstream>
#include <sstream>

#include "cm/errors.hpp"

namespace cm {

namespace {

// Integer Laurent series sum c[i] q^(lo+i), truncated at exponent hi.
struct ZSeries {
    long lo = 0;
    std::vector<Int> c;

    long hi() const { return lo + static_cast<long>(c.size()) - 1; }

    const Int& at(long e) const {
        static const Int zero(0);
        if (e < lo || e > hi())
            return zero;
        return c[e - lo];
    }

    void trim_front() {
        size_t i = 0;
        while (i < c.size() && c[i] == 0)
            ++i;
        if (i) {
            c.erase(c.begin(), c.begin() + i);
            lo += static_cast<long>(i);
        }
    }
};

ZSeries series_mul(const ZSeries& a, const ZSeries& b, long hi_cap) {
    ZSeries r;
    r.lo = a.lo + b.lo;
    long rhi = std::min(a.hi() + b.hi(), hi_cap);
    if (rhi < r.lo)
        return r;
    r.c.assign(rhi - r.lo + 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0)
            continue;
        long emax = rhi - (a.lo + static_cast<long>(i)) - b.lo;
        long jmax = std::min<long>(static_cast<long>(b.c.size()) - 1, emax);
        for (long j = 0; j <= jmax; ++j) {
            if (b.c[j] == 0)
                continue;
            r.c[a.lo + static_cast<long>(i) + b.lo + j - r.lo] += a.c[i] * b.c[j];
        }
    }
    return r;
}

ZSeries series_sub(const ZSeries& a, const ZSeries& b) {
    ZSeries r;
    r.lo = std::min(a.lo, b.lo);
    long rhi = std::max(a.hi(), b.hi());
    r.c.assign(rhi - r.lo + 1, Int(0));
    for (long e = r.lo; e <= rhi; ++e)
        r.c[e - r.lo] = a.at(e) - b.at(e);
    return r;
}

ZSeries series_add(const ZSeries& a, const ZSeries& b) {
    ZSeries r;
    r.lo = std::min(a.lo, b.lo);
    long rhi = std::max(a.hi(), b.hi());
    r.c.assign(rhi - r.lo + 1, Int(0));
    for (long e = r.lo; e <= rhi; ++e)
        r.c[e - r.lo] = a.at(e) + b.at(e);
    return r;
}

// inverse of a unit-constant-term power series (lo = 0), to exponent hi
ZSeries series_inv(const ZSeries& f, long hi) {
    if (f.lo != 0 || !(f.c[0] == 1 || f.c[0] == -1))
        throw Error("series_inv: unit constant term required");
    ZSeries g;
    g.lo = 0;
    g.c = {f.c[0]};
    long prec = 1;
    while (prec <= hi) {
        prec = std::min(2 * prec, hi + 1);
        // g <- g*(2 - f*g) mod q^prec
        ZSeries fg = series_mul(f, g, prec - 1);
        ZSeries two;
        two.lo = 0;
        two.c = {Int(2)};
        ZSeries t = series_sub(two, fg);
        g = series_mul(g, t, prec - 1);
    }
    return g;
}

} // namespace

std::vector<Int> j_qexpansion(long hi) {
    // eta-quotient pieces: P = prod (1 - q^n) via pentagonal numbers
    ZSeries P;
    P.lo = 0;
    P.c.assign(hi + 2, Int(0));
    for (long k = 0;; ++k) {
        long e1 = k * (3 * k - 1) / 2;
        long e2 = k * (3 * k + 1) / 2;
        if (e1 > hi + 1 && e2 > hi + 1)
            break;
        int sgn = (k % 2 == 0) ? 1 : -1;
        if (e1 <= hi + 1)
            P.c[e1] += sgn;
        if (k > 0 && e2 <= hi + 1)
            P.c[e2] += sgn;
    }
    // delta/q = P^24
    ZSeries dq = P;
    for (int i = 0; i < 2; ++i) // P^2, P^4
        dq = series_mul(dq, dq, hi + 1);
    ZSeries p8 = series_mul(dq, dq, hi + 1);      // P^8
    ZSeries p16 = series_mul(p8, p8, hi + 1);     // P^16
    dq = series_mul(p16, p8, hi + 1);             // P^24
    // E4 = 1 + 240 sum sigma_3(n) q^n
    ZSeries e4;
    e4.lo = 0;
    e4.c.assign(hi + 2, Int(0));
    e4.c[0] = 1;
    for (long n = 1; n <= hi + 1; ++n) {
        Int s3(0);
        for (long d = 1; d * d <= n; ++d) {
            if (n % d)
                continue;
            s3 += Int(d) * d * d;
            long dd = n / d;
            if (dd != d)
                s3 += Int(dd) * dd * dd;
        }
        e4.c[n] = 240 * s3;
    }
    ZSeries e43 = series_mul(series_mul(e4, e4, hi + 1), e4, hi + 1);
    ZSeries inv = series_inv(dq, hi + 1);
    ZSeries j = series_mul(e43, inv, hi + 1);
    j.lo -= 1; // divide by q
    if (!(j.at(-1) == 1 && j.at(0) == 744 && j.at(1) == 196884 && j.at(2) == 21493760))
        throw Error("j_qexpansion: self-check failed");
    std::vector<Int> out;
    out.reserve(hi + 2);
    for (long e = -1; e <= hi; ++e)
        out.push_back(j.at(e));
    return out;
}

ModPoly ModPoly::compute(long ell) {
    if (ell < 2 || !is_prime(Int(ell)))
        throw Error("ModPoly::compute: prime level required");
    const long HI = 2;                // certify through exponent +2
    const long HJ = ell * (ell + HI); // power-sum extraction reads up to here
    // each multiplication by j (pole at q^-1) costs one top exponent, so
    // keep ell+2 exponents of headroom above HJ
    const long JPREC = HJ + ell + 2;

    std::vector<Int> jc = j_qexpansion(JPREC);
    ZSeries j;
    j.lo = -1;
    j.c = jc;

    std::vector<ZSeries> jp(ell + 2);
    jp[0].lo = 0;
    jp[0].c = {Int(1)};
    jp[1] = j;
    for (long a = 2; a <= ell + 1; ++a)
        jp[a] = series_mul(jp[a - 1], j, JPREC);

    // power sums p_a(q) = sum_k f_k(q)^a = ell * sum_{ell | n} [q^n] j^a * q^(n/ell)
    std::vector<ZSeries> psum(ell + 1);
    for (long a = 1; a <= ell; ++a) {
        ZSeries& s = psum[a];
        long nlo = -(a / ell) * ell; // lowest multiple of ell that is >= -a
        s.lo = nlo / ell;
        s.c.clear();
        for (long n = nlo; n <= ell * (ell + HI); n += ell)
            s.c.push_back(ell * jp[a].at(n));
        s.trim_front();
    }

    // Newton's identities: r e_r = sum_{i=1..r} (-1)^{i-1} e_{r-i} p_i
    std::vector<ZSeries> e(ell + 1);
    e[0].lo = 0;
    e[0].c = {Int(1)};
    for (long r = 1; r <= ell; ++r) {
        ZSeries acc;
        acc.lo = 0;
        acc.c = {Int(0)};
        for (long i = 1; i <= r; ++i) {
            ZSeries t = series_mul(e[r - i], psum[i], ell + HI);
            if (i % 2 == 0)
                for (auto& x : t.c)
                    x = -x;
            acc = series_add(acc, t);
        }
        for (auto& x : acc.c) {
            Int qq, rr;
            mpz_tdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), x.get_mpz_t(), Int(r).get_mpz_t());
            if (rr != 0)
                throw Error("ModPoly::compute: Newton identity division failed");
            x = qq;
        }
        acc.trim_front();
        e[r] = acc;
    }

    // F(Y) = prod_k (Y - f_k) has Y^(ell-r) coefficient (-1)^r e_r;
    // g = j(q^ell); Phi(Y) = (Y - g) F(Y)
    ZSeries g;
    {
        long ghi = ell + HI + 1;
        g.lo = -ell;
        g.c.assign(ghi + ell + 1, Int(0));
        for (long n = -1; n * ell <= ghi; ++n)
            g.c[n * ell + ell] = j.at(n);
    }

    std::vector<ZSeries> F(ell + 1);
    for (long d = 0; d <= ell; ++d) {
        long r = ell - d;
        F[d] = e[r];
        if (r % 2 == 1)
            for (auto& x : F[d].c)
                x = -x;
    }

    std::vector<ZSeries> phi(ell + 2);
    for (long d = 0; d <= ell + 1; ++d) {
        ZSeries s;
        if (d == ell + 1) {
            s.lo = 0;
            s.c = {Int(1)};
        } else {
            ZSeries gf = series_mul(g, F[d], HI);
            if (d >= 1)
                s = series_sub(F[d - 1], gf);
            else {
                s = gf;
                for (auto& x : s.c)
                    x = -x;
            }
        }
        phi[d] = s;
    }

    // reduce each Y-coefficient against powers of j
    ModPoly M(ell);
    for (long d = 0; d <= ell + 1; ++d) {
        ZSeries s = phi[d];
        s.trim_front();
        while (!s.c.empty() && s.lo < 0) {
            long epow = -s.lo;
            if (epow > ell + 1)
                throw Error("ModPoly::compute: pole order exceeds ell+1");
            Int a = s.c[0];
            M.set(d, epow, a);
            ZSeries t = jp[epow];
            for (auto& x : t.c)
                x *= a;
            // truncate the subtrahend to the certified window
            ZSeries tt;
            tt.lo = t.lo;
            tt.c.clear();
            for (long ee = t.lo; ee <= HI; ++ee)
                tt.c.push_back(t.at(ee));
            s = series_sub(s, tt);
            s.trim_front();
        }
        if (!s.c.empty() && s.lo == 0 && s.c[0] != 0) {
            M.set(d, 0, s.at(0));
            s.c[0] = 0;
            s.trim_front();
        }
        // everything through exponent HI must now vanish
        for (long ee = s.lo; ee <= HI && ee <= s.hi(); ++ee)
            if (s.at(ee) != 0)
                throw Error("ModPoly::compute: residual series nonzero");
    }
    M.validate();
    return M;
}

void ModPoly::validate() const {
    long n = ell_ + 1;
    // symmetry of the dense table
    for (long i = 0; i <= n; ++i)
        for (long j = 0; j <= n; ++j)
            if (coeff(i, j) != coeff(j, i))
                throw ValidationError("ModPoly: asymmetric at [" + std::to_string(i) + "," +
                                      std::to_string(j) + "]");
    // degree law and monicity
    if (coeff(n, 0) != 1)
        throw ValidationError("ModPoly: X^" + std::to_string(n) + " coefficient must be 1");
    for (long j = 1; j <= n; ++j)
        if (coeff(n, j) != 0)
            throw ValidationError("ModPoly: monomial [" + std::to_string(n) + "," +
                                  std::to_string(j) + "] must vanish");
    // Kronecker congruence: Phi ≡ X^{l+1} - X^l Y^l - XY + Y^{l+1} (mod l)
    Int l(ell_);
    for (long i = 0; i <= n; ++i) {
        for (long j = 0; j <= i; ++j) {
            Int expect(0);
            if (i == n && j == 0)
                expect = 1;
            else if (i == ell_ && j == ell_)
                expect = -1;
            else if (i == 1 && j == 1)
                expect = -1;
            if (mod_canonical(coeff(i, j) - expect, l) != 0)
                throw ValidationError("ModPoly: Kronecker congruence fails at [" +
                                      std::to_string(i) + "," + std::to_string(j) + "]");
        }
    }
}

std::string ModPoly::to_text() const {
    std::ostringstream os;
    os << "level " << ell_ << "\n";
    for (long i = 0; i <= ell_ + 1; ++i)
        for (long j = 0; j <= i; ++j)
            if (coeff(i, j) != 0)
                os << "[" << i << "," << j << "] " << coeff(i, j).get_str() << "\n";
    return os.str();
}

ModPoly ModPoly::parse(std::istream& in) {
    std::string word;
    if (!(in >> word) || word != "level")
        throw FormatError("ModPoly: expected 'level <ell>' header");
    long ell = 0;
    if (!(in >> ell) || ell < 2)
        throw FormatError("ModPoly: bad level");
    ModPoly M(ell);
    std::string mono, val;
    while (in >> mono >> val) {
        if (mono.size() < 5 || mono.front() != '[' || mono.back() != ']')
            throw FormatError("ModPoly: bad monomial token '" + mono + "'");
        size_t comma = mono.find(',');
        if (comma == std::string::npos)
            throw FormatError("ModPoly: bad monomial token '" + mono + "'");
        long i = 0, j = 0;
        try {
            i = std::stol(mono.substr(1, comma - 1));
            j = std::stol(mono.substr(comma + 1, mono.size() - comma - 2));
        } catch (const std::exception&) {
            throw FormatError("ModPoly: bad monomial indices in '" + mono + "'");
        }
        if (i < j || i > ell + 1 || j < 0)
            throw FormatError("ModPoly: indices out of range in '" + mono + "'");
        Int c;
        if (mpz_set_str(c.get_mpz_t(), val.c_str(), 10) != 0)
            throw FormatError("ModPoly: bad coefficient '" + val + "'");
        M.set(i, j, c);
    }
    M.validate();
    return M;
}

ModPoly ModPoly::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("ModPoly: cannot open " + path);
    return parse(in);
}

std::vector<uint64_t> ModPoly::reduce64(const Fp64& k) const {
    long n = ell_ + 2;
    std::vector<uint64_t> tab(static_cast<size_t>(n) * n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            tab[static_cast<size_t>(i) * n + j] = k.from_int(coeff(i, j));
    return tab;
}

Poly<Fp64> modpoly_eval64(const Fp64& k, long ell, const std::vector<uint64_t>& tab,
                          uint64_t j_mont) {
    long n = ell + 2;
    Poly<Fp64> r(k);
    r.c.assign(n, 0);
    for (long i = 0; i < n; ++i) {
        // Horner in j over row i
        uint64_t acc = 0;
        for (long j = n - 1; j >= 0; --j)
            acc = k.add(k.mul(acc, j_mont), tab[static_cast<size_t>(i) * n + j]);
        r.c[i] = acc;
    }
    r.trim();
    return r;
}

} // namespace cm

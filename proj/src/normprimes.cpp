#include "cm/normprimes.hpp"

#include <algorithm>
#include <set>

#include "cm/errors.hpp"
#include "cm/fp64.hpp"

namespace cm {

bool is_prime_u64(uint64_t n) {
    if (n < 2)
        return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL,
                       31ULL, 37ULL}) {
        if (n % p == 0)
            return n == p;
    }
    if (n < 41 * 41)
        return true;
    if (n >= (1ULL << 62))
        return is_prime(Int(n)); // rare; falls back to the generic test
    Fp64 k(n);
    uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto witness = [&](uint64_t a) {
        a %= n;
        if (a == 0)
            return true;
        uint64_t x = k.pow(k.to_mont(a), d);
        uint64_t one = k.one(), m1 = k.neg(one);
        if (x == one || x == m1)
            return true;
        for (unsigned i = 1; i < s; ++i) {
            x = k.sqr(x);
            if (x == m1)
                return true;
        }
        return false;
    };
    // Sinclair base set: deterministic below 2^64
    for (uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL,
                       1795265022ULL}) {
        if (!witness(a))
            return false;
    }
    return true;
}

std::optional<Int> sqrt_mod(const Int& a0, const Int& p) {
    Int a = mod_canonical(a0, p);
    if (a == 0)
        return Int(0);
    if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1)
        return std::nullopt;
    if (mod_canonical(p, Int(4)) == 3) {
        Int e = (p + 1) / 4, r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    // Tonelli-Shanks
    Int q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    Int z(2);
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1)
        ++z;
    Int c, x, t, e;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    e = (q + 1) / 2;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        Int tt = t;
        unsigned long i = 0;
        while (tt != 1) {
            tt = mod_canonical(tt * tt, p);
            ++i;
        }
        Int b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j)
            b = mod_canonical(b * b, p);
        x = mod_canonical(x * b, p);
        c = mod_canonical(b * b, p);
        t = mod_canonical(t * c, p);
        m = i;
    }
    return x;
}

std::optional<std::pair<Int, Int>> solve_norm(const Discriminant& D, const Int& p) {
    Int absd = -D.value();
    Int fourp = 4 * p;
    if (fourp <= absd)
        return std::nullopt; // t^2 = 4p - v^2|D| needs 4p > |D|
    if (p < 10000) {
        // brute force: t of the right parity up to 2 sqrt(p)
        for (Int t = mod_canonical(absd, Int(2)) == 0 ? Int(2) : Int(1); t * t < fourp;
             t += 2) {
            Int rem = fourp - t * t;
            if (rem % absd != 0)
                continue;
            Int w = rem / absd, v;
            mpz_sqrt(v.get_mpz_t(), w.get_mpz_t());
            if (v * v == w && v > 0)
                return std::make_pair(t, v);
        }
        // fall through to handle even-parity t when D is odd (t ≡ v mod 2
        // means both parities occur once v varies)
        for (Int t = mod_canonical(absd, Int(2)) == 0 ? Int(1) : Int(2); t * t < fourp;
             t += 2) {
            Int rem = fourp - t * t;
            if (rem % absd != 0)
                continue;
            Int w = rem / absd, v;
            mpz_sqrt(v.get_mpz_t(), w.get_mpz_t());
            if (v * v == w && v > 0)
                return std::make_pair(t, v);
        }
        return std::nullopt;
    }
    if (!is_prime(p) || p % 2 == 0 || D.value() % p == 0)
        throw Error("solve_norm: odd prime p not dividing D required");
    auto r = sqrt_mod(mod_canonical(D.value(), p), p);
    if (!r)
        return std::nullopt;
    Int x0 = *r;
    // match x0 ≡ D (mod 2) so x0^2 ≡ D (mod 4p)
    if (mod_canonical(x0 - D.value(), Int(2)) != 0)
        x0 = p - x0;
    Int a = 2 * p, b = x0;
    Int lim;
    mpz_sqrt(lim.get_mpz_t(), fourp.get_mpz_t());
    while (b * b > fourp) {
        Int t = mod_canonical(a, b);
        a = b;
        b = t;
    }
    Int rem = fourp - b * b;
    if (b == 0 || rem % absd != 0)
        return std::nullopt;
    Int w = rem / absd, v;
    mpz_sqrt(v.get_mpz_t(), w.get_mpz_t());
    if (v * v != w || v == 0)
        return std::nullopt;
    return std::make_pair(b, v);
}

bool CandidateStream::admissible_v(unsigned long v) const {
    if (v == 1)
        return true;
    // v > 1 is admitted when squarefree with prime factors small enough to
    // have bundled modular polynomials (the volcanoes then have depth one
    // and a root-count surface test identifies End-exact curves), coprime
    // to D, and coprime to the odd presentation norms. 2 | v is tolerated
    // even when 2 is a presentation norm: the walk itself runs the surface
    // filter for that case.
    unsigned long rest = v;
    for (unsigned long ell : {2UL, 3UL, 5UL, 7UL, 11UL, 13UL, 17UL, 19UL, 23UL, 29UL, 31UL}) {
        if (rest % ell)
            continue;
        rest /= ell;
        if (rest % ell == 0)
            return false; // not squarefree
        if (mpz_divisible_ui_p(absd_.get_mpz_t(), ell))
            return false;
        for (unsigned long nrm : opts_.exclude_norms)
            if (nrm > 2 && nrm == ell)
                return false;
    }
    if (rest != 1)
        return false; // prime factor beyond the bundled levels
    return true;
}

void CandidateStream::advance(Cursor& c) const {
    c.t += 2;
    c.p_next = (Int(c.t) * Int(c.t) + Int(c.v) * Int(c.v) * absd_) / 4;
}

CandidateStream::CandidateStream(const Discriminant& D, SelectOptions opts)
    : D_(D), opts_(std::move(opts)), absd_(-D.value()), cap_(opts_.t_cap_limit) {
    bool d_odd = mpz_odd_p(D_.value().get_mpz_t());
    for (unsigned long v = 1; v <= opts_.max_v; ++v) {
        if (!admissible_v(v))
            continue;
        Cursor c;
        c.v = v;
        // parity: t ≡ v (mod 2) when D is odd, t even when D is even
        c.t = d_odd ? (v % 2 ? 1 : 2) : 2;
        c.p_next = (Int(c.t) * Int(c.t) + Int(c.v) * Int(c.v) * absd_) / 4;
        cursors_.push_back(c);
    }
    if (cursors_.empty())
        throw InsufficientPrimes("CandidateStream: no admissible v");
}

SplitPrime CandidateStream::next() {
    for (;;) {
        // smallest candidate p across the v-cursors; ties by smaller t
        size_t best = 0;
        for (size_t i = 1; i < cursors_.size(); ++i) {
            if (cursors_[i].p_next < cursors_[best].p_next ||
                (cursors_[i].p_next == cursors_[best].p_next &&
                 cursors_[i].t < cursors_[best].t))
                best = i;
        }
        Cursor& c = cursors_[best];
        if (c.t > cap_)
            throw InsufficientPrimes("CandidateStream: t-range cap exhausted");
        Int p = c.p_next;
        uint64_t t = c.t, v = c.v;
        advance(c);
        // p > 3: char 2 and 3 fall outside short-Weierstrass j-theory
        if (p <= 3 || p >= Int(1) << 62)
            continue;
        uint64_t pu = mpz_get_ui(p.get_mpz_t());
        if ((pu & 1) == 0)
            continue;
        if (absd_ % p == 0)
            continue;
        bool skip = false;
        for (unsigned long ell : opts_.exclude_norms)
            if (pu == ell)
                skip = true;
        if (skip || (opts_.exclude_q != 0 && p == opts_.exclude_q))
            continue;
        if (!is_prime_u64(pu))
            continue;
        return SplitPrime{pu, t, v};
    }
}

PrimeSet select_primes(const Discriminant& D, long bound_bits, const SelectOptions& opts) {
    if (bound_bits < 1)
        throw Error("select_primes: bound_bits >= 1 required");
    CandidateStream stream(D, opts);
    PrimeSet out;
    std::set<uint64_t> seen; // a prime can admit several (t, v) representations
    Int target = Int(1) << static_cast<unsigned long>(bound_bits + 2);
    while (out.product <= target) {
        SplitPrime sp = stream.next();
        if (!seen.insert(sp.p).second)
            continue;
        out.primes.push_back(sp);
        out.product *= sp.p;
    }
    out.product_bits = static_cast<long>(mpz_sizeinbase(out.product.get_mpz_t(), 2)) - 1;
    return out;
}

} // namespace cm

#include "cm/ecrt.hpp"

#include "cm/errors.hpp"

namespace cm {

namespace {

std::atomic<size_t> g_acc_live{0};
std::atomic<size_t> g_acc_peak{0};

void acc_inc() {
    size_t v = ++g_acc_live;
    size_t p = g_acc_peak.load();
    while (v > p && !g_acc_peak.compare_exchange_weak(p, v)) {
    }
}

// product tree over the primes; levels_[0] holds the leaves
struct ProductTree {
    std::vector<std::vector<Int>> levels;

    explicit ProductTree(const std::vector<uint64_t>& primes) {
        levels.emplace_back();
        levels[0].reserve(primes.size());
        for (uint64_t p : primes)
            levels[0].push_back(Int(p));
        while (levels.back().size() > 1) {
            const auto& prev = levels.back();
            std::vector<Int> next;
            next.reserve((prev.size() + 1) / 2);
            for (size_t i = 0; i + 1 < prev.size(); i += 2)
                next.push_back(prev[i] * prev[i + 1]);
            if (prev.size() & 1)
                next.push_back(prev.back());
            levels.push_back(std::move(next));
        }
    }

    const Int& root() const { return levels.back()[0]; }

    // M mod p_i^2 for every leaf, by a remainder tree over squared nodes
    std::vector<Int> remainders_mod_sq(const Int& M) const {
        std::vector<Int> cur{M};
        for (size_t lvl = levels.size(); lvl-- > 0;) {
            std::vector<Int> next(levels[lvl].size());
            for (size_t i = 0; i < levels[lvl].size(); ++i) {
                const Int& up = cur[i / 2];
                Int sq = levels[lvl][i] * levels[lvl][i];
                mpz_mod(next[i].get_mpz_t(), up.get_mpz_t(), sq.get_mpz_t());
            }
            cur = std::move(next);
            if (lvl == 0)
                break;
        }
        return cur;
    }
};

uint64_t inv_mod_u64(uint64_t a, uint64_t p) {
    // extended Euclid on int64 (p < 2^62)
    int64_t t = 0, newt = 1;
    int64_t r = (int64_t)p, newr = (int64_t)(a % p);
    while (newr != 0) {
        int64_t qq = r / newr;
        int64_t tmp = t - qq * newt;
        t = newt;
        newt = tmp;
        tmp = r - qq * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1)
        throw NotInvertible("inv_mod_u64");
    return (uint64_t)(t < 0 ? t + (int64_t)p : t);
}

} // namespace

CrtContext CrtContext::precompute(const std::vector<uint64_t>& primes, const Int& q,
                                  CrtMode mode) {
    CrtContext ctx;
    ctx.primes_ = primes;
    ctx.q_ = q;
    ctx.mode_ = mode;
    ProductTree tree(primes);
    mpz_mod(ctx.M_mod_q_.get_mpz_t(), tree.root().get_mpz_t(), q.get_mpz_t());
    std::vector<Int> rems = tree.remainders_mod_sq(tree.root());
    ctx.a_.resize(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) {
        // M mod p^2 = p * ((M/p) mod p)
        Int mi = rems[i] / Int(primes[i]);
        uint64_t mi_u = mpz_get_ui(mi.get_mpz_t());
        ctx.a_[i] = inv_mod_u64(mi_u % primes[i], primes[i]);
        // verify the defining identity a_i (M/p_i) ≡ 1 (mod p_i)
        if ((unsigned __int128)ctx.a_[i] * (mi_u % primes[i]) % primes[i] != 1)
            throw Error("CrtContext: a_i identity failed");
    }
    if (mode == CrtMode::A) {
        std::vector<Int> table(primes.size());
        for (size_t i = 0; i < primes.size(); ++i)
            table[i] = ctx.Mi_mod_q(i); // the on-demand formula, tabulated
        ctx.Mi_ = std::move(table);
    }
    return ctx;
}

Int CrtContext::Mi_mod_q(size_t i) const {
    if (!Mi_.empty())
        return Mi_[i];
    Int pinv = mod_inv(Int(primes_[i]), q_);
    return mod_canonical(M_mod_q_ * pinv, q_);
}

CrtAccumulator::CrtAccumulator() : sum_mod_q_(0) { acc_inc(); }
CrtAccumulator::CrtAccumulator(const CrtAccumulator& o)
    : sum_mod_q_(o.sum_mod_q_), real_sum_(o.real_sum_) {
    acc_inc();
}
CrtAccumulator::CrtAccumulator(CrtAccumulator&& o) noexcept
    : sum_mod_q_(std::move(o.sum_mod_q_)), real_sum_(std::move(o.real_sum_)) {
    acc_inc();
}
CrtAccumulator::~CrtAccumulator() { --g_acc_live; }

size_t CrtAccumulator::live() { return g_acc_live.load(); }
size_t CrtAccumulator::peak() { return g_acc_peak.load(); }
void CrtAccumulator::reset_peak() { g_acc_peak.store(g_acc_live.load()); }

void CrtAccumulator::update(const CrtContext& ctx, size_t i, uint64_t c_i, const Int& Mi) {
    uint64_t p = ctx.prime(i);
    if (c_i >= p)
        throw Error("CrtAccumulator::update: residue out of range");
    uint64_t s = (uint64_t)(((unsigned __int128)c_i * ctx.a(i)) % p);
    sum_mod_q_ = mod_canonical(sum_mod_q_ + Int(s) * Mi, ctx.modulus());
    real_sum_.add_ratio(Int(s), Int(p));
}

void CrtAccumulator::update(const CrtContext& ctx, size_t i, uint64_t c_i) {
    update(ctx, i, c_i, ctx.Mi_mod_q(i));
}

Int CrtAccumulator::finalize(const CrtContext& ctx) const {
    Int r = real_sum_.round_nearest();
    return mod_canonical(sum_mod_q_ - r * ctx.M_mod_q(), ctx.modulus());
}

Int crt_to_integer(const std::vector<uint64_t>& residues,
                   const std::vector<uint64_t>& primes) {
    if (residues.size() != primes.size())
        throw Error("crt_to_integer: length mismatch");
    // pairwise combine (c1 mod m1, c2 mod m2) -> CRT mod m1 m2
    std::vector<std::pair<Int, Int>> cur;
    cur.reserve(primes.size());
    for (size_t i = 0; i < primes.size(); ++i)
        cur.emplace_back(Int(residues[i]), Int(primes[i]));
    if (cur.empty())
        return Int(0);
    while (cur.size() > 1) {
        std::vector<std::pair<Int, Int>> next;
        next.reserve((cur.size() + 1) / 2);
        for (size_t i = 0; i + 1 < cur.size(); i += 2) {
            const auto& [c1, m1] = cur[i];
            const auto& [c2, m2] = cur[i + 1];
            // c = c1 + m1 * ((c2 - c1) * m1^-1 mod m2)
            Int t = mod_canonical((c2 - c1) * mod_inv(m1, m2), m2);
            next.emplace_back(c1 + m1 * t, m1 * m2);
        }
        if (cur.size() & 1)
            next.push_back(cur.back());
        cur = std::move(next);
    }
    Int c = cur[0].first, M = cur[0].second;
    if (2 * c > M)
        c -= M;
    return c;
}

} // namespace cm

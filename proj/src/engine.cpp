#include "cm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "cm/curvez.hpp"

#ifndef CM_MODPOLY_DEFAULT_DIR
#define CM_MODPOLY_DEFAULT_DIR "data/modpoly"
#endif

namespace cm {

std::string default_modpoly_dir() {
    if (const char* env = std::getenv("CM_MODPOLY_DIR"))
        return env;
    return CM_MODPOLY_DEFAULT_DIR;
}

unsigned long required_v(const Int& D) {
    return mod_canonical(D, Int(8)) == 1 ? 2 : 1;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// transported W-indices: 0..n-1, minus n-1 under the e1 shortcut
std::vector<unsigned long> transported_ks(unsigned long n, SKind kind) {
    std::vector<unsigned long> ks;
    unsigned long top = (kind == SKind::random_s) ? n : n - 1;
    for (unsigned long k = 0; k < top; ++k)
        ks.push_back(k);
    return ks;
}

struct EngineSetup {
    Presentation P;
    SubgroupSpec G;
    CosetDecomposition cd;
    ModPolyStore store;
    unsigned long v = 1;
    Int t_q, v_q;
};

EngineSetup prepare(const RunConfig& cfg) {
    Discriminant D(cfg.D);
    if (!is_prime(cfg.q))
        throw Error("run_cm: q must be prime");
    auto tv = solve_norm(D, cfg.q);
    if (!tv)
        throw Error("run_cm: q is not a norm of the order (no 4q = t^2 - v^2 D)");

    EngineSetup su{Presentation::build(D), SubgroupSpec{}, CosetDecomposition{},
                   ModPolyStore{}, 1, tv->first, tv->second};

    auto cands = subgroup_candidates(su.P);
    std::vector<SubgroupSpec> admissible;
    for (const auto& g : cands)
        if (2 * Int(g.n) * Int(g.n) <= cfg.q)
            admissible.push_back(g);
    if (admissible.empty())
        throw Error("run_cm: no subgroup satisfies 2n^2 <= q");
    if (cfg.subgroup_order == 0) {
        su.G = best_subgroup(D, su.P, admissible).first;
    } else {
        bool found = false;
        for (const auto& g : admissible)
            if (g.n == cfg.subgroup_order) {
                su.G = g;
                found = true;
            }
        if (!found)
            throw Error("run_cm: no condition-(8) subgroup of order " +
                        std::to_string(cfg.subgroup_order) + " with 2n^2 <= q");
    }
    su.cd = decompose(su.P, su.G);

    // never let a user-supplied cap starve the stream: D ≡ 1 (mod 8)
    // has no odd v = 1 primes at all
    su.v = std::max(cfg.max_v, required_v(cfg.D));
    std::vector<long> levels;
    for (const auto& g : su.P.generators())
        levels.push_back(static_cast<long>(g.norm));
    Int cond = conductor(D);
    for (long ell : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
        bool want = static_cast<unsigned long>(ell) <= su.v ||
                    mpz_divisible_ui_p(cond.get_mpz_t(), ell);
        if (want && std::find(levels.begin(), levels.end(), ell) == levels.end())
            levels.push_back(ell); // level checks for primes dividing v or the conductor
    }
    std::string dir = cfg.modpoly_dir.empty() ? default_modpoly_dir() : cfg.modpoly_dir;
    su.store.load_dir(dir, levels);
    return su;
}

SelectOptions select_opts(const RunConfig& cfg, const EngineSetup& su,
                          const std::vector<uint64_t>& rejected) {
    SelectOptions opts;
    opts.max_v = su.v;
    for (const auto& g : su.P.generators())
        opts.exclude_norms.push_back(g.norm);
    opts.exclude_q = cfg.q;
    for (uint64_t p : rejected)
        opts.exclude_norms.push_back(p);
    return opts;
}

struct PrimeJob {
    SplitPrime sp;
    size_t index;
};

// run fn(job) over all primes with cfg.threads workers; rethrows the first
// exception
template <class Fn>
void parallel_over_primes(const std::vector<SplitPrime>& primes, unsigned threads, Fn fn) {
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= primes.size())
                return;
            try {
                fn(PrimeJob{primes[i], i});
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err)
                    err = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (err)
        std::rethrow_exception(err);
}

struct WalkReject {
    uint64_t p;
    std::string reason;
};

// per-prime front half shared by every algorithm: j1 and the orbit table
struct OrbitData {
    Fp64 k;
    OrbitTable ot;
    uint64_t j1;
};

class Engine {
public:
    Engine(const RunConfig& cfg, EngineSetup su) : cfg_(cfg), su_(std::move(su)) {}

    CMResult run();

    std::vector<uint64_t> j_cache_keys() const; // unused; debugging hook

private:
    OrbitData orbits_for(const SplitPrime& sp, bool use_cache, RunStats& st,
                         std::mutex& mu);

    // mod-p decomposition pieces
    static std::vector<std::vector<uint64_t>> theta_blocks(const Fp64& k,
                                                           const OrbitTable& ot);
    static std::vector<uint64_t> ys_of(const Fp64& k,
                                       const std::vector<std::vector<uint64_t>>& thetas,
                                       const SymFunc& s);
    static std::vector<uint64_t> ys_direct(const Fp64& k, const OrbitTable& ot,
                                           const SymFunc& s);

    RunConfig cfg_;
    EngineSetup su_;
    std::unordered_map<uint64_t, uint64_t> j1_cache_;
    std::mutex cache_mu_;
};

OrbitData Engine::orbits_for(const SplitPrime& sp, bool use_cache, RunStats& st,
                             std::mutex& mu) {
    OrbitData od{Fp64(sp.p), OrbitTable{}, 0};
    Discriminant D(cfg_.D);
    bool cached = false;
    if (use_cache) {
        std::lock_guard<std::mutex> lk(cache_mu_);
        auto it = j1_cache_.find(sp.p);
        if (it != j1_cache_.end()) {
            od.j1 = it->second;
            cached = true;
        }
    }
    if (!cached) {
        auto t0 = Clock::now();
        od.j1 = find_j1(D, od.k, sp, su_.store, Rng::derive(cfg_.seed, sp.p));
        double dt = ms_since(t0);
        std::lock_guard<std::mutex> lk(mu);
        st.t_find_ms += dt;
        {
            std::lock_guard<std::mutex> lk2(cache_mu_);
            j1_cache_[sp.p] = od.j1;
        }
    }
    auto t1 = Clock::now();
    od.ot = enumerate_orbits(od.k, od.j1, su_.P, su_.G, su_.store, sp.v);
    double dt = ms_since(t1);
    std::lock_guard<std::mutex> lk(mu);
    st.t_enum_ms += dt;
    return od;
}

std::vector<std::vector<uint64_t>> Engine::theta_blocks(const Fp64& k,
                                                        const OrbitTable& ot) {
    std::vector<std::vector<uint64_t>> thetas;
    thetas.reserve(ot.rows.size());
    for (const auto& row : ot.rows) {
        std::vector<uint64_t> orbit_m;
        orbit_m.reserve(row.size());
        for (uint64_t j : row)
            orbit_m.push_back(k.to_mont(j));
        thetas.push_back(orbit_to_theta(k, orbit_m));
    }
    return thetas;
}

std::vector<uint64_t> Engine::ys_of(const Fp64& k,
                                    const std::vector<std::vector<uint64_t>>& thetas,
                                    const SymFunc& s) {
    std::vector<uint64_t> ys;
    ys.reserve(thetas.size());
    for (const auto& tb : thetas)
        ys.push_back(y_from_theta(k, tb, s));
    return ys;
}

std::vector<uint64_t> Engine::ys_direct(const Fp64& k, const OrbitTable& ot,
                                        const SymFunc& s) {
    // e_1 is the plain orbit sum, so s = e1 keeps it and s = -e1 negates
    std::vector<uint64_t> ys;
    ys.reserve(ot.rows.size());
    for (const auto& row : ot.rows) {
        uint64_t sum = k.zero();
        for (uint64_t j : row)
            sum = k.add(sum, k.to_mont(j));
        ys.push_back(s.kind == SKind::minus_e1 ? k.neg(sum) : sum);
    }
    return ys;
}

CMResult Engine::run() {
    Discriminant D(cfg_.D);
    CMResult res;
    res.D = cfg_.D;
    res.q = cfg_.q;
    res.h = su_.P.h();
    res.G = su_.G;
    res.m = su_.G.m;
    res.n = su_.G.n;
    res.t = su_.t_q;
    res.v = su_.v_q;

    FpZ KQ(cfg_.q);
    size_t qbits = mpz_sizeinbase(cfg_.q.get_mpz_t(), 2);
    unsigned long m = su_.G.m, n = su_.G.n;

    std::vector<uint64_t> rejected;
    unsigned attempt = 0;
    for (;;) {
        if (attempt > 64)
            throw NoValidRoot("run_cm: no usable root of V after 64 attempts");
        SymFunc s = choose_symfunc(n, m, attempt, cfg_.seed, cfg_.s_policy);
        long b = s.kind == SKind::random_s ? height_bound_general(D, su_.cd)
                                           : height_bound_opt(D, su_.cd);
        res.height_bits = b;
        long mbits = 0;
        while ((1UL << mbits) < m)
            ++mbits;
        long bound_bits = b;
        if (cfg_.alg == Algorithm::A2)
            bound_bits = b + mbits + static_cast<long>(m - 1) * static_cast<long>(qbits);
        else if (cfg_.alg == Algorithm::A2L)
            bound_bits = b + mbits + static_cast<long>(qbits);

        PrimeSet S = select_primes(D, bound_bits, select_opts(cfg_, su_, rejected));
        CrtContext ctx = CrtContext::precompute(
            [&] {
                std::vector<uint64_t> ps;
                for (const auto& sp : S.primes)
                    ps.push_back(sp.p);
                return ps;
            }(),
            cfg_.q, cfg_.crt_mode);
        res.stats.n_primes = S.primes.size();
        res.stats.crt_mi_entries = ctx.mi_table_entries();

        auto ks = transported_ks(n, s.kind);
        std::mutex mu; // guards accumulators and stats
        RunStats& st = res.stats;

        try {
            if (cfg_.alg == Algorithm::A1) {
                CrtAccumulator::reset_peak();
                std::vector<CrtAccumulator> accV(m);
                std::vector<std::vector<CrtAccumulator>> accW(ks.size());
                for (auto& row : accW)
                    row = std::vector<CrtAccumulator>(m);

                parallel_over_primes(S.primes, cfg_.threads, [&](const PrimeJob& job) {
                    OrbitData od = orbits_for(job.sp, false, st, mu);
                    const Fp64& k = od.k;
                    auto t0 = Clock::now();
                    auto thetas = theta_blocks(k, od.ot);
                    auto ys = ys_of(k, thetas, s);
                    SubproductTree<Fp64> tree(k, ys);
                    Poly<Fp64> Vp = tree.root();
                    std::vector<Poly<Fp64>> Wp;
                    Wp.reserve(ks.size());
                    for (unsigned long kk : ks) {
                        std::vector<uint64_t> th;
                        th.reserve(m);
                        for (unsigned long i = 0; i < m; ++i)
                            th.push_back(thetas[i][kk]);
                        Wp.push_back(tree.combine(th));
                    }
                    double dt_build = ms_since(t0);
                    auto t1 = Clock::now();
                    std::lock_guard<std::mutex> lk(mu);
                    st.t_build_ms += dt_build;
                    Int Mi = ctx.Mi_mod_q(job.index);
                    for (unsigned long i = 0; i < m; ++i)
                        accV[i].update(ctx, job.index, k.from_mont(Vp.coeff(i)), Mi);
                    for (size_t w = 0; w < ks.size(); ++w)
                        for (unsigned long i = 0; i < m; ++i)
                            accW[w][i].update(ctx, job.index, k.from_mont(Wp[w].coeff(i)),
                                              Mi);
                    st.t_crt_ms += ms_since(t1);
                });
                st.acc_peak_stage1 = CrtAccumulator::peak();

                res.V.assign(m + 1, Int(0));
                res.V[m] = 1;
                for (unsigned long i = 0; i < m; ++i)
                    res.V[i] = accV[i].finalize(ctx);
                res.W.clear();
                for (size_t w = 0; w < ks.size(); ++w) {
                    std::vector<Int> row(m, Int(0));
                    for (unsigned long i = 0; i < m; ++i)
                        row[i] = accW[w][i].finalize(ctx);
                    res.W.push_back(std::move(row));
                }
            } else {
                // Algorithm 2 stage 1: V only
                CrtAccumulator::reset_peak();
                {
                    std::vector<CrtAccumulator> accV(m);
                    parallel_over_primes(S.primes, cfg_.threads, [&](const PrimeJob& job) {
                        OrbitData od = orbits_for(job.sp, true, st, mu);
                        const Fp64& k = od.k;
                        auto t0 = Clock::now();
                        std::vector<uint64_t> ys =
                            s.is_e1_kind() ? ys_direct(k, od.ot, s)
                                           : ys_of(k, theta_blocks(k, od.ot), s);
                        Poly<Fp64> Vp = poly_from_roots(k, ys);
                        double dt_build = ms_since(t0);
                        auto t1 = Clock::now();
                        std::lock_guard<std::mutex> lk(mu);
                        st.t_build_ms += dt_build;
                        Int Mi = ctx.Mi_mod_q(job.index);
                        for (unsigned long i = 0; i < m; ++i)
                            accV[i].update(ctx, job.index, k.from_mont(Vp.coeff(i)), Mi);
                        st.t_crt_ms += ms_since(t1);
                    });
                    res.V.assign(m + 1, Int(0));
                    res.V[m] = 1;
                    for (unsigned long i = 0; i < m; ++i)
                        res.V[i] = accV[i].finalize(ctx);
                }
                st.acc_peak_stage1 = CrtAccumulator::peak();
            }
        } catch (const WalkError&) {
            // a prime violated the walk contract: drop it and reselect
            // (recorded against every prime is too blunt; the thrower is
            // unknown here, so retry after validating primes serially)
            bool found = false;
            for (const auto& sp : S.primes) {
                try {
                    RunStats dummy{};
                    std::mutex mu2;
                    (void)orbits_for(sp, false, dummy, mu2);
                } catch (const WalkError&) {
                    rejected.push_back(sp.p);
                    found = true;
                }
            }
            if (!found)
                throw;
            continue;
        }

        // shared tail: V mod q is known; find a usable root
        Poly<FpZ> Vq(KQ, res.V);
        auto t_root0 = Clock::now();
        if (!split_check(Vq))
            throw Error("run_cm: V mod q does not split into linear factors");
        Poly<FpZ> Vd = poly_derivative(Vq);
        Poly<FpZ> g = poly_gcd(Vq, Vd);
        Poly<FpZ> Vs = g.degree() > 0 ? poly_div_exact(Vq, g) : Vq;
        if (g.degree() > 0) {
            Poly<FpZ> g2 = poly_gcd(Vs, g);
            if (g2.degree() > 0)
                Vs = poly_div_exact(Vs, g2);
        }
        auto yroot = Vs.degree() >= 1
                         ? find_root(Vs, Rng::derive(cfg_.seed, 0x9001ULL + attempt))
                         : std::nullopt;
        res.stats.t_root_ms += ms_since(t_root0);
        if (!yroot) {
            ++attempt;
            ++res.stats.retries;
            continue;
        }
        res.y = *yroot;
        res.s_kind = s.kind;
        res.s_coeffs = s.coeffs;
        res.k_list = ks;

        // W data mod q
        std::vector<Int> wq; // value of W_k at y (A1) or w_k (A2/A2L)
        if (cfg_.alg == Algorithm::A1) {
            auto t0 = Clock::now();
            for (size_t w = 0; w < ks.size(); ++w) {
                Poly<FpZ> Wk(KQ, res.W[w]);
                wq.push_back(poly_eval(Wk, res.y));
            }
            res.stats.t_root_ms += ms_since(t0);
        } else if (cfg_.alg == Algorithm::A2) {
            CrtAccumulator::reset_peak();
            {
                std::vector<CrtAccumulator> accw(ks.size());
                parallel_over_primes(S.primes, cfg_.threads, [&](const PrimeJob& job) {
                    OrbitData od = orbits_for(job.sp, true, st, mu);
                    const Fp64& k = od.k;
                    auto t0 = Clock::now();
                    auto thetas = theta_blocks(k, od.ot);
                    auto ys = ys_of(k, thetas, s);
                    uint64_t z =
                        mpz_fdiv_ui(res.y.get_mpz_t(), k.modulus()); // phi(y) mod p
                    auto wk = eval_w(k, thetas, ys, k.to_mont(z));
                    double dt_build = ms_since(t0);
                    auto t1 = Clock::now();
                    std::lock_guard<std::mutex> lk(mu);
                    st.t_build_ms += dt_build;
                    Int Mi = ctx.Mi_mod_q(job.index);
                    for (size_t w = 0; w < ks.size(); ++w)
                        accw[w].update(ctx, job.index, k.from_mont(wk[ks[w]]), Mi);
                    st.t_crt_ms += ms_since(t1);
                });
                for (size_t w = 0; w < ks.size(); ++w)
                    wq.push_back(accw[w].finalize(ctx));
            }
            st.acc_peak_stage2 = CrtAccumulator::peak();
            res.wvals = wq;
        } else { // A2L
            // lift the powers y, y^2, ..., y^{m-1} to integers
            std::vector<Int> powers(m);
            powers[0] = 1;
            for (unsigned long i = 1; i < m; ++i)
                powers[i] = mod_canonical(powers[i - 1] * res.y, cfg_.q);
            CrtAccumulator::reset_peak();
            {
                std::vector<CrtAccumulator> accw(ks.size());
                parallel_over_primes(S.primes, cfg_.threads, [&](const PrimeJob& job) {
                    OrbitData od = orbits_for(job.sp, true, st, mu);
                    const Fp64& k = od.k;
                    auto t0 = Clock::now();
                    auto thetas = theta_blocks(k, od.ot);
                    auto ys = ys_of(k, thetas, s);
                    SubproductTree<Fp64> tree(k, ys);
                    std::vector<uint64_t> pow_red(m);
                    for (unsigned long i = 0; i < m; ++i)
                        pow_red[i] =
                            k.to_mont(mpz_fdiv_ui(powers[i].get_mpz_t(), k.modulus()));
                    std::vector<uint64_t> wk(ks.size());
                    for (size_t w = 0; w < ks.size(); ++w) {
                        std::vector<uint64_t> th;
                        th.reserve(m);
                        for (unsigned long i = 0; i < m; ++i)
                            th.push_back(thetas[i][ks[w]]);
                        Poly<Fp64> Wk = tree.combine(th);
                        uint64_t acc = k.zero();
                        for (unsigned long i = 0; i < m; ++i)
                            acc = k.add(acc, k.mul(Wk.coeff(i), pow_red[i]));
                        wk[w] = acc;
                    }
                    double dt_build = ms_since(t0);
                    auto t1 = Clock::now();
                    std::lock_guard<std::mutex> lk(mu);
                    st.t_build_ms += dt_build;
                    Int Mi = ctx.Mi_mod_q(job.index);
                    for (size_t w = 0; w < ks.size(); ++w)
                        accw[w].update(ctx, job.index, k.from_mont(wk[w]), Mi);
                    st.t_crt_ms += ms_since(t1);
                });
                for (size_t w = 0; w < ks.size(); ++w)
                    wq.push_back(accw[w].finalize(ctx));
            }
            st.acc_peak_stage2 = CrtAccumulator::peak();
            res.wvals = wq;
        }

        // assemble U(X, y) and find the root x
        auto t_u0 = Clock::now();
        Poly<FpZ> Vq2(KQ, res.V);
        Int vprime = poly_eval(poly_derivative(Vq2), res.y);
        std::vector<Int> wv = wq;
        Poly<FpZ> U = assemble_U(KQ, vprime, res.y, wv, s.kind);
        res.U.assign(U.c.begin(), U.c.end());
        auto xroot = find_root(U, Rng::derive(cfg_.seed, 0xa001ULL + attempt));
        res.stats.t_root_ms += ms_since(t_u0);
        if (!xroot)
            throw Error("run_cm: U(X, y) has no root mod q (internal inconsistency)");
        res.x = *xroot;
        break;
    }

    // curve construction and verification
    Int Nplus = cfg_.q + 1 - res.t;
    Int Nminus = cfg_.q + 1 + res.t;
    if (cfg_.desired_order != 0 && cfg_.verify_curve) {
        Int twin = cfg_.desired_order == Nplus ? Nminus : Nplus;
        auto [a, b] = build_curve(cfg_.q, res.x, cfg_.desired_order, twin, cfg_.seed);
        res.a = a;
        res.b = b;
        res.N = cfg_.desired_order;
        return res;
    }
    // canonical curve for j = x: (3k, 2k) with k = x/(1728 - x)
    FpZ K(cfg_.q);
    Int x1728 = mod_canonical(Int(1728), cfg_.q);
    if (res.x == 0) {
        res.a = 0;
        res.b = 1;
    } else if (res.x == x1728) {
        res.a = 1;
        res.b = 0;
    } else {
        Int kk = K.mul(res.x, K.inv(K.sub(x1728, res.x)));
        res.a = K.mul(Int(3), kk);
        res.b = K.mul(Int(2), kk);
    }
    if (cfg_.verify_curve) {
        res.N = determine_order(cfg_.q, res.a, res.b, Nplus, Nminus, cfg_.seed);
    } else {
        res.N = Nplus; // unverified default
    }
    return res;
}

} // namespace

CMResult run_cm(const RunConfig& cfg) {
    EngineSetup su = prepare(cfg);
    Engine eng(cfg, std::move(su));
    return eng.run();
}

Int determine_order(const Int& q, const Int& a, const Int& b, const Int& N1,
                    const Int& N2, uint64_t seed) {
    FpZ K(q);
    CurveZ E{&K, mod_canonical(a, q), mod_canonical(b, q)};
    if (E.singular())
        throw OrderMismatch("determine_order: singular curve");
    Rng rng(Rng::derive(seed, 0xd00dULL));
    for (int it = 0; it < 64; ++it) {
        PointZ P = random_pointz(E, rng);
        bool z1 = pointz_mul(E, P, N1).is_zero();
        bool z2 = pointz_mul(E, P, N2).is_zero();
        if (z1 && !z2)
            return N1;
        if (z2 && !z1)
            return N2;
        if (!z1 && !z2)
            throw OrderMismatch("determine_order: neither admissible order annihilates");
    }
    throw Error("determine_order: could not separate the two orders");
}

bool verify_curve_order(const Int& q, const Int& a, const Int& b, const Int& N,
                        const Int& twinN, uint64_t seed) {
    FpZ K(q);
    CurveZ E{&K, mod_canonical(a, q), mod_canonical(b, q)};
    if (E.singular())
        return false;
    Rng rng(Rng::derive(seed, 0xcafeULL));
    bool twin_ruled_out = (N == twinN);
    for (int it = 0; it < 24; ++it) {
        PointZ P = random_pointz(E, rng);
        if (!pointz_mul(E, P, N).is_zero())
            return false;
        if (!twin_ruled_out && !pointz_mul(E, P, twinN).is_zero())
            twin_ruled_out = true;
        if (twin_ruled_out && it >= 3)
            return true;
    }
    return twin_ruled_out;
}

std::pair<Int, Int> build_curve(const Int& q, const Int& x, const Int& N, const Int& twinN,
                                uint64_t seed) {
    FpZ K(q);
    Int x1728 = mod_canonical(Int(1728), q);
    std::vector<std::pair<Int, Int>> candidates;
    if (x == 0) {
        // sextic twist family
        Int g = 2;
        while (mpz_legendre(g.get_mpz_t(), q.get_mpz_t()) != -1)
            ++g;
        Int b(1);
        for (int i = 0; i < 6; ++i) {
            candidates.emplace_back(Int(0), b);
            b = mod_canonical(b * g, q);
        }
    } else if (x == x1728) {
        Int g = 2;
        while (mpz_legendre(g.get_mpz_t(), q.get_mpz_t()) != -1)
            ++g;
        Int a(1);
        for (int i = 0; i < 4; ++i) {
            candidates.emplace_back(a, Int(0));
            a = mod_canonical(a * g, q);
        }
    } else {
        Int kk = K.mul(x, K.inv(K.sub(x1728, x)));
        Int a = K.mul(Int(3), kk), b = K.mul(Int(2), kk);
        candidates.emplace_back(a, b);
        Int g = 2;
        while (mpz_legendre(g.get_mpz_t(), q.get_mpz_t()) != -1)
            ++g;
        Int g2 = mod_canonical(g * g, q);
        candidates.emplace_back(K.mul(a, g2), K.mul(b, mod_canonical(g2 * g, q)));
    }
    for (const auto& [a, b] : candidates)
        if (verify_curve_order(q, a, b, N, twinN, seed))
            return {a, b};
    throw OrderMismatch("build_curve: no twist of j = " + x.get_str() + " has order " +
                        N.get_str());
}

std::vector<Int> hilbert_over_Z(const Int& Dv, uint64_t seed, const std::string& modpoly_dir) {
    Discriminant D(Dv);
    Presentation P = Presentation::build(D);
    unsigned long h = P.h();
    SubgroupSpec G = subgroup_full(P);
    CosetDecomposition cd = decompose(P, G);
    long b = height_bound_opt(D, cd);

    unsigned long v = required_v(Dv);
    SelectOptions opts;
    opts.max_v = v;
    for (const auto& g : P.generators())
        opts.exclude_norms.push_back(g.norm);

    ModPolyStore store;
    std::vector<long> levels;
    for (const auto& g : P.generators())
        levels.push_back(static_cast<long>(g.norm));
    Int cond = conductor(D);
    for (long ell : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
        bool want = static_cast<unsigned long>(ell) <= v ||
                    mpz_divisible_ui_p(cond.get_mpz_t(), ell);
        if (want && std::find(levels.begin(), levels.end(), ell) == levels.end())
            levels.push_back(ell);
    }
    std::string dir = modpoly_dir.empty() ? default_modpoly_dir() : modpoly_dir;
    store.load_dir(dir, levels);

    // residues of each coefficient of H_D = P_1 across the primes; primes
    // whose walk degenerates are skipped and replaced from the stream
    std::vector<std::vector<uint64_t>> res(h);
    std::vector<uint64_t> primes;
    CandidateStream stream(D, opts);
    Int prod(1);
    Int target = Int(1) << static_cast<unsigned long>(b + 2);
    std::set<uint64_t> seen;
    while (prod <= target) {
        SplitPrime sp = stream.next();
        if (!seen.insert(sp.p).second)
            continue;
        Fp64 k(sp.p);
        try {
            uint64_t j1 = find_j1(D, k, sp, store, Rng::derive(seed, sp.p));
            OrbitTable ot = enumerate_orbits(k, j1, P, G, store, sp.v);
            std::vector<uint64_t> orbit_m;
            for (uint64_t j : ot.rows[0])
                orbit_m.push_back(k.to_mont(j));
            auto theta = orbit_to_theta(k, orbit_m);
            for (unsigned long i = 0; i < h; ++i)
                res[i].push_back(k.from_mont(theta[i]));
            primes.push_back(sp.p);
            prod *= sp.p;
        } catch (const WalkError&) {
            continue;
        }
    }
    std::vector<Int> out(h + 1);
    out[h] = 1;
    for (unsigned long i = 0; i < h; ++i)
        out[i] = crt_to_integer(res[i], primes);
    return out;
}

std::vector<Int> hilbert_mod_q(const Int& Dv, const Int& q, uint64_t seed,
                               const std::string& modpoly_dir, CrtMode mode) {
    Discriminant D(Dv);
    if (!is_prime(q))
        throw Error("hilbert_mod_q: q must be prime");
    Presentation P = Presentation::build(D);
    unsigned long h = P.h();
    SubgroupSpec G = subgroup_full(P);
    CosetDecomposition cd = decompose(P, G);
    long b = height_bound_opt(D, cd);

    unsigned long v = required_v(Dv);
    SelectOptions opts;
    opts.max_v = v;
    for (const auto& g : P.generators())
        opts.exclude_norms.push_back(g.norm);
    opts.exclude_q = q;

    ModPolyStore store;
    std::vector<long> levels;
    for (const auto& g : P.generators())
        levels.push_back(static_cast<long>(g.norm));
    Int cond = conductor(D);
    for (long ell : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
        bool want = static_cast<unsigned long>(ell) <= v ||
                    mpz_divisible_ui_p(cond.get_mpz_t(), ell);
        if (want && std::find(levels.begin(), levels.end(), ell) == levels.end())
            levels.push_back(ell);
    }
    std::string dir = modpoly_dir.empty() ? default_modpoly_dir() : modpoly_dir;
    store.load_dir(dir, levels);

    // collect per-prime theta residues, skipping degenerate walks
    std::vector<uint64_t> primes;
    std::vector<std::vector<uint64_t>> res(h);
    CandidateStream stream(D, opts);
    Int prod(1);
    Int target = Int(1) << static_cast<unsigned long>(b + 2);
    std::set<uint64_t> seen;
    while (prod <= target) {
        SplitPrime sp = stream.next();
        if (!seen.insert(sp.p).second)
            continue;
        Fp64 k(sp.p);
        try {
            uint64_t j1 = find_j1(D, k, sp, store, Rng::derive(seed, sp.p));
            OrbitTable ot = enumerate_orbits(k, j1, P, G, store, sp.v);
            std::vector<uint64_t> orbit_m;
            for (uint64_t j : ot.rows[0])
                orbit_m.push_back(k.to_mont(j));
            auto theta = orbit_to_theta(k, orbit_m);
            for (unsigned long i = 0; i < h; ++i)
                res[i].push_back(k.from_mont(theta[i]));
            primes.push_back(sp.p);
            prod *= sp.p;
        } catch (const WalkError&) {
            continue;
        }
    }
    CrtContext ctx = CrtContext::precompute(primes, q, mode);
    std::vector<CrtAccumulator> acc(h);
    for (size_t idx = 0; idx < primes.size(); ++idx) {
        Int Mi = ctx.Mi_mod_q(idx);
        for (unsigned long i = 0; i < h; ++i)
            acc[i].update(ctx, idx, res[i][idx], Mi);
    }
    std::vector<Int> out(h + 1);
    out[h] = 1;
    for (unsigned long i = 0; i < h; ++i)
        out[i] = acc[i].finalize(ctx);
    return out;
}

} // namespace cm

#include "cm/isogwalk.hpp"

#include <algorithm>
#include <set>

#include "cm/errors.hpp"

namespace cm {

void ModPolyStore::add(ModPoly mp) {
    long ell = mp.level();
    polys_.emplace(ell, std::move(mp));
}

void ModPolyStore::load_dir(const std::string& dir, const std::vector<long>& levels) {
    for (long ell : levels) {
        if (has(ell))
            continue;
        add(ModPoly::load_file(dir + "/phi_" + std::to_string(ell) + ".txt"));
    }
}

const ModPoly& ModPolyStore::get(long ell) const {
    auto it = polys_.find(ell);
    if (it == polys_.end())
        throw NotFound("ModPolyStore: no modular polynomial of level " +
                       std::to_string(ell));
    return it->second;
}

bool on_volcano_surface(const Fp64& k, uint64_t j_plain, long ell,
                        const std::vector<uint64_t>& tab) {
    Poly<Fp64> f = modpoly_eval64(k, ell, tab, k.to_mont(j_plain));
    return all_roots(f, 0x5f5f).size() >= 2;
}

uint64_t find_j1(const Discriminant& D, const Fp64& k, const SplitPrime& sp,
                 const ModPolyStore& store, uint64_t seed) {
    uint64_t p = k.modulus();
    if (D.value() == -3)
        return 0;
    if (D.value() == -4)
        return 1728 % p;
    uint64_t Nplus = p + 1 - sp.t, Nminus = p + 1 + sp.t;
    // End-exactness beyond the trace: primes dividing v put the target on
    // the surface of a depth-one volcano (root count >= 2); primes dividing
    // the conductor put it on the floor (root count exactly 1)
    std::vector<std::pair<long, std::vector<uint64_t>>> surface_tabs;
    std::vector<std::pair<long, std::vector<uint64_t>>> floor_tabs;
    {
        uint64_t rest = sp.v;
        for (long ell = 2; rest > 1 && ell <= 31; ++ell) {
            if (rest % ell)
                continue;
            surface_tabs.emplace_back(ell, store.get(ell).reduce64(k));
            while (rest % ell == 0)
                rest /= ell;
        }
        if (rest > 1)
            throw Error("find_j1: v has a prime factor beyond the bundled levels");
        Int f = conductor(D);
        for (long ell = 2; f > 1 && ell <= 31; ++ell) {
            if (!mpz_divisible_ui_p(f.get_mpz_t(), ell))
                continue;
            floor_tabs.emplace_back(ell, store.get(ell).reduce64(k));
            while (mpz_divisible_ui_p(f.get_mpz_t(), ell))
                f /= ell;
        }
        if (f > 1)
            throw Error("find_j1: conductor has a prime factor beyond the bundled levels");
    }
    uint64_t j1728 = 1728 % p;

    // When both admissible orders p+1-+t are odd, any curve with a rational
    // 2-torsion point is out. For the family (3k, 2k) the cubic discriminant
    // is -(432 j)^2 (1728-j)^3, so jacobi(j - 1728) = -1 forces exactly one
    // 2-torsion point: one symbol evaluation rejects half the candidates.
    bool odd_orders = ((p + 1 - sp.t) & 1) != 0;
    Rng rng(Rng::derive(seed, 0xf1d1ULL ^ p));
    auto try_j = [&](uint64_t j) -> bool {
        if (j == 0 || j == j1728)
            return false;
        if (odd_orders && k.jacobi_plain(j >= j1728 ? j - j1728 : j + p - j1728) == -1)
            return false;
        uint64_t jm = k.to_mont(j);
        Curve64 E = curve_from_j64(k, jm);
        if (E.singular())
            return false;
        uint64_t x = k.random(rng);
        if (!xonly_trace_probe(E, x, sp.t))
            return false;
        if (!curve_order_matches(E, Nplus, rng.next()) &&
            !curve_order_matches(E, Nminus, rng.next()))
            return false;
        for (const auto& [ell, tab] : surface_tabs)
            if (!on_volcano_surface(k, j, ell, tab))
                return false;
        for (const auto& [ell, tab] : floor_tabs)
            if (on_volcano_surface(k, j, ell, tab)) // >= 2 roots: not the floor
                return false;
        return true;
    };

    uint64_t cap = 4 * p + 1000;
    for (uint64_t att = 0; att < cap; ++att) {
        uint64_t j = rng.below(p);
        if (try_j(j))
            return j;
    }
    for (uint64_t j = 0; j < p; ++j)
        if (try_j(j))
            return j;
    throw NotFound("find_j1: no suitable j-invariant over F_" + std::to_string(p));
}

namespace {

struct StepTable {
    long ell;
    std::vector<uint64_t> tab;
    bool surface_mode;
};

uint64_t walk_step(const Fp64& k, const StepTable& st, uint64_t j_cur,
                   const uint64_t* j_exclude, const std::vector<uint64_t>* phi2_tab) {
    Poly<Fp64> f = modpoly_eval64(k, st.ell, st.tab, k.to_mont(j_cur));
    std::vector<uint64_t> roots_m = all_roots(f, 0xabcdULL ^ j_cur);
    std::vector<uint64_t> roots;
    roots.reserve(roots_m.size());
    for (uint64_t rm : roots_m)
        roots.push_back(k.from_mont(rm));
    if (st.surface_mode) {
        std::vector<uint64_t> filt;
        for (uint64_t r : roots)
            if (on_volcano_surface(k, r, 2, *phi2_tab))
                filt.push_back(r);
        roots = std::move(filt);
    }
    if (j_exclude) {
        roots.erase(std::remove(roots.begin(), roots.end(), *j_exclude), roots.end());
        if (roots.size() != 1)
            throw WalkError("walk_step: expected a single forward root, got " +
                            std::to_string(roots.size()));
        return roots[0];
    }
    if (roots.empty() || roots.size() > 2)
        throw WalkError("walk_step: expected 1 or 2 roots at a cycle start, got " +
                        std::to_string(roots.size()));
    return roots[0]; // lexicographically smallest (all_roots sorts)
}

} // namespace

OrbitTable enumerate_orbits(const Fp64& k, uint64_t j1, const Presentation& P,
                            const SubgroupSpec& G, const ModPolyStore& store, uint64_t v) {
    unsigned long h = P.h();
    const auto& gens = P.generators();
    uint64_t p = k.modulus();

    std::vector<StepTable> steps;
    std::vector<uint64_t> phi2_tab;
    bool any_surface = false;
    for (const auto& g : gens) {
        if (g.norm == p)
            throw WalkError("enumerate_orbits: presentation norm equals p");
        StepTable st;
        st.ell = static_cast<long>(g.norm);
        st.tab = store.get(st.ell).reduce64(k);
        st.surface_mode = (g.norm == 2 && v % 2 == 0);
        if (g.norm != 2 && v % g.norm == 0)
            throw WalkError("enumerate_orbits: norm divides v");
        any_surface = any_surface || st.surface_mode;
        steps.push_back(std::move(st));
    }
    if (any_surface)
        phi2_tab = store.get(2).reduce64(k);

    std::vector<uint64_t> j_at(h);
    j_at[0] = j1;
    for (unsigned long r = 1; r < h; ++r) {
        ExponentVector vr = P.unrank(r);
        size_t i0 = 0;
        while (vr[i0] == 0)
            ++i0;
        ExponentVector vp = vr;
        vp[i0] -= 1;
        uint64_t prev = j_at[P.rank(vp)];
        const uint64_t* excl = nullptr;
        uint64_t excl_val = 0;
        if (vr[i0] >= 2) {
            ExponentVector ve = vr;
            ve[i0] -= 2;
            excl_val = j_at[P.rank(ve)];
            excl = &excl_val;
        }
        j_at[r] = walk_step(k, steps[i0], prev, excl, &phi2_tab);
    }

    std::set<uint64_t> distinct(j_at.begin(), j_at.end());
    if (distinct.size() != h)
        throw WalkError("enumerate_orbits: enumerated j-invariants collide");

    OrbitTable ot;
    ot.m = G.m;
    ot.n = G.n;
    ot.rows.assign(G.m, {});
    for (unsigned long r = 0; r < h; ++r)
        ot.rows[coset_of(P, P.unrank(r), G)].push_back(j_at[r]);
    for (const auto& row : ot.rows)
        if (row.size() != G.n)
            throw WalkError("enumerate_orbits: orbit size mismatch");
    return ot;
}

} // namespace cm

#ifndef CM_ISOGWALK_HPP
#define CM_ISOGWALK_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cm/clgroup.hpp"
#include "cm/curve64.hpp"
#include "cm/modpoly.hpp"
#include "cm/normprimes.hpp"

namespace cm {

// Modular polynomials by level, loaded from the bundled data directory.
class ModPolyStore {
public:
    void add(ModPoly mp);
    void load_dir(const std::string& dir, const std::vector<long>& levels);
    bool has(long ell) const { return polys_.count(ell) != 0; }
    const ModPoly& get(long ell) const; // throws NotFound

private:
    std::map<long, ModPoly> polys_;
};

// j-invariants of Ell_O(F_p) arranged as m rows of n, one G-orbit per row;
// row 0 is the orbit of the walk's starting point.
struct OrbitTable {
    unsigned long m = 1, n = 1;
    std::vector<std::vector<uint64_t>> rows;
};

// Some j in Ell_O(F_p), found by random search with exact order
// verification; deterministic for a fixed seed. Throws NotFound after
// exhausting F_p.
uint64_t find_j1(const Discriminant& D, const Fp64& k, const SplitPrime& sp,
                 const ModPolyStore& store, uint64_t seed);

// Walk the l_i-isogeny cycles from j1 and bucket Ell_O(F_p) into G-orbits.
// G must be in condition-(8) form. v is the norm-equation parameter of the
// prime (2 | v engages the 2-volcano surface filter). Throws WalkError when
// a step's root count is off (the prime is then rejected by callers).
OrbitTable enumerate_orbits(const Fp64& k, uint64_t j1, const Presentation& P,
                            const SubgroupSpec& G, const ModPolyStore& store, uint64_t v);

// true iff the curve with this j-invariant sits on the surface of its
// ell-volcano (root count of Phi_ell(j, X) at least 2; valid on volcanoes
// of depth exactly one, which squarefree v guarantees)
bool on_volcano_surface(const Fp64& k, uint64_t j_plain, long ell,
                        const std::vector<uint64_t>& tab);

} // namespace cm

#endif

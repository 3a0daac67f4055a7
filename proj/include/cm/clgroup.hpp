#ifndef CM_CLGROUP_HPP
#define CM_CLGROUP_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "cm/arith.hpp"
#include "cm/qform.hpp"

namespace cm {

// One generator of the polycyclic presentation: a prime form, its norm,
// its relative order, and the expression of form^rel_order over the
// earlier generators.
struct Generator {
    Form form;
    unsigned long norm;
    unsigned long rel_order;
    std::vector<unsigned long> relation; // exponents over generators 0..i-1
};

using ExponentVector = std::vector<unsigned long>;

// Polycyclic presentation of cl(O): generators are prime forms ordered by
// increasing norm, skipping norms with relative order 1 and norms dividing
// the conductor. Exponent vectors (e_1,...,e_k) with 0 <= e_i < r_i are in
// bijection with the classes; ranks order them with e_1 varying fastest.
class Presentation {
public:
    static Presentation build(const Discriminant& D);

    const Discriminant& discriminant() const { return D_; }
    const std::vector<Generator>& generators() const { return gens_; }
    unsigned long h() const { return h_; }

    unsigned long rank(const ExponentVector& v) const;
    ExponentVector unrank(unsigned long r) const;

    // reduced form of the class with the given exponent vector
    const Form& form_at(unsigned long rank) const { return class_forms_[rank]; }
    const ExponentVector& vector_of(const Form& f) const;

private:
    explicit Presentation(Discriminant D) : D_(std::move(D)) {}

    Discriminant D_;
    std::vector<Generator> gens_;
    unsigned long h_ = 1;
    std::vector<Form> class_forms_;             // indexed by rank
    std::map<Form, ExponentVector> vec_of_form_;
};

// Subgroup in condition-(8) form: G = <[l_1],...,[l_{d-1}],[l_d^e]> with
// e | r_d. d is 1-based; the trivial group of an empty presentation is
// encoded as d = 0. n = |G|, m = h/n.
struct SubgroupSpec {
    size_t d = 0;
    unsigned long e = 1;
    unsigned long n = 1;
    unsigned long m = 1;

    bool operator==(const SubgroupSpec& o) const {
        return d == o.d && e == o.e && n == o.n && m == o.m;
    }
};

// All condition-(8) subgroups, deduplicated; includes the trivial subgroup
// and cl(O) itself.
std::vector<SubgroupSpec> subgroup_candidates(const Presentation& P);

SubgroupSpec subgroup_trivial(const Presentation& P);
SubgroupSpec subgroup_full(const Presentation& P);

// coset index in [0, m); index 0 is the G-orbit of the identity
unsigned long coset_of(const Presentation& P, const ExponentVector& v, const SubgroupSpec& G);

// Coset decomposition: class forms grouped into m cosets of size n.
struct CosetDecomposition {
    unsigned long m = 1, n = 1;
    std::vector<std::vector<Form>> cosets;
};

CosetDecomposition decompose(const Presentation& P, const SubgroupSpec& G);

// Decomposition under an arbitrary subgroup given by generating forms,
// computed by form composition (no condition-(8) restriction).
CosetDecomposition subgroup_elements_arbitrary(const Presentation& P,
                                               const std::vector<Form>& gens);

} // namespace cm

#endif

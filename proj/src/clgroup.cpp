#include "cm/clgroup.hpp"

#include <algorithm>
#include <set>

#include "cm/errors.hpp"

namespace cm {

Presentation Presentation::build(const Discriminant& D) {
    Presentation P(D);
    std::vector<Form> all = enumerate_reduced(D);
    P.h_ = static_cast<unsigned long>(all.size());

    Form one = principal_form(D);
    P.vec_of_form_.clear();
    P.vec_of_form_[one] = {};

    Int cond = conductor(D);
    unsigned long covered = 1;
    for (Int ell(2); covered < P.h_; mpz_nextprime(ell.get_mpz_t(), ell.get_mpz_t())) {
        if (ell > 1000000)
            throw LimitExceeded("build_presentation: generator norm search exhausted");
        if (!is_prime(ell))
            continue;
        if (cond % ell == 0)
            continue;
        auto pf = prime_form(D, ell);
        if (!pf)
            continue;
        // relative order: least r >= 1 with g^r in the current subgroup
        Form pw = *pf;
        unsigned long r = 1;
        while (P.vec_of_form_.find(pw) == P.vec_of_form_.end()) {
            pw = compose(pw, *pf);
            ++r;
        }
        if (r == 1)
            continue;
        Generator gen;
        gen.form = *pf;
        gen.norm = mpz_get_ui(ell.get_mpz_t());
        gen.rel_order = r;
        gen.relation = P.vec_of_form_[pw];
        gen.relation.resize(P.gens_.size(), 0);
        // extend the element table by the new cyclic factor
        std::map<Form, ExponentVector> next = P.vec_of_form_;
        Form gk = *pf;
        for (unsigned long k = 1; k < r; ++k) {
            for (const auto& [f, v] : P.vec_of_form_) {
                ExponentVector nv = v;
                nv.resize(P.gens_.size(), 0);
                nv.push_back(k);
                next[compose(f, gk)] = std::move(nv);
            }
            if (k + 1 < r)
                gk = compose(gk, *pf);
        }
        P.gens_.push_back(std::move(gen));
        P.vec_of_form_ = std::move(next);
        covered *= r;
    }

    // normalize vector lengths and build the rank-indexed table
    unsigned long k = static_cast<unsigned long>(P.gens_.size());
    P.class_forms_.assign(P.h_, one);
    std::map<Form, ExponentVector> fixed;
    for (auto& [f, v] : P.vec_of_form_) {
        ExponentVector nv = v;
        nv.resize(k, 0);
        P.class_forms_[P.rank(nv)] = f;
        fixed[f] = std::move(nv);
    }
    P.vec_of_form_ = std::move(fixed);
    if (P.vec_of_form_.size() != P.h_)
        throw Error("build_presentation: element table size mismatch");
    return P;
}

unsigned long Presentation::rank(const ExponentVector& v) const {
    unsigned long r = 0;
    for (size_t i = gens_.size(); i-- > 0;)
        r = r * gens_[i].rel_order + (i < v.size() ? v[i] : 0);
    return r;
}

ExponentVector Presentation::unrank(unsigned long r) const {
    ExponentVector v(gens_.size(), 0);
    for (size_t i = 0; i < gens_.size(); ++i) {
        v[i] = r % gens_[i].rel_order;
        r /= gens_[i].rel_order;
    }
    return v;
}

const ExponentVector& Presentation::vector_of(const Form& f) const {
    auto it = vec_of_form_.find(f);
    if (it == vec_of_form_.end())
        throw Error("Presentation::vector_of: form is not a class representative");
    return it->second;
}

SubgroupSpec subgroup_trivial(const Presentation& P) {
    SubgroupSpec s;
    if (P.generators().empty()) {
        s.d = 0;
        s.e = 1;
    } else {
        s.d = 1;
        s.e = P.generators()[0].rel_order;
    }
    s.n = 1;
    s.m = P.h();
    return s;
}

SubgroupSpec subgroup_full(const Presentation& P) {
    SubgroupSpec s;
    if (P.generators().empty()) {
        s.d = 0;
        s.e = 1;
    } else {
        s.d = P.generators().size();
        s.e = 1;
    }
    s.n = P.h();
    s.m = 1;
    return s;
}

namespace {

SubgroupSpec make_spec(const Presentation& P, size_t d, unsigned long e) {
    SubgroupSpec s;
    s.d = d;
    s.e = e;
    unsigned long n = 1;
    for (size_t i = 0; i + 1 < d; ++i)
        n *= P.generators()[i].rel_order;
    if (d >= 1)
        n *= P.generators()[d - 1].rel_order / e;
    s.n = n;
    s.m = P.h() / n;
    return s;
}

// canonical (d, e): drop trailing full factors so equal subgroups coincide
std::pair<size_t, unsigned long> normalize_de(const Presentation& P, size_t d,
                                              unsigned long e) {
    while (d >= 2 && e == P.generators()[d - 1].rel_order) {
        --d;
        e = 1;
    }
    return {d, e};
}

} // namespace

std::vector<SubgroupSpec> subgroup_candidates(const Presentation& P) {
    std::vector<SubgroupSpec> out;
    if (P.generators().empty()) {
        out.push_back(subgroup_trivial(P));
        return out;
    }
    std::set<std::pair<size_t, unsigned long>> seen;
    for (size_t d = 1; d <= P.generators().size(); ++d) {
        unsigned long rd = P.generators()[d - 1].rel_order;
        for (unsigned long e = 1; e <= rd; ++e) {
            if (rd % e != 0)
                continue;
            auto key = normalize_de(P, d, e);
            if (!seen.insert(key).second)
                continue;
            out.push_back(make_spec(P, key.first, key.second));
        }
    }
    std::sort(out.begin(), out.end(), [](const SubgroupSpec& a, const SubgroupSpec& b) {
        if (a.n != b.n)
            return a.n < b.n;
        return a.d < b.d;
    });
    return out;
}

unsigned long coset_of(const Presentation& P, const ExponentVector& v,
                       const SubgroupSpec& G) {
    if (G.d == 0)
        return 0;
    const auto& gens = P.generators();
    unsigned long idx = 0;
    for (size_t i = gens.size(); i-- > G.d;)
        idx = idx * gens[i].rel_order + (i < v.size() ? v[i] : 0);
    unsigned long ed = G.d - 1 < v.size() ? v[G.d - 1] : 0;
    return idx * G.e + (ed % G.e);
}

CosetDecomposition decompose(const Presentation& P, const SubgroupSpec& G) {
    CosetDecomposition cd;
    cd.m = G.m;
    cd.n = G.n;
    cd.cosets.assign(G.m, {});
    for (unsigned long r = 0; r < P.h(); ++r) {
        unsigned long idx = coset_of(P, P.unrank(r), G);
        cd.cosets[idx].push_back(P.form_at(r));
    }
    for (const auto& row : cd.cosets)
        if (row.size() != G.n)
            throw Error("decompose: coset size mismatch");
    return cd;
}

CosetDecomposition subgroup_elements_arbitrary(const Presentation& P,
                                               const std::vector<Form>& gens) {
    Form one = principal_form(P.discriminant());
    std::set<Form> closure{one};
    std::vector<Form> queue{one};
    while (!queue.empty()) {
        Form f = queue.back();
        queue.pop_back();
        for (const Form& g : gens) {
            Form t = compose(f, g);
            if (closure.insert(t).second)
                queue.push_back(t);
        }
    }
    unsigned long n = static_cast<unsigned long>(closure.size());
    if (P.h() % n != 0)
        throw Error("subgroup_elements_arbitrary: subgroup order does not divide h");
    CosetDecomposition cd;
    cd.n = n;
    cd.m = P.h() / n;
    std::set<Form> assigned;
    for (unsigned long r = 0; r < P.h(); ++r) {
        const Form& f = P.form_at(r);
        if (assigned.count(f))
            continue;
        std::vector<Form> coset;
        for (const Form& g : closure) {
            Form t = compose(f, g);
            if (!assigned.insert(t).second)
                throw Error("subgroup_elements_arbitrary: coset overlap");
            coset.push_back(t);
        }
        cd.cosets.push_back(std::move(coset));
    }
    return cd;
}

} // namespace cm

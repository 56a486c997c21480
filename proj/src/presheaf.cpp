#include "fdcalc/presheaf.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fdcalc {

int Presheaf::total() const {
    int n = 0;
    for (const auto& e : elems) n += static_cast<int>(e.size());
    return n;
}

int Presheaf::find_elem(int obj, const std::string& name) const {
    for (int i = 0; i < n_at(obj); ++i)
        if (elems[obj][i] == name) return i;
    return -1;
}

bool Presheaf::same_as(const Presheaf& other) const {
    return same_cat(base, other.base) && elems == other.elems && act == other.act;
}

bool Subobject::contains(int obj, int e) const {
    return std::binary_search(subset[obj].begin(), subset[obj].end(), e);
}

int Subobject::total() const {
    int n = 0;
    for (const auto& s : subset) n += static_cast<int>(s.size());
    return n;
}

void validate_presheaf(const Presheaf& p) {
    const auto& cat = *p.base;
    if (static_cast<int>(p.elems.size()) != cat.n_objects() || static_cast<int>(p.act.size()) != cat.n_morphisms())
        throw ValidationError("presheaf tables have wrong shape");
    for (int m = 0; m < cat.n_morphisms(); ++m) {
        if (static_cast<int>(p.act[m].size()) != p.n_at(cat.morphisms[m].src))
            throw ValidationError("presheaf action for " + cat.morphisms[m].id + " has wrong domain size");
        for (int v : p.act[m])
            if (v < 0 || v >= p.n_at(cat.morphisms[m].dst))
                throw ValidationError("presheaf action for " + cat.morphisms[m].id + " out of range");
    }
    for (int a = 0; a < cat.n_objects(); ++a)
        for (int x = 0; x < p.n_at(a); ++x)
            if (p.apply(cat.identity[a], x) != x)
                throw ValidationError("presheaf does not respect identity at " + cat.objects[a]);
    for (int g = 0; g < cat.n_morphisms(); ++g)
        for (int f = 0; f < cat.n_morphisms(); ++f) {
            if (cat.morphisms[f].dst != cat.morphisms[g].src) continue;
            int gf = cat.comp[g][f];
            for (int x = 0; x < p.n_at(cat.morphisms[f].src); ++x)
                if (p.apply(gf, x) != p.apply(g, p.apply(f, x)))
                    throw ValidationError("presheaf does not respect composition (" + cat.morphisms[g].id + " ∘ " +
                                          cat.morphisms[f].id + ")");
        }
}

void validate_nat(const NatTrans& t) {
    if (!same_cat(t.src.base, t.dst.base)) throw BaseMismatch("natural transformation endpoints on different bases");
    const auto& cat = *t.src.base;
    for (int a = 0; a < cat.n_objects(); ++a) {
        if (static_cast<int>(t.comp[a].size()) != t.src.n_at(a))
            throw ValidationError("component at " + cat.objects[a] + " has wrong size");
        for (int v : t.comp[a])
            if (v < 0 || v >= t.dst.n_at(a)) throw ValidationError("component at " + cat.objects[a] + " out of range");
    }
    for (int m = 0; m < cat.n_morphisms(); ++m) {
        int s = cat.morphisms[m].src, d = cat.morphisms[m].dst;
        for (int x = 0; x < t.src.n_at(s); ++x)
            if (t.comp[d][t.src.apply(m, x)] != t.dst.apply(m, t.comp[s][x]))
                throw ValidationError("naturality fails at " + cat.morphisms[m].id + " on " + t.src.elems[s][x]);
    }
}

void validate_subobject(const Subobject& s) {
    const auto& cat = *s.parent.base;
    for (int a = 0; a < cat.n_objects(); ++a) {
        if (!std::is_sorted(s.subset[a].begin(), s.subset[a].end()))
            throw ValidationError("subobject subset not sorted at " + cat.objects[a]);
        for (int e : s.subset[a])
            if (e < 0 || e >= s.parent.n_at(a)) throw ValidationError("subobject element out of range");
    }
    for (int m = 0; m < cat.n_morphisms(); ++m)
        for (int e : s.subset[cat.morphisms[m].src])
            if (!s.contains(cat.morphisms[m].dst, s.parent.apply(m, e)))
                throw ValidationError("subobject not closed under " + cat.morphisms[m].id);
}

Presheaf empty_presheaf(const CatPtr& cat) {
    Presheaf p;
    p.base = cat;
    p.elems.resize(cat->n_objects());
    p.act.resize(cat->n_morphisms());
    return p;
}

Presheaf terminal_presheaf(const CatPtr& cat) {
    Presheaf p;
    p.base = cat;
    p.elems.assign(cat->n_objects(), {"*"});
    p.act.assign(cat->n_morphisms(), {0});
    return p;
}

Presheaf representable(const CatPtr& cat, int obj) {
    if (obj < 0 || obj >= cat->n_objects()) throw UnknownObject("representable: no such object");
    Presheaf p;
    p.base = cat;
    p.elems.resize(cat->n_objects());
    std::vector<std::vector<int>> local(cat->n_objects());  // per object: morphism indices
    for (int x = 0; x < cat->n_objects(); ++x) {
        local[x] = cat->hom(obj, x);
        for (int m : local[x]) p.elems[x].push_back(cat->morphisms[m].id);
    }
    auto pos = [&](int x, int m) {
        auto it = std::find(local[x].begin(), local[x].end(), m);
        return static_cast<int>(it - local[x].begin());
    };
    p.act.resize(cat->n_morphisms());
    for (int m = 0; m < cat->n_morphisms(); ++m) {
        int s = cat->morphisms[m].src, d = cat->morphisms[m].dst;
        for (int g : local[s]) p.act[m].push_back(pos(d, cat->comp[m][g]));
    }
    return p;
}

NatTrans rep_nat(const CatPtr& cat, int f) {
    int a_from = cat->morphisms[f].dst, a_to = cat->morphisms[f].src;
    NatTrans t;
    t.src = representable(cat, a_from);
    t.dst = representable(cat, a_to);
    t.comp.resize(cat->n_objects());
    for (int x = 0; x < cat->n_objects(); ++x)
        for (const auto& gname : t.src.elems[x]) {
            int g = cat->morph_index(gname);
            t.comp[x].push_back(t.dst.find_elem(x, cat->morphisms[cat->comp[g][f]].id));
        }
    return t;
}

NatTrans yoneda_nat(const Presheaf& phi, int obj, int elem) {
    NatTrans t;
    t.src = representable(phi.base, obj);
    t.dst = phi;
    t.comp.resize(phi.base->n_objects());
    for (int x = 0; x < phi.base->n_objects(); ++x)
        for (const auto& gname : t.src.elems[x]) {
            int g = phi.base->morph_index(gname);
            t.comp[x].push_back(phi.apply(g, elem));
        }
    return t;
}

SumResult sum_n(const std::vector<Presheaf>& parts) {
    if (parts.empty()) throw ValidationError("sum_n needs at least one summand");
    const CatPtr cat = parts[0].base;
    for (const auto& p : parts)
        if (!same_cat(p.base, cat)) throw BaseMismatch("sum over different bases");
    SumResult out;
    out.sum.base = cat;
    out.sum.elems.resize(cat->n_objects());
    std::vector<std::vector<int>> offset(parts.size(), std::vector<int>(cat->n_objects(), 0));
    for (int x = 0; x < cat->n_objects(); ++x)
        for (std::size_t k = 0; k < parts.size(); ++k) {
            offset[k][x] = static_cast<int>(out.sum.elems[x].size());
            for (const auto& name : parts[k].elems[x]) out.sum.elems[x].push_back(std::to_string(k) + ":" + name);
        }
    out.sum.act.resize(cat->n_morphisms());
    for (int m = 0; m < cat->n_morphisms(); ++m) {
        int s = cat->morphisms[m].src, d = cat->morphisms[m].dst;
        out.sum.act[m].resize(out.sum.elems[s].size());
        for (std::size_t k = 0; k < parts.size(); ++k)
            for (int e = 0; e < parts[k].n_at(s); ++e)
                out.sum.act[m][offset[k][s] + e] = offset[k][d] + parts[k].apply(m, e);
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
        NatTrans inj;
        inj.src = parts[k];
        inj.dst = out.sum;
        inj.comp.resize(cat->n_objects());
        for (int x = 0; x < cat->n_objects(); ++x)
            for (int e = 0; e < parts[k].n_at(x); ++e) inj.comp[x].push_back(offset[k][x] + e);
        out.injections.push_back(std::move(inj));
    }
    return out;
}

SumResult sum(const Presheaf& a, const Presheaf& b) { return sum_n({a, b}); }

ProductResult product(const Presheaf& a, const Presheaf& b) {
    if (!same_cat(a.base, b.base)) throw BaseMismatch("product over different bases");
    const CatPtr cat = a.base;
    ProductResult out;
    out.prod.base = cat;
    out.prod.elems.resize(cat->n_objects());
    for (int x = 0; x < cat->n_objects(); ++x)
        for (int i = 0; i < a.n_at(x); ++i)
            for (int j = 0; j < b.n_at(x); ++j)
                out.prod.elems[x].push_back("(" + a.elems[x][i] + "|" + b.elems[x][j] + ")");
    out.prod.act.resize(cat->n_morphisms());
    for (int m = 0; m < cat->n_morphisms(); ++m) {
        int s = cat->morphisms[m].src, d = cat->morphisms[m].dst;
        for (int i = 0; i < a.n_at(s); ++i)
            for (int j = 0; j < b.n_at(s); ++j)
                out.prod.act[m].push_back(a.apply(m, i) * b.n_at(d) + b.apply(m, j));
    }
    out.proj1.src = out.prod;
    out.proj1.dst = a;
    out.proj2.src = out.prod;
    out.proj2.dst = b;
    out.proj1.comp.resize(cat->n_objects());
    out.proj2.comp.resize(cat->n_objects());
    for (int x = 0; x < cat->n_objects(); ++x)
        for (int i = 0; i < a.n_at(x); ++i)
            for (int j = 0; j < b.n_at(x); ++j) {
                out.proj1.comp[x].push_back(i);
                out.proj2.comp[x].push_back(j);
            }
    return out;
}

namespace {

std::vector<int> global_offsets(const Presheaf& p) {
    std::vector<int> off(p.base->n_objects() + 1, 0);
    for (int x = 0; x < p.base->n_objects(); ++x) off[x + 1] = off[x] + p.n_at(x);
    return off;
}

}  // namespace

Pi0 pi0(const Presheaf& p) {
    auto off = global_offsets(p);
    UnionFind uf(off.back());
    const auto& cat = *p.base;
    for (int m = 0; m < cat.n_morphisms(); ++m) {
        int s = cat.morphisms[m].src, d = cat.morphisms[m].dst;
        for (int x = 0; x < p.n_at(s); ++x) uf.unite(off[s] + x, off[d] + p.apply(m, x));
    }
    Pi0 out;
    out.comp_of.resize(cat.n_objects());
    std::map<int, int> root_to_comp;
    for (int x = 0; x < cat.n_objects(); ++x)
        for (int e = 0; e < p.n_at(x); ++e) {
            int root = uf.find(off[x] + e);
            auto [it, inserted] = root_to_comp.try_emplace(root, static_cast<int>(root_to_comp.size()));
            out.comp_of[x].push_back(it->second);
            if (inserted) out.reps.push_back({x, e});
        }
    out.n_components = static_cast<int>(root_to_comp.size());
    return out;
}

bool is_complemented(const Subobject& s, ComplWitness* witness) {
    const auto& cat = *s.parent.base;
    for (int m = 0; m < cat.n_morphisms(); ++m) {
        int a = cat.morphisms[m].src, a2 = cat.morphisms[m].dst;
        for (int x = 0; x < s.parent.n_at(a); ++x)
            if (s.contains(a, x) != s.contains(a2, s.parent.apply(m, x))) {
                if (witness) *witness = {m, a, x};
                return false;
            }
    }
    return true;
}

Subobject negate(const Subobject& s) {
    const auto& cat = *s.parent.base;
    Subobject out{s.parent, std::vector<std::vector<int>>(cat.n_objects())};
    for (int a = 0; a < cat.n_objects(); ++a)
        for (int x = 0; x < s.parent.n_at(a); ++x) {
            bool lands_in = false;
            for (int m = 0; m < cat.n_morphisms() && !lands_in; ++m)
                if (cat.morphisms[m].src == a && s.contains(cat.morphisms[m].dst, s.parent.apply(m, x)))
                    lands_in = true;
            if (!lands_in) out.subset[a].push_back(x);
        }
    return out;
}

Subobject complement(const Subobject& s) {
    ComplWitness w;
    if (!is_complemented(s, &w))
        throw NotComplemented("NotComplemented(" + s.parent.base->morphisms[w.morphism].id + ", " +
                              s.parent.elems[w.obj][w.elem] + ")");
    Subobject out{s.parent, std::vector<std::vector<int>>(s.parent.base->n_objects())};
    for (int a = 0; a < s.parent.base->n_objects(); ++a)
        for (int x = 0; x < s.parent.n_at(a); ++x)
            if (!s.contains(a, x)) out.subset[a].push_back(x);
    return out;
}

Subobject full_subobject(const Presheaf& p) {
    Subobject out{p, std::vector<std::vector<int>>(p.base->n_objects())};
    for (int a = 0; a < p.base->n_objects(); ++a)
        for (int x = 0; x < p.n_at(a); ++x) out.subset[a].push_back(x);
    return out;
}

Subobject empty_subobject(const Presheaf& p) {
    return {p, std::vector<std::vector<int>>(p.base->n_objects())};
}

Subobject union_sub(const Subobject& a, const Subobject& b) {
    Subobject out{a.parent, std::vector<std::vector<int>>(a.parent.base->n_objects())};
    for (int x = 0; x < a.parent.base->n_objects(); ++x)
        std::set_union(a.subset[x].begin(), a.subset[x].end(), b.subset[x].begin(), b.subset[x].end(),
                       std::back_inserter(out.subset[x]));
    return out;
}

Subobject intersect_sub(const Subobject& a, const Subobject& b) {
    Subobject out{a.parent, std::vector<std::vector<int>>(a.parent.base->n_objects())};
    for (int x = 0; x < a.parent.base->n_objects(); ++x)
        std::set_intersection(a.subset[x].begin(), a.subset[x].end(), b.subset[x].begin(), b.subset[x].end(),
                              std::back_inserter(out.subset[x]));
    return out;
}

Subobject image_subobject(const NatTrans& t) {
    Subobject out{t.dst, std::vector<std::vector<int>>(t.dst.base->n_objects())};
    for (int x = 0; x < t.dst.base->n_objects(); ++x) {
        std::set<int> img(t.comp[x].begin(), t.comp[x].end());
        out.subset[x].assign(img.begin(), img.end());
    }
    return out;
}

Subobject preimage_subobject(const NatTrans& t, const Subobject& s) {
    Subobject out{t.src, std::vector<std::vector<int>>(t.src.base->n_objects())};
    for (int x = 0; x < t.src.base->n_objects(); ++x)
        for (int e = 0; e < t.src.n_at(x); ++e)
            if (s.contains(x, t.comp[x][e])) out.subset[x].push_back(e);
    return out;
}

Presheaf sub_presheaf(const Subobject& s) {
    const auto& cat = *s.parent.base;
    Presheaf out;
    out.base = s.parent.base;
    out.elems.resize(cat.n_objects());
    std::vector<std::vector<int>> pos(cat.n_objects());  // parent index -> sub index
    for (int a = 0; a < cat.n_objects(); ++a) {
        pos[a].assign(s.parent.n_at(a), -1);
        for (int e : s.subset[a]) {
            pos[a][e] = static_cast<int>(out.elems[a].size());
            out.elems[a].push_back(s.parent.elems[a][e]);
        }
    }
    out.act.resize(cat.n_morphisms());
    for (int m = 0; m < cat.n_morphisms(); ++m) {
        int a = cat.morphisms[m].src, d = cat.morphisms[m].dst;
        for (int e : s.subset[a]) {
            int v = pos[d][s.parent.apply(m, e)];
            if (v < 0) throw ValidationError("subobject not closed under " + cat.morphisms[m].id);
            out.act[m].push_back(v);
        }
    }
    return out;
}

NatTrans sub_inclusion(const Subobject& s) {
    NatTrans t;
    t.src = sub_presheaf(s);
    t.dst = s.parent;
    t.comp.resize(s.parent.base->n_objects());
    for (int a = 0; a < s.parent.base->n_objects(); ++a) t.comp[a] = s.subset[a];
    return t;
}

bool is_pi0_surjective(const NatTrans& t) {
    Pi0 parts = pi0(t.dst);
    std::vector<bool> hit(parts.n_components, false);
    for (int x = 0; x < t.dst.base->n_objects(); ++x)
        for (int v : t.comp[x]) hit[parts.comp_of[x][v]] = true;
    return std::find(hit.begin(), hit.end(), false) == hit.end();
}

BooleanFactorization boolean_factorize(const NatTrans& t) {
    Pi0 parts = pi0(t.dst);
    std::vector<bool> hit(parts.n_components, false);
    for (int x = 0; x < t.dst.base->n_objects(); ++x)
        for (int v : t.comp[x]) hit[parts.comp_of[x][v]] = true;
    BooleanFactorization out;
    out.middle.parent = t.dst;
    out.middle.subset.resize(t.dst.base->n_objects());
    for (int x = 0; x < t.dst.base->n_objects(); ++x)
        for (int e = 0; e < t.dst.n_at(x); ++e)
            if (hit[parts.comp_of[x][e]]) out.middle.subset[x].push_back(e);
    Presheaf mid = sub_presheaf(out.middle);
    out.e.src = t.src;
    out.e.dst = mid;
    out.e.comp.resize(t.src.base->n_objects());
    for (int x = 0; x < t.src.base->n_objects(); ++x)
        for (int e = 0; e < t.src.n_at(x); ++e) {
            int parent_idx = t.comp[x][e];
            auto it = std::lower_bound(out.middle.subset[x].begin(), out.middle.subset[x].end(), parent_idx);
            out.e.comp[x].push_back(static_cast<int>(it - out.middle.subset[x].begin()));
        }
    out.m = sub_inclusion(out.middle);
    return out;
}

NatTrans identity_nat(const Presheaf& p) {
    NatTrans t;
    t.src = p;
    t.dst = p;
    t.comp.resize(p.base->n_objects());
    for (int x = 0; x < p.base->n_objects(); ++x) {
        t.comp[x].resize(p.n_at(x));
        for (int e = 0; e < p.n_at(x); ++e) t.comp[x][e] = e;
    }
    return t;
}

NatTrans compose_nat(const NatTrans& g, const NatTrans& f) {
    if (!f.dst.same_as(g.src)) throw BaseMismatch("compose_nat: middle objects differ");
    NatTrans t;
    t.src = f.src;
    t.dst = g.dst;
    t.comp.resize(f.src.base->n_objects());
    for (int x = 0; x < f.src.base->n_objects(); ++x)
        for (int e = 0; e < f.src.n_at(x); ++e) t.comp[x].push_back(g.comp[x][f.comp[x][e]]);
    return t;
}

bool nat_equal(const NatTrans& a, const NatTrans& b) {
    return a.src.same_as(b.src) && a.dst.same_as(b.dst) && a.comp == b.comp;
}

bool is_mono(const NatTrans& t) {
    for (int x = 0; x < t.src.base->n_objects(); ++x) {
        std::set<int> seen(t.comp[x].begin(), t.comp[x].end());
        if (seen.size() != t.comp[x].size()) return false;
    }
    return true;
}

bool is_epi(const NatTrans& t) {
    for (int x = 0; x < t.dst.base->n_objects(); ++x) {
        std::set<int> seen(t.comp[x].begin(), t.comp[x].end());
        if (static_cast<int>(seen.size()) != t.dst.n_at(x)) return false;
    }
    return true;
}

bool is_iso(const NatTrans& t) { return is_mono(t) && is_epi(t); }

NatTrans inverse_nat(const NatTrans& t) {
    if (!is_iso(t)) throw ValidationError("inverse_nat: not an isomorphism");
    NatTrans inv;
    inv.src = t.dst;
    inv.dst = t.src;
    inv.comp.resize(t.src.base->n_objects());
    for (int x = 0; x < t.src.base->n_objects(); ++x) {
        inv.comp[x].assign(t.dst.n_at(x), -1);
        for (int e = 0; e < t.src.n_at(x); ++e) inv.comp[x][t.comp[x][e]] = e;
    }
    return inv;
}

std::vector<NatTrans> all_nat_trans(const Presheaf& src, const Presheaf& dst, std::uint64_t guard) {
    if (!same_cat(src.base, dst.base)) throw BaseMismatch("all_nat_trans over different bases");
    const auto& cat = *src.base;
    // candidate space: per object a function src(X) -> dst(X)
    std::vector<int> radix;
    std::vector<std::pair<int, int>> slots;  // (object, src element)
    for (int x = 0; x < cat.n_objects(); ++x)
        for (int e = 0; e < src.n_at(x); ++e) {
            slots.push_back({x, e});
            radix.push_back(dst.n_at(x));
        }
    tuple_space_size(radix, guard);
    std::vector<NatTrans> out;
    auto try_candidate = [&](const std::vector<int>& pick) {
        NatTrans t;
        t.src = src;
        t.dst = dst;
        t.comp.resize(cat.n_objects());
        for (int x = 0; x < cat.n_objects(); ++x) t.comp[x].resize(src.n_at(x));
        for (std::size_t i = 0; i < slots.size(); ++i) t.comp[slots[i].first][slots[i].second] = pick[i];
        for (int m = 0; m < cat.n_morphisms(); ++m) {
            int s = cat.morphisms[m].src, d = cat.morphisms[m].dst;
            for (int e = 0; e < src.n_at(s); ++e)
                if (t.comp[d][src.apply(m, e)] != dst.apply(m, t.comp[s][e])) return;
        }
        out.push_back(std::move(t));
    };
    if (slots.empty()) {
        try_candidate({});
        return out;
    }
    for_each_tuple(radix, try_candidate);
    return out;
}

bool is_pullback_square(const NatTrans& f, const NatTrans& g, const NatTrans& s, const NatTrans& m) {
    // W --f--> X, W --g--> Y, X --s--> Z, Y --m--> Z
    if (!nat_equal(compose_nat(s, f), compose_nat(m, g))) return false;
    const auto& cat = *f.src.base;
    for (int x = 0; x < cat.n_objects(); ++x) {
        std::set<std::pair<int, int>> fibered;
        for (int i = 0; i < s.src.n_at(x); ++i)
            for (int j = 0; j < m.src.n_at(x); ++j)
                if (s.comp[x][i] == m.comp[x][j]) fibered.insert({i, j});
        std::set<std::pair<int, int>> induced;
        for (int w = 0; w < f.src.n_at(x); ++w) {
            auto key = std::make_pair(f.comp[x][w], g.comp[x][w]);
            if (induced.count(key)) return false;  // not injective
            induced.insert(key);
        }
        if (induced != fibered) return false;
    }
    return true;
}

int SumOfReps::elem_of(int summand, int morph) const {
    int obj = sheaf.base->morphisms[morph].dst;
    for (int e = 0; e < sheaf.n_at(obj); ++e)
        if (decode[obj][e] == std::make_pair(summand, morph)) return e;
    return -1;
}

SumOfReps sum_of_reps(const CatPtr& cat, const std::vector<int>& objs) {
    SumOfReps out;
    out.summands = objs;
    out.sheaf.base = cat;
    out.sheaf.elems.resize(cat->n_objects());
    out.decode.resize(cat->n_objects());
    for (int x = 0; x < cat->n_objects(); ++x)
        for (std::size_t k = 0; k < objs.size(); ++k)
            for (int g : cat->hom(objs[k], x)) {
                out.sheaf.elems[x].push_back(std::to_string(k) + ":" + cat->morphisms[g].id);
                out.decode[x].push_back({static_cast<int>(k), g});
            }
    out.sheaf.act.resize(cat->n_morphisms());
    for (int m = 0; m < cat->n_morphisms(); ++m) {
        int s = cat->morphisms[m].src;
        for (auto [k, g] : out.decode[s]) {
            int e = out.elem_of(k, cat->comp[m][g]);
            out.sheaf.act[m].push_back(e);
        }
    }
    return out;
}

NatTrans subsum_inclusion(const SumOfReps& full, const std::vector<int>& keep, SumOfReps* sub_out) {
    std::vector<int> objs;
    for (int k : keep) objs.push_back(full.summands[k]);
    SumOfReps sub = sum_of_reps(full.sheaf.base, objs);
    NatTrans t;
    t.src = sub.sheaf;
    t.dst = full.sheaf;
    t.comp.resize(full.sheaf.base->n_objects());
    for (int x = 0; x < full.sheaf.base->n_objects(); ++x)
        for (auto [k, g] : sub.decode[x]) t.comp[x].push_back(full.elem_of(keep[k], g));
    if (sub_out) *sub_out = std::move(sub);
    return t;
}

RepsClassification classify_sum_of_reps(const NatTrans& t, const SumOfReps& src, const SumOfReps& dst) {
    if (!t.src.same_as(src.sheaf) || !t.dst.same_as(dst.sheaf))
        throw NotSumOfReps("endpoints do not match the given sums of representables");
    const auto& cat = *t.src.base;
    RepsClassification out;
    for (std::size_t j = 0; j < src.summands.size(); ++j) {
        int cj = src.summands[j];
        int unit = src.elem_of(static_cast<int>(j), cat.identity[cj]);
        auto [alpha_j, f_j] = dst.decode[cj][t.comp[cj][unit]];
        out.alpha.push_back(alpha_j);
        out.f.push_back(f_j);
    }
    // t is determined by (alpha, f): verify
    for (int x = 0; x < cat.n_objects(); ++x)
        for (int e = 0; e < src.sheaf.n_at(x); ++e) {
            auto [j, g] = src.decode[x][e];
            int expected = dst.elem_of(out.alpha[j], cat.comp[g][out.f[j]]);
            if (t.comp[x][e] != expected)
                throw NotSumOfReps("transformation does not come from an index map with components");
        }
    std::set<int> distinct(out.alpha.begin(), out.alpha.end());
    bool inj = distinct.size() == out.alpha.size();
    bool isos = std::all_of(out.f.begin(), out.f.end(), [&](int f) { return is_iso_morphism(cat, f); });
    out.complemented_mono = inj && isos;
    out.pi0_surjective = static_cast<int>(distinct.size()) == static_cast<int>(dst.summands.size());
    return out;
}

bool is_iso_morphism(const FinCategory& cat, int f) {
    int s = cat.morphisms[f].src, d = cat.morphisms[f].dst;
    for (int g : cat.hom(d, s))
        if (cat.comp[g][f] == cat.identity[s] && cat.comp[f][g] == cat.identity[d]) return true;
    return false;
}

}  // namespace fdcalc

#include "fdcalc/fincat.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace fdcalc {

int FinCategory::compose(int g, int f) const {
    if (g < 0 || f < 0 || g >= n_morphisms() || f >= n_morphisms())
        throw ValidationError("compose: morphism index out of range");
    if (morphisms[f].dst != morphisms[g].src)
        throw ValidationError("compose: endpoints do not match for (" + morphisms[g].id + ", " + morphisms[f].id + ")");
    return comp[g][f];
}

std::vector<int> FinCategory::hom(int a, int b) const {
    std::vector<int> out;
    for (int m = 0; m < n_morphisms(); ++m)
        if (morphisms[m].src == a && morphisms[m].dst == b) out.push_back(m);
    return out;
}

int FinCategory::obj_index(const std::string& name) const {
    for (int i = 0; i < n_objects(); ++i)
        if (objects[i] == name) return i;
    return -1;
}

int FinCategory::morph_index(const std::string& id) const {
    for (int i = 0; i < n_morphisms(); ++i)
        if (morphisms[i].id == id) return i;
    return -1;
}

bool FinCategory::is_discrete() const {
    return n_morphisms() == n_objects();  // identities only
}

bool FinCategory::is_groupoid() const {
    for (int f = 0; f < n_morphisms(); ++f) {
        bool invertible = false;
        for (int g : hom(morphisms[f].dst, morphisms[f].src))
            if (comp[g][f] == identity[morphisms[f].src] && comp[f][g] == identity[morphisms[f].dst]) {
                invertible = true;
                break;
            }
        if (!invertible) return false;
    }
    return true;
}

bool FinCategory::same_as(const FinCategory& other) const {
    if (objects != other.objects || identity != other.identity || comp != other.comp) return false;
    if (morphisms.size() != other.morphisms.size()) return false;
    for (std::size_t i = 0; i < morphisms.size(); ++i)
        if (morphisms[i].id != other.morphisms[i].id || morphisms[i].src != other.morphisms[i].src ||
            morphisms[i].dst != other.morphisms[i].dst)
            return false;
    return true;
}

bool same_cat(const CatPtr& a, const CatPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->same_as(*b);
}

void check_category_laws(const FinCategory& cat) {
    const int nm = cat.n_morphisms();
    if (static_cast<int>(cat.identity.size()) != cat.n_objects())
        throw ValidationError("BadIdentity: identity table size mismatch");
    for (int a = 0; a < cat.n_objects(); ++a) {
        int id = cat.identity[a];
        if (id < 0 || id >= nm || cat.morphisms[id].src != a || cat.morphisms[id].dst != a)
            throw ValidationError("BadIdentity(" + cat.objects[a] + "): identity morphism has wrong endpoints");
    }
    for (int g = 0; g < nm; ++g)
        for (int f = 0; f < nm; ++f) {
            bool composable = cat.morphisms[f].dst == cat.morphisms[g].src;
            int gf = cat.comp[g][f];
            if (!composable) {
                if (gf != -1) throw ValidationError("BadComposite: table entry for non-composable (" +
                                                    cat.morphisms[g].id + ", " + cat.morphisms[f].id + ")");
                continue;
            }
            if (gf < 0 || gf >= nm)
                throw ValidationError("BadComposite: missing composite for (" + cat.morphisms[g].id + ", " +
                                      cat.morphisms[f].id + ")");
            if (cat.morphisms[gf].src != cat.morphisms[f].src || cat.morphisms[gf].dst != cat.morphisms[g].dst)
                throw ValidationError("BadComposite: composite endpoints wrong for (" + cat.morphisms[g].id + ", " +
                                      cat.morphisms[f].id + ")");
        }
    // identity laws
    for (int f = 0; f < nm; ++f) {
        int s = cat.morphisms[f].src, d = cat.morphisms[f].dst;
        if (cat.comp[f][cat.identity[s]] != f)
            throw ValidationError("BadIdentity(" + cat.objects[s] + "): " + cat.morphisms[f].id +
                                  " ∘ id != " + cat.morphisms[f].id);
        if (cat.comp[cat.identity[d]][f] != f)
            throw ValidationError("BadIdentity(" + cat.objects[d] + "): id ∘ " + cat.morphisms[f].id +
                                  " != " + cat.morphisms[f].id);
    }
    // associativity over composable triples
    std::vector<std::vector<int>> out_of(cat.n_objects());
    for (int m = 0; m < nm; ++m) out_of[cat.morphisms[m].src].push_back(m);
    for (int f = 0; f < nm; ++f)
        for (int g : out_of[cat.morphisms[f].dst])
            for (int h : out_of[cat.morphisms[g].dst]) {
                int hg = cat.comp[h][g], gf = cat.comp[g][f];
                if (cat.comp[hg][f] != cat.comp[h][gf])
                    throw ValidationError("NonAssociative(" + cat.morphisms[f].id + ", " + cat.morphisms[g].id +
                                          ", " + cat.morphisms[h].id + ")");
            }
}

CatPtr validate_category(const RawCategory& raw) {
    auto cat = std::make_shared<FinCategory>();
    cat->objects = raw.objects;
    {
        std::set<std::string> seen(raw.objects.begin(), raw.objects.end());
        if (seen.size() != raw.objects.size()) throw ValidationError("duplicate object id");
    }
    std::map<std::string, int> midx;
    for (const auto& rm : raw.morphisms) {
        int s = cat->obj_index(rm.src), d = cat->obj_index(rm.dst);
        if (s < 0 || d < 0) throw ValidationError("DanglingEndpoint(" + rm.id + ")");
        if (midx.count(rm.id)) throw ValidationError("duplicate morphism id " + rm.id);
        midx[rm.id] = cat->n_morphisms();
        cat->morphisms.push_back({rm.id, s, d});
    }
    cat->identity.assign(cat->n_objects(), -1);
    for (const auto& [obj, mid] : raw.identities) {
        int a = cat->obj_index(obj);
        if (a < 0) throw ValidationError("BadIdentity(" + obj + "): unknown object");
        auto it = midx.find(mid);
        if (it == midx.end()) throw ValidationError("BadIdentity(" + obj + "): unknown morphism " + mid);
        cat->identity[a] = it->second;
    }
    for (int a = 0; a < cat->n_objects(); ++a)
        if (cat->identity[a] < 0) throw ValidationError("BadIdentity(" + cat->objects[a] + "): no identity given");
    cat->comp.assign(cat->n_morphisms(), std::vector<int>(cat->n_morphisms(), -1));
    for (const auto& triple : raw.compose) {
        auto g = midx.find(triple[0]), f = midx.find(triple[1]), gf = midx.find(triple[2]);
        if (g == midx.end() || f == midx.end() || gf == midx.end())
            throw ValidationError("BadComposite: unknown morphism in triple (" + triple[0] + ", " + triple[1] + ", " +
                                  triple[2] + ")");
        cat->comp[g->second][f->second] = gf->second;
    }
    check_category_laws(*cat);
    return cat;
}

CatPtr opposite(const CatPtr& cat) {
    auto op = std::make_shared<FinCategory>();
    op->objects = cat->objects;
    op->identity = cat->identity;
    op->morphisms = cat->morphisms;
    for (auto& m : op->morphisms) std::swap(m.src, m.dst);
    const int nm = cat->n_morphisms();
    op->comp.assign(nm, std::vector<int>(nm, -1));
    for (int g = 0; g < nm; ++g)
        for (int f = 0; f < nm; ++f) op->comp[g][f] = cat->comp[f][g];
    check_category_laws(*op);
    return op;
}

CatPtr product_category(const CatPtr& c, const CatPtr& d) {
    auto p = std::make_shared<FinCategory>();
    auto oidx = [&](int a, int b) { return a * d->n_objects() + b; };
    for (int a = 0; a < c->n_objects(); ++a)
        for (int b = 0; b < d->n_objects(); ++b) p->objects.push_back("(" + c->objects[a] + "," + d->objects[b] + ")");
    auto mseen = std::map<std::pair<int, int>, int>{};
    for (int f = 0; f < c->n_morphisms(); ++f)
        for (int g = 0; g < d->n_morphisms(); ++g) {
            mseen[{f, g}] = p->n_morphisms();
            p->morphisms.push_back({"(" + c->morphisms[f].id + "," + d->morphisms[g].id + ")",
                                    oidx(c->morphisms[f].src, d->morphisms[g].src),
                                    oidx(c->morphisms[f].dst, d->morphisms[g].dst)});
        }
    p->identity.assign(p->n_objects(), -1);
    for (int a = 0; a < c->n_objects(); ++a)
        for (int b = 0; b < d->n_objects(); ++b)
            p->identity[oidx(a, b)] = mseen.at({c->identity[a], d->identity[b]});
    const int nm = p->n_morphisms();
    p->comp.assign(nm, std::vector<int>(nm, -1));
    for (const auto& [gk, gi] : mseen)
        for (const auto& [fk, fi] : mseen) {
            if (p->morphisms[fi].dst != p->morphisms[gi].src) continue;
            p->comp[gi][fi] = mseen.at({c->comp[gk.first][fk.first], d->comp[gk.second][fk.second]});
        }
    check_category_laws(*p);
    return p;
}

SeqMorphism compose_seq_morphism(const FinCategory& base, const SeqMorphism& tau_g, const SeqMorphism& sigma_f) {
    SeqMorphism out;
    out.sigma.resize(tau_g.sigma.size());
    out.components.resize(tau_g.sigma.size());
    for (std::size_t k = 0; k < tau_g.sigma.size(); ++k) {
        int tk = tau_g.sigma[k];
        out.sigma[k] = sigma_f.sigma[tk];
        out.components[k] = base.comp[tau_g.components[k]][sigma_f.components[tk]];
    }
    return out;
}

namespace {

std::string seq_name(const FinCategory& base, const std::vector<int>& entries) {
    std::vector<std::string> names;
    for (int e : entries) names.push_back(base.objects[e]);
    return "<" + join(names, ",") + ">";
}

// All sequences of length 0..max over base objects, shortlex order.
std::vector<std::vector<int>> all_sequences(int n_base, int max_len) {
    std::vector<std::vector<int>> out{{}};
    std::vector<std::vector<int>> level{{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& s : level)
            for (int e = 0; e < n_base; ++e) {
                auto t = s;
                t.push_back(e);
                next.push_back(t);
            }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

// sigma candidates m -> n, lexicographic; bijections only in strict mode,
// surjections in soft mode.
std::vector<std::vector<int>> sigma_candidates(int m, int n, bool strict) {
    std::vector<std::vector<int>> out;
    if (strict && m != n) return out;
    if (m == 0) {
        if (n == 0) out.push_back({});
        return out;
    }
    if (n == 0) return out;
    std::vector<int> radix(m, n);
    for_each_tuple(radix, [&](const std::vector<int>& sigma) {
        std::vector<bool> hit(n, false);
        for (int v : sigma) hit[v] = true;
        if (std::find(hit.begin(), hit.end(), false) != hit.end()) return;
        if (strict) {
            std::set<int> distinct(sigma.begin(), sigma.end());
            if (static_cast<int>(distinct.size()) != m) return;
        }
        out.push_back(sigma);
    });
    return out;
}

CatPtr build_generated(const CatPtr& base, int max_arity, GenKind kind) {
    if (max_arity < 0) throw ValidationError("max arity must be >= 0");
    auto gen = std::make_shared<FinCategory>();
    gen->gen_kind = kind;
    gen->gen_base = base;
    gen->max_arity = max_arity;
    auto seqs = all_sequences(base->n_objects(), max_arity);
    for (const auto& s : seqs) {
        gen->seq_objects.push_back({s});
        gen->objects.push_back(seq_name(*base, s));
    }
    const bool strict = kind == GenKind::Bang;
    const int nobj = gen->n_objects();
    gen->identity.assign(nobj, -1);
    std::map<std::pair<int, int>, std::vector<int>> per_hom;
    for (int so = 0; so < nobj; ++so) {
        const auto& src = gen->seq_objects[so].entries;
        for (int dobj = 0; dobj < nobj; ++dobj) {
            const auto& dst = gen->seq_objects[dobj].entries;
            const int n = static_cast<int>(src.size()), m = static_cast<int>(dst.size());
            for (const auto& sigma : sigma_candidates(m, n, strict)) {
                std::vector<std::vector<int>> homs(m);
                bool empty = false;
                for (int j = 0; j < m; ++j) {
                    homs[j] = base->hom(src[sigma[j]], dst[j]);
                    if (homs[j].empty()) empty = true;
                }
                if (empty && m > 0) continue;
                std::vector<int> radix(m);
                for (int j = 0; j < m; ++j) radix[j] = static_cast<int>(homs[j].size());
                auto emit = [&](const std::vector<int>& pick) {
                    SeqMorphism data;
                    data.sigma = sigma;
                    data.components.resize(m);
                    for (int j = 0; j < m; ++j) data.components[j] = homs[j][pick[j]];
                    int idx = gen->n_morphisms();
                    per_hom[{so, dobj}].push_back(idx);
                    gen->seq_morphisms.push_back(data);
                    gen->morphisms.push_back(
                        {"m" + std::to_string(so) + "_" + std::to_string(dobj) + "_" +
                             std::to_string(per_hom[{so, dobj}].size() - 1),
                         so, dobj});
                    bool is_id = so == dobj;
                    for (int j = 0; is_id && j < m; ++j)
                        if (sigma[j] != j || data.components[j] != base->identity[dst[j]]) is_id = false;
                    if (is_id) gen->identity[so] = idx;
                };
                if (m == 0)
                    emit({});
                else
                    for_each_tuple(radix, emit);
            }
        }
    }
    const int nm = gen->n_morphisms();
    gen->comp.assign(nm, std::vector<int>(nm, -1));
    for (int f = 0; f < nm; ++f)
        for (int g = 0; g < nm; ++g) {
            if (gen->morphisms[f].dst != gen->morphisms[g].src) continue;
            SeqMorphism gf = compose_seq_morphism(*base, gen->seq_morphisms[g], gen->seq_morphisms[f]);
            int idx = seq_morphism_index(*gen, gen->morphisms[f].src, gen->morphisms[g].dst, gf);
            if (idx < 0) throw ValidationError("generated category not closed under composition");
            gen->comp[g][f] = idx;
        }
    check_category_laws(*gen);
    return gen;
}

}  // namespace

int seq_object_index(const FinCategory& gen, const std::vector<int>& entries) {
    for (int i = 0; i < gen.n_objects(); ++i)
        if (gen.seq_objects[i].entries == entries) return i;
    return -1;
}

int seq_morphism_index(const FinCategory& gen, int src_obj, int dst_obj, const SeqMorphism& data) {
    for (int m = 0; m < gen.n_morphisms(); ++m)
        if (gen.morphisms[m].src == src_obj && gen.morphisms[m].dst == dst_obj && gen.seq_morphisms[m] == data)
            return m;
    return -1;
}

CatPtr free_symmetric(const CatPtr& base, int max_arity) { return build_generated(base, max_arity, GenKind::Bang); }

CatPtr free_soft(const CatPtr& base, int max_arity) { return build_generated(base, max_arity, GenKind::Down); }

CatPtr terminal_category() {
    RawCategory raw;
    raw.objects = {"*"};
    raw.morphisms = {{"id*", "*", "*"}};
    raw.identities = {{"*", "id*"}};
    raw.compose = {{"id*", "id*", "id*"}};
    return validate_category(raw);
}

CatPtr walking_arrow() {
    RawCategory raw;
    raw.objects = {"0", "1"};
    raw.morphisms = {{"id0", "0", "0"}, {"id1", "1", "1"}, {"e", "0", "1"}};
    raw.identities = {{"0", "id0"}, {"1", "id1"}};
    raw.compose = {{"id0", "id0", "id0"}, {"id1", "id1", "id1"}, {"e", "id0", "e"}, {"id1", "e", "e"}};
    return validate_category(raw);
}

CatPtr discrete_category(const std::vector<std::string>& names) {
    RawCategory raw;
    raw.objects = names;
    for (const auto& n : names) {
        raw.morphisms.push_back({"id_" + n, n, n});
        raw.identities.push_back({n, "id_" + n});
        raw.compose.push_back({"id_" + n, "id_" + n, "id_" + n});
    }
    return validate_category(raw);
}

}  // namespace fdcalc

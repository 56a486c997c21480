#include "fdcalc/generators.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fdcalc {

namespace {

CatPtr z2_groupoid() {
    RawCategory raw;
    raw.objects = {"*"};
    raw.morphisms = {{"1", "*", "*"}, {"s", "*", "*"}};
    raw.identities = {{"*", "1"}};
    raw.compose = {{"1", "1", "1"}, {"1", "s", "s"}, {"s", "1", "s"}, {"s", "s", "1"}};
    return validate_category(raw);
}

CatPtr idempotent_monoid() {
    RawCategory raw;
    raw.objects = {"*"};
    raw.morphisms = {{"1", "*", "*"}, {"e", "*", "*"}};
    raw.identities = {{"*", "1"}};
    raw.compose = {{"1", "1", "1"}, {"1", "e", "e"}, {"e", "1", "e"}, {"e", "e", "e"}};
    return validate_category(raw);
}

CatPtr parallel_pair() {
    RawCategory raw;
    raw.objects = {"0", "1"};
    raw.morphisms = {{"id0", "0", "0"}, {"id1", "1", "1"}, {"f", "0", "1"}, {"g", "0", "1"}};
    raw.identities = {{"0", "id0"}, {"1", "id1"}};
    raw.compose = {{"id0", "id0", "id0"}, {"id1", "id1", "id1"}, {"f", "id0", "f"},
                   {"id1", "f", "f"},     {"g", "id0", "g"},     {"id1", "g", "g"}};
    return validate_category(raw);
}

// A poset category from a random partial order (reflexive-transitive closure
// of a random relation on a chain-compatible order): at most one morphism per
// hom set, so the tables are forced and the laws automatic.
CatPtr random_poset(Rng& rng, int n) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) le[i][i] = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.chance(1, 2)) le[i][j] = true;
    for (int k = 0; k < n; ++k)  // transitive closure
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (le[i][k] && le[k][j]) le[i][j] = true;
    RawCategory raw;
    for (int i = 0; i < n; ++i) raw.objects.push_back("p" + std::to_string(i));
    auto name = [&](int i, int j) { return "m" + std::to_string(i) + "_" + std::to_string(j); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (le[i][j]) raw.morphisms.push_back({name(i, j), raw.objects[i], raw.objects[j]});
    for (int i = 0; i < n; ++i) raw.identities.push_back({raw.objects[i], name(i, i)});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (le[i][j] && le[j][k]) raw.compose.push_back({name(j, k), name(i, j), name(i, k)});
    return validate_category(raw);
}

}  // namespace

CatPtr random_category(Rng& rng, int max_objects) {
    while (true) {
        switch (rng.below(7)) {
            case 0: return terminal_category();
            case 1:
                if (max_objects >= 2) return walking_arrow();
                break;
            case 2: {
                int k = rng.range(1, std::min(3, max_objects));
                std::vector<std::string> names;
                for (int i = 0; i < k; ++i) names.push_back("a" + std::to_string(i));
                return discrete_category(names);
            }
            case 3:
                if (max_objects >= 2) return random_poset(rng, rng.range(2, std::min(3, max_objects)));
                break;
            case 4: return z2_groupoid();
            case 5: return idempotent_monoid();
            case 6:
                if (max_objects >= 2) return parallel_pair();
                break;
        }
    }
}

CatPtr random_discrete(Rng& rng, int max_objects) {
    int k = rng.range(1, max_objects);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("a" + std::to_string(i));
    return discrete_category(names);
}

Presheaf random_presheaf(Rng& rng, const CatPtr& cat, int max_summands, GenStats* stats) {
    if (stats) ++stats->tries;
    int k = rng.range(0, max_summands);
    if (k == 0) {
        if (stats) ++stats->accepted;
        if (rng.chance(1, 3)) return terminal_presheaf(cat);
        return empty_presheaf(cat);
    }
    std::vector<int> objs;
    for (int i = 0; i < k; ++i) objs.push_back(static_cast<int>(rng.below(cat->n_objects())));
    auto reps = sum_of_reps(cat, objs);
    Presheaf p = reps.sheaf;
    // random congruence: merge a few pairs inside fibers and close under the actions
    int merges = rng.range(0, 2);
    if (merges > 0) {
        std::vector<int> off(cat->n_objects() + 1, 0);
        for (int x = 0; x < cat->n_objects(); ++x) off[x + 1] = off[x] + p.n_at(x);
        UnionFind uf(off.back());
        auto obj_of = [&](int g) {
            int x = 0;
            while (off[x + 1] <= g) ++x;
            return x;
        };
        for (int i = 0; i < merges; ++i) {
            // pick an object with at least two elements
            std::vector<int> fat;
            for (int x = 0; x < cat->n_objects(); ++x)
                if (p.n_at(x) >= 2) fat.push_back(x);
            if (fat.empty()) break;
            int x = fat[rng.below(fat.size())];
            int e1 = static_cast<int>(rng.below(p.n_at(x)));
            int e2 = static_cast<int>(rng.below(p.n_at(x)));
            uf.unite(off[x] + e1, off[x] + e2);
        }
        // close: x ~ y forces act(x) ~ act(y)
        bool changed = true;
        while (changed) {
            changed = false;
            for (int m = 0; m < cat->n_morphisms(); ++m) {
                int s = cat->morphisms[m].src, d = cat->morphisms[m].dst;
                for (int e1 = 0; e1 < p.n_at(s); ++e1)
                    for (int e2 = e1 + 1; e2 < p.n_at(s); ++e2) {
                        if (uf.find(off[s] + e1) != uf.find(off[s] + e2)) continue;
                        int t1 = off[d] + p.apply(m, e1), t2 = off[d] + p.apply(m, e2);
                        if (uf.find(t1) != uf.find(t2)) {
                            uf.unite(t1, t2);
                            changed = true;
                        }
                    }
            }
        }
        // quotient presheaf with representative names
        Presheaf q;
        q.base = cat;
        q.elems.resize(cat->n_objects());
        std::vector<int> cls(off.back(), -1);
        std::vector<int> local(off.back(), -1);
        for (int g = 0; g < off.back(); ++g) {
            int root = uf.find(g);
            if (cls[root] < 0) {
                int x = obj_of(root);
                cls[root] = root;
                local[root] = static_cast<int>(q.elems[x].size());
                q.elems[x].push_back(p.elems[x][root - off[x]]);
            }
            cls[g] = cls[root];
            local[g] = local[root];
        }
        q.act.resize(cat->n_morphisms());
        for (int m = 0; m < cat->n_morphisms(); ++m) {
            int s = cat->morphisms[m].src, d = cat->morphisms[m].dst;
            q.act[m].assign(q.n_at(s), -1);
            for (int e = 0; e < p.n_at(s); ++e) q.act[m][local[off[s] + e]] = local[off[d] + p.apply(m, e)];
        }
        validate_presheaf(q);
        if (stats) ++stats->accepted;
        return q;
    }
    if (stats) ++stats->accepted;
    return p;
}

std::optional<NatTrans> random_nat(Rng& rng, const Presheaf& src, const Presheaf& dst) {
    auto all = all_nat_trans(src, dst);
    if (all.empty()) return std::nullopt;
    return all[rng.below(all.size())];
}

Profunctor random_profunctor(Rng& rng, const CatPtr& src, const CatPtr& dst, int max_summands) {
    auto base = product_category(opposite(src), dst);
    auto p = random_presheaf(rng, base, max_summands);
    return presheaf_to_prof(p, src, dst);
}

SymSeq random_symseq(Rng& rng, GenKind mode, const CatPtr& base, const CatPtr& target, int max_arity,
                     int max_summands) {
    auto gen_cat = mode == GenKind::Bang ? free_symmetric(base, max_arity) : free_soft(base, max_arity);
    auto prof = random_profunctor(rng, gen_cat, target, max_summands);
    return make_symseq(mode, base, target, max_arity, std::move(prof));
}

ExprPtr random_expr(Rng& rng, const CatPtr& dom, const CatPtr& cod, int depth, int max_summands,
                    GenStats* stats) {
    if (stats) ++stats->tries;
    const bool leaf = depth <= 0 || rng.chance(2, 5);
    if (leaf) {
        while (true) {
            switch (rng.below(6)) {
                case 0:
                    if (same_cat(dom, cod)) {
                        if (stats) ++stats->accepted;
                        return identity_expr(dom);
                    }
                    break;
                case 1: {
                    if (stats) ++stats->accepted;
                    return constant_expr(dom, random_presheaf(rng, cod, max_summands));
                }
                case 2: {
                    if (stats) ++stats->accepted;
                    return linear_expr(random_profunctor(rng, dom, cod, std::max(1, max_summands)));
                }
                case 3: {
                    // Monomial needs the pi0 row condition; retry, then fall
                    // back to a hom-restriction exponent which always passes
                    for (int attempt = 0; attempt < 4; ++attempt) {
                        auto p = random_profunctor(rng, cod, dom, std::max(1, max_summands - 1));
                        if (hom_tense_check(p)) {
                            if (stats) ++stats->accepted;
                            return monomial_expr(p);
                        }
                    }
                    auto functor = random_functor(rng, cod, dom);
                    if (stats) ++stats->accepted;
                    return monomial_expr(f_lower(functor));
                }
                case 4: {
                    if (stats) ++stats->accepted;
                    int arity = rng.range(1, 2);
                    return analytic_expr(random_symseq(rng, GenKind::Bang, dom, cod, arity, max_summands));
                }
                case 5: {
                    if (stats) ++stats->accepted;
                    int arity = rng.range(1, 2);
                    return analytic_expr(random_symseq(rng, GenKind::Down, dom, cod, arity, max_summands));
                }
            }
        }
    }
    switch (rng.below(3)) {
        case 0:
            return sum_expr(random_expr(rng, dom, cod, depth - 1, max_summands, stats),
                            random_expr(rng, dom, cod, depth - 1, max_summands, stats));
        case 1:
            return product_expr(random_expr(rng, dom, cod, depth - 1, max_summands, stats),
                                random_expr(rng, dom, cod, depth - 1, max_summands, stats));
        default: {
            const CatPtr mid = rng.chance(1, 2) ? dom : cod;
            return compose_expr(random_expr(rng, mid, cod, depth - 1, max_summands, stats),
                                random_expr(rng, dom, mid, depth - 1, max_summands, stats));
        }
    }
}

CatFunctor random_functor(Rng& rng, const CatPtr& dom, const CatPtr& cod) {
    // try a handful of random object assignments with forced morphism maps;
    // fall back to a constant functor which always exists
    for (int attempt = 0; attempt < 8; ++attempt) {
        CatFunctor f;
        f.src = dom;
        f.dst = cod;
        for (int a = 0; a < dom->n_objects(); ++a)
            f.obj_map.push_back(static_cast<int>(rng.below(cod->n_objects())));
        bool ok = true;
        for (int m = 0; m < dom->n_morphisms() && ok; ++m) {
            auto hom = cod->hom(f.obj_map[dom->morphisms[m].src], f.obj_map[dom->morphisms[m].dst]);
            if (hom.empty()) {
                ok = false;
                break;
            }
            if (dom->identity[dom->morphisms[m].src] == m && dom->morphisms[m].src == dom->morphisms[m].dst)
                f.morph_map.push_back(cod->identity[f.obj_map[dom->morphisms[m].src]]);
            else
                f.morph_map.push_back(hom[rng.below(hom.size())]);
        }
        if (!ok) continue;
        try {
            validate_functor(f);
            return f;
        } catch (const ValidationError&) {
            continue;
        }
    }
    CatFunctor constant;
    constant.src = dom;
    constant.dst = cod;
    int target = static_cast<int>(rng.below(cod->n_objects()));
    constant.obj_map.assign(dom->n_objects(), target);
    constant.morph_map.assign(dom->n_morphisms(), cod->identity[target]);
    validate_functor(constant);
    return constant;
}

}  // namespace fdcalc

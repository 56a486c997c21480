#include "fdcalc/prof.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace fdcalc {

int Profunctor::find_cell_elem(int a, int b, const std::string& name) const {
    for (int i = 0; i < n_cell(a, b); ++i)
        if (cells[a][b][i] == name) return i;
    return -1;
}

int Profunctor::total() const {
    int n = 0;
    for (const auto& row : cells)
        for (const auto& c : row) n += static_cast<int>(c.size());
    return n;
}

bool Profunctor::same_as(const Profunctor& other) const {
    return same_cat(src, other.src) && same_cat(dst, other.dst) && cells == other.cells && left == other.left &&
           right == other.right;
}

Presheaf prof_to_presheaf(const Profunctor& p) {
    auto base = product_category(opposite(p.src), p.dst);
    const int nb = p.dst->n_objects();
    const int nmb = p.dst->n_morphisms();
    Presheaf out;
    out.base = base;
    out.elems.resize(base->n_objects());
    for (int a = 0; a < p.src->n_objects(); ++a)
        for (int b = 0; b < nb; ++b) out.elems[a * nb + b] = p.cells[a][b];
    out.act.resize(base->n_morphisms());
    for (int f = 0; f < p.src->n_morphisms(); ++f)
        for (int g = 0; g < nmb; ++g) {
            // (f,g): (f.dst, g.src) -> (f.src, g.dst) in opposite(src) × dst
            int a_from = p.src->morphisms[f].dst, a_to = p.src->morphisms[f].src;
            (void)a_to;
            std::vector<int> table;
            for (int e = 0; e < p.n_cell(a_from, p.dst->morphisms[g].src); ++e)
                table.push_back(p.right[g][p.src->morphisms[f].src][p.left[f][p.dst->morphisms[g].src][e]]);
            out.act[f * nmb + g] = std::move(table);
        }
    return out;
}

Profunctor presheaf_to_prof(const Presheaf& ph, const CatPtr& src, const CatPtr& dst) {
    const int nb = dst->n_objects();
    const int nmb = dst->n_morphisms();
    Profunctor out;
    out.src = src;
    out.dst = dst;
    out.cells.assign(src->n_objects(), std::vector<std::vector<std::string>>(nb));
    for (int a = 0; a < src->n_objects(); ++a)
        for (int b = 0; b < nb; ++b) out.cells[a][b] = ph.elems[a * nb + b];
    out.left.resize(src->n_morphisms());
    for (int f = 0; f < src->n_morphisms(); ++f) {
        out.left[f].resize(nb);
        for (int b = 0; b < nb; ++b) out.left[f][b] = ph.act[f * nmb + dst->identity[b]];
    }
    out.right.resize(nmb);
    for (int g = 0; g < nmb; ++g) {
        out.right[g].resize(src->n_objects());
        for (int a = 0; a < src->n_objects(); ++a) out.right[g][a] = ph.act[src->identity[a] * nmb + g];
    }
    return out;
}

void validate_profunctor(const Profunctor& p) {
    if (static_cast<int>(p.cells.size()) != p.src->n_objects()) throw ValidationError("profunctor cells shape");
    for (const auto& row : p.cells)
        if (static_cast<int>(row.size()) != p.dst->n_objects()) throw ValidationError("profunctor cells shape");
    if (static_cast<int>(p.left.size()) != p.src->n_morphisms() ||
        static_cast<int>(p.right.size()) != p.dst->n_morphisms())
        throw ValidationError("profunctor action tables shape");
    for (int f = 0; f < p.src->n_morphisms(); ++f)
        for (int b = 0; b < p.dst->n_objects(); ++b)
            if (static_cast<int>(p.left[f][b].size()) != p.n_cell(p.src->morphisms[f].dst, b))
                throw ValidationError("left action table shape");
    for (int g = 0; g < p.dst->n_morphisms(); ++g)
        for (int a = 0; a < p.src->n_objects(); ++a)
            if (static_cast<int>(p.right[g][a].size()) != p.n_cell(a, p.dst->morphisms[g].src))
                throw ValidationError("right action table shape");
    // identities must act as identity on each variable separately
    for (int a = 0; a < p.src->n_objects(); ++a)
        for (int b = 0; b < p.dst->n_objects(); ++b)
            for (int e = 0; e < p.n_cell(a, b); ++e) {
                if (p.left[p.src->identity[a]][b][e] != e)
                    throw ValidationError("left action does not respect identities");
                if (p.right[p.dst->identity[b]][a][e] != e)
                    throw ValidationError("right action does not respect identities");
            }
    // functoriality in both variables and the bimodule law = functor laws
    // over opposite(src) × dst
    validate_presheaf(prof_to_presheaf(p));
}

void validate_prof_morphism(const ProfMorphism& m) {
    const auto& s = m.src;
    const auto& d = m.dst;
    if (!same_cat(s.src, d.src) || !same_cat(s.dst, d.dst)) throw EndpointMismatch("profunctor morphism endpoints");
    for (int a = 0; a < s.src->n_objects(); ++a)
        for (int b = 0; b < s.dst->n_objects(); ++b) {
            if (static_cast<int>(m.comp[a][b].size()) != s.n_cell(a, b))
                throw ValidationError("profunctor morphism component shape");
            for (int v : m.comp[a][b])
                if (v < 0 || v >= d.n_cell(a, b)) throw ValidationError("profunctor morphism out of range");
        }
    for (int f = 0; f < s.src->n_morphisms(); ++f) {
        int A = s.src->morphisms[f].dst, A2 = s.src->morphisms[f].src;
        for (int b = 0; b < s.dst->n_objects(); ++b)
            for (int e = 0; e < s.n_cell(A, b); ++e)
                if (m.comp[A2][b][s.left[f][b][e]] != d.left[f][b][m.comp[A][b][e]])
                    throw ValidationError("profunctor morphism not natural in the contravariant variable");
    }
    for (int g = 0; g < s.dst->n_morphisms(); ++g) {
        int B = s.dst->morphisms[g].src, B2 = s.dst->morphisms[g].dst;
        for (int a = 0; a < s.src->n_objects(); ++a)
            for (int e = 0; e < s.n_cell(a, B); ++e)
                if (m.comp[a][B2][s.right[g][a][e]] != d.right[g][a][m.comp[a][B][e]])
                    throw ValidationError("profunctor morphism not natural in the covariant variable");
    }
}

Profunctor identity_prof(const CatPtr& cat) {
    Profunctor p;
    p.src = cat;
    p.dst = cat;
    const int n = cat->n_objects();
    p.cells.assign(n, std::vector<std::vector<std::string>>(n));
    std::vector<std::vector<std::vector<int>>> local(n, std::vector<std::vector<int>>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            local[a][b] = cat->hom(a, b);
            for (int m : local[a][b]) p.cells[a][b].push_back(cat->morphisms[m].id);
        }
    auto pos = [&](int a, int b, int m) {
        auto it = std::find(local[a][b].begin(), local[a][b].end(), m);
        return static_cast<int>(it - local[a][b].begin());
    };
    p.left.resize(cat->n_morphisms());
    p.right.resize(cat->n_morphisms());
    for (int f = 0; f < cat->n_morphisms(); ++f) {
        int fs = cat->morphisms[f].src, fd = cat->morphisms[f].dst;
        p.left[f].resize(n);
        p.right[f].resize(n);
        for (int b = 0; b < n; ++b)
            for (int g : local[fd][b]) p.left[f][b].push_back(pos(fs, b, cat->comp[g][f]));
        for (int a = 0; a < n; ++a)
            for (int g : local[a][fs]) p.right[f][a].push_back(pos(a, fd, cat->comp[f][g]));
    }
    return p;
}

Presheaf row_presheaf(const Profunctor& p, int a) {
    Presheaf out;
    out.base = p.dst;
    out.elems.resize(p.dst->n_objects());
    for (int b = 0; b < p.dst->n_objects(); ++b) out.elems[b] = p.cells[a][b];
    out.act.resize(p.dst->n_morphisms());
    for (int g = 0; g < p.dst->n_morphisms(); ++g) out.act[g] = p.right[g][a];
    return out;
}

Presheaf col_presheaf(const Profunctor& p, int b) {
    Presheaf out;
    out.base = opposite(p.src);
    out.elems.resize(p.src->n_objects());
    for (int a = 0; a < p.src->n_objects(); ++a) out.elems[a] = p.cells[a][b];
    out.act.resize(p.src->n_morphisms());
    for (int f = 0; f < p.src->n_morphisms(); ++f) out.act[f] = p.left[f][b];
    return out;
}

int CoendTable::find_gen(const Gen& g) const {
    auto it = std::lower_bound(gens.begin(), gens.end(), g);
    if (it == gens.end() || !(*it == g)) return -1;
    return static_cast<int>(it - gens.begin());
}

namespace {

// Shared coend machinery: generators (mid, x, y), identifications provided by
// a callback, canonical class = minimal generator.
CoendTable build_coend(std::vector<CoendTable::Gen> gens,
                       const std::function<void(UnionFind&, const CoendTable&)>& relate) {
    CoendTable t;
    std::sort(gens.begin(), gens.end());
    t.gens = std::move(gens);
    UnionFind uf(static_cast<int>(t.gens.size()));
    relate(uf, t);
    std::map<int, int> root_to_class;
    t.class_of.resize(t.gens.size());
    for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
        int root = uf.find(i);
        auto [it, inserted] = root_to_class.try_emplace(root, static_cast<int>(root_to_class.size()));
        t.class_of[i] = it->second;
        if (inserted) t.rep_gen.push_back(i);
    }
    return t;
}

}  // namespace

int ComposeResult::class_of(int a, int c, const CoendTable::Gen& g) const {
    int i = tables[a][c].find_gen(g);
    return i < 0 ? -1 : tables[a][c].class_of[i];
}

ComposeResult compose_prof(const Profunctor& q, const Profunctor& p) {
    if (!same_cat(p.dst, q.src)) throw EndpointMismatch("compose: middle categories differ");
    const CatPtr A = p.src, B = p.dst, C = q.dst;
    ComposeResult out;
    out.prof.src = A;
    out.prof.dst = C;
    out.prof.cells.assign(A->n_objects(), std::vector<std::vector<std::string>>(C->n_objects()));
    out.tables.assign(A->n_objects(), std::vector<CoendTable>(C->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int c = 0; c < C->n_objects(); ++c) {
            std::vector<CoendTable::Gen> gens;
            for (int b = 0; b < B->n_objects(); ++b)
                for (int x = 0; x < p.n_cell(a, b); ++x)
                    for (int y = 0; y < q.n_cell(b, c); ++y) gens.push_back({b, x, y});
            out.tables[a][c] = build_coend(std::move(gens), [&](UnionFind& uf, const CoendTable& t) {
                for (int m = 0; m < B->n_morphisms(); ++m) {
                    int b = B->morphisms[m].src, b2 = B->morphisms[m].dst;
                    for (int x = 0; x < p.n_cell(a, b); ++x)
                        for (int y = 0; y < q.n_cell(b2, c); ++y)
                            uf.unite(t.find_gen({b, x, q.left[m][c][y]}), t.find_gen({b2, p.right[m][a][x], y}));
                }
            });
            for (int r : out.tables[a][c].rep_gen) {
                auto g = out.tables[a][c].gens[r];
                out.prof.cells[a][c].push_back("[" + B->objects[g.mid] + ":" + p.cells[a][g.mid][g.x] + "&" +
                                               q.cells[g.mid][c][g.y] + "]");
            }
        }
    // actions act on the outer variables of representatives; verified to be
    // constant on classes (well-definedness of the quotient)
    out.prof.left.resize(A->n_morphisms());
    for (int f = 0; f < A->n_morphisms(); ++f) {
        int a = A->morphisms[f].dst, a2 = A->morphisms[f].src;
        out.prof.left[f].resize(C->n_objects());
        for (int c = 0; c < C->n_objects(); ++c) {
            const auto& t = out.tables[a][c];
            std::vector<int> table(t.n_classes(), -1);
            for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
                auto g = t.gens[i];
                int target = out.class_of(a2, c, {g.mid, p.left[f][g.mid][g.x], g.y});
                int cls = t.class_of[i];
                if (table[cls] == -1)
                    table[cls] = target;
                else if (table[cls] != target)
                    throw ValidationError("coend left action not constant on classes");
            }
            out.prof.left[f][c] = std::move(table);
        }
    }
    out.prof.right.resize(C->n_morphisms());
    for (int h = 0; h < C->n_morphisms(); ++h) {
        int c = C->morphisms[h].src, c2 = C->morphisms[h].dst;
        out.prof.right[h].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a) {
            const auto& t = out.tables[a][c];
            std::vector<int> table(t.n_classes(), -1);
            for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
                auto g = t.gens[i];
                int target = out.class_of(a, c2, {g.mid, g.x, q.right[h][g.mid][g.y]});
                int cls = t.class_of[i];
                if (table[cls] == -1)
                    table[cls] = target;
                else if (table[cls] != target)
                    throw ValidationError("coend right action not constant on classes");
            }
            out.prof.right[h][a] = std::move(table);
        }
    }
    validate_profunctor(out.prof);
    return out;
}

int TensorResult::class_of(int b, const CoendTable::Gen& g) const {
    int i = tables[b].find_gen(g);
    return i < 0 ? -1 : tables[b].class_of[i];
}

TensorResult tensor_presheaf(const Profunctor& p, const Presheaf& phi) {
    if (!same_cat(p.src, phi.base)) throw BaseMismatch("tensor: presheaf not on the source category");
    const CatPtr A = p.src, B = p.dst;
    TensorResult out;
    out.sheaf.base = B;
    out.sheaf.elems.resize(B->n_objects());
    out.tables.resize(B->n_objects());
    for (int b = 0; b < B->n_objects(); ++b) {
        std::vector<CoendTable::Gen> gens;
        for (int a = 0; a < A->n_objects(); ++a)
            for (int x = 0; x < phi.n_at(a); ++x)
                for (int e = 0; e < p.n_cell(a, b); ++e) gens.push_back({a, x, e});
        out.tables[b] = build_coend(std::move(gens), [&](UnionFind& uf, const CoendTable& t) {
            for (int m = 0; m < A->n_morphisms(); ++m) {
                int a = A->morphisms[m].src, a2 = A->morphisms[m].dst;
                for (int x = 0; x < phi.n_at(a); ++x)
                    for (int e = 0; e < p.n_cell(a2, b); ++e)
                        uf.unite(t.find_gen({a, x, p.left[m][b][e]}), t.find_gen({a2, phi.apply(m, x), e}));
            }
        });
        for (int r : out.tables[b].rep_gen) {
            auto g = out.tables[b].gens[r];
            out.sheaf.elems[b].push_back("[" + A->objects[g.mid] + ":" + phi.elems[g.mid][g.x] + "&" +
                                         p.cells[g.mid][b][g.y] + "]");
        }
    }
    out.sheaf.act.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        int b = B->morphisms[h].src, b2 = B->morphisms[h].dst;
        const auto& t = out.tables[b];
        std::vector<int> table(t.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
            auto g = t.gens[i];
            int target = out.class_of(b2, {g.mid, g.x, p.right[h][g.mid][g.y]});
            int cls = t.class_of[i];
            if (table[cls] == -1)
                table[cls] = target;
            else if (table[cls] != target)
                throw ValidationError("tensor action not constant on classes");
        }
        out.sheaf.act[h] = std::move(table);
    }
    validate_presheaf(out.sheaf);
    return out;
}

NatTrans tensor_nat(const Profunctor& p, const NatTrans& t) {
    auto src = tensor_presheaf(p, t.src);
    auto dst = tensor_presheaf(p, t.dst);
    NatTrans out;
    out.src = src.sheaf;
    out.dst = dst.sheaf;
    out.comp.resize(p.dst->n_objects());
    for (int b = 0; b < p.dst->n_objects(); ++b) {
        const auto& table = src.tables[b];
        out.comp[b].assign(table.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(table.gens.size()); ++i) {
            auto g = table.gens[i];
            int target = dst.class_of(b, {g.mid, t.comp[g.mid][g.x], g.y});
            int cls = table.class_of[i];
            if (out.comp[b][cls] == -1)
                out.comp[b][cls] = target;
            else if (out.comp[b][cls] != target)
                throw ValidationError("tensor of a transformation not constant on classes");
        }
    }
    validate_nat(out);
    return out;
}

NatTrans tensor_morph(const ProfMorphism& m, const Presheaf& phi) {
    auto src = tensor_presheaf(m.src, phi);
    auto dst = tensor_presheaf(m.dst, phi);
    NatTrans out;
    out.src = src.sheaf;
    out.dst = dst.sheaf;
    out.comp.resize(m.src.dst->n_objects());
    for (int b = 0; b < m.src.dst->n_objects(); ++b) {
        const auto& table = src.tables[b];
        out.comp[b].assign(table.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(table.gens.size()); ++i) {
            auto g = table.gens[i];
            int target = dst.class_of(b, {g.mid, g.x, m.comp[g.mid][b][g.y]});
            int cls = table.class_of[i];
            if (out.comp[b][cls] == -1)
                out.comp[b][cls] = target;
            else if (out.comp[b][cls] != target)
                throw ValidationError("tensor of a profunctor morphism not constant on classes");
        }
    }
    validate_nat(out);
    return out;
}

namespace {

std::string family_name(const std::vector<std::vector<int>>& table) {
    std::vector<std::string> parts;
    for (const auto& col : table) {
        std::vector<std::string> vals;
        for (int v : col) vals.push_back(std::to_string(v));
        parts.push_back(join(vals, ","));
    }
    return "{" + join(parts, "|") + "}";
}

}  // namespace

int HomResult::find_family(int a, int b, const std::vector<std::vector<int>>& table) const {
    for (int i = 0; i < static_cast<int>(families[a][b].size()); ++i)
        if (families[a][b][i] == table) return i;
    return -1;
}

HomResult left_hom(const Profunctor& q, const Profunctor& r, std::uint64_t guard) {
    if (!same_cat(q.dst, r.dst)) throw EndpointMismatch("left_hom: target categories differ");
    const CatPtr A = r.src, B = q.src;
    HomResult out;
    out.prof.src = A;
    out.prof.dst = B;
    out.prof.cells.assign(A->n_objects(), std::vector<std::vector<std::string>>(B->n_objects()));
    out.families.assign(A->n_objects(),
                        std::vector<std::vector<std::vector<std::vector<int>>>>(B->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int b = 0; b < B->n_objects(); ++b) {
            for (const auto& t : all_nat_trans(row_presheaf(q, b), row_presheaf(r, a), guard)) {
                out.families[a][b].push_back(t.comp);
                out.prof.cells[a][b].push_back(family_name(t.comp));
            }
        }
    out.prof.left.resize(A->n_morphisms());
    for (int f = 0; f < A->n_morphisms(); ++f) {
        int a = A->morphisms[f].dst, a2 = A->morphisms[f].src;
        out.prof.left[f].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (const auto& fam : out.families[a][b]) {
                auto mapped = fam;
                for (int c = 0; c < r.dst->n_objects(); ++c)
                    for (auto& v : mapped[c]) v = r.left[f][c][v];
                out.prof.left[f][b].push_back(out.find_family(a2, b, mapped));
            }
    }
    out.prof.right.resize(B->n_morphisms());
    for (int g = 0; g < B->n_morphisms(); ++g) {
        int b = B->morphisms[g].src, b2 = B->morphisms[g].dst;
        out.prof.right[g].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a)
            for (const auto& fam : out.families[a][b]) {
                // precompose with Q(g,-): Q(b2,-) -> Q(b,-)
                std::vector<std::vector<int>> mapped(q.dst->n_objects());
                for (int c = 0; c < q.dst->n_objects(); ++c) {
                    mapped[c].resize(q.n_cell(b2, c));
                    for (int y = 0; y < q.n_cell(b2, c); ++y) mapped[c][y] = fam[c][q.left[g][c][y]];
                }
                out.prof.right[g][a].push_back(out.find_family(a, b2, mapped));
            }
    }
    validate_profunctor(out.prof);
    return out;
}

HomResult right_hom(const Profunctor& r, const Profunctor& p, std::uint64_t guard) {
    if (!same_cat(r.src, p.src)) throw EndpointMismatch("right_hom: source categories differ");
    const CatPtr A = r.src, B = p.dst, C = r.dst;
    HomResult out;
    out.prof.src = B;
    out.prof.dst = C;
    out.prof.cells.assign(B->n_objects(), std::vector<std::vector<std::string>>(C->n_objects()));
    out.families.assign(B->n_objects(),
                        std::vector<std::vector<std::vector<std::vector<int>>>>(C->n_objects()));
    for (int b = 0; b < B->n_objects(); ++b)
        for (int c = 0; c < C->n_objects(); ++c)
            for (const auto& t : all_nat_trans(col_presheaf(p, b), col_presheaf(r, c), guard)) {
                out.families[b][c].push_back(t.comp);
                out.prof.cells[b][c].push_back(family_name(t.comp));
            }
    out.prof.left.resize(B->n_morphisms());
    for (int g = 0; g < B->n_morphisms(); ++g) {
        int b = B->morphisms[g].dst, b2 = B->morphisms[g].src;
        out.prof.left[g].resize(C->n_objects());
        for (int c = 0; c < C->n_objects(); ++c)
            for (const auto& fam : out.families[b][c]) {
                // precompose with P(-,g): P(-,b2) -> P(-,b)
                std::vector<std::vector<int>> mapped(A->n_objects());
                for (int a = 0; a < A->n_objects(); ++a) {
                    mapped[a].resize(p.n_cell(a, b2));
                    for (int x = 0; x < p.n_cell(a, b2); ++x) mapped[a][x] = fam[a][p.right[g][a][x]];
                }
                out.prof.left[g][c].push_back(out.find_family(b2, c, mapped));
            }
    }
    out.prof.right.resize(C->n_morphisms());
    for (int h = 0; h < C->n_morphisms(); ++h) {
        int c = C->morphisms[h].src, c2 = C->morphisms[h].dst;
        out.prof.right[h].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (const auto& fam : out.families[b][c]) {
                auto mapped = fam;
                for (int a = 0; a < A->n_objects(); ++a)
                    for (auto& v : mapped[a]) v = r.right[h][a][v];
                out.prof.right[h][b].push_back(out.find_family(b, c2, mapped));
            }
    }
    validate_profunctor(out.prof);
    return out;
}

Profunctor transpose(const Profunctor& p) {
    Profunctor out;
    out.src = opposite(p.dst);
    out.dst = opposite(p.src);
    out.cells.assign(p.dst->n_objects(), std::vector<std::vector<std::string>>(p.src->n_objects()));
    for (int a = 0; a < p.src->n_objects(); ++a)
        for (int b = 0; b < p.dst->n_objects(); ++b) out.cells[b][a] = p.cells[a][b];
    out.left.resize(p.dst->n_morphisms());
    for (int g = 0; g < p.dst->n_morphisms(); ++g) {
        out.left[g].resize(p.src->n_objects());
        for (int a = 0; a < p.src->n_objects(); ++a) out.left[g][a] = p.right[g][a];
    }
    out.right.resize(p.src->n_morphisms());
    for (int f = 0; f < p.src->n_morphisms(); ++f) {
        out.right[f].resize(p.dst->n_objects());
        for (int b = 0; b < p.dst->n_objects(); ++b) out.right[f][b] = p.left[f][b];
    }
    validate_profunctor(out);
    return out;
}

bool hom_tense_check(const Profunctor& p, HomTenseWitness* witness) {
    for (int f = 0; f < p.src->n_morphisms(); ++f) {
        int a = p.src->morphisms[f].src, a2 = p.src->morphisms[f].dst;
        auto parts_lo = pi0(row_presheaf(p, a));
        std::vector<bool> hit(parts_lo.n_components, false);
        for (int b = 0; b < p.dst->n_objects(); ++b)
            for (int y = 0; y < p.n_cell(a2, b); ++y) hit[parts_lo.comp_of[b][p.left[f][b][y]]] = true;
        for (int c = 0; c < parts_lo.n_components; ++c)
            if (!hit[c]) {
                if (witness) *witness = {f, c};
                return false;
            }
    }
    return true;
}

void validate_functor(const CatFunctor& f) {
    const auto& A = *f.src;
    const auto& B = *f.dst;
    if (static_cast<int>(f.obj_map.size()) != A.n_objects() ||
        static_cast<int>(f.morph_map.size()) != A.n_morphisms())
        throw ValidationError("functor tables have wrong shape");
    for (int m = 0; m < A.n_morphisms(); ++m) {
        const auto& fm = B.morphisms[f.morph_map[m]];
        if (fm.src != f.obj_map[A.morphisms[m].src] || fm.dst != f.obj_map[A.morphisms[m].dst])
            throw ValidationError("functor does not preserve endpoints at " + A.morphisms[m].id);
    }
    for (int a = 0; a < A.n_objects(); ++a)
        if (f.morph_map[A.identity[a]] != B.identity[f.obj_map[a]])
            throw ValidationError("functor does not preserve identity at " + A.objects[a]);
    for (int g = 0; g < A.n_morphisms(); ++g)
        for (int m = 0; m < A.n_morphisms(); ++m) {
            if (A.morphisms[m].dst != A.morphisms[g].src) continue;
            if (f.morph_map[A.comp[g][m]] != B.comp[f.morph_map[g]][f.morph_map[m]])
                throw ValidationError("functor does not preserve composition");
        }
}

Profunctor f_lower(const CatFunctor& f) {
    const CatPtr A = f.src, B = f.dst;
    Profunctor p;
    p.src = A;
    p.dst = B;
    p.cells.assign(A->n_objects(), std::vector<std::vector<std::string>>(B->n_objects()));
    std::vector<std::vector<std::vector<int>>> local(A->n_objects(),
                                                     std::vector<std::vector<int>>(B->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int b = 0; b < B->n_objects(); ++b) {
            local[a][b] = B->hom(f.obj_map[a], b);
            for (int m : local[a][b]) p.cells[a][b].push_back(B->morphisms[m].id);
        }
    auto pos = [&](int a, int b, int m) {
        auto it = std::find(local[a][b].begin(), local[a][b].end(), m);
        return static_cast<int>(it - local[a][b].begin());
    };
    p.left.resize(A->n_morphisms());
    for (int m = 0; m < A->n_morphisms(); ++m) {
        int src_o = A->morphisms[m].src, dst_o = A->morphisms[m].dst;
        p.left[m].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (int g : local[dst_o][b]) p.left[m][b].push_back(pos(src_o, b, B->comp[g][f.morph_map[m]]));
    }
    p.right.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        p.right[h].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a)
            for (int g : local[a][B->morphisms[h].src]) p.right[h][a].push_back(pos(a, B->morphisms[h].dst, B->comp[h][g]));
    }
    validate_profunctor(p);
    return p;
}

Profunctor f_upper(const CatFunctor& f) {
    const CatPtr A = f.src, B = f.dst;
    Profunctor p;
    p.src = B;
    p.dst = A;
    p.cells.assign(B->n_objects(), std::vector<std::vector<std::string>>(A->n_objects()));
    std::vector<std::vector<std::vector<int>>> local(B->n_objects(),
                                                     std::vector<std::vector<int>>(A->n_objects()));
    for (int b = 0; b < B->n_objects(); ++b)
        for (int a = 0; a < A->n_objects(); ++a) {
            local[b][a] = B->hom(b, f.obj_map[a]);
            for (int m : local[b][a]) p.cells[b][a].push_back(B->morphisms[m].id);
        }
    auto pos = [&](int b, int a, int m) {
        auto it = std::find(local[b][a].begin(), local[b][a].end(), m);
        return static_cast<int>(it - local[b][a].begin());
    };
    p.left.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        int src_o = B->morphisms[h].src, dst_o = B->morphisms[h].dst;
        p.left[h].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a)
            for (int g : local[dst_o][a]) p.left[h][a].push_back(pos(src_o, a, B->comp[g][h]));
    }
    p.right.resize(A->n_morphisms());
    for (int m = 0; m < A->n_morphisms(); ++m) {
        p.right[m].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (int g : local[b][A->morphisms[m].src])
                p.right[m][b].push_back(pos(b, A->morphisms[m].dst, B->comp[f.morph_map[m]][g]));
    }
    validate_profunctor(p);
    return p;
}

ProfMorphism identity_profmorph(const Profunctor& p) {
    ProfMorphism m;
    m.src = p;
    m.dst = p;
    m.comp.resize(p.src->n_objects());
    for (int a = 0; a < p.src->n_objects(); ++a) {
        m.comp[a].resize(p.dst->n_objects());
        for (int b = 0; b < p.dst->n_objects(); ++b) {
            m.comp[a][b].resize(p.n_cell(a, b));
            for (int e = 0; e < p.n_cell(a, b); ++e) m.comp[a][b][e] = e;
        }
    }
    return m;
}

ProfMorphism compose_profmorph(const ProfMorphism& g, const ProfMorphism& f) {
    if (!f.dst.same_as(g.src)) throw EndpointMismatch("compose_profmorph: middle profunctors differ");
    ProfMorphism m;
    m.src = f.src;
    m.dst = g.dst;
    m.comp.resize(f.src.src->n_objects());
    for (int a = 0; a < f.src.src->n_objects(); ++a) {
        m.comp[a].resize(f.src.dst->n_objects());
        for (int b = 0; b < f.src.dst->n_objects(); ++b)
            for (int e : f.comp[a][b]) m.comp[a][b].push_back(g.comp[a][b][e]);
    }
    return m;
}

bool profmorph_equal(const ProfMorphism& a, const ProfMorphism& b) {
    return a.src.same_as(b.src) && a.dst.same_as(b.dst) && a.comp == b.comp;
}

bool is_iso_profmorph(const ProfMorphism& m) {
    for (int a = 0; a < m.src.src->n_objects(); ++a)
        for (int b = 0; b < m.src.dst->n_objects(); ++b) {
            std::vector<bool> hit(m.dst.n_cell(a, b), false);
            for (int v : m.comp[a][b]) {
                if (hit[v]) return false;
                hit[v] = true;
            }
            if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
        }
    return true;
}

std::vector<ProfMorphism> all_prof_morphisms(const Profunctor& p, const Profunctor& q, std::uint64_t guard) {
    if (!same_cat(p.src, q.src) || !same_cat(p.dst, q.dst))
        throw EndpointMismatch("all_prof_morphisms: endpoints differ");
    auto ps = prof_to_presheaf(p);
    auto qs = prof_to_presheaf(q);
    std::vector<ProfMorphism> out;
    const int nb = p.dst->n_objects();
    for (const auto& t : all_nat_trans(ps, qs, guard)) {
        ProfMorphism m;
        m.src = p;
        m.dst = q;
        m.comp.resize(p.src->n_objects());
        for (int a = 0; a < p.src->n_objects(); ++a) {
            m.comp[a].resize(nb);
            for (int b = 0; b < nb; ++b) m.comp[a][b] = t.comp[a * nb + b];
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace fdcalc

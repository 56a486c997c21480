#include "fdcalc/analytic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace fdcalc {

bool SymSeq::same_as(const SymSeq& other) const {
    return mode == other.mode && same_cat(base, other.base) && same_cat(target, other.target) &&
           max_arity == other.max_arity && prof.same_as(other.prof);
}

void validate_symseq(const SymSeq& s) {
    if (s.mode != GenKind::Bang && s.mode != GenKind::Down) throw ModeError("symmetric sequence mode unset");
    if (s.seq_cat->gen_kind != s.mode || s.seq_cat->max_arity != s.max_arity ||
        !same_cat(s.seq_cat->gen_base, s.base))
        throw ValidationError("sequence category does not match the declared mode/base/arity");
    if (!same_cat(s.prof.src, s.seq_cat) || !same_cat(s.prof.dst, s.target))
        throw EndpointMismatch("symmetric sequence profunctor endpoints");
    validate_profunctor(s.prof);
}

SymSeq make_symseq(GenKind mode, const CatPtr& base, const CatPtr& target, int max_arity, Profunctor prof) {
    SymSeq s;
    s.mode = mode;
    s.base = base;
    s.target = target;
    s.max_arity = max_arity;
    s.seq_cat = prof.src;
    s.prof = std::move(prof);
    validate_symseq(s);
    return s;
}

NatTrans nat_of_seq_morphism(const CatPtr& cat, const SeqMorphism& m, const SumOfReps& over_dst,
                             const SumOfReps& over_src) {
    NatTrans t;
    t.src = over_dst.sheaf;
    t.dst = over_src.sheaf;
    t.comp.resize(cat->n_objects());
    for (int x = 0; x < cat->n_objects(); ++x)
        for (auto [j, g] : over_dst.decode[x])
            t.comp[x].push_back(over_src.elem_of(m.sigma[j], cat->comp[g][m.components[j]]));
    validate_nat(t);
    return t;
}

NatTrans nat_of_tuple(const Presheaf& phi, const SumOfReps& reps, const std::vector<int>& tuple) {
    NatTrans t;
    t.src = reps.sheaf;
    t.dst = phi;
    t.comp.resize(phi.base->n_objects());
    for (int x = 0; x < phi.base->n_objects(); ++x)
        for (auto [i, g] : reps.decode[x]) t.comp[x].push_back(phi.apply(g, tuple[i]));
    validate_nat(t);
    return t;
}

std::vector<int> AnalyticEvalResult::tuple_radix(int seq_obj) const {
    std::vector<int> radix;
    for (int entry : seq.seq_cat->seq_objects[seq_obj].entries) radix.push_back(phi.n_at(entry));
    return radix;
}

int AnalyticEvalResult::encode_tuple(int seq_obj, const std::vector<int>& tuple) const {
    auto radix = tuple_radix(seq_obj);
    int code = 0;
    for (std::size_t i = 0; i < radix.size(); ++i) code = code * radix[i] + tuple[i];
    return code;
}

std::vector<int> AnalyticEvalResult::decode_tuple(int seq_obj, int code) const {
    auto radix = tuple_radix(seq_obj);
    std::vector<int> tuple(radix.size());
    for (int i = static_cast<int>(radix.size()) - 1; i >= 0; --i) {
        tuple[i] = code % radix[i];
        code /= radix[i];
    }
    return tuple;
}

int AnalyticEvalResult::class_of(int b, int seq_obj, int p, const std::vector<int>& tuple) const {
    int i = tables[b].find_gen({seq_obj, p, encode_tuple(seq_obj, tuple)});
    return i < 0 ? -1 : tables[b].class_of[i];
}

namespace {

int tuple_count(const std::vector<int>& radix) {
    int n = 1;
    for (int r : radix) n *= r;
    return n;
}

// diverse: the picked elements pairwise share no ancestor
bool tuple_is_diverse(const std::vector<std::vector<std::vector<ElemRef>>>& anc, const std::vector<int>& entries,
                      const std::vector<int>& tuple) {
    for (std::size_t i = 0; i < tuple.size(); ++i)
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            const auto& ai = anc[entries[i]][tuple[i]];
            const auto& aj = anc[entries[j]][tuple[j]];
            for (const auto& r : ai)
                if (std::binary_search(aj.begin(), aj.end(), r)) return false;
        }
    return true;
}

}  // namespace

AnalyticEvalResult analytic_eval(const SymSeq& s, const Presheaf& phi) {
    if (!same_cat(phi.base, s.base)) throw BaseMismatch("analytic_eval: presheaf not on the base category");
    const auto& gen = *s.seq_cat;
    AnalyticEvalResult out;
    out.seq = s;
    out.phi = phi;
    out.sheaf.base = s.target;
    out.sheaf.elems.resize(s.target->n_objects());
    out.tables.resize(s.target->n_objects());

    auto anc = s.mode == GenKind::Down ? ancestor_sets(phi) : std::vector<std::vector<std::vector<ElemRef>>>{};

    std::vector<std::vector<int>> radices(gen.n_objects());
    for (int so = 0; so < gen.n_objects(); ++so) radices[so] = [&] {
        std::vector<int> radix;
        for (int entry : gen.seq_objects[so].entries) radix.push_back(phi.n_at(entry));
        return radix;
    }();

    for (int b = 0; b < s.target->n_objects(); ++b) {
        std::vector<CoendTable::Gen> gens;
        for (int so = 0; so < gen.n_objects(); ++so) {
            int nt = tuple_count(radices[so]);
            for (int p = 0; p < s.prof.n_cell(so, b); ++p)
                for (int code = 0; code < nt; ++code) gens.push_back({so, p, code});
        }
        CoendTable t;
        std::sort(gens.begin(), gens.end());
        t.gens = std::move(gens);
        UnionFind uf(static_cast<int>(t.gens.size()));
        for (int m = 0; m < gen.n_morphisms(); ++m) {
            int so = gen.morphisms[m].src, so2 = gen.morphisms[m].dst;
            const auto& data = gen.seq_morphisms[m];
            // identification (A, q·m, a) ~ (C, q, m·a) for each tuple a over the source entries
            std::vector<int> radix = radices[so];
            auto run = [&](const std::vector<int>& tuple) {
                // covariant push of the tuple along (sigma, <f_j>)
                std::vector<int> pushed(gen.seq_objects[so2].entries.size());
                for (std::size_t j = 0; j < pushed.size(); ++j)
                    pushed[j] = phi.apply(data.components[j], tuple[data.sigma[j]]);
                int code = 0;
                for (std::size_t i = 0; i < tuple.size(); ++i) code = code * radix[i] + tuple[i];
                int pcode = 0;
                for (std::size_t j = 0; j < pushed.size(); ++j) pcode = pcode * radices[so2][j] + pushed[j];
                for (int q = 0; q < s.prof.n_cell(so2, b); ++q) {
                    int lhs = [&] {
                        CoendTable::Gen g{so, s.prof.left[m][b][q], code};
                        return t.find_gen(g);
                    }();
                    int rhs = t.find_gen({so2, q, pcode});
                    uf.unite(lhs, rhs);
                }
            };
            if (radix.empty())
                run({});
            else
                for_each_tuple(radix, run);
        }
        // classes with canonical representatives (diverse-minimal in soft mode)
        std::map<int, std::vector<int>> members;
        for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) members[uf.find(i)].push_back(i);
        t.class_of.assign(t.gens.size(), -1);
        for (const auto& [root, idxs] : members) {
            int cls = static_cast<int>(t.rep_gen.size());
            int rep = idxs.front();
            if (s.mode == GenKind::Down) {
                rep = -1;
                for (int i : idxs) {
                    const auto& g = t.gens[i];
                    const auto& entries = gen.seq_objects[g.mid].entries;
                    std::vector<int> tuple(entries.size());
                    int code = g.y;
                    for (int k = static_cast<int>(entries.size()) - 1; k >= 0; --k) {
                        tuple[k] = code % radices[g.mid][k];
                        code /= radices[g.mid][k];
                    }
                    if (tuple_is_diverse(anc, entries, tuple)) {
                        rep = i;
                        break;
                    }
                }
                if (rep < 0) throw ValidationError("soft coend class with no diverse representative");
            }
            for (int i : idxs) t.class_of[i] = cls;
            t.rep_gen.push_back(rep);
        }
        for (int r : t.rep_gen) {
            auto g = t.gens[r];
            std::vector<std::string> names;
            auto tuple = [&] {
                const auto& entries = gen.seq_objects[g.mid].entries;
                std::vector<int> tup(entries.size());
                int code = g.y;
                for (int k = static_cast<int>(entries.size()) - 1; k >= 0; --k) {
                    tup[k] = code % radices[g.mid][k];
                    code /= radices[g.mid][k];
                }
                return tup;
            }();
            for (std::size_t k = 0; k < tuple.size(); ++k)
                names.push_back(phi.elems[gen.seq_objects[g.mid].entries[k]][tuple[k]]);
            out.sheaf.elems[b].push_back("[" + gen.objects[g.mid] + ":" + s.prof.cells[g.mid][b][g.x] + "&" +
                                         join(names, ",") + "]");
        }
        out.tables[b] = std::move(t);
    }
    // target actions: act on the coefficient of representatives, checked
    // constant on classes
    out.sheaf.act.resize(s.target->n_morphisms());
    for (int h = 0; h < s.target->n_morphisms(); ++h) {
        int b = s.target->morphisms[h].src, b2 = s.target->morphisms[h].dst;
        const auto& t = out.tables[b];
        std::vector<int> table(t.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
            auto g = t.gens[i];
            int j = out.tables[b2].find_gen({g.mid, s.prof.right[h][g.mid][g.x], g.y});
            int target = out.tables[b2].class_of[j];
            int cls = t.class_of[i];
            if (table[cls] == -1)
                table[cls] = target;
            else if (table[cls] != target)
                throw ValidationError("analytic evaluation action not constant on classes");
        }
        out.sheaf.act[h] = std::move(table);
    }
    validate_presheaf(out.sheaf);
    return out;
}

namespace {

// index of the automorphism of seq object `obj` that applies `perm` to the
// block [block_start, block_start+block_len) and is the identity elsewhere
int block_perm_morphism(const FinCategory& gen, int obj, int block_start, const std::vector<int>& perm) {
    const auto& entries = gen.seq_objects[obj].entries;
    SeqMorphism data;
    data.sigma.resize(entries.size());
    data.components.resize(entries.size());
    const int block_len = static_cast<int>(perm.size());
    for (int j = 0; j < static_cast<int>(entries.size()); ++j) {
        int src_pos = j;
        if (j >= block_start && j < block_start + block_len) src_pos = block_start + perm[j - block_start];
        data.sigma[j] = src_pos;
        data.components[j] = gen.gen_base->identity[entries[j]];
    }
    return seq_morphism_index(gen, obj, obj, data);
}

}  // namespace

NablaResult nabla(const SymSeq& s, int a_obj) {
    if (s.mode != GenKind::Bang) throw ModeError("nabla is defined for strict symmetric sequences");
    if (s.max_arity < 1) throw ValidationError("nabla: arity budget exhausted");
    if (a_obj < 0 || a_obj >= s.base->n_objects()) throw UnknownObject("nabla: no such base object");
    const auto& gen = *s.seq_cat;
    auto out_cat = free_symmetric(s.base, s.max_arity - 1);

    NablaResult result;
    SymSeq& out = result.seq;
    out.mode = GenKind::Bang;
    out.base = s.base;
    out.target = s.target;
    out.max_arity = s.max_arity - 1;
    out.seq_cat = out_cat;
    out.prof.src = out_cat;
    out.prof.dst = s.target;

    const int nb = s.target->n_objects();
    // per (out object, b): list of (n, input cell element) with orbit structure
    struct Block {
        int n;                      // number of appended copies of A
        int in_obj;                 // input sequence object
        std::vector<int> orbit_of;  // input cell elem -> local orbit id
        std::vector<int> orbit_rep;
        int offset;                 // first output index of this block
    };
    std::vector<std::vector<std::vector<Block>>> blocks(out_cat->n_objects(),
                                                        std::vector<std::vector<Block>>(nb));
    out.prof.cells.assign(out_cat->n_objects(), std::vector<std::vector<std::string>>(nb));
    for (int xo = 0; xo < out_cat->n_objects(); ++xo) {
        auto entries = out_cat->seq_objects[xo].entries;
        const int k = static_cast<int>(entries.size());
        for (int b = 0; b < nb; ++b) {
            int offset = 0;
            for (int n = 1; k + n <= s.max_arity; ++n) {
                auto in_entries = entries;
                in_entries.insert(in_entries.end(), n, a_obj);
                int in_obj = seq_object_index(gen, in_entries);
                Block blk;
                blk.n = n;
                blk.in_obj = in_obj;
                blk.offset = offset;
                int ncell = s.prof.n_cell(in_obj, b);
                UnionFind uf(ncell);
                // adjacent transpositions generate the S_n action on the block
                for (int i = 0; i + 1 < n; ++i) {
                    std::vector<int> perm(n);
                    for (int j = 0; j < n; ++j) perm[j] = j;
                    std::swap(perm[i], perm[i + 1]);
                    int m = block_perm_morphism(gen, in_obj, k, perm);
                    for (int q = 0; q < ncell; ++q) uf.unite(q, s.prof.left[m][b][q]);
                }
                blk.orbit_of.resize(ncell);
                std::map<int, int> root_to_orbit;
                for (int q = 0; q < ncell; ++q) {
                    int root = uf.find(q);
                    auto [it, inserted] = root_to_orbit.try_emplace(root, static_cast<int>(root_to_orbit.size()));
                    blk.orbit_of[q] = it->second;
                    if (inserted) blk.orbit_rep.push_back(q);
                }
                for (int rep : blk.orbit_rep)
                    out.prof.cells[xo][b].push_back("n" + std::to_string(n) + ":[" +
                                                    s.prof.cells[in_obj][b][rep] + "]");
                offset += static_cast<int>(blk.orbit_rep.size());
                blocks[xo][b].push_back(std::move(blk));
            }
        }
    }
    result.decode.assign(out_cat->n_objects(), {});
    result.in_obj.assign(out_cat->n_objects(), {});
    for (int xo = 0; xo < out_cat->n_objects(); ++xo) {
        result.decode[xo].resize(nb);
        if (nb > 0)
            for (const auto& blk : blocks[xo][0]) result.in_obj[xo].push_back(blk.in_obj);
        for (int b = 0; b < nb; ++b)
            for (const auto& blk : blocks[xo][b])
                for (int rep : blk.orbit_rep) result.decode[xo][b].push_back({blk.n, rep});
    }
    auto out_index = [&](int xo, int b, int n, int in_elem) {
        for (const auto& blk : blocks[xo][b])
            if (blk.n == n) return blk.offset + blk.orbit_of[in_elem];
        return -1;
    };
    // left action: lift an output morphism by tensoring with the identity on
    // the appended block
    out.prof.left.resize(out_cat->n_morphisms());
    for (int mo = 0; mo < out_cat->n_morphisms(); ++mo) {
        int xo = out_cat->morphisms[mo].dst, xo2 = out_cat->morphisms[mo].src;
        const auto& data = out_cat->seq_morphisms[mo];
        const int k = static_cast<int>(out_cat->seq_objects[xo].entries.size());
        out.prof.left[mo].resize(nb);
        for (int b = 0; b < nb; ++b) {
            out.prof.left[mo][b].assign(out.prof.n_cell(xo, b), -1);
            for (const auto& blk : blocks[xo][b]) {
                SeqMorphism lifted;
                lifted.sigma.resize(k + blk.n);
                lifted.components.resize(k + blk.n);
                for (int j = 0; j < k; ++j) {
                    lifted.sigma[j] = data.sigma[j];
                    lifted.components[j] = data.components[j];
                }
                for (int j = 0; j < blk.n; ++j) {
                    lifted.sigma[k + j] = k + j;
                    lifted.components[k + j] = s.base->identity[a_obj];
                }
                int src_in = seq_object_index(
                    gen, [&] {
                        auto es = out_cat->seq_objects[xo2].entries;
                        es.insert(es.end(), blk.n, a_obj);
                        return es;
                    }());
                int m_in = seq_morphism_index(gen, src_in, blk.in_obj, lifted);
                if (m_in < 0) throw ValidationError("nabla: lifted morphism missing in the sequence category");
                for (int q = 0; q < static_cast<int>(blk.orbit_of.size()); ++q) {
                    int target = out_index(xo2, b, blk.n, s.prof.left[m_in][b][q]);
                    int cls = blk.offset + blk.orbit_of[q];
                    if (out.prof.left[mo][b][cls] == -1)
                        out.prof.left[mo][b][cls] = target;
                    else if (out.prof.left[mo][b][cls] != target)
                        throw ValidationError("nabla left action not constant on orbits");
                }
            }
        }
    }
    out.prof.right.resize(s.target->n_morphisms());
    for (int h = 0; h < s.target->n_morphisms(); ++h) {
        int b = s.target->morphisms[h].src, b2 = s.target->morphisms[h].dst;
        out.prof.right[h].resize(out_cat->n_objects());
        for (int xo = 0; xo < out_cat->n_objects(); ++xo) {
            out.prof.right[h][xo].assign(out.prof.n_cell(xo, b), -1);
            for (const auto& blk : blocks[xo][b])
                for (int q = 0; q < static_cast<int>(blk.orbit_of.size()); ++q) {
                    int target = out_index(xo, b2, blk.n, s.prof.right[h][blk.in_obj][q]);
                    int cls = blk.offset + blk.orbit_of[q];
                    if (out.prof.right[h][xo][cls] == -1)
                        out.prof.right[h][xo][cls] = target;
                    else if (out.prof.right[h][xo][cls] != target)
                        throw ValidationError("nabla right action not constant on orbits");
                }
        }
    }
    validate_symseq(out);
    return result;
}

SymSeq soften(const SymSeq& s) {
    if (s.mode != GenKind::Bang) throw ModeError("soften takes a strict symmetric sequence");
    const auto& bang = *s.seq_cat;
    auto down = free_soft(s.base, s.max_arity);
    // strict morphisms as soft ones
    std::vector<int> obj_inc(bang.n_objects()), morph_inc(bang.n_morphisms());
    for (int so = 0; so < bang.n_objects(); ++so) obj_inc[so] = seq_object_index(*down, bang.seq_objects[so].entries);
    for (int m = 0; m < bang.n_morphisms(); ++m)
        morph_inc[m] = seq_morphism_index(*down, obj_inc[bang.morphisms[m].src], obj_inc[bang.morphisms[m].dst],
                                          bang.seq_morphisms[m]);

    SymSeq out;
    out.mode = GenKind::Down;
    out.base = s.base;
    out.target = s.target;
    out.max_arity = s.max_arity;
    out.seq_cat = down;
    out.prof.src = down;
    out.prof.dst = s.target;
    const int nb = s.target->n_objects();
    out.prof.cells.assign(down->n_objects(), std::vector<std::vector<std::string>>(nb));

    // Kan coend: generators (soft morphism m: A -> C, q in S(C; b)) where C is
    // (the image of) a strict object; identifications through strict morphisms.
    struct Table {
        std::vector<CoendTable::Gen> gens;  // (down morphism, q, 0)
        std::vector<int> class_of;
        std::vector<int> rep_gen;
        int find(int m, int q) const {
            CoendTable::Gen g{m, q, 0};
            auto it = std::lower_bound(gens.begin(), gens.end(), g);
            return static_cast<int>(it - gens.begin());
        }
    };
    std::vector<std::vector<Table>> tables(down->n_objects(), std::vector<Table>(nb));
    std::map<int, int> down_obj_to_bang;  // image objects
    for (int so = 0; so < bang.n_objects(); ++so) down_obj_to_bang[obj_inc[so]] = so;

    for (int ao = 0; ao < down->n_objects(); ++ao)
        for (int b = 0; b < nb; ++b) {
            auto& t = tables[ao][b];
            for (int m = 0; m < down->n_morphisms(); ++m) {
                if (down->morphisms[m].src != ao) continue;
                auto it = down_obj_to_bang.find(down->morphisms[m].dst);
                if (it == down_obj_to_bang.end()) continue;
                for (int q = 0; q < s.prof.n_cell(it->second, b); ++q) t.gens.push_back({m, q, 0});
            }
            std::sort(t.gens.begin(), t.gens.end());
            UnionFind uf(static_cast<int>(t.gens.size()));
            for (int m = 0; m < down->n_morphisms(); ++m) {
                if (down->morphisms[m].src != ao) continue;
                auto mid = down_obj_to_bang.find(down->morphisms[m].dst);
                if (mid == down_obj_to_bang.end()) continue;
                for (int tb = 0; tb < bang.n_morphisms(); ++tb) {
                    if (obj_inc[bang.morphisms[tb].src] != down->morphisms[m].dst) continue;
                    int tm = down->comp[morph_inc[tb]][m];
                    for (int q2 = 0; q2 < s.prof.n_cell(bang.morphisms[tb].dst, b); ++q2)
                        uf.unite(t.find(tm, q2), t.find(m, s.prof.left[tb][b][q2]));
                }
            }
            std::map<int, int> root_to_class;
            t.class_of.resize(t.gens.size());
            for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
                int root = uf.find(i);
                auto [it2, inserted] = root_to_class.try_emplace(root, static_cast<int>(root_to_class.size()));
                t.class_of[i] = it2->second;
                if (inserted) t.rep_gen.push_back(i);
            }
            for (int r : t.rep_gen) {
                auto g = t.gens[r];
                int so = down_obj_to_bang.at(down->morphisms[g.mid].dst);
                out.prof.cells[ao][b].push_back("[" + down->morphisms[g.mid].id + "&" + s.prof.cells[so][b][g.x] +
                                                "]");
            }
        }
    out.prof.left.resize(down->n_morphisms());
    for (int mo = 0; mo < down->n_morphisms(); ++mo) {
        int ao = down->morphisms[mo].dst, ao2 = down->morphisms[mo].src;
        out.prof.left[mo].resize(nb);
        for (int b = 0; b < nb; ++b) {
            const auto& t = tables[ao][b];
            const auto& t2 = tables[ao2][b];
            out.prof.left[mo][b].assign(t.rep_gen.size(), -1);
            for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
                auto g = t.gens[i];
                int target = t2.class_of[t2.find(down->comp[g.mid][mo], g.x)];
                int cls = t.class_of[i];
                if (out.prof.left[mo][b][cls] == -1)
                    out.prof.left[mo][b][cls] = target;
                else if (out.prof.left[mo][b][cls] != target)
                    throw ValidationError("soften left action not constant on classes");
            }
        }
    }
    out.prof.right.resize(s.target->n_morphisms());
    for (int h = 0; h < s.target->n_morphisms(); ++h) {
        int b = s.target->morphisms[h].src, b2 = s.target->morphisms[h].dst;
        out.prof.right[h].resize(down->n_objects());
        for (int ao = 0; ao < down->n_objects(); ++ao) {
            const auto& t = tables[ao][b];
            const auto& t2 = tables[ao][b2];
            out.prof.right[h][ao].assign(t.rep_gen.size(), -1);
            for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
                auto g = t.gens[i];
                int so = down_obj_to_bang.at(down->morphisms[g.mid].dst);
                int target = t2.class_of[t2.find(g.mid, s.prof.right[h][so][g.x])];
                int cls = t.class_of[i];
                if (out.prof.right[h][ao][cls] == -1)
                    out.prof.right[h][ao][cls] = target;
                else if (out.prof.right[h][ao][cls] != target)
                    throw ValidationError("soften right action not constant on classes");
            }
        }
    }
    validate_symseq(out);
    return out;
}

Profunctor q_profunctor(const CatPtr& seq_cat) {
    if (seq_cat->gen_kind == GenKind::None) throw ModeError("q_profunctor needs a generated sequence category");
    const CatPtr base = seq_cat->gen_base;
    Profunctor q;
    q.src = seq_cat;
    q.dst = base;
    q.cells.assign(seq_cat->n_objects(), std::vector<std::vector<std::string>>(base->n_objects()));
    std::vector<std::vector<std::vector<std::pair<int, int>>>> decode(
        seq_cat->n_objects(), std::vector<std::vector<std::pair<int, int>>>(base->n_objects()));
    for (int so = 0; so < seq_cat->n_objects(); ++so) {
        const auto& entries = seq_cat->seq_objects[so].entries;
        for (int a = 0; a < base->n_objects(); ++a)
            for (std::size_t i = 0; i < entries.size(); ++i)
                for (int g : base->hom(entries[i], a)) {
                    q.cells[so][a].push_back(std::to_string(i) + ":" + base->morphisms[g].id);
                    decode[so][a].push_back({static_cast<int>(i), g});
                }
    }
    auto find = [&](int so, int a, int i, int g) {
        for (int e = 0; e < static_cast<int>(decode[so][a].size()); ++e)
            if (decode[so][a][e] == std::make_pair(i, g)) return e;
        return -1;
    };
    q.left.resize(seq_cat->n_morphisms());
    for (int m = 0; m < seq_cat->n_morphisms(); ++m) {
        int so = seq_cat->morphisms[m].src;
        int so2 = seq_cat->morphisms[m].dst;
        const auto& data = seq_cat->seq_morphisms[m];
        q.left[m].resize(base->n_objects());
        for (int a = 0; a < base->n_objects(); ++a)
            for (auto [j, g] : decode[so2][a])
                q.left[m][a].push_back(find(so, a, data.sigma[j], base->comp[g][data.components[j]]));
    }
    q.right.resize(base->n_morphisms());
    for (int h = 0; h < base->n_morphisms(); ++h) {
        q.right[h].resize(seq_cat->n_objects());
        int a = base->morphisms[h].src, a2 = base->morphisms[h].dst;
        for (int so = 0; so < seq_cat->n_objects(); ++so)
            for (auto [i, g] : decode[so][a]) q.right[h][so].push_back(find(so, a2, i, base->comp[h][g]));
    }
    validate_profunctor(q);
    return q;
}

std::vector<std::vector<std::vector<ElemRef>>> ancestor_sets(const Presheaf& phi) {
    const auto& cat = *phi.base;
    std::vector<std::vector<std::vector<ElemRef>>> anc(cat.n_objects());
    for (int o = 0; o < cat.n_objects(); ++o) anc[o].resize(phi.n_at(o));
    for (int o = 0; o < cat.n_objects(); ++o)
        for (int x = 0; x < phi.n_at(o); ++x) {
            std::set<ElemRef> set;
            for (int m = 0; m < cat.n_morphisms(); ++m) {
                if (cat.morphisms[m].dst != o) continue;
                int src_o = cat.morphisms[m].src;
                for (int y = 0; y < phi.n_at(src_o); ++y)
                    if (phi.apply(m, y) == x) set.insert({src_o, y});
            }
            anc[o][x].assign(set.begin(), set.end());
        }
    return anc;
}

bool is_diverse(const NatTrans& phi_map, const SumOfReps& reps) {
    if (!phi_map.src.same_as(reps.sheaf)) throw NotSumOfReps("transformation source is not the given sum");
    auto anc = ancestor_sets(phi_map.dst);
    const auto& cat = *phi_map.dst.base;
    std::vector<int> picks, objs;
    for (std::size_t i = 0; i < reps.summands.size(); ++i) {
        int obj = reps.summands[i];
        picks.push_back(phi_map.comp[obj][reps.elem_of(static_cast<int>(i), cat.identity[obj])]);
        objs.push_back(obj);
    }
    return tuple_is_diverse(anc, objs, picks);
}

DiverseFactorization diverse_factorize(const NatTrans& phi_map, const SumOfReps& reps) {
    if (!phi_map.src.same_as(reps.sheaf)) throw NotSumOfReps("transformation source is not the given sum");
    const Presheaf& phi = phi_map.dst;
    const auto& cat = *phi.base;
    auto anc = ancestor_sets(phi);

    std::vector<int> objs = reps.summands;
    std::vector<int> elems;
    for (std::size_t i = 0; i < reps.summands.size(); ++i)
        elems.push_back(phi_map.comp[objs[i]][reps.elem_of(static_cast<int>(i), cat.identity[objs[i]])]);

    // running factorization <C_j> -> <A_i>: identity to start
    SeqMorphism total;
    total.sigma.resize(objs.size());
    total.components.resize(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
        total.sigma[i] = static_cast<int>(i);
        total.components[i] = cat.identity[objs[i]];
    }

    while (true) {
        // first related pair, canonical common-ancestor witness
        int pi = -1, pj = -1, anc_obj = -1, anc_elem = -1, f_i = -1, f_j = -1;
        for (std::size_t i = 0; i < objs.size() && pi < 0; ++i)
            for (std::size_t j = i + 1; j < objs.size() && pi < 0; ++j) {
                for (const auto& a : anc[objs[i]][elems[i]]) {
                    if (!std::binary_search(anc[objs[j]][elems[j]].begin(), anc[objs[j]][elems[j]].end(), a))
                        continue;
                    // minimal witnessing morphisms
                    for (int f : cat.hom(a.obj, objs[i])) {
                        if (phi.apply(f, a.idx) != elems[i]) continue;
                        for (int g : cat.hom(a.obj, objs[j])) {
                            if (phi.apply(g, a.idx) != elems[j]) continue;
                            pi = static_cast<int>(i);
                            pj = static_cast<int>(j);
                            anc_obj = a.obj;
                            anc_elem = a.idx;
                            f_i = f;
                            f_j = g;
                            break;
                        }
                        if (pi >= 0) break;
                    }
                    if (pi >= 0) break;
                }
            }
        if (pi < 0) break;
        // merge position pj into pi through the common ancestor
        const int old_n = static_cast<int>(objs.size());
        SeqMorphism step;
        step.sigma.resize(old_n);
        step.components.resize(old_n);
        for (int p = 0; p < old_n; ++p) {
            int target = p < pj ? p : (p == pj ? pi : p - 1);
            step.sigma[p] = target;
            if (p == pi)
                step.components[p] = f_i;
            else if (p == pj)
                step.components[p] = f_j;
            else
                step.components[p] = cat.identity[objs[p]];
        }
        std::vector<int> new_objs, new_elems;
        for (int p = 0; p < old_n; ++p) {
            if (p == pj) continue;
            new_objs.push_back(p == pi ? anc_obj : objs[p]);
            new_elems.push_back(p == pi ? anc_elem : elems[p]);
        }
        total = compose_seq_morphism(cat, total, step);
        objs = std::move(new_objs);
        elems = std::move(new_elems);
    }

    DiverseFactorization out;
    out.via = total;
    out.mid_objs = objs;
    out.mid = sum_of_reps(phi.base, objs);
    NatTrans psi;
    psi.src = out.mid.sheaf;
    psi.dst = phi;
    psi.comp.resize(cat.n_objects());
    for (int x = 0; x < cat.n_objects(); ++x)
        for (auto [i, g] : out.mid.decode[x]) psi.comp[x].push_back(phi.apply(g, elems[i]));
    validate_nat(psi);
    out.psi = psi;
    // phi = psi ∘ (sum over sigma of A(f,-))
    auto factor = nat_of_seq_morphism(phi.base, total, reps, out.mid);
    if (!nat_equal(compose_nat(psi, factor), phi_map))
        throw ValidationError("diverse factorization does not recompose");
    if (!is_diverse(psi, out.mid)) throw ValidationError("diverse factorization did not reach a diverse part");
    return out;
}

}  // namespace fdcalc

#include "fdcalc/newton.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fdcalc {

namespace {

// Phi + Q(C-seq) -> Phi + Q(A-seq) induced by a soft sequence morphism:
// identity on the base, (j, g) |-> (sigma j, g∘f_j) on the summands.
NatTrans q_transformation(const Presheaf& phi, const SeqMorphism& data, const std::vector<int>& src_entries,
                          const std::vector<int>& dst_entries) {
    auto bs_dst = based_sum(phi, dst_entries);  // domain of the transformation
    auto bs_src = based_sum(phi, src_entries);  // codomain
    const auto& cat = *phi.base;
    NatTrans t;
    t.src = bs_dst.sheaf;
    t.dst = bs_src.sheaf;
    t.comp.resize(cat.n_objects());
    for (int x = 0; x < cat.n_objects(); ++x) {
        for (int e = 0; e < phi.n_at(x); ++e) t.comp[x].push_back(bs_src.base_inj.comp[x][e]);
        for (std::size_t j = 0; j < dst_entries.size(); ++j) {
            const auto& rep = bs_dst.rep_inj[j].src;
            for (const auto& gname : rep.elems[x]) {
                int g = cat.morph_index(gname);
                int composed = cat.comp[g][data.components[j]];
                // position of `composed` inside rep(src_entries[sigma j]) at x
                auto rep_src = representable(phi.base, src_entries[data.sigma[j]]);
                int pos = rep_src.find_elem(x, cat.morphisms[composed].id);
                t.comp[x].push_back(bs_src.rep_inj[data.sigma[j]].comp[x][pos]);
            }
        }
    }
    validate_nat(t);
    return t;
}

}  // namespace

int NewtonData::cell_index(int so, int b, int ambient_elem) const {
    const auto& subset = new_elems[so].subset[b];
    auto it = std::lower_bound(subset.begin(), subset.end(), ambient_elem);
    if (it == subset.end() || *it != ambient_elem) return -1;
    return static_cast<int>(it - subset.begin());
}

NewtonData delta_star_at(const ExprPtr& f, int max_arity, const Presheaf& base_point) {
    tense_certify(f);
    if (!same_cat(base_point.base, f->dom)) throw BaseMismatch("delta_star: base point on the wrong category");
    const CatPtr A = f->dom, B = f->cod;
    auto down = free_soft(A, max_arity);

    NewtonData out;
    out.source = f;
    out.max_arity = max_arity;
    out.base_point = base_point;
    out.seq.mode = GenKind::Down;
    out.seq.base = A;
    out.seq.target = B;
    out.seq.max_arity = max_arity;
    out.seq.seq_cat = down;
    out.seq.prof.src = down;
    out.seq.prof.dst = B;

    const int nobj = down->n_objects();
    out.q_sheaves.resize(nobj);
    out.ambients.resize(nobj);
    out.new_elems.reserve(nobj);
    out.seq.prof.cells.assign(nobj, std::vector<std::vector<std::string>>(B->n_objects()));
    for (int so = 0; so < nobj; ++so) {
        const auto& entries = down->seq_objects[so].entries;
        auto hd = higher_delta(f, entries, base_point);
        out.q_sheaves[so] = based_sum(base_point, entries).sheaf;
        out.ambients[so] = hd.ambient;
        out.new_elems.push_back(hd.new_elems);
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : hd.new_elems.subset[b]) out.seq.prof.cells[so][b].push_back(hd.ambient.elems[b][e]);
    }
    // soft action: restriction of F of the summand transformation; landing in
    // the new elements is part of the statement being computed
    out.seq.prof.left.resize(down->n_morphisms());
    for (int m = 0; m < down->n_morphisms(); ++m) {
        int so = down->morphisms[m].src, so2 = down->morphisms[m].dst;
        const auto& src_entries = down->seq_objects[so].entries;
        const auto& dst_entries = down->seq_objects[so2].entries;
        auto qt = q_transformation(base_point, down->seq_morphisms[m], src_entries, dst_entries);
        auto mapped = eval_nat(f, qt);  // F(Q(C)) -> F(Q(A))
        out.seq.prof.left[m].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : out.new_elems[so2].subset[b]) {
                int target = mapped.comp[b][e];
                if (!out.new_elems[so].contains(b, target))
                    throw ActionEscapesNewElements("delta_star action left the new elements at " +
                                                   down->morphisms[m].id);
                out.seq.prof.left[m][b].push_back(out.cell_index(so, b, target));
            }
    }
    out.seq.prof.right.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        int b = B->morphisms[h].src, b2 = B->morphisms[h].dst;
        out.seq.prof.right[h].resize(nobj);
        for (int so = 0; so < nobj; ++so)
            for (int e : out.new_elems[so].subset[b]) {
                int target = out.ambients[so].act[h][e];
                if (!out.new_elems[so].contains(b2, target))
                    throw ActionEscapesNewElements("delta_star target action left the new elements");
                out.seq.prof.right[h][so].push_back(out.cell_index(so, b2, target));
            }
    }
    validate_symseq(out.seq);
    return out;
}

NewtonData delta_star(const ExprPtr& f, int max_arity) {
    return delta_star_at(f, max_arity, empty_presheaf(f->dom));
}

ExprPtr newton_functor(const ExprPtr& f, int max_arity) {
    return analytic_expr(delta_star(f, max_arity).seq);
}

namespace {

// the identity tuple: component i of Q(A-seq) picks the unit of rep(A_i)
std::vector<int> unit_tuple(const Presheaf& q_sheaf, const CatPtr& cat, const std::vector<int>& entries) {
    std::vector<int> tuple;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        int a = entries[i];
        int idx = q_sheaf.find_elem(a, std::to_string(i + 1) + ":" + cat->morphisms[cat->identity[a]].id);
        if (idx < 0) throw Error("unit element missing from the sum of representables");
        tuple.push_back(idx);
    }
    return tuple;
}

// phi-map of a tuple, based-sum domain: base part has no elements at the
// Newton base point; summand i maps by the Yoneda transform of tuple[i]
NatTrans based_nat_of_tuple(const Presheaf& base_point, const std::vector<int>& entries, const Presheaf& phi,
                            const std::vector<int>& tuple, const NatTrans& base_map) {
    auto bs = based_sum(base_point, entries);
    const auto& cat = *phi.base;
    NatTrans t;
    t.src = bs.sheaf;
    t.dst = phi;
    t.comp.resize(cat.n_objects());
    for (int x = 0; x < cat.n_objects(); ++x) {
        for (int e = 0; e < base_point.n_at(x); ++e) t.comp[x].push_back(base_map.comp[x][e]);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            auto rep = representable(phi.base, entries[i]);
            for (const auto& gname : rep.elems[x]) t.comp[x].push_back(phi.apply(cat.morph_index(gname), tuple[i]));
        }
    }
    validate_nat(t);
    return t;
}

}  // namespace

bool family_is_tense(const TenseFamily& t, std::string* witness) {
    const auto& down = *t.seq.seq_cat;
    auto stilde = analytic_expr(t.seq);
    auto empty = empty_presheaf(t.seq.base);
    for (int so = 0; so < down.n_objects(); ++so) {
        const auto& entries = down.seq_objects[so].entries;
        const int n = static_cast<int>(entries.size());
        for (int mask = 0; mask < (1 << n); ++mask) {
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) keep.push_back(i);
            if (static_cast<int>(keep.size()) == n) continue;
            std::vector<int> sub_entries;
            for (int k : keep) sub_entries.push_back(entries[k]);
            int sub_so = seq_object_index(down, sub_entries);
            if (sub_so < 0) continue;
            auto incl = based_sum_inclusion(empty, entries, keep);
            auto s_incl = eval_nat(stilde, incl);
            auto f_incl = eval_nat(t.target, incl);
            if (!tense_square(t.at_q[sub_so], t.at_q[so], s_incl, f_incl)) {
                if (witness)
                    *witness = "square at " + down.objects[so] + " over subset " + down.objects[sub_so];
                return false;
            }
        }
    }
    return true;
}

ProfMorphism transpose_down(const TenseFamily& t, const NewtonData& delta_f) {
    const auto& down = *t.seq.seq_cat;
    if (!same_cat(t.seq.seq_cat, delta_f.seq.seq_cat)) throw EndpointMismatch("transpose_down: arity mismatch");
    auto stilde = analytic_expr(t.seq);
    const CatPtr B = t.seq.target;
    // the family must at least be natural across the subsum inclusions
    auto empty = empty_presheaf(t.seq.base);
    for (int so = 0; so < down.n_objects(); ++so) {
        const auto& entries = down.seq_objects[so].entries;
        for (int drop = 0; drop < static_cast<int>(entries.size()); ++drop) {
            std::vector<int> keep;
            for (int i = 0; i < static_cast<int>(entries.size()); ++i)
                if (i != drop) keep.push_back(i);
            std::vector<int> sub_entries;
            for (int k : keep) sub_entries.push_back(entries[k]);
            int sub_so = seq_object_index(down, sub_entries);
            auto incl = based_sum_inclusion(empty, entries, keep);
            auto s_incl = eval_nat(stilde, incl);
            auto f_incl = eval_nat(t.target, incl);
            if (!nat_equal(compose_nat(t.at_q[so], s_incl), compose_nat(f_incl, t.at_q[sub_so])))
                throw NotTense("family is not natural across the subsum inclusion at " + down.objects[so]);
        }
    }
    ProfMorphism u;
    u.src = t.seq.prof;
    u.dst = delta_f.seq.prof;
    u.comp.resize(down.n_objects());
    for (int so = 0; so < down.n_objects(); ++so) {
        u.comp[so].resize(B->n_objects());
        const auto& entries = down.seq_objects[so].entries;
        auto q_sheaf = delta_f.q_sheaves[so];
        auto se = analytic_eval(t.seq, q_sheaf);
        auto unit = unit_tuple(q_sheaf, t.seq.base, entries);
        for (int b = 0; b < B->n_objects(); ++b)
            for (int p = 0; p < t.seq.prof.n_cell(so, b); ++p) {
                int cls = se.class_of(b, so, p, unit);
                int target = t.at_q[so].comp[b][cls];
                int cell = delta_f.cell_index(so, b, target);
                if (cell < 0)
                    throw NotNew("NotNew(" + t.seq.prof.cells[so][b][p] +
                                 "): transposed element lands in a proper subsum");
                u.comp[so][b].push_back(cell);
            }
    }
    validate_prof_morphism(u);
    return u;
}

NatTrans transpose_up_at(const ProfMorphism& u, const SymSeq& s, const NewtonData& delta_f, const Presheaf& phi) {
    if (delta_f.base_point.total() != 0)
        throw ModeError("adjunction transposes are only defined at the empty base point");
    auto se = analytic_eval(s, phi);
    auto f_phi = eval(delta_f.source, phi);
    const CatPtr B = s.target;
    auto empty_map = [&] {
        NatTrans t;
        t.src = delta_f.base_point;
        t.dst = phi;
        t.comp.assign(phi.base->n_objects(), {});
        return t;
    }();
    NatTrans out;
    out.src = se.sheaf;
    out.dst = f_phi;
    out.comp.resize(B->n_objects());
    for (int b = 0; b < B->n_objects(); ++b) {
        const auto& table = se.tables[b];
        out.comp[b].assign(table.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(table.gens.size()); ++i) {
            auto g = table.gens[i];
            const auto& entries = s.seq_cat->seq_objects[g.mid].entries;
            auto tuple = se.decode_tuple(g.mid, g.y);
            auto phimap = based_nat_of_tuple(delta_f.base_point, entries, phi, tuple, empty_map);
            auto f_phimap = eval_nat(delta_f.source, phimap);
            int witness = delta_f.new_elems[g.mid].subset[b][u.comp[g.mid][b][g.x]];
            int target = f_phimap.comp[b][witness];
            int cls = table.class_of[i];
            if (out.comp[b][cls] == -1)
                out.comp[b][cls] = target;
            else if (out.comp[b][cls] != target)
                throw ValidationError("transpose_up not constant on coend classes");
        }
    }
    validate_nat(out);
    return out;
}

TenseFamily transpose_up(const ProfMorphism& u, const SymSeq& s, const NewtonData& delta_f) {
    TenseFamily out;
    out.seq = s;
    out.target = delta_f.source;
    for (int so = 0; so < s.seq_cat->n_objects(); ++so)
        out.at_q.push_back(transpose_up_at(u, s, delta_f, delta_f.q_sheaves[so]));
    return out;
}

NatTrans counit_at(const ExprPtr& f, const NewtonData& delta_f, const Presheaf& phi) {
    return transpose_up_at(identity_profmorph(delta_f.seq.prof), delta_f.seq, delta_f, phi);
}

UnitIsoReport check_unit_iso(const SymSeq& s) {
    UnitIsoReport report;
    auto stilde = analytic_expr(s);
    auto nd = delta_star(stilde, s.max_arity);
    const auto& down = *s.seq_cat;
    const CatPtr B = s.target;
    // unit: p |-> the class of (p, identity) inside the differences
    std::vector<std::vector<std::vector<int>>> unit(down.n_objects());
    for (int so = 0; so < down.n_objects(); ++so) {
        const auto& entries = down.seq_objects[so].entries;
        auto se = analytic_eval(s, nd.q_sheaves[so]);
        auto ut = unit_tuple(nd.q_sheaves[so], s.base, entries);
        unit[so].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (int p = 0; p < s.prof.n_cell(so, b); ++p) {
                int cls = se.class_of(b, so, p, ut);
                int cell = nd.cell_index(so, b, cls);
                if (cell < 0) {
                    report.detail = "unit image not new at " + down.objects[so] + ", " + B->objects[b];
                    return report;
                }
                unit[so][b].push_back(cell);
            }
    }
    // cellwise bijection
    report.iso = true;
    for (int so = 0; so < down.n_objects() && report.iso; ++so)
        for (int b = 0; b < B->n_objects() && report.iso; ++b) {
            if (s.prof.n_cell(so, b) != nd.seq.prof.n_cell(so, b)) {
                report.iso = false;
                report.detail = "cell size mismatch at " + down.objects[so] + ", " + B->objects[b];
                break;
            }
            std::set<int> image(unit[so][b].begin(), unit[so][b].end());
            if (static_cast<int>(image.size()) != s.prof.n_cell(so, b)) {
                report.iso = false;
                report.detail = "unit not injective at " + down.objects[so] + ", " + B->objects[b];
            }
        }
    if (!report.iso) return report;
    // equivariance for both actions
    report.equivariant = true;
    for (int m = 0; m < down.n_morphisms() && report.equivariant; ++m) {
        int so = down.morphisms[m].src, so2 = down.morphisms[m].dst;
        for (int b = 0; b < B->n_objects(); ++b)
            for (int p = 0; p < s.prof.n_cell(so2, b); ++p)
                if (unit[so][b][s.prof.left[m][b][p]] != nd.seq.prof.left[m][b][unit[so2][b][p]]) {
                    report.equivariant = false;
                    report.detail = "unit not equivariant at " + down.morphisms[m].id;
                }
    }
    for (int h = 0; h < B->n_morphisms() && report.equivariant; ++h) {
        int b = B->morphisms[h].src, b2 = B->morphisms[h].dst;
        for (int so = 0; so < down.n_objects(); ++so)
            for (int p = 0; p < s.prof.n_cell(so, b); ++p)
                if (unit[so][b2][s.prof.right[h][so][p]] != nd.seq.prof.right[h][so][unit[so][b][p]]) {
                    report.equivariant = false;
                    report.detail = "unit not equivariant at " + B->morphisms[h].id;
                }
    }
    return report;
}

CounitReport check_counit_iso(const ExprPtr& f, int max_arity, const std::vector<Presheaf>& tests) {
    CounitReport report;
    auto nd = delta_star(f, max_arity);
    for (const auto& phi : tests) {
        auto eps = counit_at(f, nd, phi);
        CounitReport::PerPresheaf entry;
        if (is_iso(eps))
            entry.status = "iso";
        else if (is_mono(eps))
            entry.status = "mono";
        else
            entry.status = "neither";
        report.tests.push_back(entry);
    }
    report.all_iso = std::all_of(report.tests.begin(), report.tests.end(),
                                 [](const auto& t) { return t.status == "iso"; });
    // idempotence: the differences of the Newton functor are the differences,
    // i.e. the unit at delta_star(F) is an isomorphism
    report.idempotent = check_unit_iso(nd.seq).ok();
    return report;
}

}  // namespace fdcalc

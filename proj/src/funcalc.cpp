#include "fdcalc/funcalc.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fdcalc {

namespace {

ExprPtr make(FunctorExpr e) { return std::make_shared<const FunctorExpr>(std::move(e)); }

}  // namespace

ExprPtr identity_expr(const CatPtr& cat) {
    FunctorExpr e;
    e.kind = ExprKind::Identity;
    e.dom = cat;
    e.cod = cat;
    return make(std::move(e));
}

ExprPtr constant_expr(const CatPtr& dom, Presheaf value) {
    FunctorExpr e;
    e.kind = ExprKind::Constant;
    e.dom = dom;
    e.cod = value.base;
    e.constant = std::move(value);
    return make(std::move(e));
}

ExprPtr linear_expr(Profunctor p) {
    FunctorExpr e;
    e.kind = ExprKind::Linear;
    e.dom = p.src;
    e.cod = p.dst;
    e.prof = std::move(p);
    return make(std::move(e));
}

ExprPtr monomial_expr(Profunctor p) {
    FunctorExpr e;
    e.kind = ExprKind::Monomial;
    e.dom = p.dst;
    e.cod = p.src;
    e.prof = std::move(p);
    return make(std::move(e));
}

ExprPtr analytic_expr(SymSeq s) {
    FunctorExpr e;
    e.kind = s.mode == GenKind::Bang ? ExprKind::AnalyticStrict : ExprKind::AnalyticSoft;
    e.dom = s.base;
    e.cod = s.target;
    e.seq = std::move(s);
    return make(std::move(e));
}

ExprPtr sum_expr(const ExprPtr& f, const ExprPtr& g) {
    if (!same_cat(f->dom, g->dom) || !same_cat(f->cod, g->cod)) throw EndpointMismatch("sum_expr endpoints");
    FunctorExpr e;
    e.kind = ExprKind::Sum;
    e.dom = f->dom;
    e.cod = f->cod;
    e.lhs = f;
    e.rhs = g;
    return make(std::move(e));
}

ExprPtr product_expr(const ExprPtr& f, const ExprPtr& g) {
    if (!same_cat(f->dom, g->dom) || !same_cat(f->cod, g->cod)) throw EndpointMismatch("product_expr endpoints");
    FunctorExpr e;
    e.kind = ExprKind::Product;
    e.dom = f->dom;
    e.cod = f->cod;
    e.lhs = f;
    e.rhs = g;
    return make(std::move(e));
}

ExprPtr compose_expr(const ExprPtr& outer, const ExprPtr& inner) {
    if (!same_cat(inner->cod, outer->dom)) throw EndpointMismatch("compose_expr endpoints");
    FunctorExpr e;
    e.kind = ExprKind::Compose;
    e.dom = inner->dom;
    e.cod = outer->cod;
    e.lhs = outer;
    e.rhs = inner;
    return make(std::move(e));
}

ExprPtr shift_expr(const CatPtr& cat, int a_obj) {
    return sum_expr(identity_expr(cat), constant_expr(cat, representable(cat, a_obj)));
}

std::string expr_to_string(const ExprPtr& f) {
    switch (f->kind) {
        case ExprKind::Identity: return "Id";
        case ExprKind::Constant: return "Const";
        case ExprKind::Linear: return "Linear";
        case ExprKind::Monomial: return "Monomial";
        case ExprKind::AnalyticStrict: return "AnalyticStrict";
        case ExprKind::AnalyticSoft: return "AnalyticSoft";
        case ExprKind::Sum: return "Sum(" + expr_to_string(f->lhs) + "," + expr_to_string(f->rhs) + ")";
        case ExprKind::Product: return "Product(" + expr_to_string(f->lhs) + "," + expr_to_string(f->rhs) + ")";
        case ExprKind::Compose: return "Compose(" + expr_to_string(f->lhs) + "," + expr_to_string(f->rhs) + ")";
    }
    return "?";
}

Presheaf monomial_eval(const Profunctor& p, const Presheaf& phi, std::uint64_t guard) {
    if (!same_cat(phi.base, p.dst)) throw BaseMismatch("monomial_eval: presheaf not on the exponent's target");
    const CatPtr A = p.src;
    Presheaf out;
    out.base = A;
    out.elems.resize(A->n_objects());
    std::vector<std::vector<std::vector<std::vector<int>>>> families(A->n_objects());
    for (int a = 0; a < A->n_objects(); ++a)
        for (const auto& t : all_nat_trans(row_presheaf(p, a), phi, guard)) {
            families[a].push_back(t.comp);
            std::vector<std::string> parts;
            for (const auto& col : t.comp) {
                std::vector<std::string> vals;
                for (int v : col) vals.push_back(std::to_string(v));
                parts.push_back(join(vals, ","));
            }
            out.elems[a].push_back("{" + join(parts, "|") + "}");
        }
    out.act.resize(A->n_morphisms());
    for (int f = 0; f < A->n_morphisms(); ++f) {
        int a = A->morphisms[f].src, a2 = A->morphisms[f].dst;
        for (const auto& fam : families[a]) {
            // precompose with P(f,-): P(a2,-) -> P(a,-)
            std::vector<std::vector<int>> mapped(p.dst->n_objects());
            for (int x = 0; x < p.dst->n_objects(); ++x) {
                mapped[x].resize(p.n_cell(a2, x));
                for (int y = 0; y < p.n_cell(a2, x); ++y) mapped[x][y] = fam[x][p.left[f][x][y]];
            }
            auto it = std::find(families[a2].begin(), families[a2].end(), mapped);
            out.act[f].push_back(static_cast<int>(it - families[a2].begin()));
        }
    }
    validate_presheaf(out);
    return out;
}

Presheaf eval(const ExprPtr& f, const Presheaf& phi) {
    if (!same_cat(phi.base, f->dom)) throw BaseMismatch("eval: presheaf not on the domain category");
    switch (f->kind) {
        case ExprKind::Identity: return phi;
        case ExprKind::Constant: return f->constant;
        case ExprKind::Linear: return tensor_presheaf(f->prof, phi).sheaf;
        case ExprKind::Monomial: return monomial_eval(f->prof, phi);
        case ExprKind::AnalyticStrict:
        case ExprKind::AnalyticSoft: return analytic_eval(f->seq, phi).sheaf;
        case ExprKind::Sum: return sum(eval(f->lhs, phi), eval(f->rhs, phi)).sum;
        case ExprKind::Product: return product(eval(f->lhs, phi), eval(f->rhs, phi)).prod;
        case ExprKind::Compose: return eval(f->lhs, eval(f->rhs, phi));
    }
    throw Error("unreachable");
}

NatTrans eval_nat(const ExprPtr& f, const NatTrans& t) {
    switch (f->kind) {
        case ExprKind::Identity: return t;
        case ExprKind::Constant: return identity_nat(f->constant);
        case ExprKind::Linear: return tensor_nat(f->prof, t);
        case ExprKind::Monomial: {
            // postcompose families with t
            auto src = monomial_eval(f->prof, t.src);
            auto dst = monomial_eval(f->prof, t.dst);
            auto dst_families = [&] {
                std::vector<std::vector<std::vector<std::vector<int>>>> fams(f->cod->n_objects());
                for (int a = 0; a < f->cod->n_objects(); ++a)
                    for (const auto& u : all_nat_trans(row_presheaf(f->prof, a), t.dst)) fams[a].push_back(u.comp);
                return fams;
            }();
            NatTrans out;
            out.src = src;
            out.dst = dst;
            out.comp.resize(f->cod->n_objects());
            for (int a = 0; a < f->cod->n_objects(); ++a)
                for (const auto& u : all_nat_trans(row_presheaf(f->prof, a), t.src)) {
                    auto mapped = u.comp;
                    for (int x = 0; x < t.src.base->n_objects(); ++x)
                        for (auto& v : mapped[x]) v = t.comp[x][v];
                    auto it = std::find(dst_families[a].begin(), dst_families[a].end(), mapped);
                    out.comp[a].push_back(static_cast<int>(it - dst_families[a].begin()));
                }
            validate_nat(out);
            return out;
        }
        case ExprKind::AnalyticStrict:
        case ExprKind::AnalyticSoft: {
            auto src = analytic_eval(f->seq, t.src);
            auto dst = analytic_eval(f->seq, t.dst);
            NatTrans out;
            out.src = src.sheaf;
            out.dst = dst.sheaf;
            out.comp.resize(f->cod->n_objects());
            for (int b = 0; b < f->cod->n_objects(); ++b) {
                const auto& table = src.tables[b];
                out.comp[b].assign(table.n_classes(), -1);
                for (int i = 0; i < static_cast<int>(table.gens.size()); ++i) {
                    auto g = table.gens[i];
                    auto tuple = src.decode_tuple(g.mid, g.y);
                    const auto& entries = f->seq.seq_cat->seq_objects[g.mid].entries;
                    for (std::size_t k = 0; k < tuple.size(); ++k) tuple[k] = t.comp[entries[k]][tuple[k]];
                    int target = dst.class_of(b, g.mid, g.x, tuple);
                    int cls = table.class_of[i];
                    if (out.comp[b][cls] == -1)
                        out.comp[b][cls] = target;
                    else if (out.comp[b][cls] != target)
                        throw ValidationError("analytic action on a transformation not constant on classes");
                }
            }
            validate_nat(out);
            return out;
        }
        case ExprKind::Sum: {
            auto l = eval_nat(f->lhs, t);
            auto r = eval_nat(f->rhs, t);
            auto src = sum(l.src, r.src);
            auto dst = sum(l.dst, r.dst);
            NatTrans out;
            out.src = src.sum;
            out.dst = dst.sum;
            out.comp.resize(f->cod->n_objects());
            for (int b = 0; b < f->cod->n_objects(); ++b) {
                for (int e = 0; e < l.src.n_at(b); ++e) out.comp[b].push_back(dst.injections[0].comp[b][l.comp[b][e]]);
                for (int e = 0; e < r.src.n_at(b); ++e) out.comp[b].push_back(dst.injections[1].comp[b][r.comp[b][e]]);
            }
            validate_nat(out);
            return out;
        }
        case ExprKind::Product: {
            auto l = eval_nat(f->lhs, t);
            auto r = eval_nat(f->rhs, t);
            auto src = product(l.src, r.src);
            auto dst = product(l.dst, r.dst);
            NatTrans out;
            out.src = src.prod;
            out.dst = dst.prod;
            out.comp.resize(f->cod->n_objects());
            for (int b = 0; b < f->cod->n_objects(); ++b)
                for (int i = 0; i < l.src.n_at(b); ++i)
                    for (int j = 0; j < r.src.n_at(b); ++j)
                        out.comp[b].push_back(l.comp[b][i] * r.dst.n_at(b) + r.comp[b][j]);
            validate_nat(out);
            return out;
        }
        case ExprKind::Compose: return eval_nat(f->lhs, eval_nat(f->rhs, t));
    }
    throw Error("unreachable");
}

namespace {

void certify_rec(const ExprPtr& f, const std::string& path, TenseCertificate& cert) {
    switch (f->kind) {
        case ExprKind::Identity: cert.nodes.push_back({path, TenseRule::Identity}); return;
        case ExprKind::Constant: cert.nodes.push_back({path, TenseRule::Constant}); return;
        case ExprKind::Linear: cert.nodes.push_back({path, TenseRule::Cocontinuous}); return;
        case ExprKind::Monomial: {
            HomTenseWitness w;
            if (!hom_tense_check(f->prof, &w))
                throw NotTense("NotTense(" + (path.empty() ? std::string("root") : path) + ": Monomial, " +
                               f->prof.src->morphisms[w.morphism].id + ", component " + std::to_string(w.component) +
                               ")");
            cert.nodes.push_back({path, TenseRule::HomPi0});
            return;
        }
        case ExprKind::AnalyticStrict:
        case ExprKind::AnalyticSoft: {
            HomTenseWitness w;
            if (!hom_tense_check(q_profunctor(f->seq.seq_cat), &w))
                throw NotTense("NotTense(" + path + ": analytic Q profunctor)");
            cert.nodes.push_back({path, TenseRule::Analytic});
            return;
        }
        case ExprKind::Sum:
            cert.nodes.push_back({path, TenseRule::ClosureSum});
            certify_rec(f->lhs, path + "L", cert);
            certify_rec(f->rhs, path + "R", cert);
            return;
        case ExprKind::Product:
            cert.nodes.push_back({path, TenseRule::ClosureProduct});
            certify_rec(f->lhs, path + "L", cert);
            certify_rec(f->rhs, path + "R", cert);
            return;
        case ExprKind::Compose:
            cert.nodes.push_back({path, TenseRule::ClosureCompose});
            certify_rec(f->lhs, path + "L", cert);
            certify_rec(f->rhs, path + "R", cert);
            return;
    }
}

}  // namespace

TenseCertificate tense_certify(const ExprPtr& f) {
    TenseCertificate cert;
    certify_rec(f, "", cert);
    return cert;
}

BasedSum based_sum(const Presheaf& phi, const std::vector<int>& objs) {
    std::vector<Presheaf> parts{phi};
    for (int a : objs) parts.push_back(representable(phi.base, a));
    auto s = sum_n(parts);
    BasedSum out;
    out.sheaf = std::move(s.sum);
    out.base_inj = std::move(s.injections[0]);
    out.rep_inj.assign(s.injections.begin() + 1, s.injections.end());
    return out;
}

NatTrans based_sum_inclusion(const Presheaf& phi, const std::vector<int>& objs, const std::vector<int>& keep) {
    std::vector<int> sub_objs;
    for (int k : keep) sub_objs.push_back(objs[k]);
    auto sub = based_sum(phi, sub_objs);
    auto full = based_sum(phi, objs);
    NatTrans t;
    t.src = sub.sheaf;
    t.dst = full.sheaf;
    t.comp.resize(phi.base->n_objects());
    for (int x = 0; x < phi.base->n_objects(); ++x) {
        for (int e = 0; e < phi.n_at(x); ++e) t.comp[x].push_back(full.base_inj.comp[x][e]);
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const auto& rep = sub.rep_inj[k].src;
            for (int e = 0; e < rep.n_at(x); ++e) t.comp[x].push_back(full.rep_inj[keep[k]].comp[x][e]);
        }
    }
    validate_nat(t);
    return t;
}

DeltaValue delta_A(const ExprPtr& f, int a_obj, const Presheaf& phi) {
    tense_certify(f);
    if (a_obj < 0 || a_obj >= f->dom->n_objects()) throw UnknownObject("delta_A: no such object");
    DeltaValue out;
    auto bs = based_sum(phi, {a_obj});
    out.shifted = bs.sheaf;
    out.included = eval_nat(f, bs.base_inj);
    out.ambient = out.included.dst;
    if (!is_mono(out.included)) throw NotComplemented("certificate bug: F of a complemented mono is not mono");
    auto img = image_subobject(out.included);
    ComplWitness w;
    if (!is_complemented(img, &w))
        throw NotComplemented("certificate bug: image of F(Phi) is not complemented at " +
                              out.ambient.base->morphisms[w.morphism].id);
    out.new_elems = complement(img);
    return out;
}

int JacobianValue::cell_index(int a, int b, int ambient) const {
    const auto& subset = columns[a].new_elems.subset[b];
    auto it = std::lower_bound(subset.begin(), subset.end(), ambient);
    if (it == subset.end() || *it != ambient) return -1;
    return static_cast<int>(it - subset.begin());
}

JacobianValue jacobian(const ExprPtr& f, const Presheaf& phi) {
    const CatPtr A = f->dom, B = f->cod;
    JacobianValue out;
    for (int a = 0; a < A->n_objects(); ++a) out.columns.push_back(delta_A(f, a, phi));
    out.prof.src = A;
    out.prof.dst = B;
    out.prof.cells.assign(A->n_objects(), std::vector<std::vector<std::string>>(B->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : out.columns[a].new_elems.subset[b])
                out.prof.cells[a][b].push_back(out.columns[a].ambient.elems[b][e]);
    // left action: restriction of F(Phi + rep(f,-)) to the complements
    out.prof.left.resize(A->n_morphisms());
    for (int m = 0; m < A->n_morphisms(); ++m) {
        int a2 = A->morphisms[m].src, a = A->morphisms[m].dst;  // rep(a) -> rep(a2)
        // Phi + rep(a) -> Phi + rep(a2): identity on the base, rep_nat on the summand
        auto bs_a = based_sum(phi, {a});
        auto bs_a2 = based_sum(phi, {a2});
        NatTrans shift;
        shift.src = bs_a.sheaf;
        shift.dst = bs_a2.sheaf;
        shift.comp.resize(A->n_objects());
        auto rn = rep_nat(A, m);
        for (int x = 0; x < A->n_objects(); ++x) {
            for (int e = 0; e < phi.n_at(x); ++e) shift.comp[x].push_back(bs_a2.base_inj.comp[x][e]);
            const auto& rep_src = bs_a.rep_inj[0].src;
            for (int e = 0; e < rep_src.n_at(x); ++e)
                shift.comp[x].push_back(bs_a2.rep_inj[0].comp[x][rn.comp[x][e]]);
        }
        validate_nat(shift);
        auto mapped = eval_nat(f, shift);
        out.prof.left[m].resize(B->n_objects());
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : out.columns[a].new_elems.subset[b]) {
                int target = mapped.comp[b][e];
                if (!out.columns[a2].new_elems.contains(b, target))
                    throw ActionEscapesNewElements("Jacobian left action left the complement");
                out.prof.left[m][b].push_back(out.cell_index(a2, b, target));
            }
    }
    out.prof.right.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        int b = B->morphisms[h].src, b2 = B->morphisms[h].dst;
        out.prof.right[h].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a)
            for (int e : out.columns[a].new_elems.subset[b]) {
                int target = out.columns[a].ambient.act[h][e];
                if (!out.columns[a].new_elems.contains(b2, target))
                    throw ActionEscapesNewElements("Jacobian right action left the complement");
                out.prof.right[h][a].push_back(out.cell_index(a, b2, target));
            }
    }
    validate_profunctor(out.prof);
    return out;
}

ProfMorphism jacobian_nat(const ExprPtr& f, const NatTrans& t) {
    auto jac_src = jacobian(f, t.src);
    auto jac_dst = jacobian(f, t.dst);
    const CatPtr A = f->dom, B = f->cod;
    ProfMorphism out;
    out.src = jac_src.prof;
    out.dst = jac_dst.prof;
    out.comp.resize(A->n_objects());
    for (int a = 0; a < A->n_objects(); ++a) {
        out.comp[a].resize(B->n_objects());
        // t + rep(a): Phi + rep(a) -> Psi + rep(a)
        auto bs_src = based_sum(t.src, {a});
        auto bs_dst = based_sum(t.dst, {a});
        NatTrans shifted;
        shifted.src = bs_src.sheaf;
        shifted.dst = bs_dst.sheaf;
        shifted.comp.resize(A->n_objects());
        for (int x = 0; x < A->n_objects(); ++x) {
            for (int e = 0; e < t.src.n_at(x); ++e) shifted.comp[x].push_back(bs_dst.base_inj.comp[x][t.comp[x][e]]);
            const auto& rep_src = bs_src.rep_inj[0].src;
            for (int e = 0; e < rep_src.n_at(x); ++e) shifted.comp[x].push_back(bs_dst.rep_inj[0].comp[x][e]);
        }
        validate_nat(shifted);
        auto mapped = eval_nat(f, shifted);
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : jac_src.columns[a].new_elems.subset[b]) {
                int target = mapped.comp[b][e];
                if (!jac_dst.columns[a].new_elems.contains(b, target))
                    throw ActionEscapesNewElements("Jacobian functorial action left the complement");
                out.comp[a][b].push_back(jac_dst.cell_index(a, b, target));
            }
    }
    validate_prof_morphism(out);
    return out;
}

Subobject sub_minus(const Subobject& a, const Subobject& b) {
    Subobject out{a.parent, std::vector<std::vector<int>>(a.parent.base->n_objects())};
    for (int x = 0; x < a.parent.base->n_objects(); ++x)
        std::set_difference(a.subset[x].begin(), a.subset[x].end(), b.subset[x].begin(), b.subset[x].end(),
                            std::back_inserter(out.subset[x]));
    return out;
}

Subobject map_subobject(const NatTrans& t, const Subobject& s) {
    Subobject out{t.dst, std::vector<std::vector<int>>(t.dst.base->n_objects())};
    for (int x = 0; x < t.dst.base->n_objects(); ++x) {
        std::set<int> img;
        for (int e : s.subset[x]) img.insert(t.comp[x][e]);
        out.subset[x].assign(img.begin(), img.end());
    }
    return out;
}

namespace {

// Delta over the suffix starting at `j`, with the base positions `taken`
// already added: a subobject of F(Phi + reps at taken ∪ {j..n}).
Subobject iterated_delta(const ExprPtr& f, const std::vector<int>& objs, const Presheaf& phi,
                         std::vector<int> taken, int j) {
    const int n = static_cast<int>(objs.size());
    auto positions_from = [&](const std::vector<int>& base, int start) {
        auto out = base;
        for (int k = start; k < n; ++k) out.push_back(k);
        std::sort(out.begin(), out.end());
        return out;
    };
    if (j == n) {
        std::vector<int> sel;
        for (int k : taken) sel.push_back(objs[k]);
        return full_subobject(eval(f, based_sum(phi, sel).sheaf));
    }
    auto with_j = taken;
    with_j.push_back(j);
    std::sort(with_j.begin(), with_j.end());
    Subobject upper = iterated_delta(f, objs, phi, with_j, j + 1);   // over taken ∪ {j} ∪ {j+1..n}
    Subobject lower = iterated_delta(f, objs, phi, taken, j + 1);    // over taken ∪ {j+1..n}
    auto full_positions = positions_from(taken, j);
    auto sub_positions = positions_from(taken, j + 1);
    // the inclusion misses position j
    std::vector<int> keep;
    for (std::size_t i = 0; i < full_positions.size(); ++i)
        if (full_positions[i] != j) keep.push_back(static_cast<int>(i));
    std::vector<int> full_objs;
    for (int k : full_positions) full_objs.push_back(objs[k]);
    auto incl = based_sum_inclusion(phi, full_objs, keep);
    auto f_incl = eval_nat(f, incl);
    return sub_minus(upper, map_subobject(f_incl, lower));
}

}  // namespace

HigherDelta higher_delta(const ExprPtr& f, const std::vector<int>& objs, const Presheaf& phi) {
    tense_certify(f);
    HigherDelta out;
    if (objs.empty()) {
        out.ambient = eval(f, phi);
        out.new_elems = full_subobject(out.ambient);
        return out;
    }
    const int n = static_cast<int>(objs.size());
    out.ambient = eval(f, based_sum(phi, objs).sheaf);
    // route (ii): remove everything hitting a one-smaller subsum
    Subobject removed = empty_subobject(out.ambient);
    for (int j = 0; j < n; ++j) {
        std::vector<int> keep;
        for (int k = 0; k < n; ++k)
            if (k != j) keep.push_back(k);
        auto incl = eval_nat(f, based_sum_inclusion(phi, objs, keep));
        removed = union_sub(removed, image_subobject(incl));
    }
    out.new_elems = sub_minus(full_subobject(out.ambient), removed);
    // route (i): iterated differences, left to right
    Subobject iterated = iterated_delta(f, objs, phi, {}, 0);
    if (!iterated.parent.same_as(out.ambient) || iterated.subset != out.new_elems.subset)
        throw ValidationError("higher difference routes disagree");
    validate_subobject(out.new_elems);
    return out;
}

bool higher_delta_permutation_invariant(const ExprPtr& f, const std::vector<int>& objs,
                                        const std::vector<int>& perm, const Presheaf& phi) {
    std::vector<int> permuted;
    for (int p : perm) permuted.push_back(objs[p]);
    auto hd = higher_delta(f, objs, phi);
    auto hp = higher_delta(f, permuted, phi);
    if (objs.empty()) return hp.new_elems.subset == hd.new_elems.subset;
    // reindex the ambient sum: summand i of the permuted version is summand perm[i]
    auto bs_p = based_sum(phi, permuted);
    auto bs_o = based_sum(phi, objs);
    NatTrans reindex;
    reindex.src = bs_p.sheaf;
    reindex.dst = bs_o.sheaf;
    reindex.comp.resize(phi.base->n_objects());
    for (int x = 0; x < phi.base->n_objects(); ++x) {
        for (int e = 0; e < phi.n_at(x); ++e) reindex.comp[x].push_back(bs_o.base_inj.comp[x][e]);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const auto& rep = bs_p.rep_inj[i].src;
            for (int e = 0; e < rep.n_at(x); ++e) reindex.comp[x].push_back(bs_o.rep_inj[perm[i]].comp[x][e]);
        }
    }
    validate_nat(reindex);
    auto f_reindex = eval_nat(f, reindex);
    if (!is_iso(f_reindex)) return false;
    return map_subobject(f_reindex, hp.new_elems).subset == hd.new_elems.subset;
}

NatTrans ppi_of_element(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, int ambient_elem) {
    auto dv = delta_A(f, a_obj, phi);
    if (!dv.new_elems.contains(b_obj, ambient_elem)) throw NotNew("ppi_of_element: element is not new");
    auto f_phi = eval(f, phi);
    auto rep_b = representable(f->cod, b_obj);
    auto dom = sum(f_phi, rep_b);
    NatTrans u;
    u.src = dom.sum;
    u.dst = dv.ambient;
    u.comp.resize(f->cod->n_objects());
    for (int x = 0; x < f->cod->n_objects(); ++x) {
        for (int e = 0; e < f_phi.n_at(x); ++e) u.comp[x].push_back(dv.included.comp[x][e]);
        for (const auto& gname : rep_b.elems[x]) {
            int g = f->cod->morph_index(gname);
            u.comp[x].push_back(dv.ambient.act[g][ambient_elem]);
        }
    }
    validate_nat(u);
    if (!is_ppi(f, phi, a_obj, b_obj, u)) throw NotPPI("ppi_of_element: defining square is not a pullback");
    return u;
}

int ppi_to_element(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, const NatTrans& u) {
    (void)a_obj;
    auto f_phi = eval(f, phi);
    int unit = f->cod->identity[b_obj];
    auto rep_b = representable(f->cod, b_obj);
    int pos = rep_b.find_elem(b_obj, f->cod->morphisms[unit].id);
    return u.comp[b_obj][f_phi.n_at(b_obj) + pos];
}

bool is_ppi(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, const NatTrans& u) {
    auto dv = delta_A(f, a_obj, phi);
    auto f_phi = eval(f, phi);
    auto dom = sum(f_phi, representable(f->cod, b_obj));
    if (!u.src.same_as(dom.sum) || !u.dst.same_as(dv.ambient)) return false;
    return is_pullback_square(dom.injections[0], identity_nat(f_phi), u, dv.included);
}

Presheaf difference_operator(const ExprPtr& f, const Presheaf& phi, const Presheaf& psi) {
    auto jac = jacobian(f, phi);
    return tensor_presheaf(jac.prof, psi).sheaf;
}

std::pair<Presheaf, Presheaf> tangent(const ExprPtr& f, const Presheaf& phi, const Presheaf& psi) {
    return {eval(f, phi), difference_operator(f, phi, psi)};
}

Profunctor core(const ExprPtr& f) {
    const CatPtr A = f->dom, B = f->cod;
    Profunctor out;
    out.src = A;
    out.dst = B;
    std::vector<Presheaf> values;
    for (int a = 0; a < A->n_objects(); ++a) values.push_back(eval(f, representable(A, a)));
    out.cells.assign(A->n_objects(), std::vector<std::vector<std::string>>(B->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int b = 0; b < B->n_objects(); ++b) out.cells[a][b] = values[a].elems[b];
    out.left.resize(A->n_morphisms());
    for (int m = 0; m < A->n_morphisms(); ++m) {
        auto mapped = eval_nat(f, rep_nat(A, m));  // F(rep(dst)) -> F(rep(src))
        out.left[m] = mapped.comp;
    }
    out.right.resize(B->n_morphisms());
    for (int h = 0; h < B->n_morphisms(); ++h) {
        out.right[h].resize(A->n_objects());
        for (int a = 0; a < A->n_objects(); ++a) out.right[h][a] = values[a].act[h];
    }
    validate_profunctor(out);
    return out;
}

NatTrans core_counit(const ExprPtr& f, const Presheaf& phi) {
    auto cor = core(f);
    auto dom = tensor_presheaf(cor, phi);
    auto cod = eval(f, phi);
    NatTrans out;
    out.src = dom.sheaf;
    out.dst = cod;
    out.comp.resize(f->cod->n_objects());
    for (int b = 0; b < f->cod->n_objects(); ++b) {
        const auto& t = dom.tables[b];
        out.comp[b].assign(t.n_classes(), -1);
        for (int i = 0; i < static_cast<int>(t.gens.size()); ++i) {
            auto g = t.gens[i];  // (a, x in Phi(a), y in F(rep a)(b))
            auto ybar = eval_nat(f, yoneda_nat(phi, g.mid, g.x));
            int target = ybar.comp[b][g.y];
            int cls = t.class_of[i];
            if (out.comp[b][cls] == -1)
                out.comp[b][cls] = target;
            else if (out.comp[b][cls] != target)
                throw ValidationError("core counit not constant on classes");
        }
    }
    validate_nat(out);
    return out;
}

bool tense_square(const NatTrans& t_at_sub, const NatTrans& t_at_whole, const NatTrans& f_incl,
                  const NatTrans& g_incl) {
    return is_pullback_square(f_incl, t_at_sub, t_at_whole, g_incl);
}

}  // namespace fdcalc

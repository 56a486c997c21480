#include "fdcalc/chain.hpp"

#include <algorithm>

namespace fdcalc {

namespace {

// PPI transformation of a difference cell, built from the already-computed
// column data: the base inclusion on the first summand, the witness orbit on
// the second.
NatTrans ppi_from_column(const ExprPtr& f, const Presheaf& phi, const JacobianValue& jac, int a, int b,
                         int cell) {
    const auto& col = jac.columns[a];
    int witness = jac.ambient_elem(a, b, cell);
    auto f_phi = eval(f, phi);
    auto rep_b = representable(f->cod, b);
    auto dom = sum(f_phi, rep_b);
    NatTrans u;
    u.src = dom.sum;
    u.dst = col.ambient;
    u.comp.resize(f->cod->n_objects());
    for (int x = 0; x < f->cod->n_objects(); ++x) {
        for (int e = 0; e < f_phi.n_at(x); ++e) u.comp[x].push_back(col.included.comp[x][e]);
        for (const auto& gname : rep_b.elems[x]) {
            int g = f->cod->morph_index(gname);
            u.comp[x].push_back(col.ambient.act[g][witness]);
        }
    }
    validate_nat(u);
    return u;
}

}  // namespace

ProfMorphism GammaValue::as_profmorph() const {
    ProfMorphism m;
    m.src = domain.prof;
    m.dst = jac_gf.prof;
    m.comp = cls_map;
    validate_prof_morphism(m);
    return m;
}

int GammaValue::image_of_pair(int a, int c, int b, int t_cell, int u_cell) const {
    int cls = domain.class_of(a, c, {b, t_cell, u_cell});
    if (cls < 0) throw Error("image_of_pair: no such generator");
    return cls_map[a][c][cls];
}

bool GammaValue::is_bijective() const {
    for (int a = 0; a < f->dom->n_objects(); ++a)
        for (int c = 0; c < g->cod->n_objects(); ++c) {
            if (static_cast<int>(cls_map[a][c].size()) != jac_gf.prof.n_cell(a, c)) return false;
            std::vector<bool> hit(jac_gf.prof.n_cell(a, c), false);
            for (int v : cls_map[a][c]) {
                if (hit[v]) return false;
                hit[v] = true;
            }
            if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
        }
    return true;
}

GammaValue gamma(const ExprPtr& f, const ExprPtr& g, const Presheaf& phi) {
    if (!same_cat(f->cod, g->dom)) throw EndpointMismatch("gamma: functors do not compose");
    GammaValue out;
    out.f = f;
    out.g = g;
    out.gf = compose_expr(g, f);
    out.phi = phi;
    out.jac_f = jacobian(f, phi);
    auto f_phi = eval(f, phi);
    out.jac_g = jacobian(g, f_phi);
    out.jac_gf = jacobian(out.gf, phi);
    out.domain = compose_prof(out.jac_g.prof, out.jac_f.prof);

    const CatPtr A = f->dom, B = f->cod, C = g->cod;
    out.cls_map.assign(A->n_objects(), std::vector<std::vector<int>>(C->n_objects()));
    for (int a = 0; a < A->n_objects(); ++a)
        for (int c = 0; c < C->n_objects(); ++c)
            out.cls_map[a][c].assign(out.domain.tables[a][c].n_classes(), -1);

    for (int a = 0; a < A->n_objects(); ++a)
        for (int b = 0; b < B->n_objects(); ++b)
            for (int t_cell = 0; t_cell < out.jac_f.prof.n_cell(a, b); ++t_cell) {
                auto t_hat = ppi_from_column(f, phi, out.jac_f, a, b, t_cell);
                auto g_t_hat = eval_nat(g, t_hat);
                for (int c = 0; c < C->n_objects(); ++c) {
                    const auto& table = out.domain.tables[a][c];
                    for (int u_cell = 0; u_cell < out.jac_g.prof.n_cell(b, c); ++u_cell) {
                        int u_witness = out.jac_g.ambient_elem(b, c, u_cell);
                        int value = g_t_hat.comp[c][u_witness];
                        int target = out.jac_gf.cell_index(a, c, value);
                        if (target < 0)
                            throw NotNew("gamma image is not a new element of the composite");
                        int gen = table.find_gen({b, t_cell, u_cell});
                        int cls = table.class_of[gen];
                        if (out.cls_map[a][c][cls] == -1)
                            out.cls_map[a][c][cls] = target;
                        else if (out.cls_map[a][c][cls] != target)
                            throw ValidationError("gamma is not constant on coend classes");
                    }
                }
            }
    validate_prof_morphism(out.as_profmorph());
    return out;
}

TenseTransformation tense_identity(const ExprPtr& f) {
    return {f, f, [f](const Presheaf& phi) { return identity_nat(eval(f, phi)); }};
}

TenseTransformation tense_injection(const ExprPtr& f, const ExprPtr& g, int which) {
    auto total = sum_expr(f, g);
    auto part = which == 0 ? f : g;
    return {part, total, [f, g, which](const Presheaf& phi) {
                return sum(eval(f, phi), eval(g, phi)).injections[which];
            }};
}

TenseTransformation tense_codiagonal(const ExprPtr& f) {
    auto doubled = sum_expr(f, f);
    return {doubled, f, [f](const Presheaf& phi) {
                auto value = eval(f, phi);
                auto s = sum(value, value);
                NatTrans t;
                t.src = s.sum;
                t.dst = value;
                t.comp.resize(value.base->n_objects());
                for (int x = 0; x < value.base->n_objects(); ++x) {
                    for (int e = 0; e < value.n_at(x); ++e) t.comp[x].push_back(e);
                    for (int e = 0; e < value.n_at(x); ++e) t.comp[x].push_back(e);
                }
                validate_nat(t);
                return t;
            }};
}

TenseTransformation tense_linear(const ProfMorphism& m) {
    return {linear_expr(m.src), linear_expr(m.dst), [m](const Presheaf& phi) { return tensor_morph(m, phi); }};
}

TenseTransformation whisker_left(const ExprPtr& g, const TenseTransformation& t) {
    return {compose_expr(g, t.src), compose_expr(g, t.dst),
            [g, t](const Presheaf& phi) { return eval_nat(g, t.at(phi)); }};
}

TenseTransformation whisker_right(const TenseTransformation& t, const ExprPtr& f) {
    return {compose_expr(t.src, f), compose_expr(t.dst, f),
            [t, f](const Presheaf& phi) { return t.at(eval(f, phi)); }};
}

ProfMorphism delta_of_transformation(const TenseTransformation& t, const Presheaf& phi) {
    auto jac_src = jacobian(t.src, phi);
    auto jac_dst = jacobian(t.dst, phi);
    const CatPtr A = t.src->dom, B = t.src->cod;
    ProfMorphism out;
    out.src = jac_src.prof;
    out.dst = jac_dst.prof;
    out.comp.resize(A->n_objects());
    for (int a = 0; a < A->n_objects(); ++a) {
        out.comp[a].resize(B->n_objects());
        auto component = t.at(based_sum(phi, {a}).sheaf);
        for (int b = 0; b < B->n_objects(); ++b)
            for (int e : jac_src.columns[a].new_elems.subset[b]) {
                int target = component.comp[b][e];
                if (!jac_dst.columns[a].new_elems.contains(b, target))
                    throw ActionEscapesNewElements("transformation is not tense: difference escapes");
                out.comp[a][b].push_back(jac_dst.cell_index(a, b, target));
            }
    }
    validate_prof_morphism(out);
    return out;
}

GammaLawsReport check_gamma_laws(const ExprPtr& f, const ExprPtr& g, const ExprPtr& h, const Presheaf& phi,
                                 const NatTrans& phi_map, const TenseTransformation& alpha,
                                 const TenseTransformation& beta) {
    GammaLawsReport report;
    const CatPtr A = f->dom, B = f->cod, C = g->cod, D = h->cod;

    // unitors
    auto left_unitor = gamma(f, identity_expr(B), phi);
    auto right_unitor = gamma(identity_expr(A), f, phi);
    report.unitors_bijective = left_unitor.is_bijective() && right_unitor.is_bijective();
    if (!report.unitors_bijective) report.detail = "unitor not bijective";

    // associativity: chase every generator triple both ways
    auto gf = compose_expr(g, f);
    auto hg = compose_expr(h, g);
    auto gamma_gf = gamma(f, g, phi);
    auto gamma_h_gf = gamma(gf, h, phi);
    auto gamma_hg_f = gamma(f, hg, phi);
    auto gamma_h_g = gamma(g, h, eval(f, phi));
    report.associative = true;
    for (int a = 0; a < A->n_objects() && report.associative; ++a)
        for (int b = 0; b < B->n_objects() && report.associative; ++b)
            for (int c = 0; c < C->n_objects() && report.associative; ++c)
                for (int d = 0; d < D->n_objects() && report.associative; ++d)
                    for (int t = 0; t < gamma_gf.jac_f.prof.n_cell(a, b); ++t)
                        for (int u = 0; u < gamma_gf.jac_g.prof.n_cell(b, c); ++u)
                            for (int v = 0; v < gamma_h_gf.jac_g.prof.n_cell(c, d); ++v) {
                                int w = gamma_gf.image_of_pair(a, c, b, t, u);
                                int lhs = gamma_h_gf.image_of_pair(a, d, c, w, v);
                                int w2 = gamma_h_g.image_of_pair(b, d, c, u, v);
                                int rhs = gamma_hg_f.image_of_pair(a, d, b, t, w2);
                                if (lhs != rhs) {
                                    report.associative = false;
                                    report.detail = "associativity failed";
                                }
                            }

    // naturality in the presheaf argument
    auto gamma_psi = gamma(f, g, phi_map.dst);
    auto jf = jacobian_nat(f, phi_map);
    auto jg = jacobian_nat(g, eval_nat(f, phi_map));
    auto jgf = jacobian_nat(gf, phi_map);
    report.natural_in_phi = true;
    for (int a = 0; a < A->n_objects() && report.natural_in_phi; ++a)
        for (int b = 0; b < B->n_objects() && report.natural_in_phi; ++b)
            for (int c = 0; c < C->n_objects(); ++c)
                for (int t = 0; t < gamma_gf.jac_f.prof.n_cell(a, b); ++t)
                    for (int u = 0; u < gamma_gf.jac_g.prof.n_cell(b, c); ++u) {
                        int lhs = jgf.comp[a][c][gamma_gf.image_of_pair(a, c, b, t, u)];
                        int rhs = gamma_psi.image_of_pair(a, c, b, jf.comp[a][b][t], jg.comp[b][c][u]);
                        if (lhs != rhs) {
                            report.natural_in_phi = false;
                            report.detail = "naturality in the presheaf failed";
                        }
                    }

    // naturality in the inner functor along alpha: f -> f'
    {
        auto f2 = alpha.dst;
        auto gamma_f2 = gamma(f2, g, phi);
        auto d_alpha = delta_of_transformation(alpha, phi);
        auto jg_alpha = jacobian_nat(g, alpha.at(phi));
        auto d_g_alpha = delta_of_transformation(whisker_left(g, alpha), phi);
        report.natural_in_f = true;
        for (int a = 0; a < A->n_objects() && report.natural_in_f; ++a)
            for (int b = 0; b < B->n_objects() && report.natural_in_f; ++b)
                for (int c = 0; c < C->n_objects(); ++c)
                    for (int t = 0; t < gamma_gf.jac_f.prof.n_cell(a, b); ++t)
                        for (int u = 0; u < gamma_gf.jac_g.prof.n_cell(b, c); ++u) {
                            int lhs = d_g_alpha.comp[a][c][gamma_gf.image_of_pair(a, c, b, t, u)];
                            int rhs = gamma_f2.image_of_pair(a, c, b, d_alpha.comp[a][b][t],
                                                             jg_alpha.comp[b][c][u]);
                            if (lhs != rhs) {
                                report.natural_in_f = false;
                                report.detail = "naturality in the inner functor failed";
                            }
                        }
    }

    // naturality in the outer functor along beta: g -> g'
    {
        auto g2 = beta.dst;
        auto gamma_g2 = gamma(f, g2, phi);
        auto d_beta = delta_of_transformation(beta, eval(f, phi));
        auto d_beta_f = delta_of_transformation(whisker_right(beta, f), phi);
        report.natural_in_g = true;
        for (int a = 0; a < A->n_objects() && report.natural_in_g; ++a)
            for (int b = 0; b < B->n_objects() && report.natural_in_g; ++b)
                for (int c = 0; c < C->n_objects(); ++c)
                    for (int t = 0; t < gamma_gf.jac_f.prof.n_cell(a, b); ++t)
                        for (int u = 0; u < gamma_gf.jac_g.prof.n_cell(b, c); ++u) {
                            int lhs = d_beta_f.comp[a][c][gamma_gf.image_of_pair(a, c, b, t, u)];
                            int rhs = gamma_g2.image_of_pair(a, c, b, t, d_beta.comp[b][c][u]);
                            if (lhs != rhs) {
                                report.natural_in_g = false;
                                report.detail = "naturality in the outer functor failed";
                            }
                        }
    }
    return report;
}

std::pair<NatTrans, NatTrans> tangent_compose(const ExprPtr& f, const ExprPtr& g, const Presheaf& phi,
                                              const Presheaf& psi) {
    auto gv = gamma(f, g, phi);
    auto first = identity_nat(eval(gv.gf, phi));
    auto second = tensor_morph(gv.as_profmorph(), psi);
    return {first, second};
}

}  // namespace fdcalc

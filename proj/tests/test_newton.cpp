#include <doctest.h>

#include <algorithm>

#include "fdcalc/newton.hpp"

using namespace fdcalc;

namespace {

void unique_actions(Profunctor& p) {
    p.left.assign(p.src->n_morphisms(), {});
    for (int m = 0; m < p.src->n_morphisms(); ++m) {
        p.left[m].resize(p.dst->n_objects());
        int from = p.src->morphisms[m].dst, to = p.src->morphisms[m].src;
        for (int b = 0; b < p.dst->n_objects(); ++b)
            for (int e = 0; e < p.n_cell(from, b); ++e) {
                (void)e;
                REQUIRE(p.n_cell(to, b) == 1);
                p.left[m][b].push_back(0);
            }
    }
    p.right.assign(p.dst->n_morphisms(), {});
    for (int g = 0; g < p.dst->n_morphisms(); ++g) {
        p.right[g].resize(p.src->n_objects());
        int from = p.dst->morphisms[g].src, to = p.dst->morphisms[g].dst;
        for (int a = 0; a < p.src->n_objects(); ++a)
            for (int e = 0; e < p.n_cell(a, from); ++e) {
                (void)e;
                REQUIRE(p.n_cell(a, to) == 1);
                p.right[g][a].push_back(0);
            }
    }
}

SymSeq point_seq(GenKind mode, int max_arity, const std::vector<std::pair<int, std::string>>& gens) {
    auto one = terminal_category();
    auto gen_cat = mode == GenKind::Bang ? free_symmetric(one, max_arity) : free_soft(one, max_arity);
    Profunctor p;
    p.src = gen_cat;
    p.dst = one;
    p.cells.assign(gen_cat->n_objects(), std::vector<std::vector<std::string>>(1));
    for (const auto& [arity, name] : gens) {
        int so = seq_object_index(*gen_cat, std::vector<int>(arity, 0));
        p.cells[so][0].push_back(name);
    }
    unique_actions(p);
    validate_profunctor(p);
    return make_symseq(mode, one, one, max_arity, std::move(p));
}

Presheaf n_points(const CatPtr& one, int n) {
    Presheaf phi;
    phi.base = one;
    phi.elems.resize(1);
    phi.act.resize(1);
    for (int i = 0; i < n; ++i) {
        phi.elems[0].push_back("a" + std::to_string(i));
        phi.act[0].push_back(i);
    }
    return phi;
}

// a profunctor 1 ⇸ 1 with k elements (monomial exponent)
Profunctor k_cell_prof(const CatPtr& one, int k) {
    Profunctor p;
    p.src = one;
    p.dst = one;
    p.cells.assign(1, std::vector<std::vector<std::string>>(1));
    for (int i = 0; i < k; ++i) p.cells[0][0].push_back("w" + std::to_string(i));
    p.left.assign(1, std::vector<std::vector<int>>(1));
    p.right.assign(1, std::vector<std::vector<int>>(1));
    for (int i = 0; i < k; ++i) {
        p.left[0][0].push_back(i);
        p.right[0][0].push_back(i);
    }
    validate_profunctor(p);
    return p;
}

}  // namespace

TEST_CASE("delta_star of the identity concentrates in arity one") {
    auto arr = walking_arrow();
    auto nd = delta_star(identity_expr(arr), 2);
    const auto& down = *nd.seq.seq_cat;
    for (int so = 0; so < down.n_objects(); ++so) {
        const auto& entries = down.seq_objects[so].entries;
        for (int b = 0; b < 2; ++b) {
            int expected = entries.size() == 1 ? static_cast<int>(arr->hom(entries[0], b).size()) : 0;
            CHECK(nd.seq.prof.n_cell(so, b) == expected);
        }
    }
}

TEST_CASE("delta_star of a linear functor is the profunctor in arity one") {
    auto arr = walking_arrow();
    auto p = identity_prof(arr);
    auto nd = delta_star(linear_expr(p), 2);
    const auto& down = *nd.seq.seq_cat;
    for (int so = 0; so < down.n_objects(); ++so) {
        const auto& entries = down.seq_objects[so].entries;
        for (int b = 0; b < 2; ++b) {
            int expected = entries.size() == 1 ? p.n_cell(entries[0], b) : 0;
            CHECK(nd.seq.prof.n_cell(so, b) == expected);
        }
    }
}

TEST_CASE("delta_star of squaring gives the forward differences of x^2 at 0") {
    auto one = terminal_category();
    auto sq = product_expr(identity_expr(one), identity_expr(one));
    auto nd = delta_star(sq, 3);
    const auto& down = *nd.seq.seq_cat;
    std::vector<int> expected = {0, 1, 2, 0};  // arity 0..3
    for (int so = 0; so < down.n_objects(); ++so)
        CHECK(nd.seq.prof.n_cell(so, 0) == expected[down.seq_objects[so].entries.size()]);
}

TEST_CASE("delta_star of a constant functor is its arity-zero cell") {
    auto one = terminal_category();
    auto c = constant_expr(one, n_points(one, 2));
    auto nd = delta_star(c, 2);
    const auto& down = *nd.seq.seq_cat;
    for (int so = 0; so < down.n_objects(); ++so)
        CHECK(nd.seq.prof.n_cell(so, 0) == (down.seq_objects[so].entries.empty() ? 2 : 0));
    // and the Newton functor of a constant is that constant
    auto nf = newton_functor(c, 2);
    for (int n = 0; n <= 3; ++n) CHECK(eval(nf, n_points(one, n)).n_at(0) == 2);
}

TEST_CASE("newton functor of linear and identity functors converges on test presheaves") {
    auto arr = walking_arrow();
    Presheaf phi;
    phi.base = arr;
    phi.elems = {{"x"}, {"y", "z"}};
    phi.act.resize(3);
    phi.act[arr->morph_index("id0")] = {0};
    phi.act[arr->morph_index("id1")] = {0, 1};
    phi.act[arr->morph_index("e")] = {0};
    for (const auto& f : {identity_expr(arr), linear_expr(identity_prof(arr))}) {
        auto nd = delta_star(f, 2);
        for (const auto& test : {phi, empty_presheaf(arr), representable(arr, 0)}) {
            auto eps = counit_at(f, nd, test);
            CHECK(is_iso(eps));
        }
    }
}

TEST_CASE("unit iso for the spec's soft sequences") {
    // P1 = {p}, P2 = {q} with q |-> p along the comultiplication
    auto s = point_seq(GenKind::Down, 2, {{1, "p"}, {2, "q"}});
    auto r = check_unit_iso(s);
    CHECK(r.iso);
    CHECK(r.equivariant);
    // soften of the strict X + sym^2 X
    auto strict = point_seq(GenKind::Bang, 2, {{1, "p"}, {2, "q"}});
    auto r2 = check_unit_iso(soften(strict));
    CHECK(r2.ok());
    // the empty sequence
    auto empty_s = point_seq(GenKind::Down, 2, {});
    CHECK(check_unit_iso(empty_s).ok());
}

TEST_CASE("counit report: analytic nodes converge, truncated monomials do not") {
    auto one = terminal_category();
    std::vector<Presheaf> tests;
    for (int n = 0; n <= 3; ++n) tests.push_back(n_points(one, n));
    // squaring is analytic: iso everywhere, comonad idempotent
    auto sq = product_expr(identity_expr(one), identity_expr(one));
    auto rep_sq = check_counit_iso(sq, 3, tests);
    CHECK(rep_sq.all_iso);
    CHECK(rep_sq.idempotent);
    // a soft-analytic node: iso everywhere
    auto s = point_seq(GenKind::Down, 2, {{1, "p"}, {2, "q"}});
    auto rep_s = check_counit_iso(analytic_expr(s), 2, tests);
    CHECK(rep_s.all_iso);
    CHECK(rep_s.idempotent);
    // cubing truncated at arity 2: mono but not onto at n = 3, still idempotent
    auto cube = monomial_expr(k_cell_prof(one, 3));
    auto rep_cube = check_counit_iso(cube, 2, tests);
    CHECK_FALSE(rep_cube.all_iso);
    CHECK(rep_cube.tests[3].status == "mono");
    CHECK(rep_cube.idempotent);
}

TEST_CASE("adjunction transposes round-trip") {
    auto s = point_seq(GenKind::Down, 2, {{1, "p"}, {2, "q"}});
    auto stilde = analytic_expr(s);
    auto nd = delta_star(stilde, 2);
    // the counit family of the comonad is tense
    TenseFamily counit_family = transpose_up(identity_profmorph(nd.seq.prof), nd.seq, nd);
    CHECK(family_is_tense(counit_family));
    // down ∘ up = identity
    auto u = transpose_down(counit_family, nd);
    CHECK(profmorph_equal(u, identity_profmorph(nd.seq.prof)));
    // up ∘ down reproduces the family on the canonical presheaves
    auto t2 = transpose_up(u, nd.seq, nd);
    for (std::size_t i = 0; i < t2.at_q.size(); ++i) CHECK(nat_equal(t2.at_q[i], counit_family.at_q[i]));

    // a second starting point: the unit of the adjunction as a profunctor morphism
    auto nd_of_s = delta_star(analytic_expr(s), 2);
    ProfMorphism unit_like;
    unit_like.src = s.prof;
    unit_like.dst = nd_of_s.seq.prof;
    unit_like.comp.resize(s.seq_cat->n_objects());
    for (int so = 0; so < s.seq_cat->n_objects(); ++so) {
        unit_like.comp[so].resize(1);
        auto se = analytic_eval(s, nd_of_s.q_sheaves[so]);
        for (int p = 0; p < s.prof.n_cell(so, 0); ++p) {
            std::vector<int> ut;
            const auto& entries = s.seq_cat->seq_objects[so].entries;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                auto& q = nd_of_s.q_sheaves[so];
                int idx = q.find_elem(entries[i], std::to_string(i + 1) + ":" +
                                                      s.base->morphisms[s.base->identity[entries[i]]].id);
                ut.push_back(idx);
            }
            int cls = se.class_of(0, so, p, ut);
            unit_like.comp[so][0].push_back(nd_of_s.cell_index(so, 0, cls));
        }
    }
    validate_prof_morphism(unit_like);
    auto t3 = transpose_up(unit_like, s, nd_of_s);
    auto u3 = transpose_down(t3, nd_of_s);
    CHECK(profmorph_equal(u3, unit_like));
}

TEST_CASE("transpose_down detects collapsing families") {
    auto one = terminal_category();
    auto s = point_seq(GenKind::Down, 1, {{1, "p"}});
    auto f_const = constant_expr(one, terminal_presheaf(one));
    auto nd = delta_star(f_const, 1);
    TenseFamily t;
    t.seq = s;
    t.target = f_const;
    auto stilde = analytic_expr(s);
    for (int so = 0; so < s.seq_cat->n_objects(); ++so) {
        auto src = eval(stilde, nd.q_sheaves[so]);
        NatTrans comp;
        comp.src = src;
        comp.dst = eval(f_const, nd.q_sheaves[so]);
        comp.comp.resize(1);
        comp.comp[0].assign(src.n_at(0), 0);
        t.at_q.push_back(comp);
    }
    CHECK_FALSE(family_is_tense(t));
    CHECK_THROWS_AS(transpose_down(t, nd), NotNew);
}

TEST_CASE("general-base differences are exposed but the transposes refuse them") {
    auto one = terminal_category();
    auto sq = product_expr(identity_expr(one), identity_expr(one));
    auto nd = delta_star_at(sq, 2, n_points(one, 1));
    // first difference of x^2 around a point: (1+1)^2 - 1^2 = 3 new elements
    int o1 = seq_object_index(*nd.seq.seq_cat, {0});
    CHECK(nd.seq.prof.n_cell(o1, 0) == 3);
    CHECK_THROWS_AS(counit_at(sq, nd, n_points(one, 2)), ModeError);
}

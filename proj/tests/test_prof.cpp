#include <doctest.h>

#include <algorithm>

#include "fdcalc/prof.hpp"

using namespace fdcalc;

namespace {

// profunctor over discrete categories: a matrix of sets, identity actions
Profunctor discrete_prof(const CatPtr& a, const CatPtr& b, const std::vector<std::vector<int>>& sizes,
                         const std::string& tag) {
    Profunctor p;
    p.src = a;
    p.dst = b;
    p.cells.assign(a->n_objects(), std::vector<std::vector<std::string>>(b->n_objects()));
    for (int i = 0; i < a->n_objects(); ++i)
        for (int j = 0; j < b->n_objects(); ++j)
            for (int k = 0; k < sizes[i][j]; ++k)
                p.cells[i][j].push_back(tag + std::to_string(i) + std::to_string(j) + "_" + std::to_string(k));
    p.left.resize(a->n_morphisms());
    for (int f = 0; f < a->n_morphisms(); ++f) {
        p.left[f].resize(b->n_objects());
        int src_o = a->morphisms[f].src;
        for (int j = 0; j < b->n_objects(); ++j)
            for (int k = 0; k < sizes[src_o][j]; ++k) p.left[f][j].push_back(k);
    }
    p.right.resize(b->n_morphisms());
    for (int g = 0; g < b->n_morphisms(); ++g) {
        p.right[g].resize(a->n_objects());
        int src_o = b->morphisms[g].src;
        for (int i = 0; i < a->n_objects(); ++i)
            for (int k = 0; k < sizes[i][src_o]; ++k) p.right[g][i].push_back(k);
    }
    validate_profunctor(p);
    return p;
}

Presheaf phi_arr(const CatPtr& arr) {
    Presheaf p;
    p.base = arr;
    p.elems = {{"x"}, {"y", "z"}};
    p.act.resize(3);
    p.act[arr->morph_index("id0")] = {0};
    p.act[arr->morph_index("id1")] = {0, 1};
    p.act[arr->morph_index("e")] = {0};
    return p;
}

long long ipow(long long b, long long e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TEST_CASE("identity profunctor is the hom functor") {
    auto arr = walking_arrow();
    auto id = identity_prof(arr);
    validate_profunctor(id);
    CHECK(id.cells[0][1] == std::vector<std::string>{"e"});
    CHECK(id.cells[1][0].empty());
    auto d2 = discrete_category({"a0", "a1"});
    auto idd = identity_prof(d2);
    CHECK(idd.n_cell(0, 0) == 1);
    CHECK(idd.n_cell(0, 1) == 0);
    CHECK(idd.n_cell(1, 1) == 1);
}

TEST_CASE("discrete composition is matrix multiplication") {
    auto d2 = discrete_category({"a0", "a1"});
    auto p = discrete_prof(d2, d2, {{1, 2}, {0, 1}}, "p");
    auto q = discrete_prof(d2, d2, {{2, 0}, {3, 1}}, "q");
    auto qp = compose_prof(q, p);
    // |Q⊗P(a,c)| = sum_b |Q(b,c)|·|P(a,b)|
    CHECK(qp.prof.n_cell(0, 0) == 1 * 2 + 2 * 3);  // 8
    CHECK(qp.prof.n_cell(0, 1) == 1 * 0 + 2 * 1);
    CHECK(qp.prof.n_cell(1, 0) == 0 * 2 + 1 * 3);
    CHECK(qp.prof.n_cell(1, 1) == 0 * 0 + 1 * 1);
}

TEST_CASE("composition with the identity is isomorphic to the original") {
    auto arr = walking_arrow();
    auto id = identity_prof(arr);
    auto qp = compose_prof(id, id);
    // classes (mid, x: a -> mid, y: mid -> b) |-> y∘x gives a bijection to hom(a,b)
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const auto& t = qp.tables[a][b];
            std::vector<int> image;
            for (int r : t.rep_gen) {
                auto g = t.gens[r];
                int x = arr->morph_index(id.cells[a][g.mid][g.x]);
                int y = arr->morph_index(id.cells[g.mid][b][g.y]);
                image.push_back(arr->comp[y][x]);
            }
            std::sort(image.begin(), image.end());
            auto expected = arr->hom(a, b);
            std::sort(expected.begin(), expected.end());
            CHECK(image == expected);
            // and every generator maps consistently with its class
            for (std::size_t i = 0; i < t.gens.size(); ++i) {
                auto g = t.gens[i];
                int x = arr->morph_index(id.cells[a][g.mid][g.x]);
                int y = arr->morph_index(id.cells[g.mid][b][g.y]);
                auto rep = t.gens[t.rep_gen[t.class_of[i]]];
                int rx = arr->morph_index(id.cells[a][rep.mid][rep.x]);
                int ry = arr->morph_index(id.cells[rep.mid][b][rep.y]);
                CHECK(arr->comp[y][x] == arr->comp[ry][rx]);
            }
        }
}

TEST_CASE("tensor with a presheaf: unit, discrete formula, hom action") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    // Id ⊗ Phi ≅ Phi via [a: x & p: a->b] |-> Phi(p)(x)
    auto t = tensor_presheaf(identity_prof(arr), phi);
    for (int b = 0; b < 2; ++b) {
        CHECK(t.sheaf.n_at(b) == phi.n_at(b));
        std::vector<int> image;
        for (int r : t.tables[b].rep_gen) {
            auto g = t.tables[b].gens[r];
            int p = arr->morph_index(identity_prof(arr).cells[g.mid][b][g.y]);
            image.push_back(phi.apply(p, g.x));
        }
        std::sort(image.begin(), image.end());
        for (int i = 0; i < phi.n_at(b); ++i) CHECK(image[i] == i);
    }
    // discrete: |result(b)| = sum_a |P(a,b)|·|Phi(a)|
    auto d2 = discrete_category({"a0", "a1"});
    auto p = discrete_prof(d2, d2, {{2, 1}, {1, 3}}, "p");
    Presheaf x;
    x.base = d2;
    x.elems = {{"u", "v"}, {"w"}};
    x.act = {{0, 1}, {0}};
    auto tx = tensor_presheaf(p, x);
    CHECK(tx.sheaf.n_at(0) == 2 * 2 + 1 * 1);
    CHECK(tx.sheaf.n_at(1) == 1 * 2 + 3 * 1);
}

TEST_CASE("tensor of hom of Arr with Phi returns Phi") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto t = tensor_presheaf(identity_prof(arr), phi);
    CHECK(t.sheaf.n_at(0) == 1);
    CHECK(t.sheaf.n_at(1) == 2);
    // the action transports x's class along e to the class of (0, x, e)
    int e = arr->morph_index("e");
    CHECK(t.sheaf.act[e][0] == t.class_of(1, {0, 0, 0}));  // cells(0,1) = {e} at index 0
}

TEST_CASE("tensor_nat is functorial") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto id = identity_prof(arr);
    auto t = tensor_nat(id, identity_nat(phi));
    CHECK(nat_equal(t, identity_nat(tensor_presheaf(id, phi).sheaf)));
    // composite law on an interesting transformation
    NatTrans u;  // rep(1) -> Phi picking z
    u.src = representable(arr, 1);
    u.dst = phi;
    u.comp = {{}, {1}};
    validate_nat(u);
    auto left = tensor_nat(id, u);
    validate_nat(left);
}

TEST_CASE("left_hom matches the discrete exponent formula") {
    auto d2 = discrete_category({"a0", "a1"});
    auto q = discrete_prof(d2, d2, {{1, 2}, {0, 1}}, "q");  // Q: B ⇸ C
    auto r = discrete_prof(d2, d2, {{2, 1}, {1, 3}}, "r");  // R: A ⇸ C
    auto h = left_hom(q, r);
    // |cells(a,b)| = prod_c |R(a,c)|^{|Q(b,c)|}
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            long long expected = 1;
            for (int c = 0; c < 2; ++c) expected *= ipow(r.n_cell(a, c), q.n_cell(b, c));
            CHECK(h.prof.n_cell(a, b) == expected);
        }
    // Q with empty cells gives the singleton empty family
    auto qe = discrete_prof(d2, d2, {{0, 0}, {0, 0}}, "q");
    auto he = left_hom(qe, r);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(he.prof.n_cell(a, b) == 1);
}

TEST_CASE("right_hom matches the discrete formula and the unit law") {
    auto d2 = discrete_category({"a0", "a1"});
    auto p = discrete_prof(d2, d2, {{1, 0}, {2, 1}}, "p");  // P: A ⇸ B
    auto r = discrete_prof(d2, d2, {{2, 1}, {1, 3}}, "r");  // R: A ⇸ C
    auto h = right_hom(r, p);
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
            long long expected = 1;
            for (int a = 0; a < 2; ++a) expected *= ipow(r.n_cell(a, c), p.n_cell(a, b));
            CHECK(h.prof.n_cell(b, c) == expected);
        }
    // R ⊘ Id ≅ R (by Yoneda on the columns)
    auto arr = walking_arrow();
    auto hom_arr = identity_prof(arr);
    auto r2 = discrete_prof(arr, arr, {{0, 0}, {0, 0}}, "z");  // placeholder to appease shapes
    (void)r2;
    auto h2 = right_hom(hom_arr, identity_prof(arr));
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) CHECK(h2.prof.n_cell(b, c) == hom_arr.n_cell(b, c));
}

TEST_CASE("adjunction bijection: families correspond across the three homs") {
    auto arr = walking_arrow();
    auto p = identity_prof(arr);
    auto q = identity_prof(arr);
    auto r = identity_prof(arr);
    // P -> Q ⦸ R vs Q⊗P -> R vs Q -> R ⊘ P: compare counts
    auto qp = compose_prof(q, p);
    auto lh = left_hom(q, r);
    auto rh = right_hom(r, p);
    CHECK(all_prof_morphisms(p, lh.prof).size() == all_prof_morphisms(qp.prof, r).size());
    CHECK(all_prof_morphisms(qp.prof, r).size() == all_prof_morphisms(q, rh.prof).size());
}

TEST_CASE("transpose is the matrix transpose and is involutive") {
    auto d2 = discrete_category({"a0", "a1"});
    auto arr = walking_arrow();
    auto p = discrete_prof(d2, d2, {{1, 2}, {3, 0}}, "p");
    auto pt = transpose(p);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(pt.n_cell(b, a) == p.n_cell(a, b));
    CHECK(transpose(pt).same_as(p));
    auto idt = transpose(identity_prof(arr));
    CHECK(idt.same_as(identity_prof(opposite(arr))));
}

TEST_CASE("hom_tense_check: pi0 of rows must map onto") {
    auto arr = walking_arrow();
    CHECK(hom_tense_check(identity_prof(arr)));
    // P: Arr ⇸ 1 with P(1,*) empty, P(0,*) a point: fails at e
    auto one = terminal_category();
    Profunctor p;
    p.src = arr;
    p.dst = one;
    p.cells = {{{"c"}}, {{}}};
    p.left.assign(3, std::vector<std::vector<int>>(1));
    p.left[arr->morph_index("id0")][0] = {0};
    p.left[arr->morph_index("id1")][0] = {};
    p.left[arr->morph_index("e")][0] = {};  // from P(1,*) = empty
    p.right.assign(1, std::vector<std::vector<int>>(2));
    p.right[0][0] = {0};
    p.right[0][1] = {};
    validate_profunctor(p);
    HomTenseWitness w;
    CHECK_FALSE(hom_tense_check(p, &w));
    CHECK(p.src->morphisms[w.morphism].id == "e");
}

TEST_CASE("induced profunctors of a functor") {
    auto arr = walking_arrow();
    auto one = terminal_category();
    CatFunctor pick1{one, arr, {1}, {arr->identity[1]}};
    validate_functor(pick1);
    auto lower = f_lower(pick1);  // (*, b) |-> hom(1, b)
    CHECK(lower.n_cell(0, 0) == 0);
    CHECK(lower.n_cell(0, 1) == 1);
    auto upper = f_upper(pick1);  // (b, *) |-> hom(b, 1)
    CHECK(upper.n_cell(0, 0) == 1);
    CHECK(upper.n_cell(1, 0) == 1);
}

TEST_CASE("profunctor round-trips through the product-category presheaf view") {
    auto arr = walking_arrow();
    auto id = identity_prof(arr);
    auto ps = prof_to_presheaf(id);
    validate_presheaf(ps);
    auto back = presheaf_to_prof(ps, arr, arr);
    CHECK(back.same_as(id));
}

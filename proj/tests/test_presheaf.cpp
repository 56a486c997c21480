#include <doctest.h>

#include <algorithm>

#include "fdcalc/presheaf.hpp"

using namespace fdcalc;

namespace {

// Phi(0) = {x}, Phi(1) = {y,z}, Phi(e): x |-> y
Presheaf phi_arr(const CatPtr& arr) {
    Presheaf p;
    p.base = arr;
    p.elems = {{"x"}, {"y", "z"}};
    p.act.resize(3);
    p.act[arr->morph_index("id0")] = {0};
    p.act[arr->morph_index("id1")] = {0, 1};
    p.act[arr->morph_index("e")] = {0};
    validate_presheaf(p);
    return p;
}

Subobject sub_of(const Presheaf& p, std::vector<std::vector<int>> subset) {
    Subobject s{p, std::move(subset)};
    validate_subobject(s);
    return s;
}

// all subobjects (subsets closed under the actions), brute force
std::vector<Subobject> all_subobjects(const Presheaf& p) {
    std::vector<Subobject> out;
    std::vector<int> radix;
    for (int x = 0; x < p.base->n_objects(); ++x)
        for (int e = 0; e < p.n_at(x); ++e) {
            (void)e;
            radix.push_back(2);
        }
    if (radix.empty()) {
        out.push_back(empty_subobject(p));
        return out;
    }
    for_each_tuple(radix, [&](const std::vector<int>& pick) {
        Subobject s{p, std::vector<std::vector<int>>(p.base->n_objects())};
        int slot = 0;
        for (int x = 0; x < p.base->n_objects(); ++x)
            for (int e = 0; e < p.n_at(x); ++e)
                if (pick[slot++]) s.subset[x].push_back(e);
        try {
            validate_subobject(s);
        } catch (const ValidationError&) {
            return;
        }
        out.push_back(std::move(s));
    });
    return out;
}

}  // namespace

TEST_CASE("representables on the arrow and the discrete category") {
    auto arr = walking_arrow();
    auto r0 = representable(arr, 0);
    CHECK(r0.elems[0] == std::vector<std::string>{"id0"});
    CHECK(r0.elems[1] == std::vector<std::string>{"e"});
    auto r1 = representable(arr, 1);
    CHECK(r1.elems[0].empty());
    CHECK(r1.elems[1] == std::vector<std::string>{"id1"});
    auto d2 = discrete_category({"a0", "a1"});
    auto ra = representable(d2, 0);
    CHECK(ra.n_at(0) == 1);
    CHECK(ra.n_at(1) == 0);
    CHECK_THROWS_AS(representable(arr, 5), UnknownObject);
}

TEST_CASE("sum builds tagged disjoint unions with complemented injections") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto s = sum(phi, representable(arr, 0));
    CHECK(s.sum.n_at(1) == 3);
    validate_presheaf(s.sum);
    for (const auto& inj : s.injections) {
        validate_nat(inj);
        CHECK(is_mono(inj));
        CHECK(is_complemented(image_subobject(inj)));
    }
    auto unit = sum(phi, empty_presheaf(arr));
    CHECK(is_iso(unit.injections[0]));
}

TEST_CASE("product is pointwise with componentwise actions") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto sq = product(phi, phi);
    CHECK(sq.prod.n_at(1) == 4);
    validate_presheaf(sq.prod);
    validate_nat(sq.proj1);
    auto with_terminal = product(phi, terminal_presheaf(arr));
    CHECK(is_iso(with_terminal.proj1));
    auto with_empty = product(phi, empty_presheaf(arr));
    CHECK(with_empty.prod.total() == 0);
}

TEST_CASE("pi0 partitions elements by the zigzag relation") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto parts = pi0(phi);
    CHECK(parts.n_components == 2);
    CHECK(parts.comp_of[0][0] == parts.comp_of[1][0]);  // x ~ y
    CHECK(parts.comp_of[1][0] != parts.comp_of[1][1]);  // z on its own
    CHECK(pi0(representable(arr, 0)).n_components == 1);
    CHECK(pi0(empty_presheaf(arr)).n_components == 0);
}

TEST_CASE("is_complemented uses the elementwise criterion") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    CHECK(is_complemented(sub_of(phi, {{0}, {0}})));       // {x,y}
    CHECK_FALSE(is_complemented(sub_of(phi, {{}, {0}})));  // {y}: x maps in
    CHECK(is_complemented(full_subobject(phi)));
    CHECK(is_complemented(empty_subobject(phi)));
}

TEST_CASE("negate computes the pseudo-complement") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto not_y = negate(sub_of(phi, {{}, {0}}));
    CHECK(not_y.subset == std::vector<std::vector<int>>{{}, {1}});  // {z}
    auto not_not_y = negate(not_y);
    CHECK(not_not_y.subset == std::vector<std::vector<int>>{{0}, {0}});  // {x,y}
    CHECK(negate(full_subobject(phi)).total() == 0);
}

TEST_CASE("negate lands in complemented subobjects and stabilizes") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    for (const auto& s : all_subobjects(phi)) {
        auto n = negate(s);
        CHECK(is_complemented(n));
        auto nn = negate(n);
        auto nnn = negate(nn);
        CHECK(nnn.subset == n.subset);
    }
}

TEST_CASE("complement is literal set difference, with witness on failure") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto c = complement(sub_of(phi, {{0}, {0}}));
    CHECK(c.subset == std::vector<std::vector<int>>{{}, {1}});
    CHECK(complement(full_subobject(phi)).total() == 0);
    CHECK_THROWS_WITH_AS(complement(sub_of(phi, {{}, {0}})), doctest::Contains("NotComplemented(e, x)"),
                         NotComplemented);
    // complement recombines to the whole
    auto s = sub_of(phi, {{0}, {0}});
    auto u = union_sub(s, complement(s));
    CHECK(u.subset == full_subobject(phi).subset);
}

TEST_CASE("pi0-surjectivity") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    CHECK(is_pi0_surjective(identity_nat(phi)));
    // rep(1) -> Phi picking y: misses the component of z
    NatTrans t;
    t.src = representable(arr, 1);
    t.dst = phi;
    t.comp = {{}, {0}};
    validate_nat(t);
    CHECK_FALSE(is_pi0_surjective(t));
    // injection into a sum with a fresh component
    auto s = sum(phi, representable(arr, 1));
    CHECK_FALSE(is_pi0_surjective(s.injections[0]));
}

TEST_CASE("boolean_factorize splits into pi0-surjective then complemented mono") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    NatTrans t;
    t.src = representable(arr, 1);
    t.dst = phi;
    t.comp = {{}, {0}};
    validate_nat(t);
    auto bf = boolean_factorize(t);
    CHECK(bf.middle.subset == std::vector<std::vector<int>>{{0}, {0}});  // {x,y}
    validate_nat(bf.e);
    validate_nat(bf.m);
    CHECK(is_pi0_surjective(bf.e));
    CHECK(is_mono(bf.m));
    CHECK(is_complemented(image_subobject(bf.m)));
    CHECK(nat_equal(compose_nat(bf.m, bf.e), t));

    auto idf = boolean_factorize(identity_nat(phi));
    CHECK(idf.middle.subset == full_subobject(phi).subset);

    auto from_zero = boolean_factorize(NatTrans{empty_presheaf(arr), phi, {{}, {}}});
    CHECK(from_zero.middle.total() == 0);
}

TEST_CASE("orthogonality: unique diagonal fill-in") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    NatTrans t;
    t.src = representable(arr, 1);
    t.dst = phi;
    t.comp = {{}, {0}};
    auto bf = boolean_factorize(t);
    // square e;m = e;m, fill-ins are delta with delta∘e = e and m∘delta = m
    int fill_ins = 0;
    for (const auto& d : all_nat_trans(bf.e.dst, bf.e.dst))
        if (nat_equal(compose_nat(d, bf.e), bf.e) && nat_equal(compose_nat(bf.m, d), bf.m)) ++fill_ins;
    CHECK(fill_ins == 1);
}

TEST_CASE("complemented subobjects of a sum of representables are the subsums") {
    auto arr = walking_arrow();
    auto reps = sum_of_reps(arr, {0, 1, 0});
    int n_complemented = 0;
    for (const auto& s : all_subobjects(reps.sheaf))
        if (is_complemented(s)) ++n_complemented;
    CHECK(n_complemented == 8);  // one per subset of the three summands
    // and each subsum inclusion is complemented
    auto incl = subsum_inclusion(reps, {0, 2});
    validate_nat(incl);
    CHECK(is_complemented(image_subobject(incl)));
}

TEST_CASE("groupoid base makes every subobject complemented") {
    // Z/2 as a one-object groupoid
    RawCategory raw;
    raw.objects = {"*"};
    raw.morphisms = {{"1", "*", "*"}, {"s", "*", "*"}};
    raw.identities = {{"*", "1"}};
    raw.compose = {{"1", "1", "1"}, {"1", "s", "s"}, {"s", "1", "s"}, {"s", "s", "1"}};
    auto z2 = validate_category(raw);
    CHECK(z2->is_groupoid());
    Presheaf p;  // two orbits: a fixed point and a 2-cycle
    p.base = z2;
    p.elems = {{"u", "v", "w"}};
    p.act.resize(2);
    p.act[0] = {0, 1, 2};
    p.act[1] = {0, 2, 1};
    validate_presheaf(p);
    for (const auto& s : all_subobjects(p)) CHECK(is_complemented(s));
    CHECK_FALSE(walking_arrow()->is_groupoid());
}

TEST_CASE("meets and joins of complemented subobjects stay complemented") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    std::vector<Subobject> complemented;
    for (const auto& s : all_subobjects(phi))
        if (is_complemented(s)) complemented.push_back(s);
    for (const auto& a : complemented)
        for (const auto& b : complemented) {
            CHECK(is_complemented(union_sub(a, b)));
            CHECK(is_complemented(intersect_sub(a, b)));
        }
}

TEST_CASE("complemented subobjects are stable under preimage") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto reps = sum_of_reps(arr, {0, 1});
    for (const auto& t : all_nat_trans(reps.sheaf, phi))
        for (const auto& s : all_subobjects(phi)) {
            if (!is_complemented(s)) continue;
            CHECK(is_complemented(preimage_subobject(t, s)));
        }
}

TEST_CASE("classify_sum_of_reps recovers the index map and components") {
    auto arr = walking_arrow();

    // codiagonal rep(0)+rep(0) -> rep(0): alpha constant, pi0-surjective, not mono
    auto two = sum_of_reps(arr, {0, 0});
    auto one = sum_of_reps(arr, {0});
    NatTrans codiag;
    codiag.src = two.sheaf;
    codiag.dst = one.sheaf;
    codiag.comp.resize(2);
    for (int x = 0; x < 2; ++x)
        for (auto [k, g] : two.decode[x]) {
            (void)k;
            codiag.comp[x].push_back(one.elem_of(0, g));
        }
    validate_nat(codiag);
    auto c1 = classify_sum_of_reps(codiag, two, one);
    CHECK(c1.alpha == std::vector<int>{0, 0});
    CHECK(c1.pi0_surjective);
    CHECK_FALSE(c1.complemented_mono);
    CHECK_FALSE(is_mono(codiag));

    // rep(1) -> rep(0) via precomposition with e: injective alpha, f = e not iso
    auto s1 = sum_of_reps(arr, {1});
    NatTrans via_e;
    via_e.src = s1.sheaf;
    via_e.dst = one.sheaf;
    via_e.comp.resize(2);
    int e = arr->morph_index("e");
    for (int x = 0; x < 2; ++x)
        for (auto [k, g] : s1.decode[x]) {
            (void)k;
            via_e.comp[x].push_back(one.elem_of(0, arr->comp[g][e]));
        }
    validate_nat(via_e);
    auto c2 = classify_sum_of_reps(via_e, s1, one);
    CHECK(c2.alpha == std::vector<int>{0});
    CHECK(c2.f == std::vector<int>{e});
    CHECK_FALSE(c2.complemented_mono);

    // identity on rep(0): both flags
    auto c3 = classify_sum_of_reps(identity_nat(one.sheaf), one, one);
    CHECK(c3.complemented_mono);
    CHECK(c3.pi0_surjective);

    CHECK_THROWS_AS(classify_sum_of_reps(identity_nat(phi_arr(arr)), one, one), NotSumOfReps);
}

TEST_CASE("all_nat_trans enumerates exactly the natural families") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    // by Yoneda, rep(A) -> Phi corresponds to Phi(A)
    CHECK(all_nat_trans(representable(arr, 0), phi).size() == 1);
    CHECK(all_nat_trans(representable(arr, 1), phi).size() == 2);
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < phi.n_at(a); ++x) validate_nat(yoneda_nat(phi, a, x));
    // functions that are not natural get filtered
    CHECK(all_nat_trans(phi, representable(arr, 0)).size() == 1);  // x,y |-> the unique zigzag-compatible family
}

TEST_CASE("pullback square checker") {
    auto arr = walking_arrow();
    auto phi = phi_arr(arr);
    auto s = sub_of(phi, {{0}, {0}});
    auto incl = sub_inclusion(s);
    CHECK(is_pullback_square(identity_nat(incl.src), incl, incl, identity_nat(phi)));
    // a non-pullback: W empty over a nonempty fibered product
    NatTrans from_zero{empty_presheaf(arr), incl.src, {{}, {}}};
    NatTrans from_zero2{empty_presheaf(arr), phi, {{}, {}}};
    CHECK_FALSE(is_pullback_square(from_zero, from_zero2, incl, identity_nat(phi)));
}

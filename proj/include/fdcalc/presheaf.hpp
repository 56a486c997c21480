// Set^A at desk scale: presheaves (covariant finite-set-valued functors),
// natural transformations, subobjects, the complemented-subobject calculus,
// pi0, and the Boolean factorization system.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdcalc/fincat.hpp"
#include "fdcalc/util.hpp"

namespace fdcalc {

struct Presheaf {
    CatPtr base;
    std::vector<std::vector<std::string>> elems;  // per object, canonical order
    std::vector<std::vector<int>> act;            // per morphism: elems[src] -> elems[dst]

    int n_at(int obj) const { return static_cast<int>(elems[obj].size()); }
    int apply(int m, int e) const { return act[m][e]; }
    int total() const;
    int find_elem(int obj, const std::string& name) const;  // -1 if absent
    bool same_as(const Presheaf& other) const;
};

struct NatTrans {
    Presheaf src, dst;
    std::vector<std::vector<int>> comp;  // per object: src elems -> dst elems

    int at(int obj, int e) const { return comp[obj][e]; }
};

struct Subobject {
    Presheaf parent;
    std::vector<std::vector<int>> subset;  // per object, sorted element indices

    bool contains(int obj, int e) const;
    int total() const;
};

// Functor laws: identities act as identity, actions compose.
void validate_presheaf(const Presheaf& p);
// Naturality squares commute for every morphism.
void validate_nat(const NatTrans& t);
// Subset closed under the parent actions.
void validate_subobject(const Subobject& s);

Presheaf empty_presheaf(const CatPtr& cat);
Presheaf terminal_presheaf(const CatPtr& cat);
Presheaf representable(const CatPtr& cat, int obj);  // elems named by morphism ids

// rep(A) -> rep(A') induced by f: A' -> A (precomposition).
NatTrans rep_nat(const CatPtr& cat, int f);
// The Yoneda transform of x in Phi(A): rep(A) -> Phi, g |-> Phi(g)(x).
NatTrans yoneda_nat(const Presheaf& phi, int obj, int elem);

struct SumResult {
    Presheaf sum;
    std::vector<NatTrans> injections;
};
// Tagged disjoint union; element of summand k named "k:<name>".
SumResult sum_n(const std::vector<Presheaf>& parts);
SumResult sum(const Presheaf& a, const Presheaf& b);

struct ProductResult {
    Presheaf prod;
    NatTrans proj1, proj2;
};
ProductResult product(const Presheaf& a, const Presheaf& b);

struct ElemRef {
    int obj = -1, idx = -1;
    auto operator<=>(const ElemRef&) const = default;
};

struct Pi0 {
    int n_components = 0;
    std::vector<std::vector<int>> comp_of;  // per object, per element: component id
    std::vector<ElemRef> reps;              // canonical (minimal) representative per component
};
// Finest partition closed under x ~ Phi(f)(x), by union-find over the zigzag relation.
Pi0 pi0(const Presheaf& p);

struct ComplWitness {
    int morphism = -1;  // f with x in/out of the subobject on the wrong side
    int obj = -1, elem = -1;
};
// Elementwise criterion: for every f: A -> A' and x, x in Psi(A) iff Phi(f)(x) in Psi(A').
bool is_complemented(const Subobject& s, ComplWitness* witness = nullptr);

// not-Psi: elements none of whose images (under any morphism) land in Psi. Always complemented.
Subobject negate(const Subobject& s);
// Literal per-object set difference; requires is_complemented, else NotComplemented with witness.
Subobject complement(const Subobject& s);

Subobject full_subobject(const Presheaf& p);
Subobject empty_subobject(const Presheaf& p);
Subobject union_sub(const Subobject& a, const Subobject& b);
Subobject intersect_sub(const Subobject& a, const Subobject& b);
Subobject image_subobject(const NatTrans& t);                          // subset of t.dst
Subobject preimage_subobject(const NatTrans& t, const Subobject& s);   // subset of t.src
// The presheaf carved out by a subobject (element names preserved), with its inclusion.
Presheaf sub_presheaf(const Subobject& s);
NatTrans sub_inclusion(const Subobject& s);

bool is_pi0_surjective(const NatTrans& t);

struct BooleanFactorization {
    Subobject middle;  // union of the components of dst touched by the image
    NatTrans e;        // pi0-surjective part, src -> middle
    NatTrans m;        // complemented mono, middle -> dst
};
BooleanFactorization boolean_factorize(const NatTrans& t);

NatTrans identity_nat(const Presheaf& p);
NatTrans compose_nat(const NatTrans& g, const NatTrans& f);  // g after f
bool nat_equal(const NatTrans& a, const NatTrans& b);
bool is_mono(const NatTrans& t);
bool is_epi(const NatTrans& t);
bool is_iso(const NatTrans& t);
NatTrans inverse_nat(const NatTrans& t);  // requires is_iso

// All natural transformations src -> dst, odometer order over per-object
// function tables; guarded enumeration.
std::vector<NatTrans> all_nat_trans(const Presheaf& src, const Presheaf& dst,
                                    std::uint64_t guard = kDefaultEnumGuard);

// Commuting square f then s equals g then m; pullback iff the induced map
// into the fibered product is a per-object bijection.
bool is_pullback_square(const NatTrans& f, const NatTrans& g, const NatTrans& s, const NatTrans& m);

// Tagged sum of representables with decode tables (summand, base morphism).
struct SumOfReps {
    Presheaf sheaf;
    std::vector<int> summands;                              // base object indices
    std::vector<std::vector<std::pair<int, int>>> decode;   // per object, per element
    int elem_of(int summand, int morph) const;              // index in sheaf.elems[dst(morph)]
};
SumOfReps sum_of_reps(const CatPtr& cat, const std::vector<int>& objs);
// Inclusion of the subsum at positions `keep` (sorted) into the full sum.
NatTrans subsum_inclusion(const SumOfReps& full, const std::vector<int>& keep, SumOfReps* sub_out = nullptr);

struct RepsClassification {
    std::vector<int> alpha;  // index map: src summand -> dst summand
    std::vector<int> f;      // base morphisms A_{alpha(j)} -> C_j
    bool complemented_mono = false;  // alpha injective and all f isos
    bool pi0_surjective = false;     // alpha onto
};
// Decomposes t between tagged sums of representables; NotSumOfReps if the
// endpoints do not match the given descriptors.
RepsClassification classify_sum_of_reps(const NatTrans& t, const SumOfReps& src, const SumOfReps& dst);

bool is_iso_morphism(const FinCategory& cat, int f);

}  // namespace fdcalc

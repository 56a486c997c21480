// Profunctors as set-valued matrices with two-sided actions, coend
// composition ("matrix multiplication"), the biclosed homs, transpose, and
// the pi0 criterion for tenseness of the internal hom.
#pragma once

#include "fdcalc/presheaf.hpp"

namespace fdcalc {

// P : src ⇸ dst, i.e. a functor src^op × dst -> Set. left[f] for f: A' -> A
// maps cells[A][b] -> cells[A'][b]; right[g] for g: B -> B' maps
// cells[a][B] -> cells[a][B'].
struct Profunctor {
    CatPtr src, dst;
    std::vector<std::vector<std::vector<std::string>>> cells;
    std::vector<std::vector<std::vector<int>>> left;
    std::vector<std::vector<std::vector<int>>> right;

    int n_cell(int a, int b) const { return static_cast<int>(cells[a][b].size()); }
    int find_cell_elem(int a, int b, const std::string& name) const;
    int total() const;
    bool same_as(const Profunctor& other) const;
};

struct ProfMorphism {
    Profunctor src, dst;
    std::vector<std::vector<std::vector<int>>> comp;  // [a][b]: src cell -> dst cell
};

// Functoriality in both variables and the bimodule law (actions commute).
void validate_profunctor(const Profunctor& p);
void validate_prof_morphism(const ProfMorphism& m);

Profunctor identity_prof(const CatPtr& cat);

// P(a,-) as a presheaf on dst; P(-,b) as a presheaf on opposite(src).
Presheaf row_presheaf(const Profunctor& p, int a);
Presheaf col_presheaf(const Profunctor& p, int b);

// A profunctor is a presheaf on opposite(src) × dst; these translate back and
// forth (used for enumeration, random generation, and subobject reasoning).
Presheaf prof_to_presheaf(const Profunctor& p);
Profunctor presheaf_to_prof(const Presheaf& ph, const CatPtr& src, const CatPtr& dst);

// Coend table for one target cell: generators are middle-object triples,
// classes are zigzag-connected components with minimal representatives.
struct CoendTable {
    struct Gen {
        int mid = -1, x = -1, y = -1;
        auto operator<=>(const Gen&) const = default;
    };
    std::vector<Gen> gens;
    std::vector<int> class_of;   // per generator
    std::vector<int> rep_gen;    // per class: generator index of the canonical representative

    int n_classes() const { return static_cast<int>(rep_gen.size()); }
    int find_gen(const Gen& g) const;
};

struct ComposeResult {
    Profunctor prof;  // Q ⊗ P
    std::vector<std::vector<CoendTable>> tables;  // [a][c]

    int class_of(int a, int c, const CoendTable::Gen& g) const;
};
// Q ⊗ P by the coend formula; the equivalence is generated by
// y·b ⊗ x = y ⊗ b·x and computed by union-find. Actions act on the outer
// variables and are checked to be constant on classes.
ComposeResult compose_prof(const Profunctor& q, const Profunctor& p);

struct TensorResult {
    Presheaf sheaf;  // P ⊗ Phi on dst
    std::vector<CoendTable> tables;  // per dst object; Gen = (a, x in Phi(a), p in P(a,b))

    int class_of(int b, const CoendTable::Gen& g) const;
};
TensorResult tensor_presheaf(const Profunctor& p, const Presheaf& phi);
// Functorial action of P ⊗ (−) on a natural transformation.
NatTrans tensor_nat(const Profunctor& p, const NatTrans& t);
// Componentwise tensor of a profunctor morphism with a presheaf.
NatTrans tensor_morph(const ProfMorphism& m, const Presheaf& phi);

// Internal homs. Cells are natural families, enumerated exactly (guarded).
// left_hom(Q: B⇸C, R: A⇸C)(A,B) = C-natural families Q(B,-) -> R(A,-).
// right_hom(R: A⇸C, P: A⇸B)(B,C) = A-natural families P(-,B) -> R(-,C).
struct HomResult {
    Profunctor prof;
    // family tables: [a][b][cell elem] = the NatTrans table between the row/col presheaves
    std::vector<std::vector<std::vector<std::vector<std::vector<int>>>>> families;

    int find_family(int a, int b, const std::vector<std::vector<int>>& table) const;
};
HomResult left_hom(const Profunctor& q, const Profunctor& r, std::uint64_t guard = kDefaultEnumGuard);
HomResult right_hom(const Profunctor& r, const Profunctor& p, std::uint64_t guard = kDefaultEnumGuard);

Profunctor transpose(const Profunctor& p);

struct HomTenseWitness {
    int morphism = -1;   // f in src
    int component = -1;  // missed pi0 component of the row at f.src
};
// P ⦸ (−) is tense iff for every f: A -> A' the induced map
// pi0 P(A',-) -> pi0 P(A,-) is onto.
bool hom_tense_check(const Profunctor& p, HomTenseWitness* witness = nullptr);

// Functors between finite categories; induce representable profunctors by
// restriction of hom.
struct CatFunctor {
    CatPtr src, dst;
    std::vector<int> obj_map;
    std::vector<int> morph_map;
};
void validate_functor(const CatFunctor& f);
Profunctor f_lower(const CatFunctor& f);  // F_*(a,b) = dst(F a, b)
Profunctor f_upper(const CatFunctor& f);  // F^*(b,a) = dst(b, F a)

ProfMorphism identity_profmorph(const Profunctor& p);
ProfMorphism compose_profmorph(const ProfMorphism& g, const ProfMorphism& f);
bool profmorph_equal(const ProfMorphism& a, const ProfMorphism& b);
bool is_iso_profmorph(const ProfMorphism& m);
std::vector<ProfMorphism> all_prof_morphisms(const Profunctor& p, const Profunctor& q,
                                             std::uint64_t guard = kDefaultEnumGuard);

}  // namespace fdcalc

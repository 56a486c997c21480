// Strict and soft symmetric sequences, evaluation of the analytic functor
// they determine (a coend over the truncated sequence category), the nabla
// operator on coefficients, the strict-to-soft embedding, the Q profunctor,
// and diverse transformations.
#pragma once

#include "fdcalc/prof.hpp"

namespace fdcalc {

struct SymSeq {
    GenKind mode = GenKind::None;  // Bang = strict, Down = soft
    CatPtr base, target;
    int max_arity = -1;
    CatPtr seq_cat;    // free_symmetric(base, max_arity) or free_soft(...)
    Profunctor prof;   // seq_cat ⇸ target

    bool same_as(const SymSeq& other) const;
};

// Full functoriality over the generated category is validated.
void validate_symseq(const SymSeq& s);
SymSeq make_symseq(GenKind mode, const CatPtr& base, const CatPtr& target, int max_arity, Profunctor prof);

// The transformation sum_j A(C_j,-) -> sum_i A(A_i,-) induced by a sequence
// morphism (sigma, <f_j>): <A_i> -> <C_j>; sends (j, g) to (sigma j, g∘f_j).
NatTrans nat_of_seq_morphism(const CatPtr& cat, const SeqMorphism& m, const SumOfReps& over_dst,
                             const SumOfReps& over_src);

// The transformation sum_i A(A_i,-) -> Phi picking the tuple's elements.
NatTrans nat_of_tuple(const Presheaf& phi, const SumOfReps& reps, const std::vector<int>& tuple);

struct AnalyticEvalResult {
    Presheaf sheaf;  // on the target category
    SymSeq seq;
    Presheaf phi;
    // per target object: generators (seq object, coefficient, tuple code)
    std::vector<CoendTable> tables;

    std::vector<int> tuple_radix(int seq_obj) const;
    int encode_tuple(int seq_obj, const std::vector<int>& tuple) const;
    std::vector<int> decode_tuple(int seq_obj, int code) const;
    int class_of(int b, int seq_obj, int p, const std::vector<int>& tuple) const;
};
// Coend over the truncated sequence category of S(A;B) × prod Phi(A_i).
// Canonical representatives are minimal; in soft mode, minimal among the
// diverse representatives (each class contains one).
AnalyticEvalResult analytic_eval(const SymSeq& s, const Presheaf& phi);

// The symmetric-sequence difference: appends powers of A and quotients by
// the symmetric-group action on the appended block. Output arity budget is
// max_arity - 1. decode[(out obj, b)][cell] = (number of appended copies,
// representative input cell element).
struct NablaResult {
    SymSeq seq;
    std::vector<std::vector<std::vector<std::pair<int, int>>>> decode;
    // input sequence object holding the cells for (out obj, appended count)
    std::vector<std::vector<int>> in_obj;  // [out obj][n-1]
};
NablaResult nabla(const SymSeq& s, int a_obj);

// Left Kan extension of a strict sequence along the inclusion of the strict
// sequence category into the soft one; evaluation agreement is a theorem
// tested elsewhere.
SymSeq soften(const SymSeq& s);

// Q(<A_i>; A) = sum_i A(A_i, A), over the given generated category.
Profunctor q_profunctor(const CatPtr& seq_cat);

// Ancestor sets: y is an ancestor of x when some action map sends y to x.
std::vector<std::vector<std::vector<ElemRef>>> ancestor_sets(const Presheaf& phi);

// A transformation from a sum of representables is diverse when the picked
// elements pairwise share no ancestor.
bool is_diverse(const NatTrans& phi_map, const SumOfReps& reps);

struct DiverseFactorization {
    SeqMorphism via;             // <C_j> -> <A_i> in the soft sequence category
    std::vector<int> mid_objs;   // the C_j
    SumOfReps mid;
    NatTrans psi;                // diverse part, from mid.sheaf
};
// phi = psi ∘ (sum over sigma of A(f_i,-)), psi diverse, found by greedily
// merging related indices through a common ancestor.
DiverseFactorization diverse_factorize(const NatTrans& phi_map, const SumOfReps& reps);

}  // namespace fdcalc

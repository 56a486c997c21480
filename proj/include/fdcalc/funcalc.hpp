// The compositional grammar of tense functors Set^A -> Set^B: evaluation on
// presheaves and transformations, tenseness certification, partial and
// higher differences, the Jacobian profunctor, and the PPI reformulation of
// difference elements.
#pragma once

#include "fdcalc/analytic.hpp"

namespace fdcalc {

enum class ExprKind { Identity, Constant, Linear, Monomial, AnalyticStrict, AnalyticSoft, Sum, Product, Compose };

struct FunctorExpr;
using ExprPtr = std::shared_ptr<const FunctorExpr>;

struct FunctorExpr {
    ExprKind kind;
    CatPtr dom, cod;
    Presheaf constant;  // Constant: a presheaf on cod
    Profunctor prof;    // Linear: dom ⇸ cod; Monomial: P with P ⦸ (-) : Set^{P.dst} -> Set^{P.src}
    SymSeq seq;         // AnalyticStrict / AnalyticSoft
    ExprPtr lhs, rhs;   // Sum/Product children; Compose: lhs after rhs
};

ExprPtr identity_expr(const CatPtr& cat);
ExprPtr constant_expr(const CatPtr& dom, Presheaf value);
ExprPtr linear_expr(Profunctor p);
ExprPtr monomial_expr(Profunctor p);  // denotes P ⦸ (-): Set^{dst} -> Set^{src}
ExprPtr analytic_expr(SymSeq s);
ExprPtr sum_expr(const ExprPtr& f, const ExprPtr& g);
ExprPtr product_expr(const ExprPtr& f, const ExprPtr& g);
ExprPtr compose_expr(const ExprPtr& outer, const ExprPtr& inner);
// The shift S_A = Id + const rep(A), an endo-expression.
ExprPtr shift_expr(const CatPtr& cat, int a_obj);

std::string expr_to_string(const ExprPtr& f);

Presheaf eval(const ExprPtr& f, const Presheaf& phi);
NatTrans eval_nat(const ExprPtr& f, const NatTrans& t);

// (P ⦸ Phi)(a) = natural families P(a,-) -> Phi.
Presheaf monomial_eval(const Profunctor& p, const Presheaf& phi, std::uint64_t guard = kDefaultEnumGuard);

enum class TenseRule { Identity, Constant, Cocontinuous, HomPi0, Analytic, ClosureSum, ClosureProduct, ClosureCompose };

struct TenseCertificate {
    // node path ("" root, then 'L'/'R' per child) -> rule justifying tenseness
    std::vector<std::pair<std::string, TenseRule>> nodes;
};
// Certification: Monomial nodes run the exact pi0 row condition; analytic
// nodes check their Q profunctor; closures recurse. Throws NotTense with the
// failing node and witness.
TenseCertificate tense_certify(const ExprPtr& f);

// Phi + sum of representables, flat tags: base is tag 0, listed objects
// follow in order.
struct BasedSum {
    Presheaf sheaf;
    NatTrans base_inj;
    std::vector<NatTrans> rep_inj;
};
BasedSum based_sum(const Presheaf& phi, const std::vector<int>& objs);
// Inclusion of the based sum over the positions `keep` (sorted) into the
// based sum over all of `objs`.
NatTrans based_sum_inclusion(const Presheaf& phi, const std::vector<int>& objs, const std::vector<int>& keep);

struct DeltaValue {
    Presheaf shifted;     // Phi + rep(A)
    Presheaf ambient;     // F(Phi + rep(A))
    NatTrans included;    // F of the base injection
    Subobject new_elems;  // complement of the image
};
// The partial difference: complement of F(Phi) inside F(Phi + rep(A)).
DeltaValue delta_A(const ExprPtr& f, int a_obj, const Presheaf& phi);

struct JacobianValue {
    Profunctor prof;  // cells (a,b) are the new elements of F(Phi + rep(a)) at b
    std::vector<DeltaValue> columns;

    // ambient element index behind cell element i of (a,b)
    int ambient_elem(int a, int b, int i) const { return columns[a].new_elems.subset[b][i]; }
    int cell_index(int a, int b, int ambient) const;
};
JacobianValue jacobian(const ExprPtr& f, const Presheaf& phi);
// Functoriality of the Jacobian in the presheaf argument.
ProfMorphism jacobian_nat(const ExprPtr& f, const NatTrans& t);

struct HigherDelta {
    Presheaf ambient;     // F(Phi + sum of rep(A_i)); F(Phi) itself when the sequence is empty
    Subobject new_elems;  // iterated route and new-element route, asserted equal
};
HigherDelta higher_delta(const ExprPtr& f, const std::vector<int>& objs, const Presheaf& phi);
// The permuted higher difference agrees after reindexing the ambient sum.
bool higher_delta_permutation_invariant(const ExprPtr& f, const std::vector<int>& objs,
                                        const std::vector<int>& perm, const Presheaf& phi);

// The PPI transformation of a new element: F(Phi) + rep(B) -> F(Phi + rep(A)),
// the base injection on the first summand and the orbit of the element on the
// second; its defining square is verified to be a pullback.
NatTrans ppi_of_element(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, int ambient_elem);
// Inverse direction: evaluate at the unit of rep(B); round-trips with the above.
int ppi_to_element(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, const NatTrans& u);
bool is_ppi(const ExprPtr& f, const Presheaf& phi, int a_obj, int b_obj, const NatTrans& u);

// D[F](Phi,Psi) = Jacobian ⊗ Psi; T[F](Phi,Psi) = (F(Phi), D[F](Phi,Psi)).
Presheaf difference_operator(const ExprPtr& f, const Presheaf& phi, const Presheaf& psi);
std::pair<Presheaf, Presheaf> tangent(const ExprPtr& f, const Presheaf& phi, const Presheaf& psi);

// Cor(F)(A,B) = F(rep(A))(B); the left action evaluates F on representable
// transformations.
Profunctor core(const ExprPtr& f);
// Counit Cor(F) ⊗ Phi -> F(Phi): a class [x in Phi(A), y in F(rep A)(B)] goes
// to F(Yoneda transform of x)(B)(y).
NatTrans core_counit(const ExprPtr& f, const Presheaf& phi);

// Tense-transformation criterion: for a complemented pair carried by `incl`,
// the square of t's components over F(incl), G(incl) must be a pullback.
bool tense_square(const NatTrans& t_at_sub, const NatTrans& t_at_whole, const NatTrans& f_incl,
                  const NatTrans& g_incl);

Subobject sub_minus(const Subobject& a, const Subobject& b);
Subobject map_subobject(const NatTrans& t, const Subobject& s);  // image of a subobject of t.src

}  // namespace fdcalc

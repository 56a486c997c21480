// The Newton-series comonad: iterated differences at the empty presheaf
// packaged as a soft symmetric sequence, its summation back to a functor, the
// adjunction transposes, and the unit/counit isomorphism checks.
#pragma once

#include "fdcalc/funcalc.hpp"

namespace fdcalc {

struct NewtonData {
    ExprPtr source;
    int max_arity = -1;
    Presheaf base_point;
    SymSeq seq;  // soft sequence: cells are the new elements of F at sums of representables
    // per sequence object: the ambient F(base + sum of representables) and the
    // witnesses (new-element subobject); cell (so,b) element i sits at ambient
    // index new_elems[so].subset[b][i]
    std::vector<Presheaf> q_sheaves;   // base + sum of representables, per sequence object
    std::vector<Presheaf> ambients;
    std::vector<Subobject> new_elems;

    int cell_index(int so, int b, int ambient_elem) const;
};

// Iterated symmetric differences of a certified functor at the empty presheaf.
NewtonData delta_star(const ExprPtr& f, int max_arity);
// Exposed for experimentation at a general base point; the adjunction claims
// are made only at the empty presheaf.
NewtonData delta_star_at(const ExprPtr& f, int max_arity, const Presheaf& base_point);

// The Newton series of F: the soft-analytic functor of delta_star(F).
ExprPtr newton_functor(const ExprPtr& f, int max_arity);

// A transformation family S-tilde -> F given at the canonical test presheaves
// Q(A-seq) (one per sequence object of S).
struct TenseFamily {
    SymSeq seq;
    ExprPtr target;
    std::vector<NatTrans> at_q;
};

// The pullback criterion over every complemented subsum inclusion of every
// Q(A-seq); returns the first failing (seq object, subset) on request.
bool family_is_tense(const TenseFamily& t, std::string* witness = nullptr);

// u(p) = t[p, identity]; newness of the result is asserted (it fails exactly
// when t is not tense).
ProfMorphism transpose_down(const TenseFamily& t, const NewtonData& delta_f);

// t[p, phi] = F(phi)(u(p)); well-definedness is checked on every generator.
NatTrans transpose_up_at(const ProfMorphism& u, const SymSeq& s, const NewtonData& delta_f, const Presheaf& phi);
TenseFamily transpose_up(const ProfMorphism& u, const SymSeq& s, const NewtonData& delta_f);

// Counit of the comonad at F evaluated at a presheaf.
NatTrans counit_at(const ExprPtr& f, const NewtonData& delta_f, const Presheaf& phi);

struct UnitIsoReport {
    bool iso = false;
    bool equivariant = false;
    std::string detail;  // offending cell on failure

    bool ok() const { return iso && equivariant; }
};
// The unit p |-> [p, identity] into the differences of the summed sequence:
// cellwise bijective and equivariant for both actions.
UnitIsoReport check_unit_iso(const SymSeq& s);

struct CounitReport {
    struct PerPresheaf {
        std::string status;  // "iso", "mono", "neither"
    };
    std::vector<PerPresheaf> tests;
    bool idempotent = false;
    bool all_iso = false;
};
CounitReport check_counit_iso(const ExprPtr& f, int max_arity, const std::vector<Presheaf>& tests);

}  // namespace fdcalc

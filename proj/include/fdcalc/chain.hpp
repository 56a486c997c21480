// The lax chain rule: construction of the comparison gamma from the composite
// of Jacobians to the Jacobian of the composite, verification of its laws,
// and the lax tangent composition.
#pragma once

#include <functional>

#include "fdcalc/newton.hpp"

namespace fdcalc {

struct GammaValue {
    ExprPtr f, g, gf;
    Presheaf phi;
    JacobianValue jac_f;   // of F at Phi
    JacobianValue jac_g;   // of G at F(Phi)
    JacobianValue jac_gf;  // of GF at Phi
    ComposeResult domain;  // Jacobian(G) ⊗ Jacobian(F)
    std::vector<std::vector<std::vector<int>>> cls_map;  // per (a,c): domain class -> cell of jac_gf

    ProfMorphism as_profmorph() const;
    // image of the class of (t in cell (a,b), u in cell (b,c))
    int image_of_pair(int a, int c, int b, int t_cell, int u_cell) const;
    bool is_bijective() const;
};
// gamma(u ⊗ t) applies G to the PPI transformation of t and evaluates on u's
// witness; the image is asserted new and the map constant on coend classes.
GammaValue gamma(const ExprPtr& f, const ExprPtr& g, const Presheaf& phi);

// A tense transformation given by its components.
struct TenseTransformation {
    ExprPtr src, dst;
    std::function<NatTrans(const Presheaf&)> at;
};
TenseTransformation tense_identity(const ExprPtr& f);
TenseTransformation tense_injection(const ExprPtr& f, const ExprPtr& g, int which);  // into Sum(f,g)
TenseTransformation tense_codiagonal(const ExprPtr& f);                              // Sum(f,f) -> f
TenseTransformation tense_linear(const ProfMorphism& m);  // Linear(src) -> Linear(dst)
// G applied on the left / the transformation applied under F on the right.
TenseTransformation whisker_left(const ExprPtr& g, const TenseTransformation& t);
TenseTransformation whisker_right(const TenseTransformation& t, const ExprPtr& f);

// Restriction of the transformation's components to the difference cells.
ProfMorphism delta_of_transformation(const TenseTransformation& t, const Presheaf& phi);

struct GammaLawsReport {
    bool unitors_bijective = false;
    bool associative = false;
    bool natural_in_phi = false;
    bool natural_in_f = false;
    bool natural_in_g = false;
    std::string detail;

    bool ok() const { return unitors_bijective && associative && natural_in_phi && natural_in_f && natural_in_g; }
};
// Laws for a composable certified triple; the naturality checks take the
// transformations to test against (pass tense_identity(...) for a smoke run).
GammaLawsReport check_gamma_laws(const ExprPtr& f, const ExprPtr& g, const ExprPtr& h, const Presheaf& phi,
                                 const NatTrans& phi_map, const TenseTransformation& alpha,
                                 const TenseTransformation& beta);

// (identity, gamma ⊗ Psi): the lax structure map of the tangent composition.
std::pair<NatTrans, NatTrans> tangent_compose(const ExprPtr& f, const ExprPtr& g, const Presheaf& phi,
                                              const Presheaf& psi);

}  // namespace fdcalc

// Seeded random instances for the verification suites: categories from known
// valid families plus random posets, presheaves as quotients of sums of
// representables, profunctors and symmetric sequences from the same
// construction over product categories, grammar-random functor expressions.
#pragma once

#include "fdcalc/funcalc.hpp"

namespace fdcalc {

struct SizeBounds {
    int max_objects = 3;
    int max_elems = 3;
    int max_arity = 3;
    int cases = 0;  // 0 = per-suite default
};

struct GenStats {
    int tries = 0;
    int accepted = 0;
};

CatPtr random_category(Rng& rng, int max_objects);
CatPtr random_discrete(Rng& rng, int max_objects);

// Quotient of a random sum of representables by a random congruence.
Presheaf random_presheaf(Rng& rng, const CatPtr& cat, int max_summands, GenStats* stats = nullptr);

// Uniform pick from the enumerated natural transformations; nullopt if there
// are none.
std::optional<NatTrans> random_nat(Rng& rng, const Presheaf& src, const Presheaf& dst);

Profunctor random_profunctor(Rng& rng, const CatPtr& src, const CatPtr& dst, int max_summands);

SymSeq random_symseq(Rng& rng, GenKind mode, const CatPtr& base, const CatPtr& target, int max_arity,
                     int max_summands);

// Grammar-random expression Set^dom -> Set^cod; Monomial leaves retry until
// the pi0 condition holds (falling back to a representable exponent).
ExprPtr random_expr(Rng& rng, const CatPtr& dom, const CatPtr& cod, int depth, int max_summands,
                    GenStats* stats = nullptr);

// Any functor dom -> cod (constant functors guarantee existence).
CatFunctor random_functor(Rng& rng, const CatPtr& dom, const CatPtr& cod);

}  // namespace fdcalc

// Finite categories given by total composition tables, their opposite and
// product constructions, and the generated sequence categories (permutation
// morphisms in strict mode, surjection-indexed morphisms in soft mode)
// truncated at a maximum sequence length.
#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fdcalc/util.hpp"

namespace fdcalc {

struct Morph {
    std::string id;
    int src = -1;
    int dst = -1;
};

// An object of a generated category: a sequence of base-category objects.
struct SeqObject {
    std::vector<int> entries;
};

// A morphism <A_1..A_n> -> <C_1..C_m> of a generated category: sigma maps
// m -> n (a bijection in strict mode, a surjection in soft mode) and
// components[j] : A_{sigma(j)} -> C_j in the base category.
struct SeqMorphism {
    std::vector<int> sigma;
    std::vector<int> components;

    bool operator==(const SeqMorphism&) const = default;
};

enum class GenKind { None, Bang, Down };

struct FinCategory;
using CatPtr = std::shared_ptr<const FinCategory>;

struct FinCategory {
    std::vector<std::string> objects;   // declaration order is the canonical order
    std::vector<Morph> morphisms;
    std::vector<int> identity;          // object index -> morphism index
    std::vector<std::vector<int>> comp; // comp[g][f] = g∘f when dst(f)=src(g), else -1

    // Set when this category was produced by free_symmetric / free_soft.
    GenKind gen_kind = GenKind::None;
    CatPtr gen_base;
    int max_arity = -1;
    std::vector<SeqObject> seq_objects;     // parallel to `objects`
    std::vector<SeqMorphism> seq_morphisms; // parallel to `morphisms`

    int n_objects() const { return static_cast<int>(objects.size()); }
    int n_morphisms() const { return static_cast<int>(morphisms.size()); }

    int compose(int g, int f) const;               // checked: throws on non-composable
    std::vector<int> hom(int a, int b) const;      // morphisms a -> b, declaration order
    int obj_index(const std::string& name) const;  // -1 if absent
    int morph_index(const std::string& id) const;  // -1 if absent

    bool is_discrete() const;
    bool is_groupoid() const;

    // Structural equality on the core data (objects, morphisms, identities,
    // composition); generated-category metadata is derived, so not compared.
    bool same_as(const FinCategory& other) const;
};

bool same_cat(const CatPtr& a, const CatPtr& b);

// Unvalidated description, as read from JSON or literals.
struct RawCategory {
    std::vector<std::string> objects;
    struct RawMorph {
        std::string id, src, dst;
    };
    std::vector<RawMorph> morphisms;
    std::vector<std::pair<std::string, std::string>> identities;        // object -> morphism id
    std::vector<std::array<std::string, 3>> compose;                    // [g, f, g∘f]
};

// Checks ids, endpoints, identity laws and associativity on all composable
// triples; throws ValidationError naming the first violated law with witness.
CatPtr validate_category(const RawCategory& raw);

// Re-checks the category laws on an already-built table (used after the
// generated-category constructions).
void check_category_laws(const FinCategory& cat);

CatPtr opposite(const CatPtr& cat);
CatPtr product_category(const CatPtr& c, const CatPtr& d);

// Free symmetric strict monoidal category on A, truncated: objects are
// sequences of length <= max_arity, morphisms are permutations with
// componentwise base morphisms. No morphisms between different lengths.
CatPtr free_symmetric(const CatPtr& base, int max_arity);

// Same objects, morphisms indexed by surjections: hom(<A..> of length n,
// <C..> of length m) is nonempty only when a surjection m ->> n exists.
CatPtr free_soft(const CatPtr& base, int max_arity);

// Index of a sequence object in a generated category; -1 if absent.
int seq_object_index(const FinCategory& gen, const std::vector<int>& entries);
// Index of a sequence morphism with the given endpoints and data; -1 if absent.
int seq_morphism_index(const FinCategory& gen, int src_obj, int dst_obj, const SeqMorphism& data);

// Composition of sequence-morphism data without a table:
// (tau,<g>)∘(sigma,<f>) = (sigma∘tau, <g_k f_{tau k}>).
SeqMorphism compose_seq_morphism(const FinCategory& base, const SeqMorphism& tau_g, const SeqMorphism& sigma_f);

// Standard fixtures.
CatPtr terminal_category();                       // one object, one morphism
CatPtr walking_arrow();                           // objects 0,1; one arrow e: 0 -> 1
CatPtr discrete_category(const std::vector<std::string>& names);

}  // namespace fdcalc

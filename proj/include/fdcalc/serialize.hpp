// JSON round-tripping for every value kind, with canonical ordering on
// output: collections whose order is not semantic (composition tables,
// identity maps, action maps, subsets) always serialize sorted.
#pragma once

#include <json.hpp>

#include "fdcalc/funcalc.hpp"

namespace fdcalc {

using json = nlohmann::json;

json cat_to_json(const CatPtr& cat);
CatPtr cat_from_json(const json& j, const std::string& path = "");

json presheaf_to_json(const Presheaf& p);
Presheaf presheaf_from_json(const json& j, const std::string& path = "");

json subobject_to_json(const Subobject& s);
Subobject subobject_from_json(const json& j, const std::string& path = "");

json prof_to_json(const Profunctor& p);
Profunctor prof_from_json(const json& j, const std::string& path = "");

json symseq_to_json(const SymSeq& s);
SymSeq symseq_from_json(const json& j, const std::string& path = "");

json expr_to_json(const ExprPtr& f);
ExprPtr expr_from_json(const json& j, const std::string& path = "");

}  // namespace fdcalc

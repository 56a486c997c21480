// The verification-suite runner: each registered suite maps one cluster of
// statements to seeded randomized checks with deterministic reports.
#pragma once

#include <json.hpp>

#include "fdcalc/generators.hpp"

namespace fdcalc {

struct LawResult {
    std::string law;
    int cases = 0;
    bool pass = true;
    nlohmann::json counterexample;  // serialized offending instance, null when passing
};

struct SuiteReport {
    std::string suite;
    std::string statement;  // what the suite verifies
    std::uint64_t seed = 0;
    nlohmann::json params;
    std::vector<LawResult> laws;
    nlohmann::json acceptance;  // generator acceptance rates
    bool all_pass = true;
};

std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, std::uint64_t seed, const SizeBounds& bounds);

nlohmann::json report_to_json(const SuiteReport& report);
std::string render_text(const SuiteReport& report);

// All presheaves over `cat` with at most `max_total` elements, canonical order.
std::vector<Presheaf> enumerate_presheaves(const CatPtr& cat, int max_total);

}  // namespace fdcalc

#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "jcn/oracle.hpp"
#include "jcn/planner.hpp"

namespace jcn {

struct Counterexample {
    std::string phase;  // "engine-vs-oracle" or "normalize-vs-oracle"
    std::string formula;
    nlohmann::json interpretation;
    Vec engine_output;
    Vec oracle_output;
    std::uint64_t formula_seed = 0;
    std::uint64_t interp_seed = 0;
};

struct EquivalenceReport {
    int formulas = 0;
    long trials = 0;
    long mismatches = 0;            // engine_mismatches + normalize_mismatches
    long engine_mismatches = 0;     // compiled plan vs oracle on the original formula
    long normalize_mismatches = 0;  // oracle pre vs post normalization
    long budget_errors = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::optional<Counterexample> first_counterexample;

    bool clean() const { return mismatches == 0 && budget_errors == 0; }
};

nlohmann::json report_to_json(const EquivalenceReport& r);

/// Deliberate plan corruptions for checking that the harness can fail.
enum class PlanMutation { None, DropHead, RedirectParent, DropAggConjunct };

/// Applies the mutation to the first applicable site; returns false when the
/// plan offers none (e.g. a head-free plan).
bool mutate_plan(JoinChainPlan& p, PlanMutation mutation);

struct FuzzConfig {
    GeneratorParams gen;
    int formulas = 100;
    int trials_per_formula = 10;
    double density = 0.5;
    bool dedup = false;
    bool check_theorem1 = true;  // also compare oracle pre/post normalization
    PlanMutation mutation = PlanMutation::None;
    double budget = 1e7;
};

/// For each generated formula: normalize, compile (optionally dedup,
/// optionally corrupt), then over seeded boolean interpretations compare
/// the engine's boolean output against the brute-force oracle on the
/// original prenex formula, and the oracle on the original against the
/// oracle on the normalized form. Budget overruns are counted separately,
/// never as mismatches.
EquivalenceReport fuzz_campaign(const FuzzConfig& cfg);

/// Same comparison loop for one fixed formula.
EquivalenceReport verify_formula(const PrenexFormula& f, int trials, int domain_size,
                                 std::uint64_t seed, bool dedup = false,
                                 double budget = 1e7);

}  // namespace jcn

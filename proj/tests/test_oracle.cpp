#include "doctest.h"

#include "jcn/fuzz.hpp"
#include "jcn/oracle.hpp"
#include "jcn/parser.hpp"

using namespace jcn;

namespace {

const char* kTreeExample =
    "P(x) := exists y1 y2 y3 y4 . (P1(y1) & P2(y2) & P3(y3) & P4(y4) & P0(x) & "
    "W01(x,y1) & W02(x,y2) & W13(y1,y3) & W14(y1,y4))";

Interpretation all_ones(const PredicateSignature& sig, int s) {
    Interpretation itp;
    itp.domain_size = s;
    for (const auto& n : sig.unary_names) itp.unary[n] = Vec(s, 1.0);
    for (const auto& n : sig.binary_names) itp.binary[n] = Mat(s, Vec(s, 1.0));
    for (const auto& n : sig.prop_names) itp.prop[n] = 1.0;
    return itp;
}

}  // namespace

TEST_CASE("brute_force_eval: monotone top element") {
    auto f = parse_formula(kTreeExample).formula;
    auto itp = all_ones(f.signature, 3);
    CHECK(brute_force_eval(f, itp).values == Vec(3, 1.0));
}

TEST_CASE("brute_force_eval: false constant kills every disjunct") {
    auto f = parse_formula(kTreeExample).formula;
    for (auto& d : f.disjuncts) d.constant = PropConst::literal(false);
    auto itp = all_ones(f.signature, 3);
    CHECK(brute_force_eval(f, itp).values == Vec(3, 0.0));
}

TEST_CASE("brute_force_eval: named constants read the interpretation") {
    auto f = parse_formula("P(x) := . (A(x) & $Q1)").formula;
    Interpretation itp;
    itp.domain_size = 2;
    itp.unary["A"] = {1.0, 0.0};
    itp.prop["Q1"] = 0.0;
    CHECK(brute_force_eval(f, itp).values == Vec{0.0, 0.0});
    itp.prop["Q1"] = 1.0;
    CHECK(brute_force_eval(f, itp).values == Vec{1.0, 0.0});
    itp.prop.erase("Q1");  // unlisted names default to true
    CHECK(brute_force_eval(f, itp).values == Vec{1.0, 0.0});
}

TEST_CASE("brute_force_eval: budget and boolean-domain errors") {
    auto f = parse_formula(kTreeExample).formula;
    auto itp = all_ones(f.signature, 4);
    OracleOptions tight;
    tight.budget = 100;  // 4^4 = 256 > 100
    try {
        brute_force_eval(f, itp, tight);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.assignments() == doctest::Approx(256.0));
    }
    auto frac = itp;
    frac.unary["P1"][0] = 0.25;
    CHECK_THROWS_AS(brute_force_eval(f, frac), EvalError);
}

TEST_CASE("brute_force_eval: free variable only, no quantifiers") {
    auto f = parse_formula("P(x) := . (A(x)) | (B(x))").formula;
    Interpretation itp;
    itp.domain_size = 3;
    itp.unary["A"] = {1.0, 0.0, 0.0};
    itp.unary["B"] = {0.0, 0.0, 1.0};
    CHECK(brute_force_eval(f, itp).values == Vec{1.0, 0.0, 1.0});
}

TEST_CASE("random_foet: deterministic in the seed") {
    GeneratorParams params;
    params.seed = 0;
    CHECK(render_formula(random_foet(params)) == render_formula(random_foet(params)));
    GeneratorParams other = params;
    other.seed = 1;
    CHECK(render_formula(random_foet(params)) != render_formula(random_foet(other)));
}

TEST_CASE("random_foet: 500 samples normalize within bounds") {
    int grew = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        GeneratorParams params;
        params.seed = mix_seed(3100, seed);
        PrenexFormula f = random_foet(params);
        CHECK(validate(f).empty());
        FoetFormula g;
        REQUIRE_NOTHROW(g = normalize_to_foet(f));
        REQUIRE(g.measures.height <= params.max_height);
        REQUIRE(g.measures.width <= params.max_width);
        REQUIRE(f.num_quantified <= params.max_vars);
        REQUIRE(static_cast<int>(g.graphs.size()) <= params.max_trees);
        if (g.measures.height > 0) ++grew;
    }
    CHECK(grew > 250);  // the corpus is mostly non-degenerate
}

TEST_CASE("random_foet: max_height 0 forces root-only formulas") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorParams params;
        params.max_height = 0;
        params.seed = seed;
        auto g = normalize_to_foet(random_foet(params));
        REQUIRE(g.measures.height == 0);
        REQUIRE(g.measures.width == 0);
        for (const auto& graph : g.graphs) REQUIRE(graph.nodes == std::set<int>{0});
    }
}

TEST_CASE("random_foet: scrambled emission exercises the merge steps") {
    // Across a modest corpus some formula must contain duplicate atoms and
    // some must shed a tautology edge during normalization.
    bool saw_duplicate = false, saw_taut_edge = false;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorParams params;
        params.seed = mix_seed(3200, seed);
        PrenexFormula f = random_foet(params);
        for (const auto& d : f.disjuncts) {
            for (std::size_t i = 1; i < d.unary_atoms.size(); ++i)
                for (std::size_t k = 0; k < i; ++k)
                    if (d.unary_atoms[i] == d.unary_atoms[k]) saw_duplicate = true;
        }
        auto g = normalize_to_foet(f);
        for (const auto& graph : g.graphs)
            for (const auto& [e, preds] : graph.edge_predicates)
                if (preds.count(std::string(kTautBinary))) saw_taut_edge = true;
    }
    CHECK(saw_duplicate);
    CHECK(saw_taut_edge);

    GeneratorParams merged;
    merged.emit_merged = true;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        merged.seed = mix_seed(3300, seed);
        PrenexFormula f = random_foet(merged);
        for (const auto& d : f.disjuncts)
            for (std::size_t i = 1; i < d.unary_atoms.size(); ++i)
                for (std::size_t k = 0; k < i; ++k)
                    REQUIRE(!(d.unary_atoms[i] == d.unary_atoms[k]));
    }
}

TEST_CASE("random_interpretation: density endpoints and determinism") {
    auto f = parse_formula(kTreeExample).formula;
    auto ones = random_interpretation(f.signature, 3, InterpMode::Boolean, 1.0, 7);
    for (const auto& [n, v] : ones.unary) CHECK(v == Vec(3, 1.0));
    for (const auto& [n, m] : ones.binary) CHECK(m == Mat(3, Vec(3, 1.0)));
    auto zeros = random_interpretation(f.signature, 3, InterpMode::Boolean, 0.0, 7);
    for (const auto& [n, v] : zeros.unary) CHECK(v == Vec(3, 0.0));
    CHECK(zeros.resolve_unary(std::string(kTautUnary)) == Vec(3, 1.0));

    auto a = random_interpretation(f.signature, 4, InterpMode::Real, 0.5, 123);
    auto b = random_interpretation(f.signature, 4, InterpMode::Real, 0.5, 123);
    CHECK(a.to_json() == b.to_json());
    a.check_wellformed();
}

TEST_CASE("random_interpretation: golden snapshot is byte-stable") {
    PredicateSignature sig;
    sig.unary_names = {"A"};
    sig.binary_names = {"W"};
    sig.prop_names = {"Q"};
    auto itp = random_interpretation(sig, 4, InterpMode::Boolean, 0.5, 2024);
    // Frozen from the first run; mt19937_64 and the draw order are
    // platform-independent, so this string must never change.
    const std::string expected =
        R"({"binary":{"W":[[1.0,0.0,1.0,0.0],[1.0,0.0,1.0,1.0],[0.0,1.0,1.0,1.0],[0.0,1.0,1.0,1.0]]},"domain":4,"prop":{"Q":0.0},"unary":{"A":[0.0,0.0,1.0,1.0]}})";
    CHECK(itp.to_json().dump() == expected);
}

TEST_CASE("mix_seed separates streams") {
    CHECK(mix_seed(0, 1) != mix_seed(0, 2));
    CHECK(mix_seed(0, 1, 5) != mix_seed(0, 1, 6));
    CHECK(mix_seed(7, 1, 5) == mix_seed(7, 1, 5));
}

TEST_CASE("fuzz_campaign: clean run and zero-trial degenerate case") {
    FuzzConfig cfg;
    cfg.formulas = 50;
    cfg.trials_per_formula = 5;
    cfg.gen.seed = 99;
    auto report = fuzz_campaign(cfg);
    CHECK(report.formulas == 50);
    CHECK(report.trials == 250);
    CHECK(report.mismatches == 0);
    CHECK(report.budget_errors == 0);
    CHECK(!report.first_counterexample.has_value());
    CHECK(report.clean());

    FuzzConfig empty;
    empty.formulas = 1;
    empty.trials_per_formula = 0;
    auto r0 = fuzz_campaign(empty);
    CHECK(r0.trials == 0);
    CHECK(r0.mismatches == 0);
    CHECK(!r0.first_counterexample.has_value());
}

TEST_CASE("fuzz_campaign: corrupted plans are caught") {
    for (auto mutation : {PlanMutation::DropHead, PlanMutation::RedirectParent,
                          PlanMutation::DropAggConjunct}) {
        FuzzConfig cfg;
        cfg.formulas = 50;
        cfg.trials_per_formula = 10;
        cfg.gen.seed = 4711;
        cfg.mutation = mutation;
        cfg.check_theorem1 = false;
        auto report = fuzz_campaign(cfg);
        CHECK_MESSAGE(report.engine_mismatches > 0,
                      "mutation " << static_cast<int>(mutation) << " went unnoticed");
        REQUIRE(report.first_counterexample.has_value());
        CHECK(report.first_counterexample->phase == "engine-vs-oracle");
        CHECK(!report.first_counterexample->formula.empty());
        CHECK(!report.clean());
    }
}

TEST_CASE("fuzz_campaign: budget errors are counted separately") {
    FuzzConfig cfg;
    cfg.formulas = 3;
    cfg.trials_per_formula = 2;
    cfg.budget = 1;  // S^T = 3^6 > 1 for any generated formula with T=6
    auto report = fuzz_campaign(cfg);
    CHECK(report.budget_errors == 6);
    CHECK(report.mismatches == 0);
    CHECK(!report.clean());
}

TEST_CASE("verify_formula: worked example verifies clean") {
    auto f = parse_formula(kTreeExample).formula;
    auto report = verify_formula(f, 200, 3, 12345);
    CHECK(report.trials == 200);
    CHECK(report.mismatches == 0);
    CHECK(report.clean());
}

TEST_CASE("report JSON shape") {
    FuzzConfig cfg;
    cfg.formulas = 2;
    cfg.trials_per_formula = 2;
    auto j = report_to_json(fuzz_campaign(cfg));
    CHECK(j["trials"] == 4);
    CHECK(j["mismatches"] == 0);
    CHECK(j["first_counterexample"].is_null());
    CHECK(j.contains("wall_time_s"));
}

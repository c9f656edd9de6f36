#include "jcn/fuzz.hpp"

#include <chrono>

#include "jcn/engine.hpp"

namespace jcn {

nlohmann::json report_to_json(const EquivalenceReport& r) {
    nlohmann::json j;
    j["formulas"] = r.formulas;
    j["trials"] = r.trials;
    j["mismatches"] = r.mismatches;
    j["engine_mismatches"] = r.engine_mismatches;
    j["normalize_mismatches"] = r.normalize_mismatches;
    j["budget_errors"] = r.budget_errors;
    j["seed"] = r.seed;
    j["wall_time_s"] = r.wall_time_s;
    if (r.first_counterexample) {
        const auto& c = *r.first_counterexample;
        j["first_counterexample"] = {
            {"phase", c.phase},           {"formula", c.formula},
            {"interpretation", c.interpretation}, {"engine_output", c.engine_output},
            {"oracle_output", c.oracle_output},   {"formula_seed", c.formula_seed},
            {"interp_seed", c.interp_seed}};
    } else {
        j["first_counterexample"] = nullptr;
    }
    return j;
}

bool mutate_plan(JoinChainPlan& p, PlanMutation mutation) {
    switch (mutation) {
        case PlanMutation::None:
            return true;
        case PlanMutation::DropHead: {
            for (auto& layer : p.layers) {
                if (layer.heads.empty()) continue;
                std::string id = layer.heads.front().id;
                layer.heads.erase(layer.heads.begin());
                for (auto& [target, e] : layer.aggregation)
                    std::erase(e.head_ids, id);
                p.stats = plan_stats(p);
                return true;
            }
            return false;
        }
        case PlanMutation::RedirectParent: {
            // Move a head's output into a different surviving slot of the
            // same tree.
            for (auto& layer : p.layers) {
                for (auto& [target, e] : layer.aggregation) {
                    if (e.head_ids.empty()) continue;
                    int tree = -1;
                    for (const auto& h : layer.heads)
                        if (h.id == e.head_ids.front())
                            tree = h.trees.front();
                    for (auto& [other, oe] : layer.aggregation) {
                        if (other == target) continue;
                        if (p.slots.at(other).tree != tree) continue;
                        std::string id = e.head_ids.front();
                        e.head_ids.erase(e.head_ids.begin());
                        oe.head_ids.push_back(id);
                        for (auto& h : layer.heads)
                            if (h.id == id) h.parent = p.slots.at(other).node;
                        return true;
                    }
                }
            }
            return false;
        }
        case PlanMutation::DropAggConjunct: {
            for (auto& layer : p.layers) {
                for (auto& [target, e] : layer.aggregation) {
                    if (e.head_ids.empty()) continue;
                    e.head_ids.erase(e.head_ids.begin());
                    return true;
                }
            }
            return false;
        }
    }
    return false;
}

namespace {

bool vec_equal(const Vec& a, const Vec& b) { return a == b; }

struct Campaign {
    EquivalenceReport report;
    OracleOptions oracle_opts;

    void run_formula(const PrenexFormula& f, const JoinChainPlan& plan,
                     const FoetFormula& g, bool check_theorem1, int trials, int domain,
                     double density, std::uint64_t trial_seed_base,
                     std::uint64_t formula_seed) {
        for (int t = 0; t < trials; ++t) {
            std::uint64_t iseed = mix_seed(trial_seed_base, 0x471A1, t);
            Interpretation itp = random_interpretation(f.signature, domain,
                                                       InterpMode::Boolean, density, iseed);
            ++report.trials;
            Vec oracle_out;
            try {
                oracle_out = brute_force_eval(f, itp, oracle_opts).values;
            } catch (const BudgetError&) {
                ++report.budget_errors;
                continue;
            }
            Vec engine_out = execute(plan, itp, Algebra::boolean()).values;
            if (!vec_equal(engine_out, oracle_out))
                record(f, itp, engine_out, oracle_out, "engine-vs-oracle", formula_seed,
                       iseed);
            if (check_theorem1) {
                Vec normalized_out = brute_force_eval(g, itp, oracle_opts).values;
                if (!vec_equal(normalized_out, oracle_out))
                    record(f, itp, normalized_out, oracle_out, "normalize-vs-oracle",
                           formula_seed, iseed);
            }
        }
    }

    void record(const PrenexFormula& f, const Interpretation& itp, const Vec& engine_out,
                const Vec& oracle_out, const std::string& phase,
                std::uint64_t formula_seed, std::uint64_t interp_seed) {
        ++report.mismatches;
        if (phase == "engine-vs-oracle")
            ++report.engine_mismatches;
        else
            ++report.normalize_mismatches;
        if (!report.first_counterexample) {
            Counterexample c;
            c.phase = phase;
            c.formula = render_formula(f);
            c.interpretation = itp.to_json();
            c.engine_output = engine_out;
            c.oracle_output = oracle_out;
            c.formula_seed = formula_seed;
            c.interp_seed = interp_seed;
            report.first_counterexample = std::move(c);
        }
    }
};

}  // namespace

EquivalenceReport fuzz_campaign(const FuzzConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    Campaign campaign;
    campaign.report.seed = cfg.gen.seed;
    campaign.oracle_opts.budget = cfg.budget;

    for (int i = 0; i < cfg.formulas; ++i) {
        GeneratorParams gp = cfg.gen;
        gp.seed = mix_seed(cfg.gen.seed, 0xF0121, i);
        PrenexFormula f = random_foet(gp);
        FoetFormula g = normalize_to_foet(f);
        JoinChainPlan plan = compile(g);
        if (cfg.dedup) plan = dedup_heads(plan, g);
        if (cfg.mutation != PlanMutation::None)
            mutate_plan(plan, cfg.mutation);  // inapplicable plans run unmutated
        ++campaign.report.formulas;
        campaign.run_formula(f, plan, g, cfg.check_theorem1, cfg.trials_per_formula,
                             cfg.gen.domain_size, cfg.density, gp.seed, gp.seed);
    }

    campaign.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return campaign.report;
}

EquivalenceReport verify_formula(const PrenexFormula& f, int trials, int domain_size,
                                 std::uint64_t seed, bool dedup, double budget) {
    auto start = std::chrono::steady_clock::now();
    Campaign campaign;
    campaign.report.seed = seed;
    campaign.oracle_opts.budget = budget;

    FoetFormula g = normalize_to_foet(f);
    JoinChainPlan plan = compile(g);
    if (dedup) plan = dedup_heads(plan, g);
    ++campaign.report.formulas;
    campaign.run_formula(f, plan, g, /*check_theorem1=*/true, trials, domain_size, 0.5,
                         seed, seed);

    campaign.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return campaign.report;
}

}  // namespace jcn

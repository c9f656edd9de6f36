// jcn: parse, normalize, check, compile, execute and verify join-chain
// network plans for tree-structured existential formulas.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "jcn/engine.hpp"
#include "jcn/fuzz.hpp"
#include "jcn/normalizer.hpp"
#include "jcn/oracle.hpp"
#include "jcn/parser.hpp"
#include "jcn/planner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;
constexpr int kRejected = 3;

struct Options {
    std::string input;
    std::string interp_path;
    std::string output_path;
    std::string algebra = "boolean";
    std::string emit = "text";
    int trials = 100;
    int domain = 3;
    std::uint64_t seed = 0;
    int formulas = 100;
    int max_trees = 2;
    int max_height = 3;
    int max_width = 5;
    int max_vars = 6;
    bool dedup = false;
    bool trace = false;
    bool reorient = false;
    bool softmax = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// All file output goes through a temp file and an atomic rename, so a
// failing run never leaves a partial artifact behind.
void emit(const Options& opts, const std::string& payload) {
    if (opts.output_path.empty()) {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(opts.output_path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << payload;
        if (payload.empty() || payload.back() != '\n') out << '\n';
    }
    fs::rename(tmp, target);
}

void emit_json(const Options& opts, const nlohmann::json& j) { emit(opts, j.dump(2)); }

jcn::ParseResult parse_input(const Options& opts) {
    auto res = jcn::parse_formula(read_file(opts.input), {.reorient = opts.reorient});
    for (const auto& w : res.warnings) std::cerr << "warning: " << w.message << "\n";
    return res;
}

double oracle_budget() {
    if (const char* env = std::getenv("JCN_BUDGET")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0) return v;
        std::cerr << "warning: ignoring malformed JCN_BUDGET\n";
    }
    return jcn::OracleOptions{}.budget;
}

jcn::Algebra algebra_of(const Options& opts) {
    auto alg = jcn::Algebra::from_name(opts.algebra);
    if (!alg) throw CLI::ValidationError("--algebra", "unknown algebra " + opts.algebra);
    return *alg;
}

nlohmann::json output_json(const jcn::Algebra& alg, const jcn::Vec& values,
                           const jcn::ExecTrace* trace) {
    nlohmann::json j;
    j["algebra"] = std::string(alg.name());
    if (alg.tag == jcn::Algebra::Tag::Boolean) {
        std::vector<int> bits(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) bits[i] = values[i] != 0.0;
        j["output"] = bits;
    } else {
        j["output"] = values;
    }
    if (trace) j["trace"] = trace->to_json();
    return j;
}

int cmd_parse(const Options& opts) {
    auto res = parse_input(opts);
    if (opts.emit == "json") {
        nlohmann::json j;
        j["name"] = res.formula.name;
        j["num_quantified"] = res.formula.num_quantified;
        j["disjuncts"] = res.formula.disjuncts.size();
        j["text"] = jcn::render_formula(res.formula);
        emit_json(opts, j);
    } else {
        emit(opts, jcn::render_formula(res.formula));
    }
    return kOk;
}

int cmd_normalize(const Options& opts) {
    auto g = jcn::normalize_to_foet(parse_input(opts).formula);
    if (opts.emit == "json")
        emit_json(opts, jcn::foet_to_json(g));
    else
        emit(opts, jcn::render_foet(g));
    return kOk;
}

int cmd_check(const Options& opts) {
    auto f = parse_input(opts).formula;
    try {
        auto g = jcn::normalize_to_foet(f);
        if (opts.emit == "json") {
            emit_json(opts, {{"foet", true},
                             {"height", g.measures.height},
                             {"width", g.measures.width}});
        } else {
            emit(opts, "foet: yes  height: " + std::to_string(g.measures.height) +
                           "  width: " + std::to_string(g.measures.width));
        }
        return kOk;
    } catch (const jcn::NotAForestError& e) {
        if (opts.emit == "json")
            emit_json(opts, {{"foet", false}, {"reason", e.what()}});
        else
            emit(opts, std::string("foet: no  (") + e.what() + ")");
        return kRejected;
    }
}

int cmd_compile(const Options& opts) {
    auto g = jcn::normalize_to_foet(parse_input(opts).formula);
    auto plan = jcn::compile(g);
    if (opts.dedup) plan = jcn::dedup_heads(plan, g);
    emit_json(opts, jcn::plan_to_json(plan));
    std::cerr << "plan: " << plan.stats.layers << " layers, max "
              << plan.stats.max_heads << " heads\n";
    return kOk;
}

int cmd_eval(const Options& opts) {
    auto plan = jcn::plan_from_json(nlohmann::json::parse(read_file(opts.input)));
    auto itp = jcn::Interpretation::from_json(
        nlohmann::json::parse(read_file(opts.interp_path)));
    auto alg = algebra_of(opts);
    jcn::ExecTrace trace;
    auto out = jcn::execute(plan, itp, alg, opts.trace ? &trace : nullptr);
    emit_json(opts, output_json(alg, out.values, opts.trace ? &trace : nullptr));
    return kOk;
}

int cmd_attention(const Options& opts) {
    auto plan = jcn::plan_from_json(nlohmann::json::parse(read_file(opts.input)));
    auto itp = jcn::Interpretation::from_json(
        nlohmann::json::parse(read_file(opts.interp_path)));
    nlohmann::json heads = nlohmann::json::array();
    for (const auto& v : jcn::attention_view(plan, itp, opts.softmax)) {
        nlohmann::json jh{{"head", v.head_id},
                          {"tree", v.tree},
                          {"A", v.A},
                          {"V", v.V},
                          {"Z", v.Z}};
        if (v.A_softmax) jh["A_softmax"] = *v.A_softmax;
        heads.push_back(std::move(jh));
    }
    emit_json(opts, {{"heads", std::move(heads)}});
    return kOk;
}

int cmd_oracle(const Options& opts) {
    auto f = parse_input(opts).formula;
    auto itp = jcn::Interpretation::from_json(
        nlohmann::json::parse(read_file(opts.interp_path)));
    jcn::OracleOptions oo;
    oo.budget = oracle_budget();
    auto out = jcn::brute_force_eval(f, itp, oo);
    emit_json(opts, output_json(jcn::Algebra::boolean(), out.values, nullptr));
    return kOk;
}

int cmd_verify(const Options& opts) {
    auto f = parse_input(opts).formula;
    auto report = jcn::verify_formula(f, opts.trials, opts.domain, opts.seed, opts.dedup,
                                      oracle_budget());
    emit_json(opts, jcn::report_to_json(report));
    std::cerr << "verify: " << report.trials << " trials, " << report.mismatches
              << " mismatches, " << report.budget_errors << " budget errors\n";
    return report.clean() ? kOk : kMismatch;
}

int cmd_fuzz(const Options& opts) {
    jcn::FuzzConfig cfg;
    cfg.gen.seed = opts.seed;
    cfg.gen.domain_size = opts.domain;
    cfg.gen.max_trees = opts.max_trees;
    cfg.gen.max_height = opts.max_height;
    cfg.gen.max_width = opts.max_width;
    cfg.gen.max_vars = opts.max_vars;
    cfg.formulas = opts.formulas;
    cfg.trials_per_formula = opts.trials;
    cfg.dedup = opts.dedup;
    cfg.budget = oracle_budget();
    auto report = jcn::fuzz_campaign(cfg);
    emit_json(opts, jcn::report_to_json(report));
    std::cerr << "fuzz: " << report.formulas << " formulas, " << report.trials
              << " trials, " << report.mismatches << " mismatches, "
              << report.budget_errors << " budget errors\n";
    return report.clean() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"join-chain network compiler and evaluator"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input)
            sub->add_option("input", opts.input, "input file")->required();
        sub->add_option("-o,--output", opts.output_path, "write the result here");
        return sub;
    };
    auto add_emit = [&](CLI::App* sub) {
        sub->add_option("--emit", opts.emit, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* parse = add_common(app.add_subcommand("parse", "echo the canonical DSL text"), true);
    parse->add_flag("--reorient", opts.reorient, "swap misoriented binary atoms");
    add_emit(parse);

    auto* normalize =
        add_common(app.add_subcommand("normalize", "emit the tree-form formula"), true);
    normalize->add_flag("--reorient", opts.reorient);
    add_emit(normalize);

    auto* check = add_common(
        app.add_subcommand("check", "report tree membership, height and width"), true);
    check->add_flag("--reorient", opts.reorient);
    add_emit(check);

    auto* compile =
        add_common(app.add_subcommand("compile", "emit the join-chain plan JSON"), true);
    compile->add_flag("--reorient", opts.reorient);
    compile->add_flag("--dedup", opts.dedup, "share heads across identical trees");

    auto* eval = add_common(app.add_subcommand("eval", "run a plan on an interpretation"),
                            true);
    eval->add_option("--interp", opts.interp_path, "interpretation JSON")->required();
    eval->add_option("--algebra", opts.algebra, "boolean|noisy-or|sum-clamp|plain-sum");
    eval->add_flag("--trace", opts.trace, "record every slot per layer");

    auto* attention = add_common(
        app.add_subcommand("attention", "per-head A, V and Z under plain-sum"), true);
    attention->add_option("--interp", opts.interp_path)->required();
    attention->add_flag("--softmax", opts.softmax, "include row-softmaxed copies of A");

    auto* oracle = add_common(
        app.add_subcommand("oracle", "brute-force boolean evaluation of a formula"), true);
    oracle->add_option("--interp", opts.interp_path)->required();
    oracle->add_flag("--reorient", opts.reorient);

    auto* verify = add_common(
        app.add_subcommand("verify", "compare engine vs oracle on random inputs"), true);
    verify->add_option("--trials", opts.trials);
    verify->add_option("--domain", opts.domain);
    verify->add_option("--seed", opts.seed);
    verify->add_flag("--dedup", opts.dedup);
    verify->add_flag("--reorient", opts.reorient);

    auto* fuzz = add_common(app.add_subcommand("fuzz", "equivalence campaign over random "
                                                       "formulas"),
                            false);
    fuzz->add_option("--formulas", opts.formulas, "number of generated formulas");
    fuzz->add_option("--trials", opts.trials, "interpretations per formula");
    fuzz->add_option("--domain", opts.domain);
    fuzz->add_option("--seed", opts.seed);
    fuzz->add_option("--max-trees", opts.max_trees);
    fuzz->add_option("--max-height", opts.max_height);
    fuzz->add_option("--max-width", opts.max_width);
    fuzz->add_option("--max-vars", opts.max_vars);
    fuzz->add_flag("--dedup", opts.dedup);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kUsage;
    }

    try {
        if (parse->parsed()) return cmd_parse(opts);
        if (normalize->parsed()) return cmd_normalize(opts);
        if (check->parsed()) return cmd_check(opts);
        if (compile->parsed()) return cmd_compile(opts);
        if (eval->parsed()) return cmd_eval(opts);
        if (attention->parsed()) return cmd_attention(opts);
        if (oracle->parsed()) return cmd_oracle(opts);
        if (verify->parsed()) return cmd_verify(opts);
        if (fuzz->parsed()) return cmd_fuzz(opts);
    } catch (const jcn::ParseError& e) {
        std::cerr << "parse error: " << opts.input << ":" << e.what() << "\n";
        return kRejected;
    } catch (const jcn::NotAForestError& e) {
        std::cerr << "not tree-structured: " << e.what() << "\n";
        return kRejected;
    } catch (const jcn::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kRejected;
    } catch (const jcn::EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRejected;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed JSON input: " << e.what() << "\n";
        return kRejected;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRejected;
    }
    return kUsage;
}

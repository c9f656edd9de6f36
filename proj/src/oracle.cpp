#include "jcn/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace jcn {

namespace {

// Per-disjunct atom table with pre-resolved value pointers.
struct CompiledDisjunct {
    struct U {
        const Vec* values;
        int var;
    };
    struct B {
        const Mat* values;
        int left, right;
    };
    std::vector<U> unary;
    std::vector<B> binary;
    double constant;
};

bool eval_disjunct(const CompiledDisjunct& d, const std::vector<int>& assign) {
    if (d.constant == 0.0) return false;
    for (const auto& a : d.unary)
        if ((*a.values)[assign[a.var]] == 0.0) return false;
    for (const auto& a : d.binary)
        if ((*a.values)[assign[a.left]][assign[a.right]] == 0.0) return false;
    return true;
}

}  // namespace

PredicateVector brute_force_eval(const PrenexFormula& f, const Interpretation& itp,
                                 const OracleOptions& opts) {
    itp.check_wellformed();
    if (!itp.is_boolean())
        throw EvalError("brute-force oracle requires a boolean interpretation");

    const int s = itp.domain_size;
    const int t = f.num_quantified;
    const double assignments = std::pow(static_cast<double>(s), static_cast<double>(t));
    if (assignments > opts.budget) throw BudgetError(assignments, opts.budget);

    // Resolve every predicate once; storage lives here, tables point into it.
    std::map<std::string, Vec> unary_store;
    std::map<std::string, Mat> binary_store;
    std::vector<CompiledDisjunct> body;
    for (const auto& d : f.disjuncts) {
        CompiledDisjunct cd;
        cd.constant = itp.prop_value(d.constant);
        for (const auto& a : d.unary_atoms) {
            auto [it, fresh] = unary_store.try_emplace(a.predicate);
            if (fresh) it->second = itp.resolve_unary(a.predicate);
            cd.unary.push_back({&it->second, a.arg.index});
        }
        for (const auto& a : d.binary_atoms) {
            auto [it, fresh] = binary_store.try_emplace(a.predicate);
            if (fresh) it->second = itp.resolve_binary(a.predicate);
            cd.binary.push_back({&it->second, a.left.index, a.right.index});
        }
        body.push_back(std::move(cd));
    }

    PredicateVector out;
    out.provenance = "oracle";
    out.values.assign(s, 0.0);
    std::vector<int> assign(t + 1, 0);
    for (int x = 0; x < s; ++x) {
        assign.assign(t + 1, 0);
        assign[0] = x;
        bool sat = false;
        // Odometer over (y_1..y_T): y_T fastest, so y_1 is the outer loop.
        for (;;) {
            for (const auto& d : body) {
                if (eval_disjunct(d, assign)) {
                    sat = true;
                    break;
                }
            }
            if (sat) break;
            int pos = t;
            while (pos >= 1 && assign[pos] == s - 1) assign[pos--] = 0;
            if (pos < 1) break;
            ++assign[pos];
        }
        out.values[x] = sat ? 1.0 : 0.0;
    }
    return out;
}

PredicateVector brute_force_eval(const FoetFormula& g, const Interpretation& itp,
                                 const OracleOptions& opts) {
    return brute_force_eval(foet_to_prenex(g), itp, opts);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // splitmix64 over the concatenated inputs.
    std::uint64_t z = seed;
    for (std::uint64_t word : {stream, index}) {
        z += 0x9e3779b97f4a7c15ULL + word;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
    }
    return z;
}

namespace {

struct GenTree {
    std::set<Edge> edges;
    std::map<int, int> depth;                       // node -> depth
    std::map<int, std::set<std::string>> node_preds;  // empty set = tautology node
    std::map<Edge, std::set<std::string>> edge_preds; // empty set = tautology edge
};

// Grows one tree: a root chain fixes the height, then extra nodes attach
// wherever depth allows. Width accounting: the chain costs one leaf, and
// only attachments under internal nodes add one. Nodes are grown under
// abstract ids in creation order (so a parent's id precedes its child's)
// and relabeled at the end with a sorted random subset of {1..T}, which
// keeps parent < child on every edge.
GenTree grow_tree(Rng& rng, const GeneratorParams& p, std::vector<int> labels,
                  int& width_budget) {
    GenTree t;
    t.depth[0] = 0;
    if (p.max_height == 0 || p.max_vars == 0 || width_budget == 0 || labels.empty() ||
        rng.coin(0.15))
        return t;  // root-only

    std::set<Edge> edges;                 // over abstract ids
    std::map<int, int> depth{{0, 0}};
    int next_id = 1;
    const int max_nodes = static_cast<int>(labels.size());

    int target_height = 1 + rng.below(std::min(p.max_height, max_nodes));
    --width_budget;
    for (int d = 1; d <= target_height; ++d, ++next_id) {
        edges.insert({next_id - 1, next_id});
        depth[next_id] = d;
    }

    while (next_id <= max_nodes && rng.coin(0.55)) {
        std::vector<int> sites;
        for (const auto& [node, d] : depth)
            if (d < p.max_height) sites.push_back(node);
        if (sites.empty()) break;
        int site = sites[rng.below(static_cast<int>(sites.size()))];
        bool site_is_leaf = true;
        for (const auto& [a, b] : edges)
            if (a == site) site_is_leaf = false;
        if (!site_is_leaf) {
            if (width_budget == 0) break;
            --width_budget;
        }
        edges.insert({site, next_id});
        depth[next_id] = depth[site] + 1;
        ++next_id;
    }

    // Monotone relabeling onto a random variable subset.
    std::vector<int> chosen(labels.begin(), labels.begin() + (next_id - 1));
    std::sort(chosen.begin(), chosen.end());
    auto relabel = [&](int id) { return id == 0 ? 0 : chosen[id - 1]; };
    for (const auto& [a, b] : edges) t.edges.insert({relabel(a), relabel(b)});
    for (const auto& [node, d] : depth) t.depth[relabel(node)] = d;
    return t;
}

}  // namespace

PrenexFormula random_foet(const GeneratorParams& p) {
    Rng rng(mix_seed(p.seed, 0x1EAF));
    PrenexFormula f;
    f.name = "P";
    f.num_quantified = p.max_vars;

    int num_trees = 1 + rng.below(std::max(1, p.max_trees));
    int width_budget = p.max_width;

    for (int m = 0; m < num_trees; ++m) {
        std::vector<int> labels;
        for (int v = 1; v <= p.max_vars; ++v) labels.push_back(v);
        rng.shuffle(labels);

        GenTree tree = grow_tree(rng, p, std::move(labels), width_budget);

        // Node labels: conjunction sets, empty meaning "leave tautological".
        for (const auto& [node, depth] : tree.depth) {
            auto& preds = tree.node_preds[node];
            if (!rng.coin(p.tautology_rate)) {
                int k = 1 + (rng.coin(0.3) ? 1 : 0);
                for (int i = 0; i < k; ++i)
                    preds.insert("P" + std::to_string(1 + rng.below(p.num_unary)));
            }
        }
        // Edge labels: tautology only on root edges, so the omitted atoms
        // are exactly the ones normalization reconstructs.
        for (const auto& e : tree.edges) {
            auto& preds = tree.edge_preds[e];
            if (e.first == 0 && rng.coin(p.tautology_rate)) continue;
            int k = 1 + (rng.coin(0.2) ? 1 : 0);
            for (int i = 0; i < k; ++i)
                preds.insert("W" + std::to_string(1 + rng.below(p.num_binary)));
        }

        Disjunct d;
        int c = rng.below(10);
        if (c <= 6)
            d.constant = PropConst::literal(true);
        else if (c <= 8)
            d.constant = PropConst::named("Q" + std::to_string(1 + rng.below(2)));
        else
            d.constant = PropConst::literal(false);

        for (const auto& [node, preds] : tree.node_preds)
            for (const auto& name : preds) {
                d.unary_atoms.push_back({name, {node}});
                if (!p.emit_merged && rng.coin(0.25))
                    d.unary_atoms.push_back({name, {node}});
            }
        for (const auto& [edge, preds] : tree.edge_preds)
            for (const auto& name : preds) {
                d.binary_atoms.push_back({name, {edge.first}, {edge.second}});
                if (!p.emit_merged && rng.coin(0.15))
                    d.binary_atoms.push_back({name, {edge.first}, {edge.second}});
            }
        if (!p.emit_merged) {
            rng.shuffle(d.unary_atoms);
            rng.shuffle(d.binary_atoms);
        }
        f.disjuncts.push_back(std::move(d));
    }

    f.signature = infer_signature(f);
    return f;
}

Interpretation random_interpretation(const PredicateSignature& sig, int domain_size,
                                     InterpMode mode, double density, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x17E7));
    Interpretation itp;
    itp.domain_size = domain_size;
    auto draw = [&]() -> double {
        if (mode == InterpMode::Boolean) return rng.coin(density) ? 1.0 : 0.0;
        return rng.unit();
    };
    for (const auto& name : sig.unary_names) {
        if (name == kTautUnary) continue;
        Vec v(domain_size);
        for (auto& x : v) x = draw();
        itp.unary[name] = std::move(v);
    }
    for (const auto& name : sig.binary_names) {
        if (name == kTautBinary) continue;
        Mat m(domain_size, Vec(domain_size));
        for (auto& row : m)
            for (auto& x : row) x = draw();
        itp.binary[name] = std::move(m);
    }
    for (const auto& name : sig.prop_names) itp.prop[name] = draw();
    return itp;
}

}  // namespace jcn

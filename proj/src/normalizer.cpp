#include "jcn/normalizer.hpp"

#include <algorithm>

namespace jcn {

std::vector<int> PredicateGraph::children(int node) const {
    std::vector<int> out;
    for (const auto& [p, c] : edges)
        if (p == node) out.push_back(c);
    return out;  // ascending: edges are sorted by (parent, child)
}

bool PredicateGraph::is_forest() const {
    std::map<int, int> parent_count;
    for (const auto& [p, c] : edges) ++parent_count[c];
    for (const auto& [node, cnt] : parent_count)
        if (cnt > 1) return false;
    return true;
}

bool PredicateGraph::is_tree_rooted_at_zero() const {
    if (!nodes.count(0)) return false;
    if (edges.size() != nodes.size() - 1) return false;
    if (!is_forest()) return false;
    std::set<int> seen{0};
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        for (int c : children(n))
            if (seen.insert(c).second) stack.push_back(c);
    }
    return seen == nodes;
}

std::vector<PredicateGraph> transformation_a(const PrenexFormula& f) {
    std::vector<PredicateGraph> out;
    out.reserve(f.disjuncts.size());

    for (std::size_t m = 0; m < f.disjuncts.size(); ++m) {
        const Disjunct& d = f.disjuncts[m];
        PredicateGraph g;
        g.disjunct_index = static_cast<int>(m);
        g.constant = d.constant;

        // Step 1: merge unary atoms sharing a variable.
        std::set<int> unary_nodes;
        for (const auto& a : d.unary_atoms) {
            g.node_predicates[a.arg.index].insert(a.predicate);
            unary_nodes.insert(a.arg.index);
        }

        // Step 2: merge binary atoms sharing an ordered pair.
        std::set<int> edge_nodes;
        for (const auto& a : d.binary_atoms) {
            Edge e{a.left.index, a.right.index};
            g.edge_predicates[e].insert(a.predicate);
            g.edges.insert(e);
            edge_nodes.insert(e.first);
            edge_nodes.insert(e.second);
        }

        // Step 3: connect node 0. If 0 is not incident to any edge, attach
        // the smallest edge-incident node to it; then attach every
        // unary-only variable. Added edges carry the binary tautology.
        if (!edge_nodes.empty() && !edge_nodes.count(0)) {
            int t_min = *edge_nodes.begin();
            Edge e{0, t_min};
            g.edges.insert(e);
            g.edge_predicates[e].insert(std::string(kTautBinary));
        }
        for (int t : unary_nodes) {
            if (t != 0 && !edge_nodes.count(t)) {
                Edge e{0, t};
                g.edges.insert(e);
                g.edge_predicates[e].insert(std::string(kTautBinary));
            }
        }

        // Node set and tautology fill for predicate-less nodes.
        g.nodes = edge_nodes;
        g.nodes.insert(0);
        g.nodes.insert(unary_nodes.begin(), unary_nodes.end());
        for (int n : g.nodes)
            if (!g.node_predicates.count(n))
                g.node_predicates[n].insert(std::string(kTautUnary));

        out.push_back(std::move(g));
    }
    return out;
}

std::vector<PredicateGraph> transformation_b(std::vector<PredicateGraph> graphs) {
    for (auto& g : graphs) {
        std::map<int, Edge> parent_edge;
        for (const auto& e : g.edges) {
            auto [it, fresh] = parent_edge.emplace(e.second, e);
            if (!fresh)
                throw NotAForestError(g.disjunct_index, e.second, it->second, e);
        }
        // Every parentless node other than 0 is the root of its own tree;
        // join it to 0.
        for (int n : g.nodes) {
            if (n != 0 && !parent_edge.count(n)) {
                Edge e{0, n};
                g.edges.insert(e);
                g.edge_predicates[e].insert(std::string(kTautBinary));
            }
        }
    }
    return graphs;
}

Measures measure_graphs(const std::vector<PredicateGraph>& graphs) {
    Measures m;
    for (const auto& g : graphs) {
        int height = 0, leaves = 0;
        std::vector<std::pair<int, int>> stack{{0, 0}};  // (node, depth)
        while (!stack.empty()) {
            auto [n, depth] = stack.back();
            stack.pop_back();
            height = std::max(height, depth);
            auto cs = g.children(n);
            if (cs.empty() && n != 0) ++leaves;  // a bare root is not a leaf
            for (int c : cs) stack.push_back({c, depth + 1});
        }
        m.per_tree_height.push_back(height);
        m.per_tree_leaves.push_back(leaves);
        m.height = std::max(m.height, height);
        m.width += leaves;
    }
    return m;
}

FoetFormula normalize_to_foet(const PrenexFormula& f) {
    FoetFormula g;
    g.name = f.name;
    g.num_quantified = f.num_quantified;
    g.graphs = transformation_b(transformation_a(f));
    g.signature = f.signature;
    g.measures = measure_graphs(g.graphs);
    return g;
}

PrenexFormula foet_to_prenex(const FoetFormula& g) {
    PrenexFormula f;
    f.name = g.name;
    f.num_quantified = g.num_quantified;
    for (const auto& graph : g.graphs) {
        Disjunct d;
        d.constant = graph.constant;
        for (const auto& [node, preds] : graph.node_predicates)
            for (const auto& p : preds) d.unary_atoms.push_back({p, {node}});
        for (const auto& [edge, preds] : graph.edge_predicates)
            for (const auto& p : preds)
                d.binary_atoms.push_back({p, {edge.first}, {edge.second}});
        f.disjuncts.push_back(std::move(d));
    }
    f.signature = infer_signature(f);
    return f;
}

std::string render_foet(const FoetFormula& g) { return render_formula(foet_to_prenex(g)); }

nlohmann::json foet_to_json(const FoetFormula& g) {
    nlohmann::json disjuncts = nlohmann::json::array();
    for (const auto& graph : g.graphs) {
        nlohmann::json jd;
        jd["nodes"] = graph.nodes;
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& [p, c] : graph.edges) edges.push_back({p, c});
        jd["edges"] = std::move(edges);
        nlohmann::json node_preds = nlohmann::json::object();
        for (const auto& [node, preds] : graph.node_predicates)
            node_preds[std::to_string(node)] = preds;
        jd["node_preds"] = std::move(node_preds);
        nlohmann::json edge_preds = nlohmann::json::object();
        for (const auto& [edge, preds] : graph.edge_predicates)
            edge_preds[std::to_string(edge.first) + "," + std::to_string(edge.second)] =
                preds;
        jd["edge_preds"] = std::move(edge_preds);
        switch (graph.constant.kind) {
            case PropConst::Kind::True: jd["const"] = true; break;
            case PropConst::Kind::False: jd["const"] = false; break;
            case PropConst::Kind::Named: jd["const"] = graph.constant.name; break;
        }
        disjuncts.push_back(std::move(jd));
    }
    return {{"disjuncts", std::move(disjuncts)},
            {"measures", {{"height", g.measures.height}, {"width", g.measures.width}}}};
}

}  // namespace jcn

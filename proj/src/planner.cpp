#include "jcn/planner.hpp"

#include <algorithm>

namespace jcn {

namespace {

// Depth-first preorder leaves of the residual tree (children ascending).
// The root is never emitted, even once bare.
void collect_leaves(const std::map<int, std::vector<int>>& children, int node,
                    std::vector<std::pair<int, int>>& out) {
    auto it = children.find(node);
    if (it == children.end()) return;
    for (int c : it->second) {
        auto cit = children.find(c);
        if (cit == children.end() || cit->second.empty())
            out.push_back({node, c});
        else
            collect_leaves(children, c, out);
    }
}

}  // namespace

std::vector<LeafStratum> leaf_partition(const FoetFormula& g) {
    // Residual children map per tree; rounds run in lockstep across trees.
    std::vector<std::map<int, std::vector<int>>> children(g.graphs.size());
    for (std::size_t m = 0; m < g.graphs.size(); ++m)
        for (const auto& [p, c] : g.graphs[m].edges) children[m][p].push_back(c);

    std::vector<LeafStratum> strata;
    for (int level = 1;; ++level) {
        LeafStratum s;
        s.level = level;
        for (std::size_t m = 0; m < g.graphs.size(); ++m) {
            std::vector<std::pair<int, int>> stripped;  // (parent, leaf)
            collect_leaves(children[m], 0, stripped);
            for (auto [p, c] : stripped) {
                s.parents.push_back(p);
                s.leaves.push_back(c);
                s.edges.push_back({p, c});
                s.tree_of.push_back(static_cast<int>(m));
                auto& sib = children[m][p];
                sib.erase(std::find(sib.begin(), sib.end(), c));
            }
        }
        if (s.leaves.empty()) break;
        strata.push_back(std::move(s));
    }
    return strata;
}

std::string slot_id(int tree, int node) {
    return "T" + std::to_string(tree) + "N" + std::to_string(node);
}

JoinChainPlan compile(const FoetFormula& g) {
    JoinChainPlan plan;
    plan.name = g.name;

    for (std::size_t m = 0; m < g.graphs.size(); ++m)
        for (const auto& [node, preds] : g.graphs[m].node_predicates)
            plan.slots[slot_id(static_cast<int>(m), node)] = {static_cast<int>(m), node,
                                                              preds};

    // Survivor tracking: nodes not yet consumed, per tree.
    std::vector<std::set<int>> surviving(g.graphs.size());
    for (std::size_t m = 0; m < g.graphs.size(); ++m) surviving[m] = g.graphs[m].nodes;

    auto strata = leaf_partition(g);
    for (const auto& stratum : strata) {
        PlanLayer layer;

        // One head per stratum entry, ordered by (tree, child).
        std::vector<std::size_t> order(stratum.leaves.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::pair(stratum.tree_of[a], stratum.leaves[a]) <
                   std::pair(stratum.tree_of[b], stratum.leaves[b]);
        });
        for (std::size_t k = 0; k < order.size(); ++k) {
            std::size_t i = order[k];
            int m = stratum.tree_of[i];
            HeadSpec h;
            h.id = "L" + std::to_string(stratum.level) + "H" + std::to_string(k + 1);
            h.trees = {m};
            h.parent = stratum.parents[i];
            h.child = stratum.leaves[i];
            h.edge_predicates = g.graphs[m].edge_predicates.at(stratum.edges[i]);
            h.child_slot = slot_id(m, h.child);
            layer.heads.push_back(std::move(h));
        }

        for (std::size_t i = 0; i < stratum.leaves.size(); ++i)
            surviving[stratum.tree_of[i]].erase(stratum.leaves[i]);

        // Explicit skip/aggregation map over every surviving slot.
        for (std::size_t m = 0; m < g.graphs.size(); ++m) {
            for (int t : surviving[m]) {
                AggEntry e;
                e.base_slot = slot_id(static_cast<int>(m), t);
                for (const auto& h : layer.heads)
                    if (h.trees[0] == static_cast<int>(m) && h.parent == t)
                        e.head_ids.push_back(h.id);
                layer.aggregation[e.base_slot] = std::move(e);
            }
        }
        plan.layers.push_back(std::move(layer));
    }

    for (std::size_t m = 0; m < g.graphs.size(); ++m)
        plan.finals.push_back(
            {static_cast<int>(m), slot_id(static_cast<int>(m), 0), g.graphs[m].constant});

    plan.stats = plan_stats(plan);
    return plan;
}

JoinChainPlan dedup_heads(const JoinChainPlan& p, const FoetFormula& g) {
    // Trees share heads only when structure and edge predicates match in full.
    using TreeKey = std::pair<std::set<Edge>, std::map<Edge, std::set<std::string>>>;
    std::map<TreeKey, int> classes;
    std::vector<int> class_of(g.graphs.size());
    for (std::size_t m = 0; m < g.graphs.size(); ++m) {
        TreeKey key{g.graphs[m].edges, g.graphs[m].edge_predicates};
        auto [it, fresh] = classes.emplace(std::move(key), static_cast<int>(classes.size()));
        class_of[m] = it->second;
    }

    JoinChainPlan out;
    out.name = p.name;
    out.slots = p.slots;
    out.finals = p.finals;

    int level = 1;
    for (const auto& layer : p.layers) {
        PlanLayer merged;

        // Group by (class, parent, child); heads arrive sorted by (tree,
        // child) so the first member of each group has the lowest tree.
        std::map<std::tuple<int, int, int>, std::size_t> group_index;
        for (const auto& h : layer.heads) {
            std::tuple<int, int, int> key{class_of[h.trees[0]], h.parent, h.child};
            auto it = group_index.find(key);
            if (it == group_index.end()) {
                group_index.emplace(key, merged.heads.size());
                merged.heads.push_back(h);
            } else {
                merged.heads[it->second].trees.push_back(h.trees[0]);
            }
        }
        std::sort(merged.heads.begin(), merged.heads.end(),
                  [](const HeadSpec& a, const HeadSpec& b) {
                      return std::pair(a.trees[0], a.child) < std::pair(b.trees[0], b.child);
                  });
        for (std::size_t k = 0; k < merged.heads.size(); ++k)
            merged.heads[k].id = "L" + std::to_string(level) + "H" + std::to_string(k + 1);

        // Remap aggregation references onto the merged ids.
        std::map<std::tuple<int, int, int>, std::string> key_to_id;
        for (const auto& h : merged.heads)
            key_to_id[{class_of[h.trees[0]], h.parent, h.child}] = h.id;
        std::map<std::string, std::string> id_map;
        for (const auto& h : layer.heads)
            id_map[h.id] = key_to_id.at({class_of[h.trees[0]], h.parent, h.child});

        for (const auto& [target, entry] : layer.aggregation) {
            AggEntry e;
            e.base_slot = entry.base_slot;
            for (const auto& id : entry.head_ids) e.head_ids.push_back(id_map.at(id));
            merged.aggregation[target] = std::move(e);
        }
        out.layers.push_back(std::move(merged));
        ++level;
    }

    out.stats = plan_stats(out);
    return out;
}

PlanStats plan_stats(const JoinChainPlan& p) {
    PlanStats s;
    s.layers = static_cast<int>(p.layers.size());
    for (const auto& layer : p.layers) {
        int n = static_cast<int>(layer.heads.size());
        s.heads_per_layer.push_back(n);
        s.max_heads = std::max(s.max_heads, n);
    }
    return s;
}

namespace {

nlohmann::json prop_to_json(const PropConst& q) {
    switch (q.kind) {
        case PropConst::Kind::True: return true;
        case PropConst::Kind::False: return false;
        case PropConst::Kind::Named: return q.name;
    }
    return true;
}

PropConst prop_from_json(const nlohmann::json& j) {
    if (j.is_boolean()) return PropConst::literal(j.get<bool>());
    return PropConst::named(j.get<std::string>());
}

}  // namespace

nlohmann::json plan_to_json(const JoinChainPlan& p) {
    nlohmann::json j;
    j["name"] = p.name;

    nlohmann::json slots = nlohmann::json::object();
    for (const auto& [id, def] : p.slots)
        slots[id] = {{"tree", def.tree}, {"node", def.node}, {"preds", def.predicates}};
    j["slots"] = std::move(slots);

    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : p.layers) {
        nlohmann::json heads = nlohmann::json::array();
        for (const auto& h : layer.heads) {
            nlohmann::json jh = {{"id", h.id},         {"tree", h.trees[0]},
                                 {"parent", h.parent}, {"child", h.child},
                                 {"w", h.edge_predicates}, {"child_slot", h.child_slot}};
            if (h.trees.size() > 1) jh["trees"] = h.trees;
            heads.push_back(std::move(jh));
        }
        nlohmann::json agg = nlohmann::json::object();
        for (const auto& [target, e] : layer.aggregation)
            agg[target] = {{"base", e.base_slot}, {"heads", e.head_ids}};
        layers.push_back({{"heads", std::move(heads)}, {"agg", std::move(agg)}});
    }
    j["layers"] = std::move(layers);

    nlohmann::json finals = nlohmann::json::array();
    for (const auto& f : p.finals)
        finals.push_back({{"tree", f.tree}, {"slot", f.slot}, {"q", prop_to_json(f.q)}});
    j["final"] = std::move(finals);

    j["stats"] = {{"layers", p.stats.layers},
                  {"heads_per_layer", p.stats.heads_per_layer},
                  {"max_heads", p.stats.max_heads}};
    return j;
}

JoinChainPlan plan_from_json(const nlohmann::json& j) {
    JoinChainPlan p;
    p.name = j.value("name", "");

    for (const auto& [id, def] : j.at("slots").items()) {
        SlotDef s;
        s.tree = def.at("tree").get<int>();
        s.node = def.at("node").get<int>();
        s.predicates = def.at("preds").get<std::set<std::string>>();
        p.slots[id] = std::move(s);
    }

    for (const auto& jl : j.at("layers")) {
        PlanLayer layer;
        for (const auto& jh : jl.at("heads")) {
            HeadSpec h;
            h.id = jh.at("id").get<std::string>();
            if (jh.contains("trees"))
                h.trees = jh.at("trees").get<std::vector<int>>();
            else
                h.trees = {jh.at("tree").get<int>()};
            h.parent = jh.at("parent").get<int>();
            h.child = jh.at("child").get<int>();
            h.edge_predicates = jh.at("w").get<std::set<std::string>>();
            h.child_slot = jh.at("child_slot").get<std::string>();
            layer.heads.push_back(std::move(h));
        }
        for (const auto& [target, je] : jl.at("agg").items()) {
            AggEntry e;
            e.base_slot = je.at("base").get<std::string>();
            e.head_ids = je.at("heads").get<std::vector<std::string>>();
            layer.aggregation[target] = std::move(e);
        }
        p.layers.push_back(std::move(layer));
    }

    for (const auto& jf : j.at("final"))
        p.finals.push_back({jf.at("tree").get<int>(), jf.at("slot").get<std::string>(),
                            prop_from_json(jf.at("q"))});

    const auto& js = j.at("stats");
    p.stats.layers = js.at("layers").get<int>();
    p.stats.heads_per_layer = js.at("heads_per_layer").get<std::vector<int>>();
    p.stats.max_heads = js.at("max_heads").get<int>();
    return p;
}

}  // namespace jcn

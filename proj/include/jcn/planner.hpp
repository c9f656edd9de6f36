#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "jcn/normalizer.hpp"

namespace jcn {

/// One round of leaf elimination across all trees. Sequences are aligned:
/// leaves[h] is stripped from tree tree_of[h] along edges[h] whose parent
/// is parents[h]. Within a tree, leaves are listed in depth-first preorder
/// (children in ascending index order); trees are listed in disjunct order.
struct LeafStratum {
    int level = 1;  // l, 1-based
    std::vector<int> leaves;
    std::vector<int> parents;
    std::vector<Edge> edges;
    std::vector<int> tree_of;
    bool operator==(const LeafStratum&) const = default;
};

/// Strips leaves round by round until only the roots remain.
std::vector<LeafStratum> leaf_partition(const FoetFormula& g);

/// Slot identifier for tree m's accumulated predicate at node t: "T<m>N<t>".
std::string slot_id(int tree, int node);

/// One join computation: the edge matrix (conjunction of edge_predicates)
/// applied to the accumulated child slot. After head sharing a single head
/// serves several trees, producing one output column per served tree.
struct HeadSpec {
    std::string id;          // "L<layer>H<k>", 1-based
    std::vector<int> trees;  // served trees; one entry unless deduplicated
    int parent = 0;
    int child = 0;
    std::set<std::string> edge_predicates;
    std::string child_slot;  // slot consumed, for the primary tree
    bool operator==(const HeadSpec&) const = default;
};

/// Post-layer update of one surviving slot: the previous value conjoined
/// with the outputs of the listed heads. An empty head list is a pure
/// skip connection.
struct AggEntry {
    std::string base_slot;
    std::vector<std::string> head_ids;
    bool operator==(const AggEntry&) const = default;
};

struct PlanLayer {
    std::vector<HeadSpec> heads;                // sorted by (tree, child)
    std::map<std::string, AggEntry> aggregation;  // target slot -> update
    bool operator==(const PlanLayer&) const = default;
};

/// Final-stage entry: one per disjunct, conjoining the root slot with the
/// propositional constant before the closing disjunction.
struct FinalEntry {
    int tree = 0;
    std::string slot;
    PropConst q;
    bool operator==(const FinalEntry&) const = default;
};

struct SlotDef {
    int tree = 0;
    int node = 0;
    std::set<std::string> predicates;  // initial value: conjunction of these
    bool operator==(const SlotDef&) const = default;
};

struct PlanStats {
    int layers = 0;
    std::vector<int> heads_per_layer;
    int max_heads = 0;
    bool operator==(const PlanStats&) const = default;
};

/// Executable join-chain network plan: initial slots, join layers with
/// explicit aggregation/skip map, and the final disjunction.
struct JoinChainPlan {
    std::string name;
    std::map<std::string, SlotDef> slots;
    std::vector<PlanLayer> layers;
    std::vector<FinalEntry> finals;
    PlanStats stats;
    bool operator==(const JoinChainPlan&) const = default;
};

/// Compiles one layer per leaf stratum with one head per stratum entry;
/// trees never share heads. Aggregation conjoins each surviving node's slot
/// with the outputs of heads parented at it and passes all other surviving
/// slots through unchanged.
JoinChainPlan compile(const FoetFormula& g);

/// Head sharing for structurally identical trees: heads in the same layer
/// with equal (parent, child, edge predicates) merge when their source
/// trees have equal edge sets and equal edge predicates throughout. The
/// merged head keeps one output column per served tree, so plan output is
/// unchanged under every algebra.
JoinChainPlan dedup_heads(const JoinChainPlan& p, const FoetFormula& g);

PlanStats plan_stats(const JoinChainPlan& p);

nlohmann::json plan_to_json(const JoinChainPlan& p);
JoinChainPlan plan_from_json(const nlohmann::json& j);

}  // namespace jcn

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "jcn/ast.hpp"

namespace jcn {

using Edge = std::pair<int, int>;  // (parent, child), parent < child

/// Per-disjunct predicate graph. Nodes are variable indices; node and edge
/// labels are conjunction sets of predicate names ({TAUT1}/{TAUT2} where
/// normalization filled a gap). After Transformation B the graph is a
/// single tree rooted at node 0.
struct PredicateGraph {
    int disjunct_index = 0;
    std::set<int> nodes;
    std::set<Edge> edges;
    std::map<int, std::set<std::string>> node_predicates;
    std::map<Edge, std::set<std::string>> edge_predicates;
    PropConst constant;

    bool operator==(const PredicateGraph&) const = default;

    /// Children of a node, ascending.
    std::vector<int> children(int node) const;
    /// True when every node has at most one parent (the only way a
    /// parent<child edge set can fail to be a forest).
    bool is_forest() const;
    /// True when additionally connected with 0 reaching every node.
    bool is_tree_rooted_at_zero() const;
};

struct Measures {
    std::vector<int> per_tree_height;  // L^m
    std::vector<int> per_tree_leaves;  // H^m
    int height = 0;                    // L = max_m L^m
    int width = 0;                     // H = sum_m H^m
    bool operator==(const Measures&) const = default;
};

/// Normalized formula: every disjunct is a predicate tree rooted at the
/// free variable.
struct FoetFormula {
    std::string name;
    int num_quantified = 0;
    std::vector<PredicateGraph> graphs;
    PredicateSignature signature;
    Measures measures;
    bool operator==(const FoetFormula&) const = default;
};

/// Raised when a disjunct's predicate graph is not a forest: some node has
/// two parents, so the formula is outside the tree-structured class.
class NotAForestError : public std::runtime_error {
public:
    NotAForestError(int disjunct, int node, Edge a, Edge b)
        : std::runtime_error("disjunct " + std::to_string(disjunct) + ": node " +
                             std::to_string(node) + " has two parents (edges (" +
                             std::to_string(a.first) + "," + std::to_string(a.second) +
                             ") and (" + std::to_string(b.first) + "," +
                             std::to_string(b.second) + "))"),
          disjunct_(disjunct),
          node_(node),
          parent_edge_a_(a),
          parent_edge_b_(b) {}
    int disjunct() const { return disjunct_; }
    int node() const { return node_; }
    Edge parent_edge_a() const { return parent_edge_a_; }
    Edge parent_edge_b() const { return parent_edge_b_; }

private:
    int disjunct_;
    int node_;
    Edge parent_edge_a_, parent_edge_b_;
};

/// Merges unary atoms per variable and binary atoms per ordered pair, then
/// connects node 0: when 0 is absent from the edge-incident nodes an edge
/// (0, t_min) is added, and every variable appearing only in unary atoms
/// gains an edge (0, t). Added edges carry {TAUT2}; nodes without unary
/// atoms carry {TAUT1}. The result is logically equivalent to the input.
std::vector<PredicateGraph> transformation_a(const PrenexFormula& f);

/// Joins the remaining roots of each forest to node 0 with {TAUT2} edges so
/// every graph becomes one tree rooted at 0. Throws NotAForestError when a
/// graph has a node with two parents.
std::vector<PredicateGraph> transformation_b(std::vector<PredicateGraph> graphs);

Measures measure_graphs(const std::vector<PredicateGraph>& graphs);
inline Measures measure(const FoetFormula& g) { return measure_graphs(g.graphs); }

/// transformation_a, forest check, transformation_b, measure.
FoetFormula normalize_to_foet(const PrenexFormula& f);

/// The FOET form written back as a prenex formula: one unary atom per node
/// predicate name, one binary atom per edge predicate name, tautologies
/// explicit. Atoms ordered by node / edge, names alphabetically.
PrenexFormula foet_to_prenex(const FoetFormula& g);

/// Canonical DSL text of the FOET form (tautologies printed as
/// TAUT1(v) / TAUT2(u,v)).
std::string render_foet(const FoetFormula& g);

nlohmann::json foet_to_json(const FoetFormula& g);

}  // namespace jcn

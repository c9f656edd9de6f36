#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Formula data model: one free variable x (index 0), existentially
// quantified y1..yT, and a disjunction of conjunctive clauses over
// unary atoms, orientation-restricted binary atoms and a propositional
// constant.

namespace jcn {

/// Reserved tautology predicate names. Implicitly part of every
/// signature; resolve to all-ones vectors/matrices in any interpretation.
inline constexpr std::string_view kTautUnary = "TAUT1";
inline constexpr std::string_view kTautBinary = "TAUT2";

/// Variable by index: 0 is the free variable x, 1..T the quantified ones.
struct Variable {
    int index = 0;
    auto operator<=>(const Variable&) const = default;
};

struct UnaryAtom {
    std::string predicate;
    Variable arg;
    bool operator==(const UnaryAtom&) const = default;
};

/// Binary atom. Invariant: left.index < right.index (parent before child).
struct BinaryAtom {
    std::string predicate;
    Variable left;
    Variable right;
    bool operator==(const BinaryAtom&) const = default;
};

/// Propositional constant: a literal truth value or a named symbol whose
/// valuation comes from the interpretation (missing names default to true).
struct PropConst {
    enum class Kind { True, False, Named };
    Kind kind = Kind::True;
    std::string name;  // meaningful only when kind == Named

    static PropConst literal(bool v) { return {v ? Kind::True : Kind::False, {}}; }
    static PropConst named(std::string n) { return {Kind::Named, std::move(n)}; }

    bool is_true() const { return kind == Kind::True; }
    bool is_false() const { return kind == Kind::False; }
    bool operator==(const PropConst&) const = default;
};

/// One conjunctive clause of the disjunction.
struct Disjunct {
    std::vector<UnaryAtom> unary_atoms;
    std::vector<BinaryAtom> binary_atoms;
    PropConst constant;  // always present; defaults to literal true
    bool operator==(const Disjunct&) const = default;
};

/// Predicate names partitioned by arity. The tautology names TAUT1/TAUT2
/// are members whether or not they are stored explicitly.
struct PredicateSignature {
    std::set<std::string> unary_names;
    std::set<std::string> binary_names;
    std::set<std::string> prop_names;

    bool is_unary(std::string_view n) const {
        return n == kTautUnary || unary_names.count(std::string(n)) > 0;
    }
    bool is_binary(std::string_view n) const {
        return n == kTautBinary || binary_names.count(std::string(n)) > 0;
    }
    bool operator==(const PredicateSignature&) const = default;
};

/// A formula in prenex form: name(x) := exists y1..yT . D1 | ... | DM.
struct PrenexFormula {
    std::string name;
    int num_quantified = 0;  // T
    std::vector<Disjunct> disjuncts;
    PredicateSignature signature;
    bool operator==(const PrenexFormula&) const = default;
};

/// Builds the signature implied by atom usage (unary/binary/prop names
/// as they actually occur). Tautology names stay implicit.
PredicateSignature infer_signature(const PrenexFormula& f);

/// Canonical DSL text: unary atoms, then binary atoms, in stored order;
/// the constant is printed when it is not literal true or when the
/// disjunct is otherwise empty. Deterministic.
std::string render_formula(const PrenexFormula& f);

/// Variable spelling used by the DSL: "x" for index 0, else "y<i>".
std::string render_variable(Variable v);

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    int disjunct = -1;  // offending disjunct index, -1 for formula-level

    bool is_error() const { return severity == Severity::Error; }
};

/// Checks the type invariants: variable indices within 0..T, binary
/// orientation left < right, declared arities consistent with usage,
/// signature disjointness, reserved-name hygiene. Empty result iff all
/// invariants hold.
std::vector<Diagnostic> validate(const PrenexFormula& f);

}  // namespace jcn

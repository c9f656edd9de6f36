#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "jcn/planner.hpp"

namespace jcn {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row index = first argument

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation algebra: how conjunction and the existential disjunction are
/// realized over [0,1] values.
///
///   boolean    exact AND / OR over {0,1}
///   noisy-or   product / 1 - prod(1 - a_i)
///   sum-clamp  product / min(1, sum a_i)
///   plain-sum  product / sum (may exceed 1; the raw Z = A V view)
struct Algebra {
    enum class Tag { Boolean, NoisyOr, SumClamp, PlainSum };
    Tag tag = Tag::Boolean;

    double conj(double a, double b) const;
    double disj_reduce(std::span<const double> vals) const;

    std::string_view name() const;
    static Algebra boolean() { return {Tag::Boolean}; }
    static Algebra noisy_or() { return {Tag::NoisyOr}; }
    static Algebra sum_clamp() { return {Tag::SumClamp}; }
    static Algebra plain_sum() { return {Tag::PlainSum}; }
    static std::optional<Algebra> from_name(std::string_view n);
    static const std::vector<Algebra>& all();
};

/// Finite-domain valuation of a signature: unary predicates as length-S
/// vectors, binary predicates as SxS matrices, propositional constants as
/// scalars, all in [0,1]. TAUT1/TAUT2 resolve implicitly to all-ones;
/// missing propositional names default to 1.
struct Interpretation {
    int domain_size = 1;
    std::map<std::string, Vec> unary;
    std::map<std::string, Mat> binary;
    std::map<std::string, double> prop;

    Vec resolve_unary(const std::string& name) const;
    Mat resolve_binary(const std::string& name) const;
    double prop_value(const PropConst& q) const;

    /// All stored values are exactly 0 or 1.
    bool is_boolean() const;
    /// Shape and [0,1] range check; throws EvalError with the offender.
    void check_wellformed() const;

    static Interpretation from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct PredicateVector {
    Vec values;
    std::string provenance;
};

/// out[s] = disj-reduce over s' of conj(W[s][s'], P[s']). Under plain-sum
/// this is exactly the matrix-vector product W P.
PredicateVector join(const Mat& W, const PredicateVector& P, const Algebra& alg);

/// Slot values recorded during execution: the initial slots, then per layer
/// every head output (one column per served tree) and every surviving slot
/// after aggregation.
struct ExecTrace {
    std::map<std::string, Vec> initial;
    struct LayerTrace {
        std::map<std::string, std::map<int, Vec>> head_outputs;  // id -> tree -> values
        std::map<std::string, Vec> slots;
    };
    std::vector<LayerTrace> layers;

    nlohmann::json to_json() const;
};

/// Runs the plan: initial slots are the conjunctions of node predicate
/// sets; each layer joins the effective edge matrix of every head with the
/// consumed child slot, then aggregation conjoins head outputs into the
/// surviving slots; the final stage disjoins the per-tree root slots
/// conjoined with their constants.
PredicateVector execute(const JoinChainPlan& p, const Interpretation& itp,
                        const Algebra& alg, ExecTrace* trace = nullptr);

/// One attention-view record per (head, served tree): the effective edge
/// matrix A, the consumed child slot V under plain-sum execution, and
/// Z = A V, identical to the plain-sum head output. The optional softmax
/// field is a row-normalized display copy of A, never used in execution.
struct HeadView {
    std::string head_id;
    int tree = 0;
    Mat A;
    Vec V;
    Vec Z;
    std::optional<Mat> A_softmax;
};

std::vector<HeadView> attention_view(const JoinChainPlan& p, const Interpretation& itp,
                                     bool include_softmax = false);

/// Binary predicates derived from unary data:
///   outer-conj(a, b):          W[x][y] = conj(Pa[x], Pb[y])
///   dot-threshold(names, tau): W[x][y] = 1 if <feat(x), feat(y)> >= tau
/// where feat(x) stacks the named unary values at x.
struct KernelSpec {
    enum class Kind { OuterConj, DotThreshold };
    Kind kind = Kind::OuterConj;
    std::string a, b;                // OuterConj operands
    std::vector<std::string> names;  // DotThreshold features
    double tau = 0.0;

    std::string derived_name() const;
    static KernelSpec outer_conj(std::string a, std::string b);
    static KernelSpec dot_threshold(std::vector<std::string> names, double tau);
};

/// Returns a copy of the interpretation with the derived binary predicate
/// added under KernelSpec::derived_name(); the input is not modified.
Interpretation derive_binary(const KernelSpec& kernel, const Interpretation& itp);

}  // namespace jcn

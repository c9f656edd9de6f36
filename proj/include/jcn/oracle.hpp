#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "jcn/engine.hpp"
#include "jcn/normalizer.hpp"

namespace jcn {

/// Raised when S^T exceeds the assignment budget.
class BudgetError : public std::runtime_error {
public:
    BudgetError(double assignments, double budget)
        : std::runtime_error("enumeration needs " + std::to_string(assignments) +
                             " assignments, budget is " + std::to_string(budget)),
          assignments_(assignments) {}
    double assignments() const { return assignments_; }

private:
    double assignments_;
};

struct OracleOptions {
    double budget = 1e7;  // max S^T assignments per evaluation
};

/// Direct model checking by exhaustive enumeration: for each x, OR over all
/// (y_1..y_T) in S^T of the disjuncts' conjunctive bodies. y_1 varies
/// slowest, y_T fastest, with short-circuit on the first satisfying
/// assignment. Touches no planner or engine code path.
PredicateVector brute_force_eval(const PrenexFormula& f, const Interpretation& itp,
                                 const OracleOptions& opts = {});
PredicateVector brute_force_eval(const FoetFormula& g, const Interpretation& itp,
                                 const OracleOptions& opts = {});

/// Deterministic generator state. mt19937_64 is bit-exact across platforms;
/// the derived draws below avoid std distributions for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t u64() { return gen_(); }
    int below(int n) { return static_cast<int>(u64() % static_cast<std::uint64_t>(n)); }
    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }
    bool coin(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(static_cast<int>(i))]);
    }

private:
    std::mt19937_64 gen_;
};

/// splitmix64-based seed derivation, for independent per-trial substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

struct GeneratorParams {
    int max_trees = 2;         // M bound
    int max_height = 3;        // L-bar
    int max_width = 5;         // H-bar, summed over trees
    int max_vars = 6;          // T bound
    int domain_size = 3;       // S, carried for interpretation drawing
    int num_unary = 4;         // |I1|
    int num_binary = 4;        // |I2|
    double tautology_rate = 0.3;
    std::uint64_t seed = 0;
    bool emit_merged = false;  // suppress scrambling and duplicate atoms
};

/// Random tree-structured formula, deterministic in the seed. The emitted
/// prenex text splits merged conjunctions, may duplicate atoms, shuffles
/// atom order and omits root-level tautology edges, so normalization has
/// real work to do; it always succeeds and stays within the height/width
/// bounds.
PrenexFormula random_foet(const GeneratorParams& params);

enum class InterpMode { Boolean, Real };

/// Random interpretation over the signature's names (tautologies stay
/// implicit). Boolean mode draws each cell 1 with probability `density`;
/// real mode draws uniform [0,1]. Deterministic in the seed.
Interpretation random_interpretation(const PredicateSignature& sig, int domain_size,
                                     InterpMode mode, double density, std::uint64_t seed);

}  // namespace jcn

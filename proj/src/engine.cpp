#include "jcn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcn {

double Algebra::conj(double a, double b) const {
    if (tag == Tag::Boolean) return (a != 0.0 && b != 0.0) ? 1.0 : 0.0;
    return a * b;
}

double Algebra::disj_reduce(std::span<const double> vals) const {
    switch (tag) {
        case Tag::Boolean: {
            for (double v : vals)
                if (v != 0.0) return 1.0;
            return 0.0;
        }
        case Tag::NoisyOr: {
            double miss = 1.0;
            for (double v : vals) miss *= (1.0 - v);
            return 1.0 - miss;
        }
        case Tag::SumClamp: {
            double sum = 0.0;
            for (double v : vals) sum += v;
            return std::min(1.0, sum);
        }
        case Tag::PlainSum: {
            double sum = 0.0;
            for (double v : vals) sum += v;
            return sum;
        }
    }
    return 0.0;
}

std::string_view Algebra::name() const {
    switch (tag) {
        case Tag::Boolean: return "boolean";
        case Tag::NoisyOr: return "noisy-or";
        case Tag::SumClamp: return "sum-clamp";
        case Tag::PlainSum: return "plain-sum";
    }
    return "boolean";
}

std::optional<Algebra> Algebra::from_name(std::string_view n) {
    if (n == "boolean") return boolean();
    if (n == "noisy-or") return noisy_or();
    if (n == "sum-clamp") return sum_clamp();
    if (n == "plain-sum") return plain_sum();
    return std::nullopt;
}

const std::vector<Algebra>& Algebra::all() {
    static const std::vector<Algebra> algs{boolean(), noisy_or(), sum_clamp(),
                                           plain_sum()};
    return algs;
}

Vec Interpretation::resolve_unary(const std::string& name) const {
    if (name == kTautUnary) return Vec(domain_size, 1.0);
    auto it = unary.find(name);
    if (it == unary.end()) throw EvalError("unknown unary predicate: " + name);
    return it->second;
}

Mat Interpretation::resolve_binary(const std::string& name) const {
    if (name == kTautBinary) return Mat(domain_size, Vec(domain_size, 1.0));
    auto it = binary.find(name);
    if (it == binary.end()) throw EvalError("unknown binary predicate: " + name);
    return it->second;
}

double Interpretation::prop_value(const PropConst& q) const {
    switch (q.kind) {
        case PropConst::Kind::True: return 1.0;
        case PropConst::Kind::False: return 0.0;
        case PropConst::Kind::Named: {
            auto it = prop.find(q.name);
            return it == prop.end() ? 1.0 : it->second;
        }
    }
    return 1.0;
}

bool Interpretation::is_boolean() const {
    auto ok = [](double v) { return v == 0.0 || v == 1.0; };
    for (const auto& [n, v] : unary)
        if (!std::all_of(v.begin(), v.end(), ok)) return false;
    for (const auto& [n, m] : binary)
        for (const auto& row : m)
            if (!std::all_of(row.begin(), row.end(), ok)) return false;
    for (const auto& [n, v] : prop)
        if (!ok(v)) return false;
    return true;
}

void Interpretation::check_wellformed() const {
    if (domain_size < 1) throw EvalError("domain size must be >= 1");
    auto in_range = [](double v) { return v >= 0.0 && v <= 1.0 && std::isfinite(v); };
    for (const auto& [name, v] : unary) {
        if (static_cast<int>(v.size()) != domain_size)
            throw EvalError("unary " + name + " has length " + std::to_string(v.size()) +
                            ", expected " + std::to_string(domain_size));
        if (!std::all_of(v.begin(), v.end(), in_range))
            throw EvalError("unary " + name + " has a value outside [0,1]");
    }
    for (const auto& [name, m] : binary) {
        if (static_cast<int>(m.size()) != domain_size)
            throw EvalError("binary " + name + " has " + std::to_string(m.size()) +
                            " rows, expected " + std::to_string(domain_size));
        for (const auto& row : m) {
            if (static_cast<int>(row.size()) != domain_size)
                throw EvalError("binary " + name + " is not square");
            if (!std::all_of(row.begin(), row.end(), in_range))
                throw EvalError("binary " + name + " has a value outside [0,1]");
        }
    }
    for (const auto& [name, v] : prop)
        if (!in_range(v)) throw EvalError("prop " + name + " outside [0,1]");
}

Interpretation Interpretation::from_json(const nlohmann::json& j) {
    Interpretation itp;
    itp.domain_size = j.at("domain").get<int>();
    if (j.contains("unary"))
        for (const auto& [name, v] : j.at("unary").items())
            itp.unary[name] = v.get<Vec>();
    if (j.contains("binary"))
        for (const auto& [name, m] : j.at("binary").items())
            itp.binary[name] = m.get<Mat>();
    if (j.contains("prop"))
        for (const auto& [name, v] : j.at("prop").items())
            itp.prop[name] = v.get<double>();
    itp.check_wellformed();
    return itp;
}

nlohmann::json Interpretation::to_json() const {
    nlohmann::json j;
    j["domain"] = domain_size;
    j["unary"] = nlohmann::json::object();
    for (const auto& [name, v] : unary) j["unary"][name] = v;
    j["binary"] = nlohmann::json::object();
    for (const auto& [name, m] : binary) j["binary"][name] = m;
    j["prop"] = nlohmann::json::object();
    for (const auto& [name, v] : prop) j["prop"][name] = v;
    return j;
}

namespace {

void check_domain(const Vec& v, const Algebra& alg, const std::string& what) {
    if (alg.tag != Algebra::Tag::Boolean) return;
    for (double x : v)
        if (x != 0.0 && x != 1.0)
            throw EvalError("boolean algebra fed non-boolean value in " + what);
}

Vec conj_vecs(const Vec& a, const Vec& b, const Algebra& alg) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = alg.conj(a[i], b[i]);
    return out;
}

// Elementwise conjunction of every matrix named in the set.
Mat effective_matrix(const std::set<std::string>& names, const Interpretation& itp,
                     const Algebra& alg) {
    Mat acc(itp.domain_size, Vec(itp.domain_size, 1.0));
    for (const auto& name : names) {
        Mat w = itp.resolve_binary(name);
        for (int r = 0; r < itp.domain_size; ++r)
            for (int c = 0; c < itp.domain_size; ++c)
                acc[r][c] = alg.conj(acc[r][c], w[r][c]);
    }
    return acc;
}

Vec initial_slot(const SlotDef& def, const Interpretation& itp, const Algebra& alg) {
    Vec acc(itp.domain_size, 1.0);
    for (const auto& name : def.predicates) {
        Vec v = itp.resolve_unary(name);
        check_domain(v, alg, "unary " + name);
        acc = conj_vecs(acc, v, alg);
    }
    return acc;
}

}  // namespace

PredicateVector join(const Mat& W, const PredicateVector& P, const Algebra& alg) {
    const std::size_t s = P.values.size();
    if (W.size() != s) throw EvalError("join: matrix/vector dimension mismatch");
    for (const auto& row : W)
        if (row.size() != s) throw EvalError("join: matrix is not square");
    check_domain(P.values, alg, "join input");
    for (const auto& row : W) check_domain(row, alg, "join matrix");

    PredicateVector out;
    out.provenance = P.provenance;
    out.values.resize(s);
    Vec terms(s);
    for (std::size_t r = 0; r < s; ++r) {
        for (std::size_t c = 0; c < s; ++c) terms[c] = alg.conj(W[r][c], P.values[c]);
        out.values[r] = alg.disj_reduce(terms);
    }
    return out;
}

PredicateVector execute(const JoinChainPlan& p, const Interpretation& itp,
                        const Algebra& alg, ExecTrace* trace) {
    itp.check_wellformed();
    if (alg.tag == Algebra::Tag::Boolean && !itp.is_boolean())
        throw EvalError("boolean algebra requires a 0/1 interpretation");

    std::map<std::string, Vec> slots;
    for (const auto& [id, def] : p.slots) slots[id] = initial_slot(def, itp, alg);
    if (trace) {
        *trace = {};
        trace->initial = slots;
    }

    for (const auto& layer : p.layers) {
        // Heads: one output column per served tree.
        std::map<std::string, std::map<int, Vec>> head_out;
        for (const auto& h : layer.heads) {
            Mat W = effective_matrix(h.edge_predicates, itp, alg);
            for (int m : h.trees) {
                auto it = slots.find(slot_id(m, h.child));
                if (it == slots.end())
                    throw EvalError("plan references missing slot " + slot_id(m, h.child));
                head_out[h.id][m] = join(W, {it->second, h.id}, alg).values;
            }
        }

        std::map<std::string, Vec> next;
        for (const auto& [target, entry] : layer.aggregation) {
            auto base = slots.find(entry.base_slot);
            if (base == slots.end())
                throw EvalError("plan references missing slot " + entry.base_slot);
            auto def = p.slots.find(target);
            if (def == p.slots.end())
                throw EvalError("aggregation target is not a declared slot: " + target);
            Vec acc = base->second;
            for (const auto& id : entry.head_ids) {
                auto hit = head_out.find(id);
                if (hit == head_out.end())
                    throw EvalError("aggregation references unknown head " + id);
                auto col = hit->second.find(def->second.tree);
                if (col == hit->second.end())
                    throw EvalError("head " + id + " has no output for tree " +
                                    std::to_string(def->second.tree));
                acc = conj_vecs(acc, col->second, alg);
            }
            next[target] = std::move(acc);
        }
        slots = std::move(next);
        if (trace) trace->layers.push_back({std::move(head_out), slots});
    }

    // Final stage: disjunction over trees of (root slot AND constant).
    PredicateVector out;
    out.provenance = "final";
    out.values.resize(itp.domain_size);
    std::vector<Vec> tree_parts;
    for (const auto& f : p.finals) {
        auto it = slots.find(f.slot);
        if (it == slots.end()) throw EvalError("final stage references missing slot " + f.slot);
        double q = itp.prop_value(f.q);
        Vec part(itp.domain_size);
        for (int s = 0; s < itp.domain_size; ++s) part[s] = alg.conj(it->second[s], q);
        tree_parts.push_back(std::move(part));
    }
    Vec terms(tree_parts.size());
    for (int s = 0; s < itp.domain_size; ++s) {
        for (std::size_t m = 0; m < tree_parts.size(); ++m) terms[m] = tree_parts[m][s];
        out.values[s] = alg.disj_reduce(terms);
    }
    return out;
}

std::vector<HeadView> attention_view(const JoinChainPlan& p, const Interpretation& itp,
                                     bool include_softmax) {
    const Algebra alg = Algebra::plain_sum();
    ExecTrace trace;
    execute(p, itp, alg, &trace);

    std::vector<HeadView> views;
    const std::map<std::string, Vec>* prev = &trace.initial;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        for (const auto& h : p.layers[l].heads) {
            Mat A = effective_matrix(h.edge_predicates, itp, alg);
            for (int m : h.trees) {
                HeadView v;
                v.head_id = h.id;
                v.tree = m;
                v.A = A;
                v.V = prev->at(slot_id(m, h.child));
                v.Z = trace.layers[l].head_outputs.at(h.id).at(m);
                if (include_softmax) {
                    Mat sm = A;
                    for (auto& row : sm) {
                        double mx = *std::max_element(row.begin(), row.end());
                        double sum = 0.0;
                        for (double& x : row) {
                            x = std::exp(x - mx);
                            sum += x;
                        }
                        for (double& x : row) x /= sum;
                    }
                    v.A_softmax = std::move(sm);
                }
                views.push_back(std::move(v));
            }
        }
        prev = &trace.layers[l].slots;
    }
    return views;
}

nlohmann::json ExecTrace::to_json() const {
    nlohmann::json j;
    j["initial"] = nlohmann::json::object();
    for (const auto& [id, v] : initial) j["initial"][id] = v;
    j["layers"] = nlohmann::json::array();
    for (const auto& layer : layers) {
        nlohmann::json jl;
        jl["heads"] = nlohmann::json::object();
        for (const auto& [id, cols] : layer.head_outputs) {
            nlohmann::json jc = nlohmann::json::object();
            for (const auto& [tree, v] : cols) jc[std::to_string(tree)] = v;
            jl["heads"][id] = std::move(jc);
        }
        jl["slots"] = nlohmann::json::object();
        for (const auto& [id, v] : layer.slots) jl["slots"][id] = v;
        j["layers"].push_back(std::move(jl));
    }
    return j;
}

KernelSpec KernelSpec::outer_conj(std::string a, std::string b) {
    KernelSpec k;
    k.kind = Kind::OuterConj;
    k.a = std::move(a);
    k.b = std::move(b);
    return k;
}

KernelSpec KernelSpec::dot_threshold(std::vector<std::string> names, double tau) {
    KernelSpec k;
    k.kind = Kind::DotThreshold;
    k.names = std::move(names);
    k.tau = tau;
    return k;
}

std::string KernelSpec::derived_name() const {
    if (kind == Kind::OuterConj) return "outer(" + a + "," + b + ")";
    std::string joined;
    for (const auto& n : names) {
        if (!joined.empty()) joined += "+";
        joined += n;
    }
    std::ostringstream tau_s;
    tau_s << tau;
    return "dot(" + joined + ">=" + tau_s.str() + ")";
}

Interpretation derive_binary(const KernelSpec& kernel, const Interpretation& itp) {
    Interpretation out = itp;
    const int s = itp.domain_size;
    Mat w(s, Vec(s, 0.0));
    if (kernel.kind == KernelSpec::Kind::OuterConj) {
        Vec pa = itp.resolve_unary(kernel.a);
        Vec pb = itp.resolve_unary(kernel.b);
        for (int x = 0; x < s; ++x)
            for (int y = 0; y < s; ++y) w[x][y] = pa[x] * pb[y];
    } else {
        if (!std::isfinite(kernel.tau)) throw EvalError("dot-threshold: tau is not finite");
        std::vector<Vec> feats;
        for (const auto& n : kernel.names) feats.push_back(itp.resolve_unary(n));
        for (int x = 0; x < s; ++x) {
            for (int y = 0; y < s; ++y) {
                double dot = 0.0;
                for (const auto& f : feats) dot += f[x] * f[y];
                w[x][y] = dot >= kernel.tau ? 1.0 : 0.0;
            }
        }
    }
    out.binary[kernel.derived_name()] = std::move(w);
    return out;
}

}  // namespace jcn

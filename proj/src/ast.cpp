#include "jcn/ast.hpp"

#include <map>
#include <sstream>

namespace jcn {

PredicateSignature infer_signature(const PrenexFormula& f) {
    PredicateSignature sig;
    for (const auto& d : f.disjuncts) {
        for (const auto& a : d.unary_atoms)
            if (a.predicate != kTautUnary) sig.unary_names.insert(a.predicate);
        for (const auto& a : d.binary_atoms)
            if (a.predicate != kTautBinary) sig.binary_names.insert(a.predicate);
        if (d.constant.kind == PropConst::Kind::Named)
            sig.prop_names.insert(d.constant.name);
    }
    return sig;
}

std::string render_variable(Variable v) {
    if (v.index == 0) return "x";
    return "y" + std::to_string(v.index);
}

static void render_disjunct(std::ostringstream& out, const Disjunct& d) {
    out << '(';
    bool first = true;
    auto sep = [&] {
        if (!first) out << " & ";
        first = false;
    };
    for (const auto& a : d.unary_atoms) {
        sep();
        out << a.predicate << '(' << render_variable(a.arg) << ')';
    }
    for (const auto& a : d.binary_atoms) {
        sep();
        out << a.predicate << '(' << render_variable(a.left) << ','
            << render_variable(a.right) << ')';
    }
    if (!d.constant.is_true() || first) {
        sep();
        switch (d.constant.kind) {
            case PropConst::Kind::True: out << "true"; break;
            case PropConst::Kind::False: out << "false"; break;
            case PropConst::Kind::Named: out << '$' << d.constant.name; break;
        }
    }
    out << ')';
}

std::string render_formula(const PrenexFormula& f) {
    std::ostringstream out;
    out << f.name << "(x) := ";
    if (f.num_quantified > 0) {
        out << "exists";
        for (int t = 1; t <= f.num_quantified; ++t) out << " y" << t;
        out << ' ';
    }
    out << ". ";
    for (std::size_t m = 0; m < f.disjuncts.size(); ++m) {
        if (m > 0) out << " | ";
        render_disjunct(out, f.disjuncts[m]);
    }
    return out.str();
}

namespace {

void check_var(std::vector<Diagnostic>& out, const PrenexFormula& f, int m,
               Variable v, const std::string& where) {
    if (v.index < 0 || v.index > f.num_quantified) {
        out.push_back({Diagnostic::Severity::Error,
                       "disjunct " + std::to_string(m) + ": " + where +
                           " uses y" + std::to_string(v.index) +
                           " outside 0..T (T=" + std::to_string(f.num_quantified) + ")",
                       m});
    }
}

std::string atom_text(const BinaryAtom& a) {
    return a.predicate + "(" + render_variable(a.left) + "," +
           render_variable(a.right) + ")";
}

}  // namespace

std::vector<Diagnostic> validate(const PrenexFormula& f) {
    std::vector<Diagnostic> out;

    // Arity consistency over actual usage, including the reserved names.
    std::map<std::string, int> arity;  // name -> first seen arity
    auto check_arity = [&](const std::string& name, int ar, int m) {
        int expected = ar;
        if (name == kTautUnary) expected = 1;
        if (name == kTautBinary) expected = 2;
        if (expected != ar) {
            out.push_back({Diagnostic::Severity::Error,
                           "disjunct " + std::to_string(m) + ": reserved name " + name +
                               " used with arity " + std::to_string(ar),
                           m});
            return;
        }
        auto [it, fresh] = arity.emplace(name, ar);
        if (!fresh && it->second != ar) {
            out.push_back({Diagnostic::Severity::Error,
                           "disjunct " + std::to_string(m) + ": predicate " + name +
                               " used with arity " + std::to_string(ar) + " and " +
                               std::to_string(it->second),
                           m});
        }
    };

    for (std::size_t m = 0; m < f.disjuncts.size(); ++m) {
        const auto& d = f.disjuncts[m];
        for (const auto& a : d.unary_atoms) {
            check_var(out, f, static_cast<int>(m), a.arg, a.predicate + "(...)");
            check_arity(a.predicate, 1, static_cast<int>(m));
            if (!f.signature.is_unary(a.predicate))
                out.push_back({Diagnostic::Severity::Error,
                               "disjunct " + std::to_string(m) + ": " + a.predicate +
                                   " not declared as a unary predicate",
                               static_cast<int>(m)});
        }
        for (const auto& a : d.binary_atoms) {
            check_var(out, f, static_cast<int>(m), a.left, atom_text(a));
            check_var(out, f, static_cast<int>(m), a.right, atom_text(a));
            check_arity(a.predicate, 2, static_cast<int>(m));
            if (a.left.index >= a.right.index)
                out.push_back({Diagnostic::Severity::Error,
                               "disjunct " + std::to_string(m) + ": " + atom_text(a) +
                                   " violates the parent<child orientation",
                               static_cast<int>(m)});
            if (!f.signature.is_binary(a.predicate))
                out.push_back({Diagnostic::Severity::Error,
                               "disjunct " + std::to_string(m) + ": " + a.predicate +
                                   " not declared as a binary predicate",
                               static_cast<int>(m)});
        }
    }

    // Signature hygiene: disjoint name sets, reserved names not redeclared
    // with the wrong arity.
    const auto& sig = f.signature;
    for (const auto& n : sig.unary_names)
        if (sig.binary_names.count(n) || sig.prop_names.count(n))
            out.push_back({Diagnostic::Severity::Error,
                           "signature: " + n + " declared with more than one arity", -1});
    for (const auto& n : sig.binary_names)
        if (sig.prop_names.count(n))
            out.push_back({Diagnostic::Severity::Error,
                           "signature: " + n + " declared with more than one arity", -1});
    if (sig.binary_names.count(std::string(kTautUnary)) ||
        sig.prop_names.count(std::string(kTautUnary)))
        out.push_back({Diagnostic::Severity::Error,
                       "signature: reserved name TAUT1 is unary", -1});
    if (sig.unary_names.count(std::string(kTautBinary)) ||
        sig.prop_names.count(std::string(kTautBinary)))
        out.push_back({Diagnostic::Severity::Error,
                       "signature: reserved name TAUT2 is binary", -1});

    return out;
}

}  // namespace jcn

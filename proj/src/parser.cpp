#include "jcn/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace jcn {

namespace {

enum class Tok { Ident, Var, LParen, RParen, Comma, Amp, Pipe, Dot, Assign, Dollar, End };

struct Token {
    Tok kind;
    std::string text;  // ident name or var spelling
    int var_index = -1;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src_[pos_];
        switch (c) {
            case '(': advance(); t.kind = Tok::LParen; return t;
            case ')': advance(); t.kind = Tok::RParen; return t;
            case ',': advance(); t.kind = Tok::Comma; return t;
            case '&': advance(); t.kind = Tok::Amp; return t;
            case '|': advance(); t.kind = Tok::Pipe; return t;
            case '.': advance(); t.kind = Tok::Dot; return t;
            case '$': advance(); t.kind = Tok::Dollar; return t;
            case ':':
                advance();
                if (pos_ >= src_.size() || src_[pos_] != '=')
                    throw ParseError(t.line, t.col, "expected ':='");
                advance();
                t.kind = Tok::Assign;
                return t;
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                word += src_[pos_];
                advance();
            }
            // Variable spellings: "x" or "y" followed only by digits.
            if (word == "x") {
                t.kind = Tok::Var;
                t.var_index = 0;
                t.text = word;
                return t;
            }
            if (word.size() > 1 && word[0] == 'y' &&
                word.find_first_not_of("0123456789", 1) == std::string::npos) {
                t.kind = Tok::Var;
                try {
                    t.var_index = std::stoi(word.substr(1));
                } catch (const std::out_of_range&) {
                    throw ParseError(t.line, t.col, "variable index too large: " + word);
                }
                t.text = word;
                return t;
            }
            t.kind = Tok::Ident;
            t.text = word;
            return t;
        }
        throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
    }

private:
    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, const ParseOptions& opts) : lex_(src), opts_(opts) {
        bump();
    }

    ParseResult run() {
        ParseResult res;
        PrenexFormula& f = res.formula;

        f.name = expect_ident("formula name");
        expect(Tok::LParen, "'('");
        Token head = expect(Tok::Var, "the free variable 'x'");
        if (head.var_index != 0)
            throw ParseError(head.line, head.col, "formula head must be applied to x");
        expect(Tok::RParen, "')'");
        expect(Tok::Assign, "':='");

        // Quantifier prefix: must declare exactly y1..yT.
        if (cur_.kind == Tok::Ident && cur_.text == "exists") {
            Token kw = cur_;
            bump();
            std::set<int> declared;
            while (cur_.kind == Tok::Var) {
                if (cur_.var_index == 0)
                    throw ParseError(cur_.line, cur_.col,
                                     "the free variable x (y0) cannot be quantified");
                if (!declared.insert(cur_.var_index).second)
                    throw ParseError(cur_.line, cur_.col,
                                     "duplicate quantified variable " + cur_.text);
                bump();
            }
            if (declared.empty())
                throw ParseError(kw.line, kw.col, "'exists' needs at least one variable");
            f.num_quantified = *declared.rbegin();
            if (static_cast<int>(declared.size()) != f.num_quantified)
                throw ParseError(kw.line, kw.col,
                                 "quantifier list must be exactly y1..yT with no gaps");
        }

        expect(Tok::Dot, "'.'");

        f.disjuncts.push_back(parse_disjunct(f, res.warnings));
        while (cur_.kind == Tok::Pipe) {
            bump();
            f.disjuncts.push_back(parse_disjunct(f, res.warnings));
        }
        if (cur_.kind != Tok::End)
            throw ParseError(cur_.line, cur_.col, "trailing input after formula");

        f.signature = infer_signature(f);
        return res;
    }

private:
    Disjunct parse_disjunct(const PrenexFormula& f, std::vector<Diagnostic>& warnings) {
        Disjunct d;
        bool have_named_const = false;
        bool have_any_term = false;
        expect(Tok::LParen, "'('");
        for (;;) {
            parse_term(f, d, have_named_const, warnings);
            have_any_term = true;
            if (cur_.kind == Tok::Amp) {
                bump();
                continue;
            }
            break;
        }
        Token close = expect(Tok::RParen, "')' or '&'");
        if (!have_any_term)
            throw ParseError(close.line, close.col, "empty disjunct");
        return d;
    }

    void parse_term(const PrenexFormula& f, Disjunct& d, bool& have_named_const,
                    std::vector<Diagnostic>& warnings) {
        int m = static_cast<int>(f.disjuncts.size());
        if (cur_.kind == Tok::Dollar) {
            bump();
            Token name = expect(Tok::Ident, "propositional constant name");
            merge_const(d, PropConst::named(name.text), have_named_const, name);
            return;
        }
        if (cur_.kind == Tok::Ident && (cur_.text == "true" || cur_.text == "false")) {
            Token lit = cur_;
            bump();
            merge_const(d, PropConst::literal(lit.text == "true"), have_named_const, lit);
            return;
        }
        Token name = expect(Tok::Ident, "a predicate, 'true', 'false' or '$name'");
        expect(Tok::LParen, "'('");
        Token v1 = parse_var(f);
        if (cur_.kind == Tok::Comma) {
            bump();
            Token v2 = parse_var(f);
            expect(Tok::RParen, "')'");
            note_arity(name, 2);
            std::string pred = name.text;
            int left = v1.var_index, right = v2.var_index;
            if (left == right)
                throw ParseError(name.line, name.col,
                                 pred + "(" + v1.text + "," + v2.text +
                                     "): both arguments are the same variable");
            if (left > right) {
                if (!opts_.reorient)
                    throw ParseError(name.line, name.col,
                                     pred + "(" + v1.text + "," + v2.text +
                                         ") violates the parent<child orientation "
                                         "(use --reorient to swap)");
                std::swap(left, right);
                pred += "_rev";
                note_arity({Tok::Ident, pred, -1, name.line, name.col}, 2);
                warnings.push_back({Diagnostic::Severity::Warning,
                                    "reoriented " + name.text + "(" + v1.text + "," +
                                        v2.text + ") to " + pred + "(" +
                                        render_variable({left}) + "," +
                                        render_variable({right}) + ")",
                                    m});
            }
            d.binary_atoms.push_back({pred, {left}, {right}});
        } else {
            expect(Tok::RParen, "',' or ')'");
            note_arity(name, 1);
            d.unary_atoms.push_back({name.text, {v1.var_index}});
        }
    }

    Token parse_var(const PrenexFormula& f) {
        Token v = expect(Tok::Var, "a variable");
        if (v.var_index > f.num_quantified)
            throw ParseError(v.line, v.col,
                             v.text + " is not declared (T=" +
                                 std::to_string(f.num_quantified) + ")");
        return v;
    }

    // Folds a constant term into the disjunct: literal true is the identity,
    // literal false absorbs, and at most one distinct name may appear.
    void merge_const(Disjunct& d, PropConst c, bool& have_named_const, const Token& at) {
        if (c.is_true()) return;
        if (d.constant.is_false()) return;
        if (c.is_false()) {
            d.constant = c;
            return;
        }
        if (have_named_const && d.constant.name != c.name)
            throw ParseError(at.line, at.col,
                             "a disjunct may carry at most one named constant "
                             "(already has $" + d.constant.name + ")");
        have_named_const = true;
        d.constant = std::move(c);
    }

    void note_arity(const Token& name, int ar) {
        int expected = ar;
        if (name.text == kTautUnary) expected = 1;
        if (name.text == kTautBinary) expected = 2;
        if (expected != ar)
            throw ParseError(name.line, name.col,
                             "reserved name " + name.text + " has arity " +
                                 std::to_string(expected));
        auto [it, fresh] = arity_.emplace(name.text, ar);
        if (!fresh && it->second != ar)
            throw ParseError(name.line, name.col,
                             name.text + " already used with arity " +
                                 std::to_string(it->second));
    }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind)
            throw ParseError(cur_.line, cur_.col,
                             std::string("expected ") + what + here());
        Token t = cur_;
        bump();
        return t;
    }

    std::string expect_ident(const char* what) { return expect(Tok::Ident, what).text; }

    std::string here() const {
        switch (cur_.kind) {
            case Tok::End: return " before end of input";
            case Tok::Ident:
            case Tok::Var: return ", got '" + cur_.text + "'";
            default: return "";
        }
    }

    void bump() { cur_ = lex_.next(); }

    Lexer lex_;
    ParseOptions opts_;
    Token cur_;
    std::map<std::string, int> arity_;
};

}  // namespace

ParseResult parse_formula(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).run();
}

}  // namespace jcn

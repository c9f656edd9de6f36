#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jcn/ast.hpp"

namespace jcn {

/// Positioned parse failure. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                             ": " + msg),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

struct ParseOptions {
    /// When a binary atom has left > right, swap the arguments and rename
    /// the predicate to "<name>_rev" instead of rejecting; the swap is
    /// recorded as a warning. left == right is always an error.
    bool reorient = false;
};

struct ParseResult {
    PrenexFormula formula;
    std::vector<Diagnostic> warnings;
};

/// Parses one formula from DSL text. Grammar:
///
///   formula  = ident "(" "x" ")" ":=" [ "exists" var+ ] "." body
///   body     = disjunct { "|" disjunct }
///   disjunct = "(" term { "&" term } ")"
///   term     = ident "(" var ")" | ident "(" var "," var ")"
///            | "true" | "false" | "$" ident
///   var      = "x" | "y" digit+
///
/// "#" starts a comment running to end of line. The quantifier list must
/// declare exactly y1..yT (in any order, no duplicates); "x" aliases y0
/// and may never be quantified. T and M and the signature are inferred.
/// Throws ParseError on any malformed input.
ParseResult parse_formula(std::string_view text, const ParseOptions& opts = {});

}  // namespace jcn

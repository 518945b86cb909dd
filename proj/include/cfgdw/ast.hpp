#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfgdw {

// Abstract syntax of the structured mini-language:
//
//   program := stmt*
//   stmt    := IDENT ';'
//            | 'if' cond block ('else' (block | if-stmt))?
//            | 'while' cond block
//            | 'do' block 'while' cond ';'
//            | 'break' ';' | 'continue' ';' | 'return' ';'
//            | block
//   block   := '{' stmt* '}'
//   cond    := IDENT | '1' | '(' (IDENT | '1') ')'
//
// `//` starts a comment that runs to the end of the line. A loop condition
// of `1` is constant true: the loop has no fall-through exit.

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Assign {
    std::string label;
};
struct Sequence {
    std::vector<StmtPtr> body;
};
struct If {
    std::string cond;
    StmtPtr then_branch;                 // always a Sequence
    StmtPtr else_branch;                 // Sequence or null
};
struct While {
    std::string cond;                    // "1" for constant true
    StmtPtr body;
};
struct DoWhile {
    StmtPtr body;
    std::string cond;
};
struct Break {};
struct Continue {};
struct Return {};

struct Stmt {
    int id = 0;                          // preorder, source order
    int line = 0;
    int column = 0;
    std::variant<Assign, Sequence, If, While, DoWhile, Break, Continue, Return> node;
};

struct StructuredAst {
    StmtPtr root;                        // a Sequence
    int num_nodes = 0;
};

inline bool is_constant_true(std::string_view cond) { return cond == "1"; }

/// Parses source text. Throws ParseError with line/column on syntax errors and
/// on break/continue outside any loop.
StructuredAst parse_program(std::string_view source);

/// Canonical one-line rendering, e.g. `Sequence[While(c, Sequence[Assign(b)])]`.
std::string to_string(const Stmt& stmt);

/// Number of statement nodes (everything except Sequence).
int count_statements(const Stmt& stmt);

} // namespace cfgdw

#include "cfgdw/ast.hpp"
#include "cfgdw/error.hpp"

#include <cctype>

namespace cfgdw {
namespace {

enum class Tok { Ident, Number, Semi, LBrace, RBrace, LParen, RParen, If, Else, While, Do, Break, Continue, Return, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Semi: return "';'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::If: return "'if'";
    case Tok::Else: return "'else'";
    case Tok::While: return "'while'";
    case Tok::Do: return "'do'";
    case Tok::Break: return "'break'";
    case Tok::Continue: return "'continue'";
    case Tok::Return: return "'return'";
    case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            std::string word(src.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "if") k = Tok::If;
            else if (word == "else") k = Tok::Else;
            else if (word == "while") k = Tok::While;
            else if (word == "do") k = Tok::Do;
            else if (word == "break") k = Tok::Break;
            else if (word == "continue") k = Tok::Continue;
            else if (word == "return") k = Tok::Return;
            out.push_back({k, std::move(word), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        Tok k;
        switch (c) {
        case ';': k = Tok::Semi; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
        }
        out.push_back({k, std::string(1, c), tl, tc});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    StructuredAst program() {
        auto root = make(peek(), Sequence{});
        auto& seq = std::get<Sequence>(root->node);
        while (peek().kind != Tok::End) seq.body.push_back(statement());
        return {std::move(root), next_id_};
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    const Token& expect(Tok k) {
        const Token& t = peek();
        if (t.kind != k)
            throw ParseError(std::string("expected ") + describe(k) + ", found " + describe(t.kind), t.line, t.column);
        return take();
    }

    template <class Node>
    StmtPtr make(const Token& at, Node n) {
        auto s = std::make_unique<Stmt>();
        s->id = next_id_++;
        s->line = at.line;
        s->column = at.column;
        s->node = std::move(n);
        return s;
    }

    std::string cond() {
        bool paren = peek().kind == Tok::LParen;
        if (paren) take();
        const Token& t = peek();
        std::string text;
        if (t.kind == Tok::Ident) {
            text = take().text;
        } else if (t.kind == Tok::Number && t.text == "1") {
            text = take().text;
        } else {
            throw ParseError(std::string("expected condition, found ") + describe(t.kind), t.line, t.column);
        }
        if (paren) expect(Tok::RParen);
        return text;
    }

    StmtPtr block() {
        const Token& open = expect(Tok::LBrace);
        auto s = make(open, Sequence{});
        auto& seq = std::get<Sequence>(s->node);
        while (peek().kind != Tok::RBrace) {
            if (peek().kind == Tok::End) throw ParseError("unterminated block", open.line, open.column);
            seq.body.push_back(statement());
        }
        take();
        return s;
    }

    StmtPtr if_statement() {
        const Token& kw = take();
        auto s = make(kw, If{});
        auto& node = std::get<If>(s->node);
        node.cond = cond();
        node.then_branch = block();
        if (peek().kind == Tok::Else) {
            const Token& e = take();
            if (peek().kind == Tok::If) {
                auto seq = make(e, Sequence{});
                std::get<Sequence>(seq->node).body.push_back(if_statement());
                node.else_branch = std::move(seq);
            } else {
                node.else_branch = block();
            }
        }
        return s;
    }

    StmtPtr statement() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Ident: {
            auto s = make(t, Assign{take().text});
            expect(Tok::Semi);
            return s;
        }
        case Tok::If:
            return if_statement();
        case Tok::While: {
            auto s = make(take(), While{});
            auto& node = std::get<While>(s->node);
            node.cond = cond();
            ++loop_depth_;
            node.body = block();
            --loop_depth_;
            return s;
        }
        case Tok::Do: {
            auto s = make(take(), DoWhile{});
            auto& node = std::get<DoWhile>(s->node);
            ++loop_depth_;
            node.body = block();
            --loop_depth_;
            expect(Tok::While);
            node.cond = cond();
            expect(Tok::Semi);
            return s;
        }
        case Tok::Break:
        case Tok::Continue: {
            if (loop_depth_ == 0)
                throw ParseError(std::string(t.kind == Tok::Break ? "break" : "continue") + " outside loop", t.line,
                                 t.column);
            bool brk = t.kind == Tok::Break;
            StmtPtr s = brk ? make(take(), Break{}) : make(take(), Continue{});
            expect(Tok::Semi);
            return s;
        }
        case Tok::Return: {
            auto s = make(take(), Return{});
            expect(Tok::Semi);
            return s;
        }
        case Tok::LBrace:
            return block();
        default:
            throw ParseError(std::string("expected statement, found ") + describe(t.kind), t.line, t.column);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int next_id_ = 0;
    int loop_depth_ = 0;
};

void render(const Stmt& s, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>) {
                out += "Assign(" + n.label + ")";
            } else if constexpr (std::is_same_v<T, Sequence>) {
                out += "Sequence[";
                for (std::size_t i = 0; i < n.body.size(); ++i) {
                    if (i) out += ", ";
                    render(*n.body[i], out);
                }
                out += "]";
            } else if constexpr (std::is_same_v<T, If>) {
                out += "If(" + n.cond + ", ";
                render(*n.then_branch, out);
                if (n.else_branch) {
                    out += ", ";
                    render(*n.else_branch, out);
                }
                out += ")";
            } else if constexpr (std::is_same_v<T, While>) {
                out += "While(" + n.cond + ", ";
                render(*n.body, out);
                out += ")";
            } else if constexpr (std::is_same_v<T, DoWhile>) {
                out += "DoWhile(";
                render(*n.body, out);
                out += ", " + n.cond + ")";
            } else if constexpr (std::is_same_v<T, Break>) {
                out += "Break";
            } else if constexpr (std::is_same_v<T, Continue>) {
                out += "Continue";
            } else {
                out += "Return";
            }
        },
        s.node);
}

} // namespace

StructuredAst parse_program(std::string_view source) { return Parser(lex(source)).program(); }

std::string to_string(const Stmt& stmt) {
    std::string out;
    render(stmt, out);
    return out;
}

int count_statements(const Stmt& stmt) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Sequence>) {
                int c = 0;
                for (const auto& s : n.body) c += count_statements(*s);
                return c;
            } else if constexpr (std::is_same_v<T, If>) {
                return 1 + count_statements(*n.then_branch) + (n.else_branch ? count_statements(*n.else_branch) : 0);
            } else if constexpr (std::is_same_v<T, While> || std::is_same_v<T, DoWhile>) {
                return 1 + count_statements(*n.body);
            } else {
                return 1;
            }
        },
        stmt.node);
}

} // namespace cfgdw

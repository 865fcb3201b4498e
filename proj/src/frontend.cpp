#include "lambdag/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace lambdag {

namespace {

const std::set<std::string> kKeywords{"atom", "const", "rule", "main", "if",  "then",
                                      "else", "true",  "false", "efq", "bot", "top"};
const std::vector<std::string> kBuiltinAtoms{"Bool", "Nat", "String"};

// --- lexer --------------------------------------------------------------

enum class Tok { Ident, Int, String, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#'; }

std::vector<Token> lex(std::string_view src) {
    static const std::vector<std::string> syms{"->", "/\\", "||", "=>", "\\", ":", ".", "(", ")", "<",
                                               ">",  ",",   "[",  "]",  "~",  "=", ";"};
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, col = 1;
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
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            t.kind = Tok::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Tok::Int;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '"') {
            advance(1);
            std::string s;
            for (;;) {
                if (i >= src.size() || src[i] == '\n') throw ParseError(t.line, t.col, "unterminated string literal");
                char d = src[i];
                if (d == '"') {
                    advance(1);
                    break;
                }
                if (d == '\\') {
                    if (i + 1 >= src.size()) throw ParseError(line, col, "unterminated escape");
                    char e = src[i + 1];
                    switch (e) {
                        case 'n': s += '\n'; break;
                        case 't': s += '\t'; break;
                        case '\\': s += '\\'; break;
                        case '"': s += '"'; break;
                        default: throw ParseError(line, col, std::string("unknown escape \\") + e);
                    }
                    advance(2);
                    continue;
                }
                s += d;
                advance(1);
            }
            t.kind = Tok::String;
            t.text = std::move(s);
        } else {
            bool matched = false;
            for (const auto& s : syms) {
                if (src.substr(i, s.size()) == s) {
                    t.kind = Tok::Sym;
                    t.text = s;
                    advance(s.size());
                    matched = true;
                    break;
                }
            }
            if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// --- raw syntax ---------------------------------------------------------

// Parsed before name resolution: a channel is used in the left branch before
// its annotation is read.
struct Raw {
    TermKind kind = TermKind::Var;
    std::string name;
    Formula f1, f2;
    int idx = 0;
    std::vector<Raw> kids;
    int line = 0, col = 0;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::set<std::string>* atoms, bool any_atom)
        : toks_(std::move(toks)), atoms_(atoms), any_atom_(any_atom) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::End; }
    bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    bool is_kw(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }

    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    void expect_sym(const char* s) {
        if (!is_sym(s)) fail(std::string("expected '") + s + "'" + found());
        next();
    }
    void expect_kw(const char* s) {
        if (!is_kw(s)) fail(std::string("expected '") + s + "'" + found());
        next();
    }
    std::string found() const {
        if (at_end()) return " but reached end of input";
        return " but found '" + peek().text + "'";
    }

    Token ident(const char* what) {
        if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail(std::string("expected ") + what + found());
        return next();
    }

    // formula := and ('->' formula)?
    Formula formula() {
        Formula lhs = conj();
        if (is_sym("->")) {
            next();
            return Formula::impl(lhs, formula());
        }
        return lhs;
    }
    Formula conj() {
        Formula lhs = unary();
        if (is_sym("/\\")) {
            next();
            return Formula::conj(lhs, conj());
        }
        return lhs;
    }
    Formula unary() {
        if (is_sym("~")) {
            next();
            return Formula::neg(unary());
        }
        if (is_kw("bot")) {
            next();
            return Formula::bot();
        }
        if (is_kw("top")) {
            next();
            return Formula::top();
        }
        if (is_sym("(")) {
            next();
            Formula f = formula();
            expect_sym(")");
            return f;
        }
        Token t = ident("a formula");
        if (!any_atom_ && !atoms_->count(t.text)) fail_at(t, "undeclared atom '" + t.text + "'");
        return Formula::atom(t.text);
    }

    // term := seq ('||' '[' IDENT ':' F '~' F ']' term)?
    Raw term() {
        Raw left = seq();
        if (!is_sym("||")) return left;
        next();
        expect_sym("[");
        Token a = ident("a channel name");
        expect_sym(":");
        Formula k1 = formula();
        expect_sym("~");
        Formula k2 = formula();
        expect_sym("]");
        Raw right = term();
        return Raw{TermKind::Par, a.text, k1, k2, 0, {std::move(left), std::move(right)}, a.line, a.col};
    }

    Raw seq() {
        if (is_sym("\\")) {
            next();
            Token x = ident("a binder name");
            expect_sym(":");
            Formula f = formula();
            expect_sym(".");
            Raw body = term();
            return Raw{TermKind::Lam, x.text, f, {}, 0, {std::move(body)}, x.line, x.col};
        }
        if (is_kw("if")) {
            Token kw = next();
            Raw c = term();
            expect_kw("then");
            Raw a = term();
            expect_kw("else");
            Raw b = term();
            return Raw{TermKind::Ite, {}, {}, {}, 0, {std::move(c), std::move(a), std::move(b)}, kw.line, kw.col};
        }
        if (is_kw("efq")) {
            Token kw = next();
            expect_sym("[");
            Formula f = formula();
            expect_sym("]");
            Raw operand = app();
            return Raw{TermKind::Efq, {}, f, {}, 0, {std::move(operand)}, kw.line, kw.col};
        }
        return app();
    }

    bool starts_postfix() const {
        const Token& t = peek();
        if (t.kind == Tok::Int || t.kind == Tok::String) return true;
        if (t.kind == Tok::Ident) return !kKeywords.count(t.text) || t.text == "true" || t.text == "false";
        return is_sym("(") || is_sym("<");
    }

    Raw app() {
        if (!starts_postfix()) fail("expected a term" + found());
        Raw acc = postfix();
        while (starts_postfix()) {
            Raw arg = postfix();
            int l = acc.line, c = acc.col;
            acc = Raw{TermKind::App, {}, {}, {}, 0, {std::move(acc), std::move(arg)}, l, c};
        }
        return acc;
    }

    Raw postfix() {
        Raw acc = atom();
        while (is_sym(".") && peek(1).kind == Tok::Int && (peek(1).text == "0" || peek(1).text == "1")) {
            next();
            int ix = next().text == "1" ? 1 : 0;
            int l = acc.line, c = acc.col;
            acc = Raw{TermKind::Proj, {}, {}, {}, ix, {std::move(acc)}, l, c};
        }
        return acc;
    }

    Raw atom() {
        Token t = next();
        switch (t.kind) {
            case Tok::Int: return Raw{TermKind::NatLit, t.text, {}, {}, 0, {}, t.line, t.col};
            case Tok::String: return Raw{TermKind::StrLit, t.text, {}, {}, 0, {}, t.line, t.col};
            case Tok::Ident:
                if (t.text == "true" || t.text == "false")
                    return Raw{TermKind::BoolLit, {}, {}, {}, t.text == "true", {}, t.line, t.col};
                return Raw{TermKind::Var, t.text, {}, {}, 0, {}, t.line, t.col};
            case Tok::Sym:
                if (t.text == "(") {
                    Raw r = term();
                    expect_sym(")");
                    return r;
                }
                if (t.text == "<") {
                    Raw a = term();
                    expect_sym(",");
                    Raw b = term();
                    expect_sym(">");
                    return Raw{TermKind::Pair, {}, {}, {}, 0, {std::move(a), std::move(b)}, t.line, t.col};
                }
                break;
            case Tok::End: break;
        }
        fail_at(t, "expected a term but found '" + t.text + "'");
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string>* atoms_;
    bool any_atom_;
};

// --- elaboration --------------------------------------------------------

class Elaborator {
public:
    explicit Elaborator(const std::map<std::string, Formula>& consts) : consts_(consts) {}

    Term run(const Raw& r) { return go(r); }

private:
    const std::map<std::string, Formula>& consts_;
    std::vector<TypedVar> scope_;

    void check_binder(const Raw& r) {
        if (consts_.count(r.name))
            throw ParseError(r.line, r.col, "binder '" + r.name + "' shadows a declared constant");
    }

    Term bind(const Raw& body, const std::string& name, const Formula& type) {
        scope_.emplace_back(name, type);
        Term t = go(body);
        scope_.pop_back();
        return t;
    }

    Term go(const Raw& r) {
        switch (r.kind) {
            case TermKind::Var: {
                for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
                    if (it->first == r.name) return Term::var(r.name, it->second);
                auto c = consts_.find(r.name);
                if (c == consts_.end()) throw ParseError(r.line, r.col, "undeclared identifier '" + r.name + "'");
                return Term::var(r.name, c->second);
            }
            case TermKind::Lam:
                check_binder(r);
                return Term::lam(r.name, r.f1, bind(r.kids[0], r.name, r.f1));
            case TermKind::App: return Term::app(go(r.kids[0]), go(r.kids[1]));
            case TermKind::Pair: return Term::pair(go(r.kids[0]), go(r.kids[1]));
            case TermKind::Proj: return Term::proj(go(r.kids[0]), r.idx);
            case TermKind::Efq: return Term::efq(r.f1, go(r.kids[0]));
            case TermKind::Par: {
                check_binder(r);
                Term l = bind(r.kids[0], r.name, Formula::impl(r.f1, r.f2));
                Term rr = bind(r.kids[1], r.name, Formula::impl(r.f2, r.f1));
                return Term::par(r.name, r.f1, r.f2, std::move(l), std::move(rr));
            }
            case TermKind::BoolLit: return Term::boolean(r.idx != 0);
            case TermKind::NatLit: return Term::nat_text(r.name);
            case TermKind::StrLit: return Term::str(r.name);
            case TermKind::Ite: return Term::ite(go(r.kids[0]), go(r.kids[1]), go(r.kids[2]));
            case TermKind::Hole: break;
        }
        throw ParseError(r.line, r.col, "unsupported syntax");
    }
};

struct ProgramParser {
    Program prog;
    std::set<std::string> atoms{kBuiltinAtoms.begin(), kBuiltinAtoms.end()};
    std::map<std::string, Formula> consts;

    void parse(std::string_view src) {
        Parser p(lex(src), &atoms, false);
        bool have_main = false;
        while (!p.at_end()) {
            if (p.is_kw("atom")) {
                p.next();
                do {
                    Token a = p.ident("an atom name");
                    if (consts.count(a.text)) p.fail_at(a, "'" + a.text + "' is already a constant");
                    if (atoms.insert(a.text).second) prog.atoms.push_back(a.text);
                    else if (std::find(kBuiltinAtoms.begin(), kBuiltinAtoms.end(), a.text) == kBuiltinAtoms.end())
                        p.fail_at(a, "atom '" + a.text + "' declared twice");
                } while (p.is_sym(",") && (p.next(), true));
                p.expect_sym(";");
            } else if (p.is_kw("const")) {
                p.next();
                std::vector<Token> names;
                do {
                    names.push_back(p.ident("a constant name"));
                } while (p.is_sym(",") && (p.next(), true));
                p.expect_sym(":");
                Formula f = p.formula();
                p.expect_sym(";");
                for (const auto& n : names) {
                    if (consts.count(n.text) || atoms.count(n.text))
                        p.fail_at(n, "'" + n.text + "' declared twice");
                    consts.emplace(n.text, f);
                    prog.consts.emplace_back(n.text, f);
                }
            } else if (p.is_kw("rule")) {
                parse_rule(p);
            } else if (p.is_kw("main")) {
                Token kw = p.next();
                if (have_main) p.fail_at(kw, "main defined twice");
                p.expect_sym("=");
                Raw r = p.term();
                p.expect_sym(";");
                prog.main = Elaborator(consts).run(r);
                have_main = true;
            } else {
                p.fail("expected a declaration" + p.found());
            }
        }
        if (!have_main) p.fail("missing 'main = ...;'");
    }

    void parse_rule(Parser& p) {
        p.next();
        Token head = p.ident("a constant name");
        auto c = consts.find(head.text);
        if (c == consts.end()) p.fail_at(head, "rule head '" + head.text + "' is not a declared constant");
        DeltaRule rule{head.text, c->second, {}, {}};
        Formula cur = c->second;
        while (!p.is_sym("=>")) {
            Token t = p.peek();
            Raw r = p.atom();
            if (r.kind == TermKind::Pair || (r.kind == TermKind::Var && !consts.count(r.name)) || !r.kids.empty())
                p.fail_at(t, "rule patterns must be literals or constants");
            Term arg = Elaborator(consts).run(r);
            if (!cur.is_impl()) throw TypeError("rule '" + head.text + "' has too many arguments", {});
            Formula at = infer(prog.env(), arg);
            if (!(at == cur.lhs())) throw TypeError("rule '" + head.text + "' argument type mismatch", {}, cur.lhs(), at);
            cur = cur.rhs();
            rule.args.push_back(std::move(arg));
        }
        p.next();
        Raw rhs = p.term();
        p.expect_sym(";");
        rule.rhs = Elaborator(consts).run(rhs);
        Formula rt = infer(prog.env(), rule.rhs);
        if (!(rt == cur)) throw TypeError("rule '" + head.text + "' right side has the wrong type", {}, cur, rt);
        for (const auto& other : prog.rules)
            if (other.head == rule.head && other.args.size() == rule.args.size() &&
                std::equal(other.args.begin(), other.args.end(), rule.args.begin()))
                p.fail_at(head, "duplicate rule for '" + head.text + "'");
        prog.rules.push_back(std::move(rule));
    }
};

// --- printing -----------------------------------------------------------

enum Level { kTerm = 0, kSeq = 1, kApp = 2, kPostfix = 3, kAtom = 4 };

void print_formula(const Formula& f, int level, std::string& out) {
    switch (f.kind()) {
        case FormulaKind::Bot: out += "bot"; return;
        case FormulaKind::Atom: out += f.name(); return;
        case FormulaKind::Impl:
            if (level > 0) out += '(';
            print_formula(f.lhs(), 1, out);
            out += " -> ";
            print_formula(f.rhs(), 0, out);
            if (level > 0) out += ')';
            return;
        case FormulaKind::And:
            if (level > 1) out += '(';
            print_formula(f.lhs(), 2, out);
            out += " /\\ ";
            print_formula(f.rhs(), 1, out);
            if (level > 1) out += ')';
            return;
    }
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + '"';
}

void print_term(const Term& t, int level, std::string& out) {
    auto open = [&](int needed) {
        if (level > needed) out += '(';
    };
    auto close = [&](int needed) {
        if (level > needed) out += ')';
    };
    switch (t.kind()) {
        case TermKind::Var: out += t.name(); return;
        case TermKind::BoolLit: out += t.index() ? "true" : "false"; return;
        case TermKind::NatLit: out += t.name(); return;
        case TermKind::StrLit: out += quote(t.name()); return;
        case TermKind::Hole: out += "[]"; return;
        case TermKind::Pair:
            out += '<';
            print_term(t.child(0), kTerm, out);
            out += ", ";
            print_term(t.child(1), kTerm, out);
            out += '>';
            return;
        case TermKind::Proj:
            open(kPostfix);
            print_term(t.child(0), kPostfix, out);
            out += t.index() ? ".1" : ".0";
            close(kPostfix);
            return;
        case TermKind::App:
            open(kApp);
            print_term(t.child(0), kApp, out);
            out += ' ';
            print_term(t.child(1), kPostfix, out);
            close(kApp);
            return;
        case TermKind::Efq:
            open(kSeq);
            out += "efq[";
            print_formula(t.type(), 0, out);
            out += "] ";
            print_term(t.child(0), kApp, out);
            close(kSeq);
            return;
        case TermKind::Lam:
            open(kSeq);
            out += '\\' + t.name() + ':';
            print_formula(t.type(), 0, out);
            out += ". ";
            print_term(t.child(0), kTerm, out);
            close(kSeq);
            return;
        case TermKind::Ite:
            open(kSeq);
            out += "if ";
            print_term(t.child(0), kTerm, out);
            out += " then ";
            print_term(t.child(1), kTerm, out);
            out += " else ";
            print_term(t.child(2), kTerm, out);
            close(kSeq);
            return;
        case TermKind::Par: {
            open(kTerm);
            const Term& l = t.child(0);
            bool wrap = l.is(TermKind::Par) || l.is(TermKind::Lam) || l.is(TermKind::Ite);
            print_term(l, wrap ? kAtom : kSeq, out);
            out += " ||[" + t.name() + " : ";
            print_formula(t.type(), 0, out);
            out += " ~ ";
            print_formula(t.kind_right(), 0, out);
            out += "] ";
            print_term(t.child(1), kTerm, out);
            close(kTerm);
            return;
        }
    }
}

void collect_hash_names(const Term& t, std::vector<std::string>& order, std::set<std::string>& seen) {
    if ((t.is(TermKind::Var) || t.is(TermKind::Lam) || t.is(TermKind::Par)) && t.name().find('#') != std::string::npos &&
        seen.insert(t.name()).second)
        order.push_back(t.name());
    for (std::size_t i = 0; i < t.arity(); ++i) collect_hash_names(t.child(i), order, seen);
}

Term rename_all(const Term& t, const std::map<std::string, std::string>& m) {
    auto mapped = [&](const std::string& n) {
        auto it = m.find(n);
        return it == m.end() ? n : it->second;
    };
    switch (t.kind()) {
        case TermKind::Var: return m.count(t.name()) ? Term::var(mapped(t.name()), t.type()) : t;
        case TermKind::Lam: return Term::lam(mapped(t.name()), t.type(), rename_all(t.child(0), m));
        case TermKind::Par:
            return Term::par(mapped(t.name()), t.type(), t.kind_right(), rename_all(t.child(0), m),
                             rename_all(t.child(1), m));
        default: {
            Term out = t;
            for (std::size_t i = 0; i < t.arity(); ++i) out = out.with_child(i, rename_all(t.child(i), m));
            return out;
        }
    }
}

}  // namespace

TypeEnv Program::env() const {
    TypeEnv e;
    for (const auto& [n, f] : consts) e.emplace(n, f);
    return e;
}

Program parse_program(std::string_view src) {
    ProgramParser pp;
    pp.parse(src);
    return std::move(pp.prog);
}

Term parse_term(std::string_view src, const Program& ctx) {
    std::set<std::string> atoms{kBuiltinAtoms.begin(), kBuiltinAtoms.end()};
    atoms.insert(ctx.atoms.begin(), ctx.atoms.end());
    std::map<std::string, Formula> consts(ctx.consts.begin(), ctx.consts.end());
    Parser p(lex(src), &atoms, false);
    Raw r = p.term();
    if (!p.at_end()) p.fail("unexpected input after the term" + p.found());
    return Elaborator(consts).run(r);
}

Formula parse_formula(std::string_view src) {
    Parser p(lex(src), nullptr, true);
    Formula f = p.formula();
    if (!p.at_end()) p.fail("unexpected input after the formula" + p.found());
    return f;
}

std::string pretty(const Term& t) {
    std::string out;
    print_term(t, kTerm, out);
    return out;
}

std::string pretty_formula(const Formula& f) {
    std::string out;
    print_formula(f, 0, out);
    return out;
}

std::string pretty_program(const Program& p) {
    std::ostringstream os;
    if (!p.atoms.empty()) {
        os << "atom ";
        for (std::size_t i = 0; i < p.atoms.size(); ++i) os << (i ? ", " : "") << p.atoms[i];
        os << ";\n";
    }
    for (const auto& [n, f] : p.consts) os << "const " << n << " : " << pretty_formula(f) << ";\n";
    for (const auto& r : p.rules) {
        os << "rule " << r.head;
        for (const auto& a : r.args) {
            std::string s;
            print_term(a, kPostfix, s);
            os << ' ' << s;
        }
        os << " => " << pretty(r.rhs) << ";\n";
    }
    os << "main = " << pretty(p.main) << ";\n";
    return os.str();
}

Term canonical_fresh_names(const Term& t) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    collect_hash_names(t, order, seen);
    if (order.empty()) return t;
    std::map<std::string, std::string> m;
    std::map<std::string, int> counts;
    for (const auto& n : order) {
        std::string b = base_name(n);
        m[n] = b + "#" + std::to_string(++counts[b]);
    }
    return rename_all(t, m);
}

}  // namespace lambdag

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "mpvc/ast.hpp"

namespace mpvc {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Tok {
    enum class K { Ident, Num, Punct, End };
    K k = K::End;
    std::string s;
    Int num = 0;
    int line = 1, col = 1;
};

std::vector<Tok> lex(const std::string& src) {
    std::vector<Tok> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t n) {
        for (size_t j = 0; j < n; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    static const char* two[] = {"->", "==", "!=", "<=", ">=", "&&", "||", ".."};
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            int l0 = line, c0 = col;
            adv(2);
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) adv(1);
            if (i + 1 >= src.size()) throw Diagnostic(l0, c0, "unterminated comment");
            adv(2);
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.k = Tok::K::Ident;
            t.s = src.substr(i, j - i);
            adv(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            int base = 10;
            if (c == '0' && i + 1 < src.size() && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
                base = 16;
                j += 2;
            }
            Int v = 0;
            size_t start = j;
            while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) {
                int d = std::isdigit(static_cast<unsigned char>(src[j]))
                            ? src[j] - '0'
                            : std::tolower(static_cast<unsigned char>(src[j])) - 'a' + 10;
                if (d >= base) break;
                v = v * base + d;
                if (v > (Int(1) << 64)) throw Diagnostic(line, col, "integer literal too large");
                ++j;
            }
            if (j == start) throw Diagnostic(line, col, "malformed integer literal");
            while (j < src.size() && (src[j] == 'u' || src[j] == 'U' || src[j] == 'l' || src[j] == 'L')) ++j;
            t.k = Tok::K::Num;
            t.num = v;
            t.s = src.substr(i, j - i);
            adv(j - i);
        } else {
            t.k = Tok::K::Punct;
            for (auto* p : two)
                if (src.compare(i, 2, p) == 0) t.s = p;
            if (t.s.empty()) {
                if (std::string("+-*/%<>=!&|(){}[];,.").find(c) == std::string::npos)
                    throw Diagnostic(line, col, std::string("unexpected character '") + c + "'");
                t.s = std::string(1, c);
            }
            adv(t.s.size());
        }
        out.push_back(t);
    }
    Tok end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// Surface syntax

struct SExpr;
using SExprP = std::shared_ptr<SExpr>;

struct SExpr {
    enum class K { Num, Ident, Null, Nondet, Unary, Binary, Member, Arrow, Index };
    K k = K::Num;
    Int num = 0;
    std::string name;
    char op = 0;
    BinOp bop = BinOp::Add;
    SExprP a, b;
    int line = 0, col = 0;
};

struct SStmt;
using SStmtP = std::shared_ptr<SStmt>;

struct SStmt {
    enum class K { Assign, Assert, Assume, If, For, Entry };
    K k = K::Assign;
    SExprP lhs, e, lo, hi;
    std::string ivar;
    std::vector<SStmtP> then_b, else_b;
    int line = 0, col = 0;
};

const std::map<std::string, ArithKind>& builtin_types() {
    static const std::map<std::string, ArithKind> m = {
        {"i8", ArithKind::I8},       {"u8", ArithKind::U8},         {"i16", ArithKind::I16},
        {"u16", ArithKind::U16},     {"i32", ArithKind::I32},       {"u32", ArithKind::U32},
        {"i64", ArithKind::I64},     {"u64", ArithKind::U64},       {"int8_t", ArithKind::I8},
        {"uint8_t", ArithKind::U8},  {"int16_t", ArithKind::I16},   {"uint16_t", ArithKind::U16},
        {"int32_t", ArithKind::I32}, {"uint32_t", ArithKind::U32},  {"int64_t", ArithKind::I64},
        {"uint64_t", ArithKind::U64}, {"int", ArithKind::I32},      {"unsigned", ArithKind::U32},
        {"char", ArithKind::I8}};
    return m;
}

const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"typedef", "struct", "if",   "else",   "for",  "assert",
                                            "assume",  "entry",  "null", "NULL",   "nondet"};
    return k;
}

// ---------------------------------------------------------------------------
// Parser + elaborator

class Parser {
public:
    Parser(const std::string& src, const ParseOptions& opts) : toks_(lex(src)), opts_(opts) {}

    Program run() {
        std::vector<SStmtP> inits, body;
        bool seen_stmt = false;
        while (!at_end()) {
            if (starts_decl()) {
                if (seen_stmt) fail(peek(), "declarations must precede statements");
                declaration(inits);
            } else {
                seen_stmt = true;
                body.push_back(statement());
            }
        }
        for (auto& s : inits) elab_stmt(*s, "", prog_.body);
        for (auto& s : body) elab_stmt(*s, "", prog_.body);
        for (auto& s : prog_.body) collect(s);
        return std::move(prog_);
    }

private:
    std::vector<Tok> toks_;
    size_t pos_ = 0;
    ParseOptions opts_;
    Program prog_;
    std::map<std::string, TypeRef> types_;
    std::vector<std::pair<std::string, Int>> meta_;
    StmtId next_id_ = 1;
    std::map<const SExpr*, int> occ_;

    int occurrence(const SExpr& s) {
        auto it = occ_.find(&s);
        if (it != occ_.end()) return it->second;
        int id = static_cast<int>(occ_.size()) + 1;
        occ_[&s] = id;
        return id;
    }

    [[noreturn]] void fail(const Tok& t, const std::string& msg) { throw Diagnostic(t.line, t.col, msg); }
    [[noreturn]] void fail(int line, int col, const std::string& msg) { throw Diagnostic(line, col, msg); }

    const Tok& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().k == Tok::K::End; }
    bool is(const char* p, size_t k = 0) const {
        auto& t = peek(k);
        return (t.k == Tok::K::Punct || t.k == Tok::K::Ident) && t.s == p;
    }
    const Tok& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(const char* p) {
        if (!is(p)) return false;
        next();
        return true;
    }
    const Tok& expect(const char* p) {
        if (!is(p)) fail(peek(), std::string("expected '") + p + "'" + near());
        return next();
    }
    std::string near() const {
        auto& t = peek();
        if (t.k == Tok::K::End) return " at end of input";
        return " before '" + t.s + "'";
    }
    std::string ident() {
        auto& t = peek();
        if (t.k != Tok::K::Ident || keywords().count(t.s)) fail(t, "expected identifier" + near());
        return next().s;
    }

    bool is_type_name(const std::string& s) const { return builtin_types().count(s) || types_.count(s); }

    bool starts_decl() const {
        auto& t = peek();
        if (t.k != Tok::K::Ident) return false;
        return t.s == "typedef" || t.s == "struct" || (is_type_name(t.s) && prog_.var_index(t.s) < 0);
    }

    // --- declarations -------------------------------------------------------

    TypeRef lookup_type(const Tok& t) {
        auto b = builtin_types().find(t.s);
        if (b != builtin_types().end()) return arith_type(b->second);
        auto u = types_.find(t.s);
        if (u == types_.end()) fail(t, "unknown type '" + t.s + "'");
        return u->second;
    }

    void define_type(const Tok& at, const std::string& name, TypeRef t) {
        if (builtin_types().count(name) || keywords().count(name)) fail(at, "cannot redefine '" + name + "'");
        auto it = types_.find(name);
        if (it != types_.end()) {
            if (same_type(it->second, t)) return;
            fail(at, "conflicting definition of type '" + name + "'");
        }
        if (prog_.var_index(name) >= 0) fail(at, "'" + name + "' is already a variable");
        types_[name] = std::move(t);
    }

    TypeRef record_body(const Tok& at, const std::string& name) {
        expect("{");
        std::vector<Field> fields;
        std::set<std::string> seen;
        while (!accept("}")) {
            const Tok& st = peek();
            TypeRef base = type_spec(nullptr);
            do {
                const Tok& nt = peek();
                auto [fname, ft] = declarator(base);
                if (!seen.insert(fname).second) fail(nt, "duplicate field '" + fname + "'");
                fields.push_back({fname, "", ft, 0});
            } while (accept(","));
            expect(";");
            (void)st;
        }
        if (fields.empty()) fail(at, "record '" + name + "' has no fields");
        auto rec = record_type(name, std::move(fields));
        prog_.records.push_back(rec);
        return rec;
    }

    // Parses a type specifier. For `typedef struct {..} Alias` the alias is not yet known,
    // so anonymous records are named by the caller via `anon_name`.
    TypeRef type_spec(const std::string* anon_name) {
        const Tok& t = peek();
        if (accept("struct")) {
            if (is("{")) {
                if (!anon_name) fail(peek(), "anonymous struct needs a typedef name");
                if (types_.count(*anon_name)) fail(t, "conflicting definition of type '" + *anon_name + "'");
                auto rec = record_body(t, *anon_name);
                return rec;
            }
            const Tok& nt = peek();
            std::string name = ident();
            if (is("{")) {
                if (types_.count(name)) fail(nt, "redefinition of struct '" + name + "'");
                auto rec = record_body(nt, name);
                define_type(nt, name, rec);
                return rec;
            }
            auto it = types_.find(name);
            if (it == types_.end() || !it->second->is_record()) fail(nt, "unknown struct '" + name + "'");
            return it->second;
        }
        if (t.k != Tok::K::Ident) fail(t, "expected type" + near());
        next();
        return lookup_type(t);
    }

    std::pair<std::string, TypeRef> declarator(TypeRef base) {
        while (accept("*")) base = ptr_type(base);
        std::string name = ident();
        std::vector<Int> dims;
        while (accept("[")) {
            const Tok& nt = peek();
            if (nt.k != Tok::K::Num || nt.num <= 0) fail(nt, "array length must be a positive literal");
            dims.push_back(next().num);
            expect("]");
        }
        for (auto it = dims.rbegin(); it != dims.rend(); ++it) base = array_type(base, *it);
        return {name, base};
    }

    void declaration(std::vector<SStmtP>& inits) {
        const Tok& first = peek();
        if (accept("typedef")) {
            // The alias name follows the specifier; peek ahead for anonymous records.
            std::string alias;
            if (is("struct") && is("{", 1)) {
                size_t depth = 0, j = pos_ + 1;
                for (; j < toks_.size(); ++j) {
                    if (toks_[j].s == "{" && toks_[j].k == Tok::K::Punct) ++depth;
                    if (toks_[j].s == "}" && toks_[j].k == Tok::K::Punct && --depth == 0) break;
                }
                size_t k = j + 1;
                while (k < toks_.size() && toks_[k].s == "*") ++k;
                if (k < toks_.size() && toks_[k].k == Tok::K::Ident) alias = toks_[k].s;
                if (alias.empty()) fail(first, "typedef of anonymous struct needs a name");
            }
            TypeRef base = type_spec(alias.empty() ? nullptr : &alias);
            const Tok& at = peek();
            auto [name, t] = declarator(base);
            define_type(at, name, t);
            expect(";");
            return;
        }
        TypeRef base = type_spec(nullptr);
        if (accept(";")) {
            if (!base->is_record()) fail(first, "declaration declares nothing");
            return;
        }
        do {
            const Tok& at = peek();
            auto [name, t] = declarator(base);
            if (prog_.var_index(name) >= 0) fail(at, "duplicate variable '" + name + "'");
            if (is_type_name(name) || keywords().count(name)) fail(at, "'" + name + "' names a type");
            prog_.vars.push_back({name, t});
            if (accept("=")) {
                auto v = std::make_shared<SExpr>();
                v->k = SExpr::K::Ident;
                v->name = name;
                v->line = at.line;
                v->col = at.col;
                initializer(v, t, inits);
            }
        } while (accept(","));
        expect(";");
    }

    void initializer(const SExprP& target, const TypeRef& t, std::vector<SStmtP>& inits) {
        const Tok& at = peek();
        if (!accept("{")) {
            auto s = std::make_shared<SStmt>();
            s->k = SStmt::K::Assign;
            s->lhs = target;
            s->line = at.line;
            s->col = at.col;
            s->e = expr();
            inits.push_back(s);
            return;
        }
        size_t index = 0;
        while (!accept("}")) {
            const Tok& et = peek();
            auto sub = std::make_shared<SExpr>();
            sub->line = et.line;
            sub->col = et.col;
            sub->a = target;
            TypeRef st;
            if (accept(".")) {
                sub->k = SExpr::K::Member;
                sub->name = ident();
                if (!t->is_record() || !t->field(sub->name)) fail(et, "no field '" + sub->name + "'");
                st = t->field(sub->name)->type;
                expect("=");
            } else if (t->is_array()) {
                sub->k = SExpr::K::Index;
                auto n = std::make_shared<SExpr>();
                n->num = static_cast<Int>(index);
                sub->b = n;
                if (static_cast<Int>(index) >= t->length) fail(et, "too many initializers");
                st = t->elem;
            } else if (t->is_record()) {
                if (index >= t->fields.size()) fail(et, "too many initializers");
                sub->k = SExpr::K::Member;
                sub->name = t->fields[index].name;
                st = t->fields[index].type;
            } else {
                fail(et, "brace initializer for scalar");
            }
            ++index;
            initializer(sub, st, inits);
            if (!accept(",")) {
                expect("}");
                break;
            }
        }
    }

    // --- statements ---------------------------------------------------------

    std::vector<SStmtP> block() {
        expect("{");
        std::vector<SStmtP> out;
        while (!accept("}")) {
            if (at_end()) fail(peek(), "expected '}' at end of input");
            if (starts_decl()) fail(peek(), "declarations are only allowed at top level");
            out.push_back(statement());
        }
        return out;
    }

    SStmtP statement() {
        const Tok& t = peek();
        auto s = std::make_shared<SStmt>();
        s->line = t.line;
        s->col = t.col;
        if (accept("if")) {
            s->k = SStmt::K::If;
            expect("(");
            s->e = expr();
            expect(")");
            s->then_b = block();
            if (accept("else")) {
                if (is("if"))
                    s->else_b.push_back(statement());
                else
                    s->else_b = block();
            }
        } else if (accept("for")) {
            s->k = SStmt::K::For;
            s->ivar = ident();
            expect("in");
            s->lo = unary();
            expect("..");
            s->hi = unary();
            s->then_b = block();
        } else if (accept("assert") || accept("assume")) {
            s->k = t.s == "assert" ? SStmt::K::Assert : SStmt::K::Assume;
            expect("(");
            s->e = expr();
            expect(")");
            expect(";");
        } else if (accept("entry")) {
            s->k = SStmt::K::Entry;
            expect(";");
        } else {
            s->k = SStmt::K::Assign;
            s->lhs = unary();
            expect("=");
            s->e = expr();
            expect(";");
        }
        return s;
    }

    // --- expressions --------------------------------------------------------

    SExprP mk(SExpr::K k, const Tok& at) {
        auto e = std::make_shared<SExpr>();
        e->k = k;
        e->line = at.line;
        e->col = at.col;
        return e;
    }

    SExprP expr() { return binary(0); }

    static int prec(const std::string& s) {
        if (s == "||") return 1;
        if (s == "&&") return 2;
        if (s == "==" || s == "!=") return 3;
        if (s == "<" || s == "<=" || s == ">" || s == ">=") return 4;
        if (s == "+" || s == "-") return 5;
        if (s == "*" || s == "/" || s == "%") return 6;
        return 0;
    }

    static BinOp to_binop(const std::string& s) {
        static const std::map<std::string, BinOp> m = {
            {"+", BinOp::Add}, {"-", BinOp::Sub}, {"*", BinOp::Mul}, {"/", BinOp::Div},  {"%", BinOp::Mod},
            {"==", BinOp::Eq}, {"!=", BinOp::Ne}, {"<", BinOp::Lt},  {"<=", BinOp::Le},  {">", BinOp::Gt},
            {">=", BinOp::Ge}, {"&&", BinOp::And}, {"||", BinOp::Or}};
        return m.at(s);
    }

    SExprP binary(int min_prec) {
        SExprP lhs = unary();
        for (;;) {
            const Tok& t = peek();
            if (t.k != Tok::K::Punct) break;
            int p = prec(t.s);
            if (p == 0 || p <= min_prec) break;
            next();
            auto e = mk(SExpr::K::Binary, t);
            e->bop = to_binop(t.s);
            e->a = lhs;
            e->b = binary(p);
            lhs = e;
        }
        return lhs;
    }

    SExprP unary() {
        const Tok& t = peek();
        if (t.k == Tok::K::Punct && (t.s == "-" || t.s == "!" || t.s == "*" || t.s == "&")) {
            next();
            auto e = mk(SExpr::K::Unary, t);
            e->op = t.s[0];
            e->a = unary();
            return e;
        }
        return postfix(primary());
    }

    SExprP postfix(SExprP e) {
        for (;;) {
            const Tok& t = peek();
            if (accept("[")) {
                auto x = mk(SExpr::K::Index, t);
                x->a = e;
                x->b = expr();
                expect("]");
                e = x;
            } else if (accept(".")) {
                auto x = mk(SExpr::K::Member, t);
                x->a = e;
                x->name = ident();
                e = x;
            } else if (accept("->")) {
                auto x = mk(SExpr::K::Arrow, t);
                x->a = e;
                x->name = ident();
                e = x;
            } else {
                return e;
            }
        }
    }

    SExprP primary() {
        const Tok& t = peek();
        if (t.k == Tok::K::Num) {
            next();
            auto e = mk(SExpr::K::Num, t);
            e->num = t.num;
            return e;
        }
        if (accept("(")) {
            auto e = expr();
            expect(")");
            return e;
        }
        if (accept("null") || accept("NULL")) return mk(SExpr::K::Null, t);
        if (accept("nondet")) {
            expect("(");
            expect(")");
            return mk(SExpr::K::Nondet, t);
        }
        if (t.k == Tok::K::Ident && !keywords().count(t.s)) {
            next();
            auto e = mk(SExpr::K::Ident, t);
            e->name = t.s;
            return e;
        }
        fail(t, "expected expression" + near());
    }

    // --- elaboration --------------------------------------------------------

    const Int* meta(const std::string& name) const {
        for (auto it = meta_.rbegin(); it != meta_.rend(); ++it)
            if (it->first == name) return &it->second;
        return nullptr;
    }

    static ExprRef constant(Int v) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Const;
        e->value = v;
        if (v >= arith_min(ArithKind::I32) && v <= arith_max(ArithKind::I32))
            e->type = arith_type(ArithKind::I32);
        else if (v >= arith_min(ArithKind::I64) && v <= arith_max(ArithKind::I64))
            e->type = arith_type(ArithKind::I64);
        else
            e->type = arith_type(ArithKind::U64);
        return e;
    }

    // Returns null when the surface expression does not denote an lvalue.
    LvalRef elab_lval(const SExpr& s) {
        switch (s.k) {
            case SExpr::K::Ident: {
                if (meta(s.name)) return nullptr;
                int v = prog_.var_index(s.name);
                if (v < 0) fail(s.line, s.col, "undeclared variable '" + s.name + "'");
                auto lv = std::make_shared<Lval>();
                lv->kind = Lval::Kind::Var;
                lv->var = v;
                lv->type = prog_.vars[static_cast<size_t>(v)].type;
                lv->occ = occurrence(s);
                return lv;
            }
            case SExpr::K::Member: {
                auto base = elab_lval(*s.a);
                if (!base) fail(s.line, s.col, "member access on a non-lvalue");
                return field(s, base);
            }
            case SExpr::K::Arrow: {
                auto addr = elab_value(*s.a);
                return field(s, deref(s, addr));
            }
            case SExpr::K::Index: {
                auto addr = ptr_add(s, elab_value(*s.a), elab_value(*s.b));
                return deref(s, addr);
            }
            case SExpr::K::Unary:
                if (s.op == '*') return deref(s, elab_value(*s.a));
                return nullptr;
            default: return nullptr;
        }
    }

    LvalRef field(const SExpr& s, const LvalRef& base) {
        if (!base->type->is_record())
            fail(s.line, s.col, "member '" + s.name + "' of non-record type " + type_str(base->type));
        const Field* f = base->type->field(s.name);
        if (!f) fail(s.line, s.col, "no field '" + s.name + "' in " + base->type->name);
        auto lv = std::make_shared<Lval>();
        lv->kind = Lval::Kind::Field;
        lv->base = base;
        lv->field = f;
        lv->type = f->type;
        lv->occ = occurrence(s);
        return lv;
    }

    LvalRef deref(const SExpr& s, const ExprRef& addr) {
        if (addr->type->tag != CType::Tag::Ptr)
            fail(s.line, s.col, "dereference of non-pointer type " + type_str(addr->type));
        auto lv = std::make_shared<Lval>();
        lv->kind = Lval::Kind::Deref;
        lv->addr = addr;
        lv->type = addr->type->elem;
        lv->occ = occurrence(s);
        return lv;
    }

    ExprRef ptr_add(const SExpr& s, ExprRef a, ExprRef i) {
        if (a->type->is_arith() && i->type->tag == CType::Tag::Ptr) std::swap(a, i);
        if (a->type->tag != CType::Tag::Ptr || !i->type->is_arith())
            fail(s.line, s.col, "pointer arithmetic needs a pointer and an integer");
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::PtrAdd;
        e->a = a;
        e->b = i;
        e->type = a->type;
        return e;
    }

    ExprRef elab_int(const SExpr& s) {
        auto e = elab_value(s);
        if (!e->type->is_arith()) fail(s.line, s.col, "integer expected, got " + type_str(e->type));
        return e;
    }

    static TypeRef arith_result(const TypeRef& a, const TypeRef& b) {
        auto ka = a->arith, kb = b->arith;
        unsigned ba = std::max(32u, arith_bits(ka)), bb = std::max(32u, arith_bits(kb));
        if (ba == 64 || bb == 64) {
            bool u = (ba == 64 && !arith_signed(ka)) || (bb == 64 && !arith_signed(kb));
            return arith_type(u ? ArithKind::U64 : ArithKind::I64);
        }
        bool u = (arith_bits(ka) == 32 && !arith_signed(ka)) || (arith_bits(kb) == 32 && !arith_signed(kb));
        return arith_type(u ? ArithKind::U32 : ArithKind::I32);
    }

    ExprRef elab_value(const SExpr& s) {
        switch (s.k) {
            case SExpr::K::Num: return constant(s.num);
            case SExpr::K::Null: {
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Null;
                e->type = null_type();
                return e;
            }
            case SExpr::K::Nondet: {
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Nondet;
                e->type = arith_type(ArithKind::I32);
                return e;
            }
            case SExpr::K::Ident:
                if (const Int* v = meta(s.name)) return constant(*v);
                break;
            case SExpr::K::Unary:
                if (s.op == '&') {
                    auto lv = elab_lval(*s.a);
                    if (!lv) fail(s.line, s.col, "address of a non-lvalue");
                    auto e = std::make_shared<Expr>();
                    e->kind = Expr::Kind::AddrOf;
                    e->lval = lv;
                    e->type = ptr_type(lv->type);
                    return e;
                }
                if (s.op == '-' || s.op == '!') {
                    auto a = elab_int(*s.a);
                    if (s.op == '-' && a->kind == Expr::Kind::Const) return constant(-a->value);
                    auto e = std::make_shared<Expr>();
                    e->kind = Expr::Kind::Unary;
                    e->uop = s.op == '-' ? UnOp::Neg : UnOp::Not;
                    e->a = a;
                    e->type = s.op == '-' ? arith_result(a->type, a->type) : arith_type(ArithKind::I32);
                    return e;
                }
                break;
            case SExpr::K::Binary: return elab_binary(s);
            default: break;
        }
        auto lv = elab_lval(s);
        if (!lv) fail(s.line, s.col, "expected an lvalue");
        auto e = std::make_shared<Expr>();
        e->lval = lv;
        if (lv->type->is_array()) {
            e->kind = Expr::Kind::Decay;
            e->type = ptr_type(lv->type->elem);
        } else if (lv->type->is_scalar()) {
            e->kind = Expr::Kind::Read;
            e->type = lv->type;
        } else {
            fail(s.line, s.col, "record of type " + type_str(lv->type) + " used as a value");
        }
        return e;
    }

    ExprRef elab_binary(const SExpr& s) {
        auto a = elab_value(*s.a);
        auto b = elab_value(*s.b);
        bool pa = a->type->is_ptr(), pb = b->type->is_ptr();
        if (pa || pb) {
            if (s.bop == BinOp::Add) return ptr_add(s, a, b);
            if (s.bop == BinOp::Sub && pa && !pb) {
                auto n = b->kind == Expr::Kind::Const ? constant(-b->value) : nullptr;
                if (!n) {
                    auto u = std::make_shared<Expr>();
                    u->kind = Expr::Kind::Unary;
                    u->uop = UnOp::Neg;
                    u->a = b;
                    u->type = arith_result(b->type, b->type);
                    n = u;
                }
                return ptr_add(s, a, n);
            }
            if ((s.bop == BinOp::Eq || s.bop == BinOp::Ne) && pa && pb) {
                bool ok = a->type->tag == CType::Tag::Null || b->type->tag == CType::Tag::Null ||
                          same_type(a->type, b->type);
                if (!ok) fail(s.line, s.col, "comparison of incompatible pointer types");
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::PtrCmp;
                e->bop = s.bop;
                e->a = a;
                e->b = b;
                e->type = arith_type(ArithKind::I32);
                return e;
            }
            fail(s.line, s.col, std::string("invalid pointer operands to '") + binop_str(s.bop) + "'");
        }
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Binary;
        e->bop = s.bop;
        e->a = a;
        e->b = b;
        switch (s.bop) {
            case BinOp::Add:
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div:
            case BinOp::Mod: e->type = arith_result(a->type, b->type); break;
            default: e->type = arith_type(ArithKind::I32);
        }
        return e;
    }

    std::shared_ptr<Stmt> new_stmt(Stmt::Kind k, const SStmt& s, const std::string& suffix) {
        auto st = std::make_shared<Stmt>();
        st->kind = k;
        st->id = next_id_++;
        st->line = s.line;
        st->origin = "line " + std::to_string(s.line) + suffix;
        return st;
    }

    Int loop_bound(const SExpr& s) {
        auto e = elab_value(s);
        if (e->kind != Expr::Kind::Const) fail(s.line, s.col, "loop bounds must be integer literals");
        return e->value;
    }

    void elab_stmt(const SStmt& s, const std::string& suffix, std::vector<StmtRef>& out) {
        switch (s.k) {
            case SStmt::K::Assign: {
                auto st = new_stmt(Stmt::Kind::Assign, s, suffix);
                auto lv = elab_lval(*s.lhs);
                if (!lv) fail(s.lhs->line, s.lhs->col, "left-hand side is not an lvalue");
                if (!lv->type->is_scalar())
                    fail(s.lhs->line, s.lhs->col, "assignment to non-scalar type " + type_str(lv->type));
                auto e = elab_value(*s.e);
                if (lv->type->is_arith() && !e->type->is_arith())
                    fail(s.e->line, s.e->col, "assigning " + type_str(e->type) + " to " + type_str(lv->type));
                if (lv->type->is_ptr() && e->type->tag != CType::Tag::Null && !same_type(lv->type, e->type))
                    fail(s.e->line, s.e->col, "assigning " + type_str(e->type) + " to " + type_str(lv->type));
                st->lhs = lv;
                st->e = e;
                out.push_back(st);
                return;
            }
            case SStmt::K::Assert:
            case SStmt::K::Assume: {
                auto st = new_stmt(s.k == SStmt::K::Assert ? Stmt::Kind::Assert : Stmt::Kind::Assume, s, suffix);
                st->e = elab_int(*s.e);
                out.push_back(st);
                return;
            }
            case SStmt::K::Entry: out.push_back(new_stmt(Stmt::Kind::Entry, s, suffix)); return;
            case SStmt::K::If: {
                auto st = new_stmt(Stmt::Kind::If, s, suffix);
                st->e = elab_int(*s.e);
                for (auto& c : s.then_b) elab_stmt(*c, suffix, st->then_body);
                for (auto& c : s.else_b) elab_stmt(*c, suffix, st->else_body);
                out.push_back(st);
                return;
            }
            case SStmt::K::For: {
                Int lo = loop_bound(*s.lo), hi = loop_bound(*s.hi);
                if (hi - lo > static_cast<Int>(opts_.unroll_bound))
                    fail(s.line, s.col,
                         "loop trip count " + to_string(hi - lo) + " exceeds unroll bound " +
                             std::to_string(opts_.unroll_bound));
                if (meta(s.ivar) || prog_.var_index(s.ivar) >= 0)
                    fail(s.line, s.col, "loop variable '" + s.ivar + "' shadows a name in scope");
                for (Int k = lo; k < hi; ++k) {
                    meta_.emplace_back(s.ivar, k);
                    std::string sfx = suffix + " " + s.ivar + "=" + to_string(k);
                    for (auto& c : s.then_b) elab_stmt(*c, sfx, out);
                    meta_.pop_back();
                }
                return;
            }
        }
    }

    void collect(const StmtRef& s) {
        prog_.stmts.push_back(s.get());
        for (auto& c : s->then_body) collect(c);
        for (auto& c : s->else_body) collect(c);
    }
};

}  // namespace

Program parse_program(const std::string& source, const ParseOptions& opts) {
    return Parser(source, opts).run();
}

Program parse_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_program(ss.str(), opts);
}

}  // namespace mpvc

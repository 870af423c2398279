#include "mpvc/ast.hpp"

#include <sstream>

namespace mpvc {

const char* arith_name(ArithKind k) {
    switch (k) {
        case ArithKind::I8: return "i8";
        case ArithKind::U8: return "u8";
        case ArithKind::I16: return "i16";
        case ArithKind::U16: return "u16";
        case ArithKind::I32: return "i32";
        case ArithKind::U32: return "u32";
        case ArithKind::I64: return "i64";
        case ArithKind::U64: return "u64";
    }
    return "?";
}

unsigned arith_bits(ArithKind k) {
    switch (k) {
        case ArithKind::I8:
        case ArithKind::U8: return 8;
        case ArithKind::I16:
        case ArithKind::U16: return 16;
        case ArithKind::I32:
        case ArithKind::U32: return 32;
        default: return 64;
    }
}

bool arith_signed(ArithKind k) {
    return k == ArithKind::I8 || k == ArithKind::I16 || k == ArithKind::I32 || k == ArithKind::I64;
}

Int arith_min(ArithKind k) { return arith_signed(k) ? -(Int(1) << (arith_bits(k) - 1)) : 0; }

Int arith_max(ArithKind k) {
    return arith_signed(k) ? (Int(1) << (arith_bits(k) - 1)) - 1 : (Int(1) << arith_bits(k)) - 1;
}

Int wrap(Int v, ArithKind k) {
    Int m = Int(1) << arith_bits(k);
    Int r = floor_mod(v, m);
    if (arith_signed(k) && r > arith_max(k)) r -= m;
    return r;
}

const Field* CType::field(const std::string& fname) const {
    for (auto& f : fields)
        if (f.name == fname) return &f;
    return nullptr;
}

TypeRef arith_type(ArithKind k) {
    static std::map<ArithKind, TypeRef> cache = [] {
        std::map<ArithKind, TypeRef> m;
        for (auto a : {ArithKind::I8, ArithKind::U8, ArithKind::I16, ArithKind::U16, ArithKind::I32,
                       ArithKind::U32, ArithKind::I64, ArithKind::U64}) {
            auto t = std::make_shared<CType>();
            t->tag = CType::Tag::Arith;
            t->arith = a;
            t->size = t->align = arith_bits(a) / 8;
            m[a] = t;
        }
        return m;
    }();
    return cache.at(k);
}

TypeRef ptr_type(TypeRef pointee) {
    auto t = std::make_shared<CType>();
    t->tag = CType::Tag::Ptr;
    t->elem = std::move(pointee);
    t->size = t->align = 4;
    return t;
}

TypeRef null_type() {
    static TypeRef t = [] {
        auto n = std::make_shared<CType>();
        n->tag = CType::Tag::Null;
        n->size = n->align = 4;
        return n;
    }();
    return t;
}

TypeRef array_type(TypeRef elem, Int n) {
    auto t = std::make_shared<CType>();
    t->tag = CType::Tag::Array;
    t->size = elem->size * n;
    t->align = elem->align;
    t->elem = std::move(elem);
    t->length = n;
    return t;
}

TypeRef record_type(const std::string& name, std::vector<Field> fields) {
    auto t = std::make_shared<CType>();
    t->tag = CType::Tag::Record;
    t->name = name;
    Int off = 0, align = 1;
    for (auto& f : fields) {
        Int a = f.type->align;
        off = (off + a - 1) / a * a;
        f.offset = off;
        f.qualified = name + "." + f.name;
        off += f.type->size;
        align = std::max(align, a);
    }
    t->size = (off + align - 1) / align * align;
    if (t->size == 0) t->size = align;
    t->align = align;
    t->fields = std::move(fields);
    return t;
}

bool same_type(const TypeRef& a, const TypeRef& b) {
    if (a == b) return true;
    if (!a || !b || a->tag != b->tag) return false;
    switch (a->tag) {
        case CType::Tag::Arith: return a->arith == b->arith;
        case CType::Tag::Ptr: return same_type(a->elem, b->elem);
        case CType::Tag::Array: return a->length == b->length && same_type(a->elem, b->elem);
        case CType::Tag::Record: return a->name == b->name;
        case CType::Tag::Null: return true;
    }
    return false;
}

std::string type_str(const TypeRef& t) {
    switch (t->tag) {
        case CType::Tag::Arith: return arith_name(t->arith);
        case CType::Tag::Ptr: return type_str(t->elem) + "*";
        case CType::Tag::Array: return type_str(t->elem) + "[" + to_string(t->length) + "]";
        case CType::Tag::Record: return t->name;
        case CType::Tag::Null: return "null_t";
    }
    return "?";
}

Int size_of(const TypeRef& t) { return t->size; }

Int offset_of(const TypeRef& record, const std::string& field) {
    if (!record->is_record()) throw Error("offsetof on non-record type " + type_str(record));
    const Field* f = record->field(field);
    if (!f) throw Error("unknown field " + field + " in " + record->name);
    return f->offset;
}

namespace {

void collect_cells(const TypeRef& t, const std::string& path, Int base, std::vector<Cell>& out) {
    if (t->is_scalar()) {
        out.push_back({path, base, t->size, t});
    } else if (t->is_record()) {
        for (auto& f : t->fields) collect_cells(f.type, path + "." + f.name, base + f.offset, out);
    } else if (t->is_array()) {
        for (Int i = 0; i < t->length; ++i)
            collect_cells(t->elem, path + "[" + to_string(i) + "]", base + i * t->elem->size, out);
    }
}

}  // namespace

std::vector<Cell> scalar_cells(const TypeRef& t) {
    std::vector<Cell> out;
    collect_cells(t, "", 0, out);
    return out;
}

const char* binop_str(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Mod: return "%";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

int Program::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return -1;
}

size_t Program::total_cells() const {
    size_t n = 0;
    for (auto& v : vars) n += scalar_cells(v.type).size();
    return n;
}

// ---------------------------------------------------------------------------
// Printing: fully parenthesized canonical syntax that reparses to the same AST.

std::string print_lval(const Program& p, const LvalRef& lv) {
    switch (lv->kind) {
        case Lval::Kind::Var: return p.vars.at(lv->var).name;
        case Lval::Kind::Field: return "(" + print_lval(p, lv->base) + ")." + lv->field->name;
        case Lval::Kind::Deref: return "*(" + print_expr(p, lv->addr) + ")";
    }
    return "?";
}

std::string print_expr(const Program& p, const ExprRef& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return e->value < 0 ? "(" + to_string(e->value) + ")" : to_string(e->value);
        case Expr::Kind::Nondet: return "nondet()";
        case Expr::Kind::Read:
        case Expr::Kind::Decay: return print_lval(p, e->lval);
        case Expr::Kind::AddrOf: return "&(" + print_lval(p, e->lval) + ")";
        case Expr::Kind::PtrAdd: return "(" + print_expr(p, e->a) + " + " + print_expr(p, e->b) + ")";
        case Expr::Kind::Null: return "null";
        case Expr::Kind::Unary:
            return std::string(e->uop == UnOp::Neg ? "-" : "!") + "(" + print_expr(p, e->a) + ")";
        case Expr::Kind::Binary:
        case Expr::Kind::PtrCmp:
            return "(" + print_expr(p, e->a) + " " + binop_str(e->bop) + " " + print_expr(p, e->b) + ")";
    }
    return "?";
}

namespace {

std::string declarator(const TypeRef& t, const std::string& name) {
    if (t->is_array()) return declarator(t->elem, name) + "[" + to_string(t->length) + "]";
    std::string stars;
    TypeRef b = t;
    while (b->tag == CType::Tag::Ptr) {
        stars += "*";
        b = b->elem;
    }
    return type_str(b) + " " + stars + name;
}

void print_stmts(const Program& p, const std::vector<StmtRef>& body, int indent, std::ostringstream& os) {
    std::string pad(static_cast<size_t>(indent), ' ');
    for (auto& s : body) {
        switch (s->kind) {
            case Stmt::Kind::Assign:
                os << pad << print_lval(p, s->lhs) << " = " << print_expr(p, s->e) << ";\n";
                break;
            case Stmt::Kind::Assert: os << pad << "assert(" << print_expr(p, s->e) << ");\n"; break;
            case Stmt::Kind::Assume: os << pad << "assume(" << print_expr(p, s->e) << ");\n"; break;
            case Stmt::Kind::Entry: os << pad << "entry;\n"; break;
            case Stmt::Kind::If:
                os << pad << "if (" << print_expr(p, s->e) << ") {\n";
                print_stmts(p, s->then_body, indent + 2, os);
                os << pad << "} else {\n";
                print_stmts(p, s->else_body, indent + 2, os);
                os << pad << "}\n";
                break;
        }
    }
}

bool same_lval(const LvalRef& a, const LvalRef& b);

bool same_expr(const ExprRef& a, const ExprRef& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || !same_type(a->type, b->type)) return false;
    switch (a->kind) {
        case Expr::Kind::Const: return a->value == b->value;
        case Expr::Kind::Nondet:
        case Expr::Kind::Null: return true;
        case Expr::Kind::Read:
        case Expr::Kind::Decay:
        case Expr::Kind::AddrOf: return same_lval(a->lval, b->lval);
        case Expr::Kind::Unary: return a->uop == b->uop && same_expr(a->a, b->a);
        case Expr::Kind::PtrAdd:
        case Expr::Kind::Binary:
        case Expr::Kind::PtrCmp: return a->bop == b->bop && same_expr(a->a, b->a) && same_expr(a->b, b->b);
    }
    return false;
}

bool same_lval(const LvalRef& a, const LvalRef& b) {
    if (a->kind != b->kind || !same_type(a->type, b->type)) return false;
    switch (a->kind) {
        case Lval::Kind::Var: return a->var == b->var;
        case Lval::Kind::Field: return a->field->qualified == b->field->qualified && same_lval(a->base, b->base);
        case Lval::Kind::Deref: return same_expr(a->addr, b->addr);
    }
    return false;
}

bool same_body(const std::vector<StmtRef>& a, const std::vector<StmtRef>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        auto& x = *a[i];
        auto& y = *b[i];
        if (x.kind != y.kind || x.id != y.id) return false;
        if ((x.lhs || y.lhs) && !(x.lhs && y.lhs && same_lval(x.lhs, y.lhs))) return false;
        if (!same_expr(x.e, y.e)) return false;
        if (!same_body(x.then_body, y.then_body) || !same_body(x.else_body, y.else_body)) return false;
    }
    return true;
}

}  // namespace

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (auto& r : p.records) {
        os << "struct " << r->name << " {";
        for (auto& f : r->fields) os << " " << declarator(f.type, f.name) << ";";
        os << " };\n";
    }
    for (auto& v : p.vars) os << declarator(v.type, v.name) << ";\n";
    print_stmts(p, p.body, 0, os);
    return os.str();
}

bool same_program(const Program& a, const Program& b) {
    if (a.vars.size() != b.vars.size() || a.records.size() != b.records.size()) return false;
    for (size_t i = 0; i < a.vars.size(); ++i)
        if (a.vars[i].name != b.vars[i].name || !same_type(a.vars[i].type, b.vars[i].type)) return false;
    for (size_t i = 0; i < a.records.size(); ++i) {
        auto& x = a.records[i];
        auto& y = b.records[i];
        if (x->name != y->name || x->fields.size() != y->fields.size()) return false;
        for (size_t j = 0; j < x->fields.size(); ++j)
            if (x->fields[j].name != y->fields[j].name || !same_type(x->fields[j].type, y->fields[j].type))
                return false;
    }
    return same_body(a.body, b.body);
}

void for_each_lval(const LvalRef& lv, const std::function<void(const LvalRef&)>& f) {
    f(lv);
    if (lv->kind == Lval::Kind::Field) for_each_lval(lv->base, f);
    if (lv->kind == Lval::Kind::Deref) for_each_lval(lv->addr, f);
}

void for_each_lval(const ExprRef& e, const std::function<void(const LvalRef&)>& f) {
    if (!e) return;
    if (e->lval) for_each_lval(e->lval, f);
    if (e->a) for_each_lval(e->a, f);
    if (e->b) for_each_lval(e->b, f);
}

void for_each_lval(const Stmt& s, const std::function<void(const LvalRef&)>& f) {
    if (s.lhs) for_each_lval(s.lhs, f);
    if (s.e) for_each_lval(s.e, f);
}

}  // namespace mpvc

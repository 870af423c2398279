#include "mpvc/pointsto.hpp"

#include <sstream>

namespace mpvc {

bool AbsVal::operator==(const AbsVal& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Int) return i == o.i;
    if (kind == Kind::Ptr) return p == o.p;
    return true;
}

const char* pt_mode_name(PtMode m) { return m == PtMode::B ? "B" : "Btop"; }

namespace {

AbsOffsets bool01() { return AbsOffsets::of_set({0, 1}, 2); }
AbsOffsets kind_range(ArithKind k) { return AbsOffsets::range(arith_min(k), arith_max(k)); }

bool kind_matches(const TypeRef& cell, const TypeRef& u) {
    if (cell->size != u->size) return false;
    return cell->is_arith() ? u->is_arith() : u->is_ptr();
}

bool type_contains(const TypeRef& hay, const TypeRef& t) {
    if (same_type(hay, t)) return true;
    if (hay->is_array()) return type_contains(hay->elem, t);
    if (hay->is_record())
        for (auto& f : hay->fields)
            if (type_contains(f.type, t)) return true;
    return false;
}

// Truth values an integer abstraction may take: bit 0 = may be zero, bit 1 = may be non-zero.
int truth(const AbsOffsets& x) {
    int r = 0;
    if (x.contains(0)) r |= 1;
    if (auto k = x.is_singleton(); !k || *k != 0) r |= 2;
    return r;
}

AbsOffsets of_truth(int t) {
    if (t == 1) return AbsOffsets::singleton(0);
    if (t == 2) return AbsOffsets::singleton(1);
    return bool01();
}

// Result of x < y given bounds; 3 when undecided.
int compare_lt(const AbsOffsets& x, const AbsOffsets& y, bool strict) {
    auto xl = x.lo(), xh = x.hi(), yl = y.lo(), yh = y.hi();
    if (xh && yl && (strict ? *xh < *yl : *xh <= *yl)) return 2;
    if (xl && yh && (strict ? *xl >= *yh : *xl > *yh)) return 1;
    return 3;
}

}  // namespace

PointsTo::PointsTo(const Program& p, PtMode mode, unsigned ilvl)
    : prog_(p), layout_(p), mode_(mode), ilvl_(ilvl) {
    pre_.resize(p.stmts.size());
    post_.resize(p.stmts.size());
    final_ = run(p.body, initial());
}

AbsState PointsTo::initial() const {
    AbsState s;
    for (size_t v = 0; v < prog_.vars.size(); ++v) {
        std::map<Int, AbsVal> m;
        if (mode_ == PtMode::B)
            for (auto& c : layout_.cells(static_cast<int>(v))) m[c.offset] = AbsVal::bot();
        else
            m[0] = AbsVal::bot();
        s.cells.push_back(std::move(m));
    }
    return s;
}

AbsState PointsTo::run(const std::vector<StmtRef>& body, AbsState s) {
    for (auto& st : body) {
        pre_[static_cast<size_t>(st->id - 1)] = s;
        if (st->kind == Stmt::Kind::If)
            s = join(run(st->then_body, s), run(st->else_body, s));
        else
            s = transfer(*st, s);
        post_[static_cast<size_t>(st->id - 1)] = s;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Locations

AbsOffsets PointsTo::clamp(int var, const AbsOffsets& o, bool& empty) const {
    empty = false;
    Int size = prog_.vars[static_cast<size_t>(var)].type->size;
    if (o.is_top()) return o;
    if (o.is_set()) {
        std::vector<Int> keep;
        for (Int k : o.values())
            if (k >= 0 && k < size) keep.push_back(k);
        if (keep.empty()) {
            empty = true;
            return o;
        }
        return AbsOffsets::of_set(keep, ilvl_);
    }
    Int lo = o.lo() ? std::max<Int>(*o.lo(), 0) : 0;
    Int hi = o.hi() ? std::min<Int>(*o.hi(), size - 1) : size - 1;
    auto r = AbsOffsets::interval(lo, hi, o.residue(), o.modulus());
    if (!r) {
        empty = true;
        return o;
    }
    return *r;
}

AbsLoc PointsTo::normalize(AbsLoc l) const {
    AbsLoc out;
    out.may_null = l.may_null;
    for (auto& [v, o] : l.m) {
        bool empty;
        auto c = clamp(v, mode_ == PtMode::BTop ? AbsOffsets::top() : o, empty);
        if (!empty) out.m.emplace(v, c);
    }
    return out;
}

AbsLoc PointsTo::base(int var) const {
    if (var < 0 || var >= static_cast<int>(prog_.vars.size())) throw Error("unknown variable id");
    AbsLoc l;
    l.m.emplace(var, AbsOffsets::singleton(0));
    return l;
}

AbsLoc PointsTo::shift(const AbsLoc& l, const AbsOffsets& bytes) const {
    AbsLoc out;
    out.may_null = l.may_null;
    for (auto& [v, o] : l.m) out.m.emplace(v, add(o, bytes, ilvl_));
    return normalize(out);
}

std::vector<std::pair<int, std::vector<Int>>> PointsTo::gamma(const AbsLoc& l) const {
    std::vector<std::pair<int, std::vector<Int>>> out;
    for (auto& [v, o] : l.m) {
        auto g = o.gamma_bounded(0, prog_.vars[static_cast<size_t>(v)].type->size - 1);
        if (!g.empty()) out.emplace_back(v, std::move(g));
    }
    return out;
}

std::vector<int> PointsTo::vars_containing(const TypeRef& t) const {
    std::vector<int> out;
    for (size_t v = 0; v < prog_.vars.size(); ++v)
        if (type_contains(prog_.vars[v].type, t)) out.push_back(static_cast<int>(v));
    return out;
}

AbsLoc PointsTo::top_loc(const TypeRef& pointee) const {
    AbsLoc l;
    l.may_null = true;
    for (int v : vars_containing(pointee)) l.m.emplace(v, AbsOffsets::top());
    return l;
}

std::vector<std::pair<int, Int>> PointsTo::target_cells(const AbsLoc& l, const TypeRef& t) const {
    std::vector<std::pair<int, Int>> out;
    if (mode_ == PtMode::BTop) {
        for (auto& [v, o] : l.m) {
            (void)o;
            for (auto& c : layout_.cells(v))
                if (kind_matches(c.type, t)) {
                    out.emplace_back(v, 0);
                    break;
                }
        }
        return out;
    }
    for (auto& [v, offs] : gamma(l))
        for (Int off : offs)
            if (const Cell* c = layout_.cell_at(v, off); c && kind_matches(c->type, t)) out.emplace_back(v, off);
    return out;
}

AbsLoc PointsTo::load_ptr(const AbsState& s, const TypeRef& ptr, const AbsLoc& l) const {
    AbsLoc out;
    bool any = false, first = true;
    for (auto [v, off] : target_cells(l, ptr)) {
        const AbsVal& a = s.cells[static_cast<size_t>(v)].at(off);
        if (a.kind != AbsVal::Kind::Ptr) {
            any = true;
            break;
        }
        out = first ? a.p : join(out, a.p);
        first = false;
    }
    if (any || first) return top_loc(ptr->tag == CType::Tag::Ptr ? ptr->elem : ptr);
    return out;
}

AbsOffsets PointsTo::load_int(const AbsState& s, const TypeRef& t, const AbsLoc& l) const {
    std::optional<AbsOffsets> out;
    for (auto [v, off] : target_cells(l, t)) {
        const AbsVal& a = s.cells[static_cast<size_t>(v)].at(off);
        if (a.kind != AbsVal::Kind::Int) return kind_range(t->arith);
        out = out ? mpvc::join(*out, a.i, ilvl_) : a.i;
    }
    return out ? *out : kind_range(t->arith);
}

// ---------------------------------------------------------------------------
// Joins

AbsLoc PointsTo::join(const AbsLoc& a, const AbsLoc& b) const {
    AbsLoc out = a;
    out.may_null = a.may_null || b.may_null;
    for (auto& [v, o] : b.m) {
        auto it = out.m.find(v);
        if (it == out.m.end())
            out.m.emplace(v, o);
        else
            it->second = mpvc::join(it->second, o, ilvl_);
    }
    return out;
}

AbsVal PointsTo::join(const AbsVal& a, const AbsVal& b) const {
    using K = AbsVal::Kind;
    if (a.kind == K::Bot) return b;
    if (b.kind == K::Bot) return a;
    if (a.kind == K::Any || b.kind == K::Any || a.kind != b.kind) return AbsVal::any();
    if (a.kind == K::Int) return AbsVal::of_int(mpvc::join(a.i, b.i, ilvl_));
    return AbsVal::of_ptr(join(a.p, b.p));
}

AbsState PointsTo::join(const AbsState& a, const AbsState& b) const {
    if (!a.reachable) return b;
    if (!b.reachable) return a;
    AbsState out = a;
    for (size_t v = 0; v < out.cells.size(); ++v)
        for (auto& [off, val] : out.cells[v]) val = join(val, b.cells[v].at(off));
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

AbsOffsets PointsTo::index_u32(const AbsOffsets& v) const {
    if (v.subset_of_range(0, arith_max(ArithKind::U32))) return v;
    if (auto k = v.is_singleton()) return AbsOffsets::singleton(wrap(*k, ArithKind::U32));
    return AbsOffsets::top();
}

AbsVal PointsTo::wrap_int(const AbsOffsets& v, ArithKind k) const {
    if (v.subset_of_range(arith_min(k), arith_max(k))) return AbsVal::of_int(v);
    if (auto s = v.is_singleton()) return AbsVal::of_int(AbsOffsets::singleton(wrap(*s, k)));
    return AbsVal::of_int(kind_range(k));
}

AbsLoc PointsTo::eval_lval(const LvalRef& lv, const AbsState& s) const {
    switch (lv->kind) {
        case Lval::Kind::Var: return base(lv->var);
        case Lval::Kind::Field: return shift(eval_lval(lv->base, s), AbsOffsets::singleton(lv->field->offset));
        case Lval::Kind::Deref: {
            auto a = eval(lv->addr, s);
            if (a.kind == AbsVal::Kind::Ptr) return a.p;
            return top_loc(lv->type);
        }
    }
    return {};
}

AbsVal PointsTo::eval(const ExprRef& e, const AbsState& s) const {
    using K = Expr::Kind;
    switch (e->kind) {
        case K::Const: return AbsVal::of_int(AbsOffsets::singleton(e->value));
        case K::Nondet: return AbsVal::of_int(kind_range(ArithKind::I32));
        case K::Null: {
            AbsLoc l;
            l.may_null = true;
            return AbsVal::of_ptr(l);
        }
        case K::Read: {
            auto l = eval_lval(e->lval, s);
            if (e->type->is_arith()) return AbsVal::of_int(load_int(s, e->type, l));
            return AbsVal::of_ptr(load_ptr(s, e->type, l));
        }
        case K::Decay:
        case K::AddrOf: return AbsVal::of_ptr(eval_lval(e->lval, s));
        case K::PtrAdd: {
            auto a = eval(e->a, s);
            auto i = eval(e->b, s);
            AbsLoc l = a.kind == AbsVal::Kind::Ptr ? a.p : top_loc(e->type->elem);
            return AbsVal::of_ptr(shift(l, scale(index_u32(i.i), e->type->elem->size, ilvl_)));
        }
        case K::PtrCmp: return AbsVal::of_int(bool01());
        case K::Unary: {
            auto a = eval(e->a, s).i;
            if (e->uop == UnOp::Neg) return AbsVal::of_int(neg(a));
            int t = truth(a);
            return AbsVal::of_int(of_truth(((t & 1) ? 2 : 0) | ((t & 2) ? 1 : 0)));
        }
        case K::Binary: break;
    }
    auto x = eval(e->a, s).i;
    auto y = eval(e->b, s).i;
    auto sx = x.is_singleton(), sy = y.is_singleton();
    switch (e->bop) {
        case BinOp::Add: return AbsVal::of_int(add(x, y, ilvl_));
        case BinOp::Sub: return AbsVal::of_int(sub(x, y, ilvl_));
        case BinOp::Mul: return AbsVal::of_int(mul(x, y, ilvl_));
        case BinOp::Div:
            if (sx && sy && *sy != 0) return AbsVal::of_int(AbsOffsets::singleton(*sx / *sy));
            if (sy && *sy > 0 && x.lo() && x.hi()) return AbsVal::of_int(AbsOffsets::range(*x.lo() / *sy, *x.hi() / *sy));
            return AbsVal::of_int(AbsOffsets::top());
        case BinOp::Mod:
            if (sx && sy && *sy != 0) return AbsVal::of_int(AbsOffsets::singleton(*sx % *sy));
            if (sy && *sy != 0) {
                Int a = (*sy < 0 ? -*sy : *sy) - 1;
                if (x.lo() && *x.lo() >= 0) return AbsVal::of_int(AbsOffsets::range(0, x.hi() ? std::min(a, *x.hi()) : a));
                if (x.hi() && *x.hi() <= 0) return AbsVal::of_int(AbsOffsets::range(x.lo() ? std::max(-a, *x.lo()) : -a, 0));
                return AbsVal::of_int(AbsOffsets::range(-a, a));
            }
            return AbsVal::of_int(AbsOffsets::top());
        case BinOp::Eq:
        case BinOp::Ne: {
            int t = 3;
            if (sx && sy) t = (*sx == *sy) ? 2 : 1;
            else if (compare_lt(x, y, true) == 2 || compare_lt(y, x, true) == 2) t = 1;
            if (e->bop == BinOp::Ne && t != 3) t = 3 - t;
            return AbsVal::of_int(of_truth(t));
        }
        case BinOp::Lt: return AbsVal::of_int(of_truth(compare_lt(x, y, true)));
        case BinOp::Le: return AbsVal::of_int(of_truth(compare_lt(x, y, false)));
        case BinOp::Gt: return AbsVal::of_int(of_truth(compare_lt(y, x, true)));
        case BinOp::Ge: return AbsVal::of_int(of_truth(compare_lt(y, x, false)));
        case BinOp::And: {
            int a = truth(x), b = truth(y), t = 0;
            if (a & 1) t |= 1;
            if (a & 2) t |= b;
            return AbsVal::of_int(of_truth(t));
        }
        case BinOp::Or: {
            int a = truth(x), b = truth(y), t = 0;
            if (a & 2) t |= 2;
            if (a & 1) t |= b;
            return AbsVal::of_int(of_truth(t));
        }
    }
    return AbsVal::of_int(AbsOffsets::top());
}

AbsState PointsTo::transfer(const Stmt& st, const AbsState& s) const {
    if (st.kind != Stmt::Kind::Assign || !s.reachable) return s;
    AbsState out = s;
    auto l = eval_lval(st.lhs, s);
    auto v = eval(st.e, s);
    const TypeRef& t = st.lhs->type;
    if (t->is_arith()) v = wrap_int(v.i, t->arith);
    auto targets = target_cells(l, t);
    bool strong = false;
    if (targets.size() == 1 && l.m.size() == 1) {
        if (mode_ == PtMode::B)
            strong = l.m.begin()->second.is_singleton().has_value();
        else
            strong = prog_.vars[static_cast<size_t>(targets[0].first)].type->is_scalar();
    }
    for (auto [var, off] : targets) {
        AbsVal& cell = out.cells[static_cast<size_t>(var)].at(off);
        cell = strong ? v : join(cell, v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Concretization checks

bool PointsTo::contains(const AbsLoc& l, ConcLoc c) const {
    if (c.var == kNullVar) return l.may_null;
    // Out-of-bounds pointers can never be dereferenced; any abstraction covers them.
    if (c.off < 0 || c.off >= prog_.vars[static_cast<size_t>(c.var)].type->size) return true;
    auto it = l.m.find(c.var);
    return it != l.m.end() && it->second.contains(c.off);
}

bool PointsTo::contains(const AbsVal& a, const ConcVal& c) const {
    switch (c.kind) {
        case ConcVal::Kind::Undef: return true;
        case ConcVal::Kind::Int:
            return a.kind == AbsVal::Kind::Any || (a.kind == AbsVal::Kind::Int && a.i.contains(c.i));
        case ConcVal::Kind::Ptr:
            return a.kind == AbsVal::Kind::Any || (a.kind == AbsVal::Kind::Ptr && contains(a.p, c.p));
    }
    return false;
}

std::string PointsTo::check_state(const AbsState& s, const ConcState& c) const {
    if (!s.reachable) return "state reached but abstractly unreachable";
    for (size_t v = 0; v < c.cells.size(); ++v)
        for (auto& [off, cv] : c.cells[v]) {
            const AbsVal& a = s.cells[v].at(mode_ == PtMode::B ? off : 0);
            if (!contains(a, cv)) {
                std::ostringstream os;
                os << prog_.vars[v].name << "+" << to_string(off) << " not in " << str(a);
                return os.str();
            }
        }
    return "";
}

// ---------------------------------------------------------------------------
// Printing

std::string PointsTo::str(const AbsLoc& l) const {
    std::string out = "{";
    bool first = true;
    for (auto& [v, o] : l.m) {
        if (!first) out += ", ";
        first = false;
        out += prog_.vars[static_cast<size_t>(v)].name + ":" + o.str();
    }
    if (l.may_null) out += first ? "null" : ", null";
    return out + "}";
}

std::string PointsTo::str(const AbsVal& v) const {
    switch (v.kind) {
        case AbsVal::Kind::Bot: return "bot";
        case AbsVal::Kind::Any: return "any";
        case AbsVal::Kind::Int: return "int " + v.i.str();
        case AbsVal::Kind::Ptr: return "ptr " + str(v.p);
    }
    return "?";
}

std::string PointsTo::dump() const {
    std::ostringstream os;
    auto state = [&](const AbsState& s) {
        for (size_t v = 0; v < s.cells.size(); ++v)
            for (auto& [off, val] : s.cells[v])
                if (val.kind != AbsVal::Kind::Bot)
                    os << "  " << prog_.vars[v].name << "+" << to_string(off) << " : " << str(val) << "\n";
    };
    for (auto* st : prog_.stmts) {
        os << "stmt " << st->id << "\n";
        state(pre(st->id));
    }
    os << "final\n";
    state(final_);
    return os.str();
}

}  // namespace mpvc

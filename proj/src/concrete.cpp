#include "mpvc/concrete.hpp"

#include <json.hpp>

namespace mpvc {

Layout::Layout(const Program& p) {
    for (auto& v : p.vars) {
        cells_.push_back(scalar_cells(v.type));
        std::map<Int, size_t> idx;
        for (size_t i = 0; i < cells_.back().size(); ++i) idx[cells_.back()[i].offset] = i;
        index_.push_back(std::move(idx));
    }
}

const Cell* Layout::cell_at(int var, Int off) const {
    if (var < 0 || var >= static_cast<int>(cells_.size())) return nullptr;
    auto& idx = index_[static_cast<size_t>(var)];
    auto it = idx.find(off);
    return it == idx.end() ? nullptr : &cells_[static_cast<size_t>(var)][it->second];
}

ConcState Layout::empty_state() const {
    ConcState s;
    for (auto& cs : cells_) {
        std::map<Int, ConcVal> m;
        for (auto& c : cs) m[c.offset] = ConcVal{};
        s.cells.push_back(std::move(m));
    }
    return s;
}

ConcLoc amm_base(const Program& p, int var) {
    if (var < 0 || var >= static_cast<int>(p.vars.size())) throw Error("unknown variable id " + std::to_string(var));
    return {var, 0};
}

ConcLoc amm_null() { return {kNullVar, 0}; }

ConcLoc amm_shift(ConcLoc l, Int n) { return {l.var, l.off + n}; }

namespace {

bool kind_matches(const TypeRef& cell, const TypeRef& u) {
    if (cell->size != u->size) return false;
    return cell->is_arith() ? u->is_arith() : u->is_ptr();
}

}  // namespace

std::optional<ConcVal> amm_load(const Layout& lay, const ConcState& m, const TypeRef& u, ConcLoc l) {
    const Cell* c = lay.cell_at(l.var, l.off);
    if (!c || !kind_matches(c->type, u)) return std::nullopt;
    const ConcVal& v = m.cells[static_cast<size_t>(l.var)].at(l.off);
    if (v.kind == ConcVal::Kind::Undef) return std::nullopt;
    return v;
}

bool amm_store(const Layout& lay, ConcState& m, const TypeRef& u, ConcLoc l, ConcVal v) {
    const Cell* c = lay.cell_at(l.var, l.off);
    if (!c || !kind_matches(c->type, u)) return false;
    if (u->is_arith()) {
        if (v.kind != ConcVal::Kind::Int) return false;
        v.i = wrap(v.i, u->arith);
    } else if (v.kind != ConcVal::Kind::Ptr) {
        return false;
    }
    m.cells[static_cast<size_t>(l.var)][l.off] = v;
    return true;
}

const char* outcome_name(Trace::Outcome o) {
    switch (o) {
        case Trace::Outcome::Ok: return "ok";
        case Trace::Outcome::AssertFail: return "assert-fail";
        case Trace::Outcome::AssumeFail: return "assume-fail";
        case Trace::Outcome::UB: return "ub";
    }
    return "?";
}

Machine::Machine(const Program& p) : prog_(p), layout_(p) {}

std::optional<ConcLoc> Machine::eval_lval(const LvalRef& lv, const ConcState& m, SplitMix64* rng,
                                          std::vector<Int>* draws) const {
    switch (lv->kind) {
        case Lval::Kind::Var: return amm_base(prog_, lv->var);
        case Lval::Kind::Field: {
            auto b = eval_lval(lv->base, m, rng, draws);
            if (!b) return std::nullopt;
            return amm_shift(*b, lv->field->offset);
        }
        case Lval::Kind::Deref: {
            auto a = eval(lv->addr, m, rng, draws);
            if (!a || a->kind != ConcVal::Kind::Ptr) return std::nullopt;
            return a->p;
        }
    }
    return std::nullopt;
}

std::optional<ConcVal> Machine::eval(const ExprRef& e, const ConcState& m, SplitMix64* rng,
                                     std::vector<Int>* draws) const {
    using K = Expr::Kind;
    switch (e->kind) {
        case K::Const: return ConcVal::vint(e->value);
        case K::Nondet: {
            if (!rng) return std::nullopt;
            Int v = rng->range(INT32_MIN, INT32_MAX);
            if (draws) draws->push_back(v);
            return ConcVal::vint(v);
        }
        case K::Null: return ConcVal::vptr(amm_null());
        case K::Read: {
            auto l = eval_lval(e->lval, m, rng, draws);
            if (!l) return std::nullopt;
            return amm_load(layout_, m, e->type, *l);
        }
        case K::Decay:
        case K::AddrOf: {
            auto l = eval_lval(e->lval, m, rng, draws);
            if (!l) return std::nullopt;
            return ConcVal::vptr(*l);
        }
        case K::PtrAdd: {
            auto a = eval(e->a, m, rng, draws);
            if (!a || a->kind != ConcVal::Kind::Ptr) return std::nullopt;
            auto i = eval(e->b, m, rng, draws);
            if (!i || i->kind != ConcVal::Kind::Int) return std::nullopt;
            // Index converted to the 32-bit unsigned size type, then scaled.
            return ConcVal::vptr(amm_shift(a->p, e->type->elem->size * wrap(i->i, ArithKind::U32)));
        }
        case K::Unary: {
            auto a = eval(e->a, m, rng, draws);
            if (!a || a->kind != ConcVal::Kind::Int) return std::nullopt;
            return ConcVal::vint(e->uop == UnOp::Neg ? -a->i : Int(a->i == 0));
        }
        case K::PtrCmp: {
            auto a = eval(e->a, m, rng, draws);
            auto b = eval(e->b, m, rng, draws);
            if (!a || !b || a->kind != ConcVal::Kind::Ptr || b->kind != ConcVal::Kind::Ptr) return std::nullopt;
            bool eq = a->p == b->p;
            return ConcVal::vint(e->bop == BinOp::Eq ? eq : !eq);
        }
        case K::Binary: {
            auto a = eval(e->a, m, rng, draws);
            if (!a || a->kind != ConcVal::Kind::Int) return std::nullopt;
            if (e->bop == BinOp::And && a->i == 0) return ConcVal::vint(0);
            if (e->bop == BinOp::Or && a->i != 0) return ConcVal::vint(1);
            auto b = eval(e->b, m, rng, draws);
            if (!b || b->kind != ConcVal::Kind::Int) return std::nullopt;
            Int x = a->i, y = b->i;
            switch (e->bop) {
                case BinOp::Add: return ConcVal::vint(x + y);
                case BinOp::Sub: return ConcVal::vint(x - y);
                case BinOp::Mul: return ConcVal::vint(x * y);
                case BinOp::Div:
                    if (y == 0) return std::nullopt;
                    return ConcVal::vint(x / y);
                case BinOp::Mod:
                    if (y == 0) return std::nullopt;
                    return ConcVal::vint(x % y);
                case BinOp::Eq: return ConcVal::vint(x == y);
                case BinOp::Ne: return ConcVal::vint(x != y);
                case BinOp::Lt: return ConcVal::vint(x < y);
                case BinOp::Le: return ConcVal::vint(x <= y);
                case BinOp::Gt: return ConcVal::vint(x > y);
                case BinOp::Ge: return ConcVal::vint(x >= y);
                case BinOp::And:
                case BinOp::Or: return ConcVal::vint(y != 0);
            }
        }
    }
    return std::nullopt;
}

namespace {

struct Halt {
    Trace::Outcome outcome;
    StmtId at;
    std::string message;
};

class Runner {
public:
    Runner(const Machine& mc, uint64_t seed) : mc_(mc), rng_(seed) {}

    void exec(const std::vector<StmtRef>& body, ConcState& m, Trace& t) {
        for (auto& s : body) exec(*s, m, t);
    }

    void exec(const Stmt& s, ConcState& m, Trace& t) {
        size_t step = t.steps.size();
        t.steps.push_back({s.id, m, {}});
        auto ub = [&](const char* what) { throw Halt{Trace::Outcome::UB, s.id, what}; };
        switch (s.kind) {
            case Stmt::Kind::Assign: {
                auto l = mc_.eval_lval(s.lhs, m, &rng_, &t.nondet);
                if (!l) ub("invalid lvalue");
                auto v = mc_.eval(s.e, m, &rng_, &t.nondet);
                if (!v) ub("invalid expression");
                if (!amm_store(mc_.layout(), m, s.lhs->type, *l, *v)) ub("invalid store");
                break;
            }
            case Stmt::Kind::Assert:
            case Stmt::Kind::Assume: {
                auto v = mc_.eval(s.e, m, &rng_, &t.nondet);
                if (!v) ub("invalid condition");
                if (v->i == 0) {
                    bool a = s.kind == Stmt::Kind::Assert;
                    throw Halt{a ? Trace::Outcome::AssertFail : Trace::Outcome::AssumeFail, s.id,
                               a ? "assertion failed" : "assumption violated"};
                }
                break;
            }
            case Stmt::Kind::Entry: break;
            case Stmt::Kind::If: {
                auto v = mc_.eval(s.e, m, &rng_, &t.nondet);
                if (!v) ub("invalid condition");
                exec(v->i != 0 ? s.then_body : s.else_body, m, t);
                break;
            }
        }
        t.steps[step].post = m;
    }

private:
    const Machine& mc_;
    SplitMix64 rng_;
};

}  // namespace

Trace Machine::run(uint64_t seed) const {
    Trace t;
    ConcState m = layout_.empty_state();
    Runner r(*this, seed);
    try {
        r.exec(prog_.body, m, t);
    } catch (const Halt& h) {
        t.outcome = h.outcome;
        t.at = h.at;
        t.message = h.message;
    }
    t.final_state = std::move(m);
    return t;
}

namespace {

nlohmann::json state_json(const Program& p, const ConcState& s) {
    nlohmann::json j = nlohmann::json::object();
    for (size_t v = 0; v < p.vars.size(); ++v) {
        nlohmann::json cells = nlohmann::json::object();
        for (auto& [off, val] : s.cells[v]) {
            auto key = to_string(off);
            switch (val.kind) {
                case ConcVal::Kind::Undef: cells[key] = nullptr; break;
                case ConcVal::Kind::Int:
                    if (val.i > INT64_MAX)
                        cells[key] = static_cast<unsigned long long>(val.i);
                    else
                        cells[key] = static_cast<long long>(val.i);
                    break;
                case ConcVal::Kind::Ptr: {
                    std::string base = val.p.var == kNullVar ? "null" : p.vars[static_cast<size_t>(val.p.var)].name;
                    cells[key] = {{"ptr", {base, static_cast<long long>(val.p.off)}}};
                    break;
                }
            }
        }
        j[p.vars[v].name] = cells;
    }
    return j;
}

}  // namespace

std::string trace_jsonl(const Program& p, const Trace& t) {
    std::string out;
    for (auto& st : t.steps) {
        nlohmann::json j = {{"stmt", st.stmt}, {"state", state_json(p, st.pre)}};
        out += j.dump() + "\n";
    }
    nlohmann::json o = {{"outcome", outcome_name(t.outcome)}};
    if (t.outcome != Trace::Outcome::Ok) {
        o["stmt"] = t.at;
        o["message"] = t.message;
    }
    out += o.dump() + "\n";
    return out;
}

}  // namespace mpvc

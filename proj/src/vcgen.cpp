#include "mpvc/vcgen.hpp"

#include <set>

namespace mpvc {

using namespace logic;

namespace {

Term pow2(unsigned k) { return int_lit(Int{1} << k); }

// Value of e reduced into kind k, unless the analysis shows it already fits.
Term wrap_term(const Term& e, ArithKind k, const AbsOffsets& range) {
    if (range.subset_of_range(arith_min(k), arith_max(k))) return e;
    unsigned n = arith_bits(k);
    if (!arith_signed(k)) return mod(e, pow2(n));
    return sub(mod(add(e, pow2(n - 1)), pow2(n)), pow2(n - 1));
}

// C division truncates toward zero; SMT-LIB div is euclidean.
Term c_div(const Term& a, const Term& b) { return ite(ge(a, int_lit(0)), div(a, b), neg(div(neg(a), b))); }
Term c_mod(const Term& a, const Term& b) { return sub(a, mul(b, c_div(a, b))); }
Term bool01(const Term& c) { return ite(c, int_lit(1), int_lit(0)); }

class Compiler {
public:
    Compiler(const Program& p, const MemoryModel& mm, Compiled& out)
        : p_(p), mm_(mm), pt_(mm.pt()), out_(out), syms_(out.syms) {}

    void run() {
        env_ = mm_.emp(syms_);
        for (size_t k = 0; k < env_.size(); ++k) out_.created.push_back({env_[k]->name, k, 0});
        frames_.emplace_back();
        body(p_.body);
    }

private:
    const Program& p_;
    const MemoryModel& mm_;
    const PointsTo& pt_;
    Compiled& out_;
    Symbols& syms_;
    Env env_;
    std::vector<std::vector<Term>> frames_;
    std::vector<Term> guards_;
    StmtId cur_ = 0;

    void fact(Fact::Kind k, const Term& t) {
        frames_.back().push_back(t);
        out_.facts.push_back({k, cur_, t});
    }

    void note_created(const Env& before, StmtId s) {
        for (size_t k = 0; k < env_.size(); ++k)
            if (!equal(before[k], env_[k])) out_.created.push_back({env_[k]->name, k, s});
    }

    const AbsState& pre() const { return pt_.pre(cur_); }

    void body(const std::vector<StmtRef>& ss) {
        for (auto& s : ss) stmt(*s);
    }

    void stmt(const Stmt& s) {
        cur_ = s.id;
        try {
            if (!pt_.pre(s.id).reachable) {
                frames_.back().push_back(bool_lit(false));
                return;
            }
            switch (s.kind) {
                case Stmt::Kind::Assign: assign(s); break;
                case Stmt::Kind::Assume: fact(Fact::Kind::Assume, cond(s.e)); break;
                case Stmt::Kind::Assert: {
                    auto g = cond(s.e);
                    std::vector<Term> h(guards_);
                    for (auto& f : frames_) h.insert(h.end(), f.begin(), f.end());
                    out_.vcs.push_back({static_cast<int>(out_.vcs.size()), s.id, s.origin, and_(h), g});
                    fact(Fact::Kind::Assert, g);
                    break;
                }
                case Stmt::Kind::Entry:
                    if (frames_.size() != 1) throw Error("entry must be at top level");
                    frames_.back().clear();
                    break;
                case Stmt::Kind::If: branch(s); break;
            }
        } catch (const Diagnostic&) {
            throw;
        } catch (const Error& e) {
            std::string msg = e.what();
            if (msg.rfind("stmt ", 0) == 0) throw;
            throw Error("stmt " + std::to_string(s.id) + ": " + msg);
        }
    }

    void assign(const Stmt& s) {
        auto l = lval(s.lhs);
        auto v = expr(s.e);
        auto& u = s.lhs->type;
        if (!u->is_ptr()) v.i = wrap_term(v.i, u->arith, pt_.eval(s.e, pre()).i);
        Env before = env_;
        auto rel = mm_.store(s.id, env_, syms_, u, l, v);
        note_created(before, s.id);
        fact(Fact::Kind::Store, rel);
    }

    void branch(const Stmt& s) {
        auto c = cond(s.e);
        Env e0 = env_;
        auto arm = [&](const std::vector<StmtRef>& ss, const Term& g) {
            env_ = e0;
            frames_.emplace_back();
            guards_.push_back(g);
            body(ss);
            cur_ = s.id;
            guards_.pop_back();
            auto fs = std::move(frames_.back());
            frames_.pop_back();
            return std::make_pair(env_, fs);
        };
        auto [e1, f1] = arm(s.then_body, c);
        auto [e2, f2] = arm(s.else_body, not_(c));
        std::vector<Term> q1, q2;
        env_ = mm_.join(e1, e2, syms_, q1, q2);
        note_created(e1, s.id);
        for (auto& q : q1) out_.facts.push_back({Fact::Kind::JoinThen, s.id, q});
        for (auto& q : q2) out_.facts.push_back({Fact::Kind::JoinElse, s.id, q});
        f1.insert(f1.end(), q1.begin(), q1.end());
        f2.insert(f2.end(), q2.begin(), q2.end());
        frames_.back().push_back(implies(c, and_(f1)));
        frames_.back().push_back(implies(not_(c), and_(f2)));
    }

    MLoc lval(const LvalRef& lv) {
        switch (lv->kind) {
            case Lval::Kind::Var: return mm_.base(lv->var);
            case Lval::Kind::Field: {
                auto b = lval(lv->base);
                Int off = lv->field->offset;
                return mm_.shift(cur_, b, int_lit(off), AbsOffsets::singleton(off));
            }
            case Lval::Kind::Deref: return expr(lv->addr).l;
        }
        throw Error("internal: bad lvalue");
    }

    MVal int_val(const Term& t) {
        MVal v;
        v.i = t;
        return v;
    }

    MVal ptr_val(const MLoc& l) {
        MVal v;
        v.is_ptr = true;
        v.l = l;
        return v;
    }

    Term cond(const ExprRef& e) {
        if (e->kind == Expr::Kind::Binary) {
            switch (e->bop) {
                case BinOp::And: {
                    auto a = cond(e->a);
                    return and_({a, cond(e->b)});
                }
                case BinOp::Or: {
                    auto a = cond(e->a);
                    return or_({a, cond(e->b)});
                }
                case BinOp::Eq:
                case BinOp::Ne:
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge: {
                    auto a = expr(e->a).i;
                    return compare(e->bop, a, expr(e->b).i);
                }
                default: break;
            }
        }
        if (e->kind == Expr::Kind::Unary && e->uop == UnOp::Not) return not_(cond(e->a));
        if (e->kind == Expr::Kind::PtrCmp) {
            auto a = expr(e->a).as_loc();
            auto t = eq(a, expr(e->b).as_loc());
            return e->bop == BinOp::Eq ? t : not_(t);
        }
        return ne(expr(e).i, int_lit(0));
    }

    static Term compare(BinOp op, const Term& a, const Term& b) {
        switch (op) {
            case BinOp::Eq: return eq(a, b);
            case BinOp::Ne: return ne(a, b);
            case BinOp::Lt: return lt(a, b);
            case BinOp::Le: return le(a, b);
            case BinOp::Gt: return gt(a, b);
            case BinOp::Ge: return ge(a, b);
            default: throw Error("internal: not a comparison");
        }
    }

    MVal expr(const ExprRef& e) {
        using K = Expr::Kind;
        switch (e->kind) {
            case K::Const: return int_val(int_lit(e->value));
            case K::Nondet: {
                auto x = syms_.fresh("nd", Sort::Int);
                out_.nondet[cur_].push_back(x->name);
                fact(Fact::Kind::Hyp, and_({le(int_lit(INT32_MIN), x), le(x, int_lit(INT32_MAX))}));
                return int_val(x);
            }
            case K::Read: {
                auto l = lval(e->lval);
                std::vector<Term> hyps;
                auto v = mm_.load(cur_, env_, e->lval->type, l, hyps);
                for (auto& h : hyps) fact(Fact::Kind::Hyp, h);
                out_.loads.push_back({cur_, e, v});
                return v;
            }
            case K::Decay:
            case K::AddrOf: return ptr_val(lval(e->lval));
            case K::Null: return ptr_val(mm_.null());
            case K::PtrAdd: {
                auto a = expr(e->a).l;
                auto i = expr(e->b).i;
                auto ai = pt_.eval(e->b, pre()).i;
                Int size = e->type->elem->size;
                auto bytes = mul(int_lit(size), wrap_term(i, ArithKind::U32, ai));
                return ptr_val(mm_.shift(cur_, a, bytes, scale(pt_.index_u32(ai), size, pt_.ilvl())));
            }
            case K::Unary: {
                if (e->uop == UnOp::Not) return int_val(bool01(not_(cond(e->a))));
                return int_val(neg(expr(e->a).i));
            }
            case K::PtrCmp:
                return int_val(bool01(cond(e)));
            case K::Binary: {
                switch (e->bop) {
                    case BinOp::Add:
                    case BinOp::Sub:
                    case BinOp::Mul:
                    case BinOp::Div:
                    case BinOp::Mod: {
                        auto a = expr(e->a).i;
                        auto b = expr(e->b).i;
                        switch (e->bop) {
                            case BinOp::Add: return int_val(add(a, b));
                            case BinOp::Sub: return int_val(sub(a, b));
                            case BinOp::Mul: return int_val(mul(a, b));
                            case BinOp::Div: return int_val(c_div(a, b));
                            default: return int_val(c_mod(a, b));
                        }
                    }
                    default: return int_val(bool01(cond(e)));
                }
            }
        }
        throw Error("internal: bad expression");
    }
};

}  // namespace

Compiled compile_program(const Program& p, const MemoryModel& mm) {
    Compiled out;
    Compiler(p, mm, out).run();
    return out;
}

std::string emit_vc(const VC& vc, const Compiled& c, const std::string& comment) {
    return emit_smtlib(vc.formula(), c.syms, comment);
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate(const MemoryModel& mm, const Compiled& c, const Trace& t) {
    const Program& p = mm.program();
    Machine mc(p);
    std::vector<std::string> bad;
    std::map<StmtId, const TraceStep*> step;
    for (auto& s : t.steps) step[s.stmt] = &s;
    // a statement did not complete when it, or a statement nested in it, stopped the run
    auto failed = [&](StmtId s) { return step.at(s)->post.cells.size() != p.vars.size(); };
    auto executed = [&](StmtId s) { return step.count(s) > 0; };

    Binding b;
    auto init = mm.pt().layout().empty_state();
    for (auto& cr : c.created) {
        if (cr.stmt == 0) {
            b[cr.name] = mm.slot_value(cr.slot, init);
            continue;
        }
        if (!executed(cr.stmt) || failed(cr.stmt)) continue;
        b[cr.name] = mm.slot_value(cr.slot, step.at(cr.stmt)->post);
    }
    size_t k = 0;
    for (auto& s : t.steps) {
        auto it = c.nondet.find(s.stmt);
        if (it == c.nondet.end()) continue;
        for (auto& name : it->second)
            if (k < t.nondet.size()) b[name] = Value::of_int(t.nondet[k++]);
    }

    auto took_then = [&](const Stmt& s) {
        if (!s.then_body.empty()) return executed(s.then_body.front()->id);
        return s.else_body.empty() || !executed(s.else_body.front()->id);
    };
    auto check = [&](StmtId s, const Term& f, bool want, const char* what) {
        try {
            auto v = eval_ground(f, b);
            if ((v.i != 0) != want) {
                auto txt = to_sexpr(f);
                if (txt.size() > 300) txt = txt.substr(0, 300) + "...";
                bad.push_back("stmt " + std::to_string(s) + ": " + what + " evaluates to " +
                              (want ? "false" : "true") + ": " + txt);
            }
        } catch (const Error& e) {
            bad.push_back("stmt " + std::to_string(s) + ": " + what + ": " + e.what());
        }
    };

    for (auto& f : c.facts) {
        if (!executed(f.stmt)) continue;
        bool fail = failed(f.stmt);
        if (fail && t.outcome == Trace::Outcome::UB) continue;
        switch (f.kind) {
            case Fact::Kind::Store:
                if (!fail) check(f.stmt, f.t, true, "store relation");
                break;
            case Fact::Kind::Hyp: check(f.stmt, f.t, true, "load hypothesis"); break;
            case Fact::Kind::Assume: check(f.stmt, f.t, !fail, "assumption"); break;
            case Fact::Kind::Assert: check(f.stmt, f.t, !fail, "assertion"); break;
            case Fact::Kind::JoinThen:
            case Fact::Kind::JoinElse:
                if (!fail && took_then(*p.stmt(f.stmt)) == (f.kind == Fact::Kind::JoinThen))
                    check(f.stmt, f.t, true, "join equality");
                break;
        }
    }

    for (auto& ld : c.loads) {
        if (!executed(ld.stmt) || (failed(ld.stmt) && t.outcome == Trace::Outcome::UB)) continue;
        auto cv = mc.eval(ld.read, step.at(ld.stmt)->pre);
        if (!cv || cv->kind == ConcVal::Kind::Undef) continue;
        Term term = ld.v.is_ptr ? ld.v.as_loc() : ld.v.i;
        Value want = cv->kind == ConcVal::Kind::Ptr ? mm.loc_value(cv->p) : Value::of_int(cv->i);
        try {
            auto got = eval_ground(term, b);
            if (!(got == want))
                bad.push_back("stmt " + std::to_string(ld.stmt) + ": load of " + print_expr(p, ld.read) + " gives " +
                              got.str() + ", concrete " + want.str());
        } catch (const Error& e) {
            bad.push_back("stmt " + std::to_string(ld.stmt) + ": load of " + print_expr(p, ld.read) + ": " + e.what());
        }
    }
    return bad;
}

}  // namespace mpvc

#include "mpvc/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mpvc::logic {

const char* sort_name(Sort s) {
    switch (s) {
        case Sort::Int: return "Int";
        case Sort::Bool: return "Bool";
        case Sort::Loc: return "Loc";
        case Sort::ArrInt: return "(Array Int Int)";
        case Sort::ArrLoc: return "(Array Int Loc)";
    }
    return "?";
}

namespace {

const char* op_name(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "div";
        case Op::Mod: return "mod";
        case Op::Neg: return "-";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Eq: return "=";
        case Op::Not: return "not";
        case Op::And: return "and";
        case Op::Or: return "or";
        case Op::Implies: return "=>";
        case Op::Ite: return "ite";
        case Op::Select: return "select";
        case Op::Store: return "store";
        case Op::MkLoc: return "mk-loc";
        case Op::LocBase: return "loc-base";
        case Op::LocOff: return "loc-off";
        default: return "?";
    }
}

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

[[noreturn]] void sort_error(Op op) { throw Error(std::string("sort mismatch in '") + op_name(op) + "'"); }

Sort check(Op op, const std::vector<Term>& a) {
    auto need = [&](size_t n) {
        if (a.size() != n) sort_error(op);
    };
    auto all = [&](Sort s) {
        for (auto& t : a)
            if (t->sort != s) sort_error(op);
    };
    switch (op) {
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Mod: need(2); all(Sort::Int); return Sort::Int;
        case Op::Neg: need(1); all(Sort::Int); return Sort::Int;
        case Op::Lt:
        case Op::Le: need(2); all(Sort::Int); return Sort::Bool;
        case Op::Eq:
            need(2);
            if (a[0]->sort != a[1]->sort) sort_error(op);
            return Sort::Bool;
        case Op::Not: need(1); all(Sort::Bool); return Sort::Bool;
        case Op::And:
        case Op::Or: all(Sort::Bool); return Sort::Bool;
        case Op::Implies: need(2); all(Sort::Bool); return Sort::Bool;
        case Op::Ite:
            need(3);
            if (a[0]->sort != Sort::Bool || a[1]->sort != a[2]->sort) sort_error(op);
            return a[1]->sort;
        case Op::Select:
            need(2);
            if (a[1]->sort != Sort::Int) sort_error(op);
            if (a[0]->sort == Sort::ArrInt) return Sort::Int;
            if (a[0]->sort == Sort::ArrLoc) return Sort::Loc;
            sort_error(op);
        case Op::Store:
            need(3);
            if (a[1]->sort != Sort::Int) sort_error(op);
            if (a[0]->sort == Sort::ArrInt && a[2]->sort == Sort::Int) return Sort::ArrInt;
            if (a[0]->sort == Sort::ArrLoc && a[2]->sort == Sort::Loc) return Sort::ArrLoc;
            sort_error(op);
        case Op::MkLoc: need(2); all(Sort::Int); return Sort::Loc;
        case Op::LocBase:
        case Op::LocOff: need(1); all(Sort::Loc); return Sort::Int;
        default: sort_error(op);
    }
}

Term make(Op op, Sort s, Int lit, std::string name, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->sort = s;
    n->lit = lit;
    n->name = std::move(name);
    n->args = std::move(args);
    size_t h = mix(static_cast<size_t>(op), static_cast<size_t>(s));
    h = mix(h, static_cast<size_t>(static_cast<uint64_t>(lit)));
    h = mix(h, static_cast<size_t>(static_cast<uint64_t>(lit >> 64)));
    h = mix(h, std::hash<std::string>()(n->name));
    for (auto& c : n->args) h = mix(h, c->hash);
    n->hash = h;
    return n;
}

std::optional<Int> as_int(const Term& t) {
    if (t->op == Op::IntLit) return t->lit;
    return std::nullopt;
}

Int euclid_mod(Int a, Int b) { return floor_mod(a, b < 0 ? -b : b); }
Int euclid_div(Int a, Int b) { return (a - euclid_mod(a, b)) / b; }

// Splits t into (base, k) with t = base + k; base is null for literals.
std::pair<Term, Int> linear(const Term& t) {
    if (t->op == Op::IntLit) return {nullptr, t->lit};
    if (t->op == Op::Add && t->args[1]->op == Op::IntLit) return {t->args[0], t->args[1]->lit};
    return {t, 0};
}

// 1: certainly equal, 0: certainly distinct, -1: unknown.
int index_relation(const Term& i, const Term& j) {
    if (equal(i, j)) return 1;
    auto [bi, ki] = linear(i);
    auto [bj, kj] = linear(j);
    bool same_base = (!bi && !bj) || (bi && bj && equal(bi, bj));
    if (same_base) return ki == kj ? 1 : 0;
    return -1;
}

}  // namespace

bool equal(const Term& a, const Term& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->op != b->op || a->sort != b->sort || a->lit != b->lit || a->name != b->name ||
        a->args.size() != b->args.size())
        return false;
    for (size_t k = 0; k < a->args.size(); ++k)
        if (!equal(a->args[k], b->args[k])) return false;
    return true;
}

Term raw(Op op, std::vector<Term> args) {
    Sort s = check(op, args);
    return make(op, s, 0, "", std::move(args));
}

Term var(const std::string& name, Sort s) { return make(Op::Var, s, 0, name, {}); }
Term int_lit(Int v) { return make(Op::IntLit, Sort::Int, v, "", {}); }
Term bool_lit(bool b) { return make(Op::BoolLit, Sort::Bool, b ? 1 : 0, "", {}); }

bool is_true(const Term& t) { return t->op == Op::BoolLit && t->lit != 0; }
bool is_false(const Term& t) { return t->op == Op::BoolLit && t->lit == 0; }

Term add(const Term& a0, const Term& b0) {
    Term a = a0, b = b0;
    if (a->op == Op::IntLit && b->op != Op::IntLit) std::swap(a, b);
    auto x = as_int(a), y = as_int(b);
    if (x && y) return int_lit(*x + *y);
    if (y && *y == 0) return a;
    if (y && a->op == Op::Add && a->args[1]->op == Op::IntLit) return add(a->args[0], int_lit(a->args[1]->lit + *y));
    return raw(Op::Add, {a, b});
}

Term sub(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y) return int_lit(*x - *y);
    if (y) return add(a, int_lit(-*y));
    if (equal(a, b)) return int_lit(0);
    return raw(Op::Sub, {a, b});
}

Term mul(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y) return int_lit(*x * *y);
    if ((x && *x == 0) || (y && *y == 0)) {
        check(Op::Mul, {a, b});
        return int_lit(0);
    }
    if (x && *x == 1) return b;
    if (y && *y == 1) return a;
    return raw(Op::Mul, {a, b});
}

Term div(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y && *y != 0) return int_lit(euclid_div(*x, *y));
    if (y && *y == 1) return a;
    return raw(Op::Div, {a, b});
}

Term mod(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y && *y != 0) return int_lit(euclid_mod(*x, *y));
    if (y && (*y == 1 || *y == -1)) {
        check(Op::Mod, {a, b});
        return int_lit(0);
    }
    return raw(Op::Mod, {a, b});
}

Term neg(const Term& a) {
    if (auto x = as_int(a)) return int_lit(-*x);
    if (a->op == Op::Neg) return a->args[0];
    return raw(Op::Neg, {a});
}

Term lt(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y) return bool_lit(*x < *y);
    if (a->sort == Sort::Int && equal(a, b)) return bool_lit(false);
    return raw(Op::Lt, {a, b});
}

Term le(const Term& a, const Term& b) {
    auto x = as_int(a), y = as_int(b);
    if (x && y) return bool_lit(*x <= *y);
    if (a->sort == Sort::Int && equal(a, b)) return bool_lit(true);
    return raw(Op::Le, {a, b});
}

Term gt(const Term& a, const Term& b) { return lt(b, a); }
Term ge(const Term& a, const Term& b) { return le(b, a); }

Term eq(const Term& a, const Term& b) {
    check(Op::Eq, {a, b});
    if (equal(a, b)) return bool_lit(true);
    if ((a->op == Op::IntLit || a->op == Op::BoolLit) && a->op == b->op) return bool_lit(a->lit == b->lit);
    if (a->sort == Sort::Int) {
        int r = index_relation(a, b);
        if (r == 0) return bool_lit(false);
    }
    if (a->op == Op::MkLoc && b->op == Op::MkLoc)
        return and_({eq(a->args[0], b->args[0]), eq(a->args[1], b->args[1])});
    if (a->sort == Sort::Bool) {
        if (is_true(a)) return b;
        if (is_true(b)) return a;
    }
    return raw(Op::Eq, {a, b});
}

Term ne(const Term& a, const Term& b) { return not_(eq(a, b)); }

Term not_(const Term& a) {
    if (a->op == Op::BoolLit) return bool_lit(a->lit == 0);
    if (a->op == Op::Not) return a->args[0];
    return raw(Op::Not, {a});
}

Term and_(std::vector<Term> xs) {
    std::vector<Term> out;
    for (auto& x : xs) {
        if (x->sort != Sort::Bool) sort_error(Op::And);
        if (is_true(x)) continue;
        if (is_false(x)) return bool_lit(false);
        if (x->op == Op::And)
            out.insert(out.end(), x->args.begin(), x->args.end());
        else
            out.push_back(x);
    }
    if (out.empty()) return bool_lit(true);
    if (out.size() == 1) return out[0];
    return raw(Op::And, std::move(out));
}

Term or_(std::vector<Term> xs) {
    std::vector<Term> out;
    for (auto& x : xs) {
        if (x->sort != Sort::Bool) sort_error(Op::Or);
        if (is_false(x)) continue;
        if (is_true(x)) return bool_lit(true);
        if (x->op == Op::Or)
            out.insert(out.end(), x->args.begin(), x->args.end());
        else
            out.push_back(x);
    }
    if (out.empty()) return bool_lit(false);
    if (out.size() == 1) return out[0];
    return raw(Op::Or, std::move(out));
}

Term implies(const Term& a, const Term& b) {
    check(Op::Implies, {a, b});
    if (is_true(a)) return b;
    if (is_false(a) || is_true(b)) return bool_lit(true);
    if (is_false(b)) return not_(a);
    return raw(Op::Implies, {a, b});
}

Term ite(const Term& c, const Term& x, const Term& y) {
    check(Op::Ite, {c, x, y});
    if (is_true(c)) return x;
    if (is_false(c)) return y;
    if (equal(x, y)) return x;
    if (x->sort == Sort::Bool) {
        if (is_true(x) && is_false(y)) return c;
        if (is_false(x) && is_true(y)) return not_(c);
    }
    return raw(Op::Ite, {c, x, y});
}

Term select(const Term& a, const Term& i) {
    check(Op::Select, {a, i});
    Term arr = a;
    // Read over write: skip stores to indices known to differ.
    while (arr->op == Op::Store) {
        int r = index_relation(i, arr->args[1]);
        if (r == 1) return arr->args[2];
        if (r == -1) break;
        arr = arr->args[0];
    }
    return raw(Op::Select, {arr, i});
}

Term store(const Term& a, const Term& i, const Term& v) { return raw(Op::Store, {a, i, v}); }

Term mk_loc(const Term& b, const Term& o) { return raw(Op::MkLoc, {b, o}); }

namespace {

bool projectable(const Term& l) { return l->op == Op::MkLoc || l->op == Op::Ite; }

}  // namespace

Term loc_base(const Term& l) {
    if (l->op == Op::MkLoc) return l->args[0];
    if (l->op == Op::Ite && projectable(l->args[1]) && projectable(l->args[2]))
        return ite(l->args[0], loc_base(l->args[1]), loc_base(l->args[2]));
    return raw(Op::LocBase, {l});
}

Term loc_off(const Term& l) {
    if (l->op == Op::MkLoc) return l->args[1];
    if (l->op == Op::Ite && projectable(l->args[1]) && projectable(l->args[2]))
        return ite(l->args[0], loc_off(l->args[1]), loc_off(l->args[2]));
    return raw(Op::LocOff, {l});
}

Term simplify(const Term& t) {
    std::unordered_map<const Node*, Term> memo;
    std::function<Term(const Term&)> go = [&](const Term& n) -> Term {
        auto it = memo.find(n.get());
        if (it != memo.end()) return it->second;
        std::vector<Term> a;
        for (auto& c : n->args) a.push_back(go(c));
        Term r;
        switch (n->op) {
            case Op::Var:
            case Op::IntLit:
            case Op::BoolLit: r = n; break;
            case Op::Add: r = add(a[0], a[1]); break;
            case Op::Sub: r = sub(a[0], a[1]); break;
            case Op::Mul: r = mul(a[0], a[1]); break;
            case Op::Div: r = div(a[0], a[1]); break;
            case Op::Mod: r = mod(a[0], a[1]); break;
            case Op::Neg: r = neg(a[0]); break;
            case Op::Lt: r = lt(a[0], a[1]); break;
            case Op::Le: r = le(a[0], a[1]); break;
            case Op::Eq: r = eq(a[0], a[1]); break;
            case Op::Not: r = not_(a[0]); break;
            case Op::And: r = and_(a); break;
            case Op::Or: r = or_(a); break;
            case Op::Implies: r = implies(a[0], a[1]); break;
            case Op::Ite: r = ite(a[0], a[1], a[2]); break;
            case Op::Select: r = select(a[0], a[1]); break;
            case Op::Store: r = store(a[0], a[1], a[2]); break;
            case Op::MkLoc: r = mk_loc(a[0], a[1]); break;
            case Op::LocBase: r = loc_base(a[0]); break;
            case Op::LocOff: r = loc_off(a[0]); break;
        }
        memo.emplace(n.get(), r);
        return r;
    };
    return go(t);
}

size_t dag_size(const Term& t) {
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack = {t.get()};
    while (!stack.empty()) {
        auto* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (auto& c : n->args) stack.push_back(c.get());
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Symbols

Term Symbols::declare(const std::string& name, Sort s) {
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (order_[it->second].second != s) throw Error("symbol '" + name + "' redeclared with another sort");
    } else {
        index_[name] = order_.size();
        order_.emplace_back(name, s);
    }
    return var(name, s);
}

Term Symbols::fresh(const std::string& prefix, Sort s) {
    int& k = counters_[prefix];
    std::string name;
    do {
        name = prefix + "_" + std::to_string(k++);
    } while (index_.count(name));
    return declare(name, s);
}

Sort Symbols::sort_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("undeclared symbol '" + name + "'");
    return order_[it->second].second;
}

int Symbols::position(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : static_cast<int>(it->second);
}

// ---------------------------------------------------------------------------
// Evaluation

Value Value::of_array(Sort s, std::map<Int, Value> m, Value def) {
    Value v;
    v.sort = s;
    auto a = std::make_shared<ArrayValue>();
    a->m = std::move(m);
    a->def = std::move(def);
    v.arr = a;
    return v;
}

bool Value::operator==(const Value& o) const {
    if (sort != o.sort) return false;
    if (sort == Sort::ArrInt || sort == Sort::ArrLoc) {
        if (!(arr->def == o.arr->def)) return false;
        auto at = [](const ArrayValue& a, Int k) {
            auto it = a.m.find(k);
            return it == a.m.end() ? a.def : it->second;
        };
        for (auto& [k, v] : arr->m)
            if (!(v == at(*o.arr, k))) return false;
        for (auto& [k, v] : o.arr->m)
            if (!(v == at(*arr, k))) return false;
        return true;
    }
    return i == o.i && j == o.j;
}

std::string Value::str() const {
    switch (sort) {
        case Sort::Int: return to_string(i);
        case Sort::Bool: return i ? "true" : "false";
        case Sort::Loc: return "(" + to_string(i) + "," + to_string(j) + ")";
        default: {
            std::string s = "[";
            for (auto& [k, v] : arr->m) s += to_string(k) + ":" + v.str() + " ";
            return s + "default:" + arr->def.str() + "]";
        }
    }
}

Value eval_ground(const Term& t, const Binding& b) {
    std::unordered_map<const Node*, Value> memo;
    std::function<Value(const Term&)> go = [&](const Term& n) -> Value {
        auto it = memo.find(n.get());
        if (it != memo.end()) return it->second;
        Value r;
        auto I = [&](size_t k) { return go(n->args[k]).i; };
        switch (n->op) {
            case Op::Var: {
                auto v = b.find(n->name);
                if (v == b.end()) throw Error("no binding for '" + n->name + "'");
                if (v->second.sort != n->sort) throw Error("binding for '" + n->name + "' has the wrong sort");
                r = v->second;
                break;
            }
            case Op::IntLit: r = Value::of_int(n->lit); break;
            case Op::BoolLit: r = Value::of_bool(n->lit != 0); break;
            case Op::Add: r = Value::of_int(I(0) + I(1)); break;
            case Op::Sub: r = Value::of_int(I(0) - I(1)); break;
            case Op::Mul: r = Value::of_int(I(0) * I(1)); break;
            case Op::Div:
            case Op::Mod: {
                Int x = I(0), y = I(1);
                if (y == 0) throw Error("division by zero");
                r = Value::of_int(n->op == Op::Div ? euclid_div(x, y) : euclid_mod(x, y));
                break;
            }
            case Op::Neg: r = Value::of_int(-I(0)); break;
            case Op::Lt: r = Value::of_bool(I(0) < I(1)); break;
            case Op::Le: r = Value::of_bool(I(0) <= I(1)); break;
            case Op::Eq: r = Value::of_bool(go(n->args[0]) == go(n->args[1])); break;
            case Op::Not: r = Value::of_bool(I(0) == 0); break;
            case Op::And: {
                bool v = true;
                for (auto& c : n->args)
                    if (go(c).i == 0) {
                        v = false;
                        break;
                    }
                r = Value::of_bool(v);
                break;
            }
            case Op::Or: {
                bool v = false;
                for (auto& c : n->args)
                    if (go(c).i != 0) {
                        v = true;
                        break;
                    }
                r = Value::of_bool(v);
                break;
            }
            case Op::Implies: r = Value::of_bool(I(0) == 0 || I(1) != 0); break;
            case Op::Ite: r = I(0) ? go(n->args[1]) : go(n->args[2]); break;
            case Op::Select: {
                Value a = go(n->args[0]);
                Int k = I(1);
                auto f = a.arr->m.find(k);
                r = f == a.arr->m.end() ? a.arr->def : f->second;
                break;
            }
            case Op::Store: {
                Value a = go(n->args[0]);
                auto m = a.arr->m;
                m[I(1)] = go(n->args[2]);
                r = Value::of_array(a.sort, std::move(m), a.arr->def);
                break;
            }
            case Op::MkLoc: r = Value::of_loc(I(0), I(1)); break;
            case Op::LocBase: r = Value::of_int(go(n->args[0]).i); break;
            case Op::LocOff: r = Value::of_int(go(n->args[0]).j); break;
        }
        memo.emplace(n.get(), r);
        return r;
    };
    return go(t);
}

// ---------------------------------------------------------------------------
// Printing

std::string smt_symbol(const std::string& name) {
    bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') plain = false;
    return plain ? name : "|" + name + "|";
}

namespace {

std::string lit_str(Int v) { return v < 0 ? "(- " + to_string(-v) + ")" : to_string(v); }

void print(const Term& t, std::ostringstream& os, const std::unordered_map<const Node*, std::string>* names) {
    if (names) {
        auto it = names->find(t.get());
        if (it != names->end()) {
            os << it->second;
            return;
        }
    }
    switch (t->op) {
        case Op::Var: os << smt_symbol(t->name); return;
        case Op::IntLit: os << lit_str(t->lit); return;
        case Op::BoolLit: os << (t->lit ? "true" : "false"); return;
        default: break;
    }
    os << "(" << op_name(t->op);
    for (auto& c : t->args) {
        os << " ";
        print(c, os, names);
    }
    os << ")";
}

}  // namespace

std::string to_sexpr(const Term& t) {
    std::ostringstream os;
    print(t, os, nullptr);
    return os.str();
}

std::vector<std::string> free_vars(const Term& t) {
    std::vector<std::string> out;
    std::unordered_set<const Node*> seen;
    std::set<std::string> names;
    std::vector<const Node*> stack = {t.get()};
    while (!stack.empty()) {
        auto* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->op == Op::Var && names.insert(n->name).second) out.push_back(n->name);
        for (auto& c : n->args) stack.push_back(c.get());
    }
    return out;
}

std::string emit_smtlib(const Term& goal, const Symbols& syms, const std::string& comment) {
    if (goal->sort != Sort::Bool) throw Error("goal must be boolean");
    // Parent counts over the DAG, then shared interior nodes in post-order.
    std::unordered_map<const Node*, int> parents;
    std::vector<const Node*> post;
    std::unordered_set<const Node*> seen;
    std::function<void(const Node*)> visit = [&](const Node* n) {
        if (!seen.insert(n).second) return;
        for (auto& c : n->args) {
            parents[c.get()]++;
            visit(c.get());
        }
        post.push_back(n);
    };
    visit(goal.get());

    std::ostringstream os;
    if (!comment.empty()) os << "; " << comment << "\n";
    os << "(set-logic ALL)\n";
    os << "(declare-datatype Loc ((mk-loc (loc-base Int) (loc-off Int))))\n";
    std::vector<std::pair<int, const Node*>> vars;
    for (auto* n : post)
        if (n->op == Op::Var) {
            int pos = syms.position(n->name);
            if (pos < 0) throw Error("unregistered symbol '" + n->name + "'");
            vars.emplace_back(pos, n);
        }
    std::sort(vars.begin(), vars.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::string last;
    for (auto& [pos, n] : vars) {
        if (n->name == last) continue;
        last = n->name;
        os << "(declare-const " << smt_symbol(n->name) << " " << sort_name(n->sort) << ")\n";
    }
    std::unordered_map<const Node*, std::string> names;
    int k = 0;
    for (auto* n : post) {
        if (n->args.empty() || parents[n] < 2 || n == goal.get()) continue;
        std::ostringstream body;
        Term alias(std::shared_ptr<const Node>{}, n);
        print(alias, body, &names);
        std::string name = "_t" + std::to_string(k++);
        os << "(define-fun " << name << " () " << sort_name(n->sort) << " " << body.str() << ")\n";
        names.emplace(n, name);
    }
    std::ostringstream g;
    print(goal, g, &names);
    os << "(assert (not " << g.str() << "))\n";
    os << "(check-sat)\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Random terms over a fixed variable pool, for property tests.

namespace {

const std::vector<std::pair<std::string, Sort>>& pool() {
    static const std::vector<std::pair<std::string, Sort>> p = {
        {"i0", Sort::Int},    {"i1", Sort::Int},    {"i2", Sort::Int}, {"b0", Sort::Bool},
        {"a0", Sort::ArrInt}, {"a1", Sort::ArrInt}, {"l0", Sort::Loc}, {"m0", Sort::ArrLoc}};
    return p;
}

Term random_leaf(SplitMix64& rng, Sort s) {
    std::vector<Term> c;
    for (auto& [n, ps] : pool())
        if (ps == s) c.push_back(var(n, s));
    if (s == Sort::Int) c.push_back(int_lit(rng.range(-3, 3)));
    if (s == Sort::Bool) c.push_back(bool_lit(rng.chance(50)));
    return c[rng.below(c.size())];
}

}  // namespace

Term random_term(SplitMix64& rng, Sort s, int depth) {
    if (depth <= 0 || rng.chance(20)) return random_leaf(rng, s);
    auto sub = [&](Sort t) { return random_term(rng, t, depth - 1); };
    auto idx = [&]() { return rng.chance(50) ? int_lit(rng.range(0, 3)) : raw(Op::Add, {sub(Sort::Int), int_lit(rng.range(0, 2))}); };
    switch (s) {
        case Sort::Int:
            switch (rng.below(9)) {
                case 0: return raw(Op::Add, {sub(Sort::Int), sub(Sort::Int)});
                case 1: return raw(Op::Sub, {sub(Sort::Int), sub(Sort::Int)});
                case 2: return raw(Op::Mul, {sub(Sort::Int), sub(Sort::Int)});
                case 3: return raw(rng.chance(50) ? Op::Div : Op::Mod, {sub(Sort::Int), int_lit(rng.range(1, 5))});
                case 4: return raw(Op::Neg, {sub(Sort::Int)});
                case 5: return raw(Op::Ite, {sub(Sort::Bool), sub(Sort::Int), sub(Sort::Int)});
                case 6: return raw(Op::Select, {sub(Sort::ArrInt), idx()});
                case 7: return raw(rng.chance(50) ? Op::LocBase : Op::LocOff, {sub(Sort::Loc)});
                default: return raw(Op::Add, {sub(Sort::Int), int_lit(rng.range(-2, 2))});
            }
        case Sort::Bool:
            switch (rng.below(8)) {
                case 0: return raw(Op::Lt, {sub(Sort::Int), sub(Sort::Int)});
                case 1: return raw(Op::Le, {sub(Sort::Int), sub(Sort::Int)});
                case 2: {
                    Sort e = std::vector<Sort>{Sort::Int, Sort::Bool, Sort::Loc, Sort::ArrInt}[rng.below(4)];
                    return raw(Op::Eq, {sub(e), sub(e)});
                }
                case 3: return raw(Op::Not, {sub(Sort::Bool)});
                case 4: return raw(Op::And, {sub(Sort::Bool), sub(Sort::Bool), sub(Sort::Bool)});
                case 5: return raw(Op::Or, {sub(Sort::Bool), sub(Sort::Bool)});
                case 6: return raw(Op::Implies, {sub(Sort::Bool), sub(Sort::Bool)});
                default: return raw(Op::Ite, {sub(Sort::Bool), sub(Sort::Bool), sub(Sort::Bool)});
            }
        case Sort::Loc:
            switch (rng.below(3)) {
                case 0: return raw(Op::MkLoc, {sub(Sort::Int), sub(Sort::Int)});
                case 1: return raw(Op::Select, {sub(Sort::ArrLoc), idx()});
                default: return raw(Op::Ite, {sub(Sort::Bool), sub(Sort::Loc), sub(Sort::Loc)});
            }
        case Sort::ArrInt:
            if (rng.chance(70)) return raw(Op::Store, {sub(Sort::ArrInt), idx(), sub(Sort::Int)});
            return raw(Op::Ite, {sub(Sort::Bool), sub(Sort::ArrInt), sub(Sort::ArrInt)});
        case Sort::ArrLoc: return raw(Op::Store, {sub(Sort::ArrLoc), idx(), sub(Sort::Loc)});
    }
    return random_leaf(rng, s);
}

Binding random_binding(SplitMix64& rng) {
    Binding b;
    auto small = [&]() { return Int(rng.range(-4, 4)); };
    for (auto& [n, s] : pool()) {
        switch (s) {
            case Sort::Int: b[n] = Value::of_int(small()); break;
            case Sort::Bool: b[n] = Value::of_bool(rng.chance(50)); break;
            case Sort::Loc: b[n] = Value::of_loc(small(), small()); break;
            case Sort::ArrInt: {
                std::map<Int, Value> m;
                for (int k = 0; k < 3; ++k) m[small()] = Value::of_int(small());
                b[n] = Value::of_array(s, m, Value::of_int(small()));
                break;
            }
            case Sort::ArrLoc: {
                std::map<Int, Value> m;
                for (int k = 0; k < 3; ++k) m[small()] = Value::of_loc(small(), small());
                b[n] = Value::of_array(s, m, Value::of_loc(small(), small()));
                break;
            }
        }
    }
    return b;
}

void declare_pool(Symbols& syms) {
    for (auto& [n, s] : pool()) syms.declare(n, s);
}

}  // namespace mpvc::logic

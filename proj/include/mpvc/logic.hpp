#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mpvc/util.hpp"

namespace mpvc::logic {

enum class Sort { Int, Bool, Loc, ArrInt, ArrLoc };
const char* sort_name(Sort s);  // SMT-LIB spelling

enum class Op {
    Var, IntLit, BoolLit,
    Add, Sub, Mul, Div, Mod, Neg,
    Lt, Le, Eq, Not, And, Or, Implies, Ite,
    Select, Store, MkLoc, LocBase, LocOff
};

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::IntLit;
    Sort sort = Sort::Int;
    Int lit = 0;
    std::string name;
    std::vector<Term> args;
    size_t hash = 0;
};

bool equal(const Term& a, const Term& b);  // structural

// Unsimplified construction; checks sorts.
Term raw(Op op, std::vector<Term> args);
Term var(const std::string& name, Sort s);
Term int_lit(Int v);
Term bool_lit(bool b);

// Simplifying constructors: literal folding, read-over-write, location projections.
Term add(const Term& a, const Term& b);
Term sub(const Term& a, const Term& b);
Term mul(const Term& a, const Term& b);
Term div(const Term& a, const Term& b);  // euclidean, as in SMT-LIB
Term mod(const Term& a, const Term& b);
Term neg(const Term& a);
Term lt(const Term& a, const Term& b);
Term le(const Term& a, const Term& b);
Term gt(const Term& a, const Term& b);
Term ge(const Term& a, const Term& b);
Term eq(const Term& a, const Term& b);
Term ne(const Term& a, const Term& b);
Term not_(const Term& a);
Term and_(std::vector<Term> xs);
Term or_(std::vector<Term> xs);
Term implies(const Term& a, const Term& b);
Term ite(const Term& c, const Term& x, const Term& y);
Term select(const Term& a, const Term& i);
Term store(const Term& a, const Term& i, const Term& v);
Term mk_loc(const Term& b, const Term& o);
Term loc_base(const Term& l);
Term loc_off(const Term& l);

// Rebuilds t bottom-up with the simplifying constructors.
Term simplify(const Term& t);

bool is_true(const Term& t);
bool is_false(const Term& t);
size_t dag_size(const Term& t);

// Registered free variables, in registration order.
class Symbols {
public:
    Term declare(const std::string& name, Sort s);
    // prefix_0, prefix_1, ... skipping names already taken.
    Term fresh(const std::string& prefix, Sort s);
    bool has(const std::string& name) const { return index_.count(name) > 0; }
    Sort sort_of(const std::string& name) const;
    const std::vector<std::pair<std::string, Sort>>& all() const { return order_; }
    int position(const std::string& name) const;

private:
    std::map<std::string, size_t> index_;
    std::vector<std::pair<std::string, Sort>> order_;
    std::map<std::string, int> counters_;
};

// Ground values for evaluation.
struct Value;
struct ArrayValue;

struct Value {
    Sort sort = Sort::Int;
    Int i = 0;  // Int, Bool (0/1), Loc base
    Int j = 0;  // Loc offset
    std::shared_ptr<const ArrayValue> arr;

    static Value of_int(Int v) { return {Sort::Int, v, 0, nullptr}; }
    static Value of_bool(bool b) { return {Sort::Bool, b ? 1 : 0, 0, nullptr}; }
    static Value of_loc(Int b, Int o) { return {Sort::Loc, b, o, nullptr}; }
    static Value of_array(Sort s, std::map<Int, Value> m, Value def);
    bool operator==(const Value& o) const;
    std::string str() const;
};

struct ArrayValue {
    std::map<Int, Value> m;
    Value def;
};

using Binding = std::map<std::string, Value>;

// Throws Error on a missing binding or division by zero.
Value eval_ground(const Term& t, const Binding& b);

std::string to_sexpr(const Term& t);
std::string smt_symbol(const std::string& name);
// Self-contained script asserting the negation of goal; shared subterms become define-funs.
std::string emit_smtlib(const Term& goal, const Symbols& syms, const std::string& comment = "");

std::vector<std::string> free_vars(const Term& t);

// Random unsimplified terms over the variables i0..i2, b0, a0, a1, l0, m0.
Term random_term(SplitMix64& rng, Sort s, int depth);
Binding random_binding(SplitMix64& rng);
void declare_pool(Symbols& syms);

}  // namespace mpvc::logic

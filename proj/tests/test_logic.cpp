#include <doctest.h>

#include "mpvc/logic.hpp"

using namespace mpvc;
using namespace mpvc::logic;

TEST_CASE("logic: constructor examples") {
    auto a = var("a", Sort::ArrInt);
    auto i = var("i", Sort::Int);
    auto v = var("v", Sort::Int);
    CHECK(equal(select(store(a, i, v), i), v));
    CHECK(equal(ite(bool_lit(true), i, v), i));
    CHECK(equal(add(int_lit(4), int_lit(12)), int_lit(16)));
    CHECK(equal(add(add(i, int_lit(3)), int_lit(4)), add(i, int_lit(7))));
    CHECK(equal(ite(var("c", Sort::Bool), v, v), v));
    CHECK(is_true(eq(i, i)));
    // distinct literal and offset indices skip the store
    CHECK(equal(select(store(a, int_lit(1), v), int_lit(2)), raw(Op::Select, {a, int_lit(2)})));
    CHECK(equal(select(store(a, add(i, int_lit(1)), v), i), raw(Op::Select, {a, i})));
    // unknown relation keeps the store
    CHECK(select(store(a, var("j", Sort::Int), v), i)->op == Op::Select);
    CHECK(equal(loc_base(mk_loc(i, v)), i));
    CHECK(equal(loc_off(mk_loc(i, v)), v));
    CHECK_THROWS_AS(add(i, bool_lit(true)), Error);
    CHECK_THROWS_AS(select(var("m", Sort::ArrLoc), bool_lit(false)), Error);
    CHECK_THROWS_AS(store(a, i, mk_loc(i, i)), Error);
}

TEST_CASE("logic: ground evaluation") {
    auto a = var("a", Sort::ArrInt);
    Binding b;
    b["a"] = Value::of_array(Sort::ArrInt, {}, Value::of_int(0));
    CHECK(eval_ground(raw(Op::Select, {raw(Op::Store, {a, int_lit(3), int_lit(7)}), int_lit(3)}), b).i == 7);
    CHECK(eval_ground(raw(Op::Select, {a, int_lit(9)}), b).i == 0);
    CHECK(eval_ground(raw(Op::Ite, {raw(Op::Lt, {int_lit(2), int_lit(3)}), int_lit(10), int_lit(20)}), b).i == 10);
    CHECK(eval_ground(raw(Op::Div, {int_lit(-7), int_lit(2)}), b).i == -4);
    CHECK(eval_ground(raw(Op::Mod, {int_lit(-7), int_lit(2)}), b).i == 1);
    CHECK(eval_ground(raw(Op::Mod, {int_lit(7), int_lit(-2)}), b).i == 1);
    CHECK(eval_ground(raw(Op::Div, {int_lit(7), int_lit(-2)}), b).i == -3);
    CHECK_THROWS_AS(eval_ground(raw(Op::Div, {int_lit(1), int_lit(0)}), b), Error);
    CHECK_THROWS_AS(eval_ground(var("nope", Sort::Int), b), Error);
    auto l = mk_loc(int_lit(2), int_lit(8));
    CHECK(eval_ground(raw(Op::LocOff, {l}), b).i == 8);
    // arrays compare extensionally
    Binding c;
    c["x"] = Value::of_array(Sort::ArrInt, {{1, Value::of_int(0)}}, Value::of_int(0));
    c["y"] = Value::of_array(Sort::ArrInt, {}, Value::of_int(0));
    CHECK(eval_ground(raw(Op::Eq, {var("x", Sort::ArrInt), var("y", Sort::ArrInt)}), c).i == 1);
}

TEST_CASE("logic: simplifier preserves meaning") {
    SplitMix64 rng(2024);
    int checked = 0;
    for (int n = 0; n < 1000; ++n) {
        Sort s = std::vector<Sort>{Sort::Int, Sort::Bool, Sort::Loc}[rng.below(3)];
        auto t = random_term(rng, s, 5);
        auto u = simplify(t);
        CHECK(u->sort == t->sort);
        for (int k = 0; k < 3; ++k) {
            auto b = random_binding(rng);
            auto x = eval_ground(t, b), y = eval_ground(u, b);
            CHECK_MESSAGE(x == y, to_sexpr(t) << " vs " << to_sexpr(u));
            ++checked;
        }
    }
    CHECK(checked == 3000);
}

TEST_CASE("logic: fresh names") {
    Symbols syms;
    CHECK(syms.fresh("df", Sort::ArrInt)->name == "df_0");
    CHECK(syms.fresh("df", Sort::ArrInt)->name == "df_1");
    syms.declare("x_0", Sort::Int);
    CHECK(syms.fresh("x", Sort::Int)->name == "x_1");
    CHECK_THROWS_AS(syms.declare("x_0", Sort::Bool), Error);
    CHECK(syms.all().size() == 4);
}

TEST_CASE("logic: SMT-LIB emission") {
    Symbols syms;
    auto x = syms.declare("x", Sort::Int);
    auto m = syms.declare("m", Sort::ArrInt);
    syms.declare("unused", Sort::Int);
    auto shared = raw(Op::Select, {m, raw(Op::Add, {x, int_lit(1)})});
    auto goal = raw(Op::And, {raw(Op::Le, {shared, int_lit(-2)}), raw(Op::Eq, {shared, x})});
    auto s1 = emit_smtlib(goal, syms);
    CHECK(s1 == emit_smtlib(goal, syms));
    CHECK(s1.find("(set-logic ALL)\n") == 0);
    CHECK(s1.find("(declare-datatype Loc ((mk-loc (loc-base Int) (loc-off Int))))") != std::string::npos);
    CHECK(s1.find("(declare-const x Int)\n(declare-const m (Array Int Int))") != std::string::npos);
    CHECK(s1.find("unused") == std::string::npos);
    CHECK(s1.find("(define-fun _t0 () Int (select m (+ x 1)))") != std::string::npos);
    CHECK(s1.find("(assert (not (and (<= _t0 (- 2)) (= _t0 x))))\n(check-sat)\n") != std::string::npos);
    Symbols none;
    CHECK_THROWS_AS(emit_smtlib(goal, none), Error);
    CHECK_THROWS_AS(emit_smtlib(x, syms), Error);
}

#include <doctest.h>

#include "mpvc/concrete.hpp"

using namespace mpvc;

namespace {

struct Expect {
    const char* var;
    Int off;
    Int value;
};

struct Micro {
    const char* src;
    Trace::Outcome outcome;
    StmtId at;
    std::vector<Expect> cells;
};

Int cell(const Program& p, const ConcState& s, const char* var, Int off) {
    auto& v = s.cells.at(static_cast<size_t>(p.var_index(var))).at(off);
    REQUIRE(v.kind == ConcVal::Kind::Int);
    return v.i;
}

}  // namespace

TEST_CASE("concrete: micro-program table") {
    using O = Trace::Outcome;
    std::vector<Micro> table = {
        {"i32 x; x = 5;", O::Ok, 0, {{"x", 0, 5}}},
        {"i32 x; x = 7 / 2 + -7 / 2 + 7 % -3 + -7 % 3;", O::Ok, 0, {{"x", 0, 3 - 3 + 1 - 1}}},
        {"u8 b; b = 300;", O::Ok, 0, {{"b", 0, 44}}},
        {"i8 b; b = 128;", O::Ok, 0, {{"b", 0, -128}}},
        {"u32 u; u = -1;", O::Ok, 0, {{"u", 0, 4294967295LL}}},
        {"i32 a[4]; a[3] = 9; a[0] = a[3] + 1;", O::Ok, 0, {{"a", 12, 9}, {"a", 0, 10}}},
        {"i32 a[4]; i32 *p; p = a + 2; *p = 4; a[1] = *(p + 1 - 2);", O::UB, 3, {}},
        {"i32 a[4]; i32 *p; p = a + 2; *p = 4; a[3] = *p * 2;", O::Ok, 0, {{"a", 8, 4}, {"a", 12, 8}}},
        {"struct r { u8 c; i32 v; }; r s; r *q; q = &s; q->v = 3; s.c = q->v + 1;", O::Ok, 0,
         {{"s", 4, 3}, {"s", 0, 4}}},
        {"i32 x; i32 y; y = x;", O::UB, 1, {}},
        {"i32 *p; i32 y; y = *p;", O::UB, 1, {}},
        {"i32 *p; p = null; *p = 1;", O::UB, 2, {}},
        {"i32 a[2]; a[2] = 1;", O::UB, 1, {}},
        {"i32 x; assert(1 == 2);", O::AssertFail, 1, {}},
        {"i32 x; x = 1; assume(x == 0); x = 2;", O::AssumeFail, 2, {{"x", 0, 1}}},
        {"i32 x; x = 0; if (x == 0) { x = 10; } else { x = 20; }", O::Ok, 0, {{"x", 0, 10}}},
        {"i32 x; x = 3; if (x < 2) { x = 10; } else { x = 20; }", O::Ok, 0, {{"x", 0, 20}}},
        {"i32 x; i32 y; y = 0; x = (y != 0) && (1 / y == 1);", O::Ok, 0, {{"x", 0, 0}}},
        {"i32 x; i32 y; y = 0; x = (y == 0) || (1 / y == 1);", O::Ok, 0, {{"x", 0, 1}}},
        {"i32 x; x = 1 / 0;", O::UB, 1, {}},
        {"i32 a[2]; i32 *p; i32 *q; i32 x; p = a; q = &a[0]; x = p == q; x = x + (p + 1 != q);", O::Ok, 0,
         {{"x", 0, 2}}},
        {"i32 x; i32 a[3]; for i in 0..3 { a[i] = i * i; } x = a[2];", O::Ok, 0, {{"x", 0, 4}}},
        {"i64 w; w = 4294967296 * 2;", O::Ok, 0, {{"w", 0, Int(8589934592LL)}}},
    };
    for (auto& m : table) {
        CAPTURE(m.src);
        auto p = parse_program(m.src);
        Machine mc(p);
        auto t = mc.run(1);
        CHECK(t.outcome == m.outcome);
        if (m.outcome != O::Ok) CHECK(t.at == m.at);
        for (auto& e : m.cells) CHECK(cell(p, t.final_state, e.var, e.off) == e.value);
    }
}

TEST_CASE("concrete: AMM operations") {
    auto p = parse_program("i32 x; u8 b; i32 *q; struct s2 { i32 a; i32 *b; }; s2 r;");
    Layout lay(p);
    auto m = lay.empty_state();
    auto i32 = arith_type(ArithKind::I32);
    int x = p.var_index("x");
    CHECK(amm_base(p, x) == ConcLoc{x, 0});
    CHECK_THROWS_AS(amm_base(p, 99), Error);
    CHECK(amm_shift({x, 4}, 12) == ConcLoc{x, 16});
    CHECK(amm_shift({x, 4}, 0) == ConcLoc{x, 4});
    CHECK_FALSE(amm_load(lay, m, i32, {x, 0}));
    REQUIRE(amm_store(lay, m, i32, {x, 0}, ConcVal::vint(5)));
    CHECK(amm_load(lay, m, i32, {x, 0})->i == 5);
    CHECK_FALSE(amm_load(lay, m, i32, {x, 1}));
    CHECK_FALSE(amm_store(lay, m, i32, amm_null(), ConcVal::vint(1)));
    int b = p.var_index("b");
    REQUIRE(amm_store(lay, m, arith_type(ArithKind::U8), {b, 0}, ConcVal::vint(300)));
    CHECK(m.cells[static_cast<size_t>(b)].at(0).i == 44);
    int r = p.var_index("r");
    // pointer into an int cell and int into a pointer cell are kind mismatches
    CHECK_FALSE(amm_store(lay, m, i32, {r, 4}, ConcVal::vint(1)));
    CHECK_FALSE(amm_store(lay, m, ptr_type(i32), {r, 4}, ConcVal::vint(1)));
    CHECK(amm_store(lay, m, ptr_type(i32), {r, 4}, ConcVal::vptr({x, 0})));
    CHECK_FALSE(amm_load(lay, m, i32, {r, 4}));
}

TEST_CASE("concrete: frame property on random stores") {
    auto p = parse_program("struct s2 { u8 a; i32 b; i16 c[3]; }; s2 r[3]; i64 w; u16 h[5];");
    Layout lay(p);
    SplitMix64 rng(42);
    auto m = lay.empty_state();
    for (int it = 0; it < 2000; ++it) {
        int v = static_cast<int>(rng.below(p.vars.size()));
        auto& cells = lay.cells(v);
        auto& c = cells[rng.below(cells.size())];
        auto before = m;
        Int val = rng.range(-100000, 100000);
        REQUIRE(amm_store(lay, m, c.type, {v, c.offset}, ConcVal::vint(val)));
        CHECK(amm_load(lay, m, c.type, {v, c.offset})->i == wrap(val, c.type->arith));
        for (size_t w = 0; w < p.vars.size(); ++w)
            for (auto& [off, cv] : m.cells[w])
                if (!(static_cast<int>(w) == v && off == c.offset)) CHECK(cv == before.cells[w].at(off));
    }
}

TEST_CASE("concrete: determinism and nondet draws") {
    auto p = parse_program("i32 a[3]; i32 s; a[0] = nondet(); a[1] = nondet(); a[2] = nondet(); s = a[0] + a[1];");
    Machine mc(p);
    auto t1 = mc.run(7), t2 = mc.run(7), t3 = mc.run(8);
    CHECK(trace_jsonl(p, t1) == trace_jsonl(p, t2));
    CHECK(t1.nondet.size() == 3);
    CHECK(t1.nondet != t3.nondet);
    for (Int v : t1.nondet) CHECK((v >= INT32_MIN && v <= INT32_MAX));
    CHECK(cell(p, t1.final_state, "s", 0) == t1.nondet[0] + t1.nondet[1]);
}

TEST_CASE("concrete: trace records pre and post states") {
    auto p = parse_program("i32 x; i32 *q; x = 1; q = &x; if (x == 1) { *q = 2; } else { x = 3; }");
    Machine mc(p);
    auto t = mc.run(0);
    REQUIRE(t.outcome == Trace::Outcome::Ok);
    REQUIRE(t.steps.size() == 4);
    CHECK(t.steps[2].stmt == 3);
    CHECK(t.steps[3].stmt == 4);
    CHECK(t.steps[2].post == t.final_state);
    CHECK(t.steps[3].post == t.final_state);
    auto jsonl = trace_jsonl(p, t);
    CHECK(jsonl.find("{\"ptr\":[\"x\",0]}") != std::string::npos);
    CHECK(jsonl.find("\"outcome\":\"ok\"") != std::string::npos);
}

TEST_CASE("concrete: sort benchmarks run to completion") {
    for (const char* name : {"sort4_vars", "sort4_arrs-randomized", "sort4_arrs-grouped", "sort8_arrs-randomized"}) {
        CAPTURE(name);
        auto p = parse_file(std::string(MPVC_SOURCE_DIR) + "/benchmarks/" + name + ".mc");
        Machine mc(p);
        for (uint64_t seed = 0; seed < 20; ++seed) {
            auto t = mc.run(seed);
            CHECK(t.outcome == Trace::Outcome::Ok);
        }
    }
}

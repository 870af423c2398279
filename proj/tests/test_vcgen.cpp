#include <doctest.h>

#include "mpvc/solve.hpp"
#include "mpvc/vcgen.hpp"

using namespace mpvc;
using namespace mpvc::logic;

namespace {

std::vector<Status> prove(const std::string& src, Model m) {
    auto p = parse_program(src);
    auto mm = make_model(p, m);
    auto c = compile_program(p, *mm);
    std::vector<Status> out;
    for (auto& vc : c.vcs) out.push_back(solve_text(find_solver(), emit_vc(vc, c), 10).status);
    return out;
}

}  // namespace

TEST_CASE("vcgen: shape of a single assert") {
    auto p = parse_program("i32 x; x = 5; assert(x == 5);");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    REQUIRE(c.vcs.size() == 1);
    CHECK(c.vcs[0].stmt == 2);
    CHECK(to_sexpr(c.vcs[0].hyp) == "(= x_1_1 (store x_1_0 0 5))");
    CHECK(to_sexpr(c.vcs[0].goal) == "(= (select x_1_1 0) 5)");
}

TEST_CASE("vcgen: asserts become hypotheses, entry drops the context") {
    auto p = parse_program("i32 x; i32 y; x = 1; entry; assume(y > 0); assert(x > 0); assert(y > 0);");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    REQUIRE(c.vcs.size() == 2);
    CHECK(to_sexpr(c.vcs[0].hyp) == "(< 0 (select y_2_0 0))");
    CHECK(count(c.vcs[1].hyp->args.begin(), c.vcs[1].hyp->args.end(), c.vcs[0].goal) == 1);
}

TEST_CASE("vcgen: stores wrap unless the range fits") {
    auto p = parse_program("u8 c; i32 x; c = 300; x = 7; c = x + 250;");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    CHECK(to_sexpr(c.facts[0].t).find("300") == std::string::npos);  // folded to 44
    CHECK(to_sexpr(c.facts[0].t).find("44") != std::string::npos);
    CHECK(to_sexpr(c.facts[2].t).find("mod") != std::string::npos);
    CHECK(to_sexpr(c.facts[1].t).find("mod") == std::string::npos);
}

TEST_CASE("vcgen: emission is deterministic") {
    auto p = parse_file(std::string(MPVC_SOURCE_DIR) + "/benchmarks/sort4_arrs-randomized.mc");
    for (auto m : {Model::Typed, Model::B, Model::P}) {
        auto a = make_model(p, m, 4), b = make_model(p, m, 4);
        auto ca = compile_program(p, *a), cb = compile_program(p, *b);
        REQUIRE(ca.vcs.size() == cb.vcs.size());
        for (size_t i = 0; i < ca.vcs.size(); ++i) CHECK(emit_vc(ca.vcs[i], ca) == emit_vc(cb.vcs[i], cb));
    }
}

TEST_CASE("vcgen: compilation errors name the statement") {
    auto p = parse_program("i32 *p; i32 x; p = null; *p = 1;");
    FunctorModel m(p, Analysis::B, 8);
    CHECK_THROWS_WITH_AS(compile_program(p, m), doctest::Contains("stmt 2: store to provably invalid"), Error);
}

TEST_CASE("solve: statuses from a solver") {
    if (find_solver().empty()) {
        MESSAGE("no solver on PATH; skipped");
        return;
    }
    CHECK(prove("i32 x; x = 5; assert(x == 5);", Model::B) == std::vector<Status>{Status::Valid});
    CHECK(prove("i32 x; entry; assert(x == 0);", Model::B) == std::vector<Status>{Status::Refuted});
    CHECK(prove("i32 x; u8 c; c = nondet(); x = c; if (x > 10) { x = 10; } else { } assert(x <= 10); "
                "assert(x >= 0);",
                Model::B) == std::vector<Status>{Status::Valid, Status::Valid});
    const char* abs = "i32 x; i32 y; x = nondet(); if (x < 0) { y = 0 - x; } else { y = x; } assert(y >= 0);";
    CHECK(prove(abs, Model::C) == std::vector<Status>{Status::Refuted});  // 0 - INT32_MIN wraps
    CHECK(prove("i32 x; i32 y; x = nondet() % 1000; if (x < 0) { y = 0 - x; } else { y = x; } assert(y >= 0);",
                Model::C) == std::vector<Status>{Status::Valid});
    // a pointer into a different variable of the same type
    const char* sep = "i32 a; i32 b; i32 *p; p = &a; entry; b = 1; *p = 2; assert(b == 1);";
    CHECK(prove(sep, Model::B) == std::vector<Status>{Status::Valid});
    CHECK(prove(sep, Model::Typed) == std::vector<Status>{Status::Refuted});
    CHECK(prove("i32 a; u8 c; i32 *p; p = &a; entry; c = 1; *p = 2; assert(c == 1);", Model::Typed) ==
          std::vector<Status>{Status::Valid});
    // C semantics of division and wrapping
    CHECK(prove("i32 x; i8 c; x = (0 - 7) / 2; c = 200; assert(x == 0 - 3); assert(c == 0 - 56); "
                "assert((0 - 7) % 2 == 0 - 1);",
                Model::B) == std::vector<Status>(3, Status::Valid));
}

TEST_CASE("solve: timeout and missing solver") {
    auto r = solve_text("", "(check-sat)", 1);
    CHECK(r.status == Status::Skipped);
    auto t = solve_text("sleep 5; echo", "", 0.3);
    CHECK(t.status == Status::Unknown);
    CHECK(t.note == "timeout");
    CHECK(t.millis < 3000);
    auto g = solve_text("echo garbage #", "", 5);
    CHECK(g.status == Status::Unknown);
    CHECK(solve_text("echo sat #", "", 5).status == Status::Refuted);
}

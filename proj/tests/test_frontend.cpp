#include <doctest.h>

#include "mpvc/ast.hpp"

using namespace mpvc;

namespace {

const char* kSortTypes = R"(
typedef struct { i32 v; } data_t;
typedef u32 pos_t;
struct intf4_t {
  data_t *in1; data_t *in2; data_t *in3; data_t *in4;
  data_t *out1; data_t *out2; data_t *out3; data_t *out4;
  pos_t *pos1; pos_t *pos2; pos_t *pos3; pos_t *pos4;
};
data_t df[8];
intf4_t SORT;
i32 x;
)";

TypeRef var_type(const Program& p, const char* name) { return p.vars.at(p.var_index(name)).type; }

}  // namespace

TEST_CASE("frontend: minimal program") {
    auto p = parse_program("int32_t x; x = 5; assert(x == 5);");
    CHECK(p.body.size() == 2);
    CHECK(p.stmts.size() == 2);
    CHECK(p.stmt(1)->kind == Stmt::Kind::Assign);
    CHECK(p.stmt(2)->kind == Stmt::Kind::Assert);
}

TEST_CASE("frontend: syntax diagnostic location") {
    try {
        parse_program("i32 x;\nx = ;");
        FAIL("expected diagnostic");
    } catch (const Diagnostic& d) {
        CHECK(d.line == 2);
        CHECK(d.col == 5);
    }
}

TEST_CASE("frontend: declaration errors") {
    CHECK_THROWS_AS(parse_program("i32 x; i32 x;"), Diagnostic);
    CHECK_THROWS_AS(parse_program("struct r { i32 a; i32 a; };"), Diagnostic);
    CHECK_THROWS_AS(parse_program("foo_t x;"), Diagnostic);
}

TEST_CASE("frontend: ABI sizes and offsets") {
    auto p = parse_program(kSortTypes);
    auto data = var_type(p, "df")->elem;
    CHECK(size_of(data) == 4);
    CHECK(offset_of(var_type(p, "SORT"), "out1") == 16);
    CHECK(offset_of(var_type(p, "SORT"), "pos4") == 44);
    CHECK(size_of(var_type(p, "df")) == 32);
    CHECK(size_of(var_type(p, "SORT")) == 48);
    auto padded = parse_program("struct r { u8 a; i32 b; u8 c; i64 d; }; r x;");
    auto rt = var_type(padded, "x");
    CHECK(offset_of(rt, "b") == 4);
    CHECK(offset_of(rt, "c") == 8);
    CHECK(offset_of(rt, "d") == 16);
    CHECK(size_of(rt) == 24);
}

TEST_CASE("frontend: scalar cells") {
    auto p = parse_program(kSortTypes);
    auto cd = scalar_cells(var_type(p, "df"));
    REQUIRE(cd.size() == 8);
    for (size_t i = 0; i < 8; ++i) {
        CHECK(cd[i].path == "[" + std::to_string(i) + "].v");
        CHECK(cd[i].offset == Int(4 * i));
        CHECK(cd[i].size == 4);
    }
    auto cx = scalar_cells(var_type(p, "x"));
    REQUIRE(cx.size() == 1);
    CHECK(cx[0].path == "");
    CHECK(cx[0].size == 4);
    auto cs = scalar_cells(var_type(p, "SORT"));
    REQUIRE(cs.size() == 12);
    for (size_t i = 0; i < 12; ++i) {
        CHECK(cs[i].type->is_ptr());
        CHECK(cs[i].offset == Int(4 * i));
    }
}

TEST_CASE("frontend: cells are disjoint and cover non-padding bytes") {
    auto p = parse_program("struct data2 { i16 z; }; struct r { u8 a; i32 b; u16 c[3]; i64 d; data2 *q; };"
                           "r x; u8 y[5]; data2 w;");
    for (auto& v : p.vars) {
        auto cells = scalar_cells(v.type);
        std::vector<int> cover(static_cast<size_t>(size_of(v.type)), 0);
        for (auto& c : cells)
            for (Int b = c.offset; b < c.offset + c.size; ++b) cover[static_cast<size_t>(b)]++;
        Int covered = 0;
        for (int c : cover) {
            CHECK(c <= 1);
            covered += c;
        }
        Int sum = 0;
        for (auto& c : cells) sum += c.size;
        CHECK(covered == sum);
    }
}

TEST_CASE("frontend: offsetof monotone in declaration order") {
    auto p = parse_program(kSortTypes);
    auto rt = var_type(p, "SORT");
    for (size_t i = 1; i < rt->fields.size(); ++i) CHECK(rt->fields[i - 1].offset < rt->fields[i].offset);
}

TEST_CASE("frontend: typing") {
    auto p = parse_program(std::string(kSortTypes) + "data_t *p; p = p + 1; SORT.in1 = &df[1];");
    auto s = p.stmt(1);
    CHECK(s->e->kind == Expr::Kind::PtrAdd);
    CHECK(same_type(s->e->type, ptr_type(var_type(p, "df")->elem)));
    CHECK_THROWS_AS(parse_program("i32 x; i32 y; y = x.f;"), Diagnostic);
    CHECK_THROWS_AS(parse_program("i32 x; i32 *p; p = &5;"), Diagnostic);
    CHECK_THROWS_AS(parse_program("i32 a[4]; i32 y; y = a;"), Diagnostic);
    CHECK_THROWS_AS(parse_program("struct r { i32 f; }; r a; r b; a = b;"), Diagnostic);
    CHECK_THROWS_AS(parse_program("i32 x; x.f = 1;"), Diagnostic);
    auto q = parse_program(std::string(kSortTypes) + "intf4_t *args; i32 y; y = (*(args->in1)).v;");
    // *(args->in1) is a record lvalue, only read through its scalar field.
    auto rd = q.stmt(1)->e;
    REQUIRE(rd->kind == Expr::Kind::Read);
    CHECK(rd->lval->kind == Lval::Kind::Field);
    CHECK(rd->lval->base->type->is_record());
    CHECK_THROWS_AS(parse_program(std::string(kSortTypes) + "intf4_t *args; i32 y; y = *(args->in1);"),
                    Diagnostic);
}

TEST_CASE("frontend: bounded loops unroll") {
    auto p = parse_program("i32 a[4]; for i in 0..4 { a[i] = i; }");
    CHECK(p.body.size() == 4);
    CHECK(p.stmt(3)->e->value == 2);
    CHECK(p.stmt(3)->origin.find("i=2") != std::string::npos);
    auto z = parse_program("i32 a[4]; for i in 0..0 { a[i] = i; } a[0] = 1;");
    CHECK(z.body.size() == 1);
    ParseOptions small;
    small.unroll_bound = 2;
    CHECK_THROWS_AS(parse_program("i32 a[4]; for i in 0..4 { a[i] = i; }", small), Diagnostic);
    CHECK_THROWS_AS(parse_program("i32 a[4]; i32 n; for i in 0..n { a[i] = i; }"), Diagnostic);
    auto nested = parse_program("i32 a[4]; for i in 0..2 { for j in 0..2 { a[i + j] = i * j; } }");
    CHECK(nested.body.size() == 4);
}

TEST_CASE("frontend: initializers become leading assignments") {
    auto p = parse_program(std::string(kSortTypes) + "intf4_t S2 = { .in1 = df + 1, .out4 = df }; i32 z = 3;");
    CHECK(p.body.size() == 3);
    CHECK(p.stmt(3)->e->value == 3);
}

TEST_CASE("frontend: print then reparse is identity") {
    const char* src = R"(
typedef struct { i32 v; u8 tag; } data_t;
data_t df[4]; data_t *p; data_t **pp; i32 k; u16 w[3];
p = df + 2; pp = &p; k = (**pp).v + 3 * -k;
if (k < 2 && k != 0) { (*p).tag = 300; } else { w[1] = nondet(); }
assume(p != null); entry;
assert(!(k >= 4) || (*(df + 1)).v % 2 == 0);
)";
    auto p = parse_program(src);
    auto text = print_program(p);
    auto q = parse_program(text);
    CHECK(same_program(p, q));
    CHECK(print_program(q) == text);
}

TEST_CASE("frontend: wrap-around") {
    CHECK(wrap(300, ArithKind::U8) == 44);
    CHECK(wrap(-1, ArithKind::U32) == Int(4294967295LL));
    CHECK(wrap(128, ArithKind::I8) == -128);
    CHECK(wrap(-129, ArithKind::I8) == 127);
    CHECK(wrap(Int(1) << 64, ArithKind::U64) == 0);
}

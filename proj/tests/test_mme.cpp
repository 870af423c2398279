#include <doctest.h>

#include "mpvc/fuzz.hpp"
#include "mpvc/vcgen.hpp"

using namespace mpvc;
using namespace mpvc::logic;

namespace {

Program bench(const std::string& name) {
    return parse_file(std::string(MPVC_SOURCE_DIR) + "/benchmarks/" + name + ".mc");
}

size_t count_op(const Term& t, Op op) {
    std::set<const Node*> seen;
    size_t n = 0;
    std::function<void(const Term&)> go = [&](const Term& x) {
        if (!seen.insert(x.get()).second) return;
        if (x->op == op) ++n;
        for (auto& a : x->args) go(a);
    };
    go(t);
    return n;
}

std::vector<const Fact*> facts_at(const Compiled& c, StmtId s, Fact::Kind k) {
    std::vector<const Fact*> out;
    for (auto& f : c.facts)
        if (f.stmt == s && f.kind == k) out.push_back(&f);
    return out;
}

// Drops the base-compatibility test from shift; used to check that validation notices.
class NoFits : public FunctorModel {
public:
    using FunctorModel::FunctorModel;
    MLoc shift(StmtId s, const MLoc& l, const Term& bytes, const AbsOffsets& abs) const override {
        auto abs2 = pa().shift(s, l.abs, abs);
        auto o = add(l.o, bytes);
        auto dom = pa().domain(abs2);
        if (dom.empty()) return {int_lit(0), o, abs2};
        Term nb = int_lit(dom.back());
        for (size_t i = dom.size() - 1; i-- > 0;) nb = ite(pa().slice(dom[i], o), int_lit(dom[i]), nb);
        return {nb, o, abs2};
    }
};

}  // namespace

TEST_CASE("mme: environments") {
    auto p = bench("sort4_vars");
    FunctorModel b(p, Analysis::B, 8);
    Symbols syms;
    auto m = b.emp(syms);
    CHECK(m.size() >= 13);
    CHECK(m.size() == p.vars.size());
    auto c = parse_program("struct data_t { i32 v; }; data_t df[8];");
    FunctorModel mc(c, Analysis::C, 8);
    Symbols s2;
    CHECK(mc.emp(s2).size() == 8);
    CHECK(s2.has("df_1_0"));
    auto e = parse_program("");
    FunctorModel me(e, Analysis::B, 8);
    Symbols s3;
    CHECK(me.emp(s3).empty());
    // mixed blocks get an array of each sort
    auto mix = parse_program("struct r { i32 a; i32 *p; }; r x;");
    FunctorModel mm(mix, Analysis::B, 8);
    REQUIRE(mm.slots().size() == 2);
    CHECK(mm.slots()[0].sort == Sort::ArrInt);
    CHECK(mm.slots()[1].sort == Sort::ArrLoc);
    CHECK(mm.slots()[1].prefix == "x_1p");
}

TEST_CASE("mme: base and shift") {
    auto p = bench("sort4_vars");
    FunctorModel b(p, Analysis::B, 8);
    auto sort = b.base(p.var_index("SORT"));
    auto l = b.shift(1, sort, int_lit(16), AbsOffsets::singleton(16));
    CHECK(equal(l.b, sort.b));
    CHECK(equal(l.o, int_lit(16)));
    CHECK(count_op(l.b, Op::Ite) == 0);

    auto q = bench("sort4_arrs-randomized");
    FunctorModel pm(q, Analysis::P, 4);
    int df = q.var_index("df");
    auto base = pm.base(df);
    CHECK(pm.pa().block(static_cast<int>(base.b->lit)).contains(20));
    // a location over both df blocks: one ite choosing the inputs block
    auto any = pm.shift(1, base, var("k", Sort::Int), AbsOffsets::parse("[0..28] 0%4"));
    CHECK(pm.pa().domain(any.abs).size() == 2);
    CHECK(count_op(any.b, Op::Ite) == 1);
}

TEST_CASE("mme: singleton collapse and formula sizes") {
    auto p = parse_program("i32 a; i32 b; i32 *p; i32 x; p = &a; if (nondet() < 0) { p = &b; } *p = 5; x = *p; x = a;");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    StmtId store = 0, load = 0, plain = 0;
    for (auto* s : p.stmts) {
        if (s->kind != Stmt::Kind::Assign) continue;
        auto txt = print_lval(p, s->lhs) + " = " + print_expr(p, s->e);
        if (txt.rfind("*(", 0) == 0) store = s->id;
        if (txt.find("= *(") != std::string::npos) load = s->id;
        if (txt == "x = a") plain = s->id;
    }
    REQUIRE(store);
    auto st = facts_at(c, store, Fact::Kind::Store);
    REQUIRE(st.size() == 1);
    CHECK(count_op(st[0]->t, Op::Ite) == 2);
    CHECK(st[0]->t->op == Op::And);
    size_t ites = 0;
    for (auto& ld : c.loads)
        if (ld.stmt == load && !ld.v.is_ptr) ites = count_op(ld.v.i, Op::Ite);
    CHECK(ites == 1);
    for (auto& ld : c.loads)
        if (ld.stmt == plain) CHECK(count_op(ld.v.i, Op::Ite) == 0);
    CHECK(count_op(facts_at(c, plain, Fact::Kind::Store)[0]->t, Op::Ite) == 0);
}

TEST_CASE("mme: store through a field address") {
    auto p = parse_program("struct rec { i32 e; i32 f; }; rec r; *(&r.f) = 5;");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    REQUIRE(c.facts.size() == 1);
    CHECK(to_sexpr(c.facts[0].t) == "(= r_1_1 (store r_1_0 4 5))");
}

TEST_CASE("mme: join") {
    auto p = parse_program("i32 x; i32 y; if (nondet() < 0) { x = 1; } else { }");
    FunctorModel m(p, Analysis::B, 8);
    auto c = compile_program(p, m);
    CHECK(facts_at(c, 1, Fact::Kind::JoinThen).size() == 1);
    CHECK(facts_at(c, 1, Fact::Kind::JoinElse).size() == 1);
    CHECK(to_sexpr(facts_at(c, 1, Fact::Kind::JoinElse)[0]->t) == "(= x_1_2 x_1_0)");
    Symbols syms;
    auto e = m.emp(syms);
    std::vector<Term> a, b;
    auto j = m.join(e, e, syms, a, b);
    CHECK(a.empty());
    CHECK(b.empty());
    CHECK(j == e);
}

TEST_CASE("mme: typed model shares arrays per type") {
    auto p = parse_program("i32 a; i32 b; u8 c; i32 *p;");
    TypedModel t(p, 8);
    CHECK(t.slots().size() == 3);
    CHECK(t.slot_of(p.vars[0].type) == t.slot_of(p.vars[1].type));
    CHECK(t.slot_of(p.vars[0].type) != t.slot_of(p.vars[2].type));
}

TEST_CASE("mme: translation validation on benchmarks") {
    for (const char* name : {"sort4_vars", "sort4_arrs-randomized", "sort4_arrs-grouped"})
        for (auto m : {Model::Typed, Model::B, Model::BTop, Model::C, Model::P}) {
            CAPTURE(name);
            CAPTURE(model_name(m));
            auto p = bench(name);
            auto mm = make_model(p, m, 4);
            auto bad = check_program(p, *mm, 11, 3);
            CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
        }
}

TEST_CASE("mme: translation validation on random programs") {
    FuzzOptions o;
    o.count = 150;
    o.seed = 99;
    auto r = fuzz(o);
    CHECK(r.programs == 150);
    CHECK(r.runs == 750);
    CHECK_MESSAGE(r.violations.empty(), (r.violations.empty() ? "" : r.violations.front()));
    o.prune = false;
    o.count = 60;
    auto u = fuzz(o);
    CHECK_MESSAGE(u.violations.empty(), (u.violations.empty() ? "" : u.violations.front()));
    o.count = 0;
    CHECK(fuzz(o).runs == 0);
}

TEST_CASE("mme: validation catches a shift without the base test") {
    SplitMix64 rng(5);
    int caught = 0;
    for (int i = 0; i < 1000 && !caught; ++i) {
        auto p = parse_program(random_program(rng));
        uint64_t seed = rng.next();
        NoFits broken(p, Analysis::C, 8);
        if (!check_program(p, broken, seed, 2).empty()) ++caught;
    }
    CHECK(caught > 0);
}

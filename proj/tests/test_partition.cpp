#include <doctest.h>

#include "mpvc/partition.hpp"

using namespace mpvc;

namespace {

Program bench(const std::string& name) {
    return parse_file(std::string(MPVC_SOURCE_DIR) + "/benchmarks/" + name + ".mc");
}

const char* kBenches[] = {"sort4_vars", "sort4_arrs-randomized", "sort4_arrs-grouped",
                          "sort8_vars", "sort8_arrs-randomized", "sort8_arrs-grouped"};

std::vector<std::string> df_blocks(const PA& pa) {
    std::vector<std::string> out;
    for (int id : pa.blocks_of_var(pa.program().var_index("df"))) out.push_back(ranges_str(pa.block(id).ranges));
    return out;
}

}  // namespace

TEST_CASE("partition: footprint") {
    auto p = bench("sort4_vars");
    PointsTo pt(p, PtMode::B);
    int sort = p.var_index("SORT");
    AbsLoc l;
    l.m.emplace(sort, AbsOffsets::of_set({16, 20, 24, 28}, 8));
    auto f = footprint(pt, l, 4);
    REQUIRE(f.size() == 1);
    CHECK(f[0].second.size() == 16);
    CHECK(f[0].second.front() == 16);
    CHECK(f[0].second.back() == 31);
    CHECK(footprint(pt, AbsLoc{}, 4).empty());
}

TEST_CASE("partition: cells") {
    auto p = parse_program("struct data_t { i32 v; }; data_t df[8]; i32 x; struct q { i8 c; i32 n; }; q r;");
    PA c(p, Analysis::C);
    CHECK(c.blocks_of_var(p.var_index("df")).size() == 8);
    CHECK(c.blocks_of_var(p.var_index("x")).size() == 1);
    // padding after the i8 stays with it
    auto rb = c.blocks_of_var(p.var_index("r"));
    REQUIRE(rb.size() == 2);
    CHECK(ranges_str(c.block(rb[0]).ranges) == "{[0,3]}");
    CHECK(ranges_str(c.block(rb[1]).ranges) == "{[4,7]}");
    auto s = bench("sort4_vars");
    PA cs(s, Analysis::C);
    CHECK(cs.blocks_of_var(s.var_index("SORT")).size() == 12);
}

TEST_CASE("partition: block counts") {
    for (auto* name : kBenches) {
        CAPTURE(name);
        auto p = bench(name);
        PA b(p, Analysis::B), t(p, Analysis::BTop), c(p, Analysis::C), d(p, Analysis::P);
        CHECK(b.blocks().size() == p.vars.size());
        CHECK(t.blocks().size() == b.blocks().size());
        CHECK(c.blocks().size() == p.total_cells());
        CHECK(b.blocks().size() <= d.blocks().size());
        CHECK(d.blocks().size() <= c.blocks().size());
    }
}

TEST_CASE("partition: dereference blocks for context (b)") {
    auto p = bench("sort4_arrs-randomized");
    for (unsigned ilvl : {4u, 8u}) {
        PA pa(p, Analysis::P, ilvl);
        CHECK(df_blocks(pa) == std::vector<std::string>{"{[0,3],[20,31]}", "{[4,19]}"});
        // base(df) falls in the outputs block
        auto dom = pa.domain(pa.base(p.var_index("df")));
        REQUIRE(dom.size() == 1);
        CHECK(pa.block(dom[0]).contains(20));
    }
    PA small(p, Analysis::P, 2), big(p, Analysis::P, 8);
    CHECK(df_blocks(small).size() == 1);
    CHECK(small.blocks().size() < big.blocks().size());
    CHECK(small.classes().size() < big.classes().size());
}

TEST_CASE("partition: context (a) keeps variable blocks") {
    auto p = bench("sort4_vars");
    PA pa(p, Analysis::P, 8);
    for (int k = 1; k <= 8; ++k) CHECK(pa.blocks_of_var(p.var_index("df" + std::to_string(k))).size() == 1);
}

TEST_CASE("partition: no pointers gives the variable partition") {
    auto p = parse_program("i32 x; i32 a[3]; x = 1; entry; x = x + 1;");
    PA pa(p, Analysis::P);
    CHECK(pa.blocks().size() == 2);
    CHECK(pa.occurrences().empty());
}

TEST_CASE("partition: disjoint targets give separate classes") {
    auto p = parse_program("i32 x; i32 y; i32 *p; i32 *q; p = &x; q = &y; *p = 1; *q = 2;");
    PA pa(p, Analysis::P);
    CHECK(pa.classes().size() == 2);
    auto one = parse_program("i32 x; i32 *p; p = &x; *p = 1;");
    CHECK(PA(one, Analysis::P).classes().size() == 1);
}

TEST_CASE("partition: deterministic ids and dump") {
    auto p = bench("sort4_arrs-randomized");
    PA a(p, Analysis::P, 4), b(p, Analysis::P, 4);
    CHECK(a.dump() == b.dump());
    auto d = a.dump();
    CHECK(d.find("base=df bytes={[0,3],[20,31]} slice=(or (and (<= 0 e) (<= e 3)) (and (<= 20 e) (<= e 31)))") !=
          std::string::npos);
    auto x = parse_program("i32 x;");
    CHECK(PA(x, Analysis::B).dump().find("block 1 base=x bytes={[0,3]} slice=(and (<= 0 e) (<= e 3))") !=
          std::string::npos);
}

TEST_CASE("partition: laws hold on every benchmark") {
    for (auto* name : kBenches) {
        auto p = bench(name);
        Machine mc(p);
        std::vector<Trace> traces;
        for (uint64_t seed = 0; seed < 3; ++seed) traces.push_back(mc.run(seed));
        for (auto a : {Analysis::B, Analysis::BTop, Analysis::C, Analysis::P}) {
            CAPTURE(name);
            CAPTURE(analysis_name(a));
            PA pa(p, a, 4);
            auto bad = check_pa_laws(pa, traces);
            CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
        }
    }
}

TEST_CASE("partition: analysis names") {
    CHECK(parse_analysis("Btop") == Analysis::BTop);
    CHECK(parse_analysis("P") == Analysis::P);
    CHECK_THROWS_AS(parse_analysis("typed"), Error);
}

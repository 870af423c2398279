#include <doctest.h>

#include <set>

#include "mpvc/offsets.hpp"

using namespace mpvc;

namespace {

AbsOffsets P(const char* s) { return AbsOffsets::parse(s); }

std::set<Int> enumerate(const AbsOffsets& x, Int lo = -64, Int hi = 64) {
    auto v = x.gamma_bounded(lo, hi);
    return {v.begin(), v.end()};
}

// Small abstract values whose concretization fits inside [-64, 64].
std::vector<AbsOffsets> samples() {
    std::vector<AbsOffsets> out;
    std::vector<std::vector<Int>> sets = {{0}, {4}, {-3}, {4, 8}, {0, 4, 8, 12}, {1, 2, 7},
                                          {-8, 0, 8}, {3, 5, 7, 9, 11}, {16, 20, 24, 28}};
    for (auto& s : sets) {
        out.push_back(AbsOffsets::of_set(s, 8));
        out.push_back(AbsOffsets::of_set(s, 2));
    }
    for (auto t : {"[0..12] 0%4", "[2..10] 0%2", "[-9..9] 0%3", "[1..13] 1%6", "[-5..5]",
                   "[16..28] 0%4"})
        out.push_back(P(t));
    return out;
}

}  // namespace

TEST_CASE("offsets: textual forms round trip") {
    for (auto t : {"top", "{4,8,12}", "[0..16] 0%4", "[4..+inf] 0%4", "[-inf..7] 3%4", "{-3}"}) {
        CHECK(P(t).str() == t);
    }
    CHECK(P("[0..8]").str() == "[0..8] 0%1");
    CHECK(P("[-inf..+inf]").is_top());
}

TEST_CASE("offsets: gamma_bounded oracles") {
    CHECK(P("[16..28] 0%4").gamma_bounded(0, 47) == std::vector<Int>{16, 20, 24, 28});
    CHECK(P("{0}").gamma_bounded(0, 47) == std::vector<Int>{0});
    CHECK(AbsOffsets::top().gamma_bounded(0, 7) == std::vector<Int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("offsets: join oracles") {
    CHECK(join(P("{4}"), P("{8}"), 4).str() == "{4,8}");
    CHECK(join(P("{0,4,8,12}"), P("{16}"), 4).str() == "[0..16] 0%4");
    CHECK(join(P("[0..8] 0%4"), P("[2..10] 0%2"), 8).str() == "[0..10] 0%2");
    CHECK(join(P("top"), P("{1}"), 8).is_top());
}

TEST_CASE("offsets: add oracles") {
    CHECK(add(P("{0}"), P("{16,20,24,28}"), 8).str() == "{16,20,24,28}");
    CHECK(add(P("[0..12] 0%4"), P("{4}"), 8).str() == "[4..16] 0%4");
    CHECK(add(P("top"), P("{1}"), 8).is_top());
}

TEST_CASE("offsets: widen oracles") {
    CHECK(widen(P("{4}"), P("{4,8}")).str() == "[4..+inf] 0%4");
    CHECK(widen(P("[0..4] 0%4"), P("[0..8] 0%4")).str() == "[0..+inf] 0%4");
    for (auto& x : samples()) CHECK(widen(x, x) == x);
}

TEST_CASE("offsets: contains and singleton") {
    CHECK(P("[16..28] 0%4").contains(20));
    CHECK_FALSE(P("[16..28] 0%4").contains(18));
    CHECK(P("{0}").is_singleton() == Int(0));
    CHECK_FALSE(P("{0,4}").is_singleton().has_value());
}

TEST_CASE("offsets: operators are sound by enumeration") {
    auto xs = samples();
    for (unsigned ilvl : {2u, 4u, 8u}) {
        for (auto& x : xs) {
            for (auto& y : xs) {
                auto gx = enumerate(x), gy = enumerate(y);
                auto j = join(x, y, ilvl);
                auto s = add(x, y, ilvl);
                auto d = sub(x, y, ilvl);
                auto m = mul(x, y, ilvl);
                for (Int a : gx) {
                    CHECK(j.contains(a));
                    for (Int b : gy) {
                        CHECK(s.contains(a + b));
                        CHECK(d.contains(a - b));
                        CHECK(m.contains(a * b));
                    }
                }
                for (Int b : gy) CHECK(j.contains(b));
                auto w = widen(x, y);
                for (Int a : gx) CHECK(w.contains(a));
                for (Int b : gy) CHECK(w.contains(b));
            }
        }
    }
}

TEST_CASE("offsets: join commutes on gamma and is idempotent") {
    auto xs = samples();
    for (auto& x : xs) {
        CHECK(enumerate(join(x, x, 8)) == enumerate(x));
        for (auto& y : xs) CHECK(enumerate(join(x, y, 4)) == enumerate(join(y, x, 4)));
    }
}

TEST_CASE("offsets: small sets stay exact within ilvl") {
    auto xs = samples();
    for (auto& x : xs) {
        for (auto& y : xs) {
            if (!x.is_set() || !y.is_set()) continue;
            auto gx = enumerate(x), gy = enumerate(y);
            std::set<Int> u = gx;
            u.insert(gy.begin(), gy.end());
            if (u.size() <= 8) CHECK(enumerate(join(x, y, 8)) == u);
            std::set<Int> sums;
            for (Int a : gx)
                for (Int b : gy) sums.insert(a + b);
            if (sums.size() <= 8) CHECK(enumerate(add(x, y, 8)) == sums);
        }
    }
}

TEST_CASE("offsets: widening chains stabilize within three steps") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        AbsOffsets x = AbsOffsets::singleton(rng.range(-20, 20));
        int strict = 0;
        for (int step = 0; step < 12; ++step) {
            AbsOffsets y = join(x, AbsOffsets::of_set({rng.range(-100, 100), rng.range(-100, 100)}, 8), 8);
            AbsOffsets w = widen(x, y);
            if (w != x) ++strict;
            x = w;
        }
        CHECK(strict <= 3);
    }
}

TEST_CASE("offsets: canonical sets from equal gamma") {
    auto a = AbsOffsets::of_set({8, 0, 4, 4}, 8);
    auto b = AbsOffsets::of_set({0, 4, 8}, 8);
    CHECK(a == b);
    CHECK(a.str() == "{0,4,8}");
}

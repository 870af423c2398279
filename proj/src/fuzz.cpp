#include "mpvc/fuzz.hpp"

#include "mpvc/vcgen.hpp"

namespace mpvc {

namespace {

class Gen {
public:
    explicit Gen(SplitMix64& rng) : r_(rng) {}

    std::string program(int n) {
        std::string s =
            "struct pair_t { i32 a; i16 b; i32 *p; };\n"
            "i32 x0; i32 x1; i32 x2; i32 arr[4]; u8 c; i64 big;\n"
            "pair_t s0; pair_t s1; pair_t ps[3];\n"
            "i32 *q0; i32 *q1; pair_t *r0; i32 **qq;\n"
            "x0 = nondet(); x1 = nondet(); x2 = nondet(); c = nondet(); big = nondet();\n"
            "for k in 0..4 { arr[k] = nondet(); }\n"
            "s0.a = nondet(); s0.b = nondet(); s1.a = 1; s1.b = 2;\n"
            "for k in 0..3 { ps[k].a = nondet(); ps[k].b = k; ps[k].p = &arr[k]; }\n"
            "s0.p = &x1; s1.p = &x2; q0 = &x0; q1 = arr; r0 = &s0; qq = &q0;\n";
        if (r_.chance(50)) s += "entry;\n";
        for (int i = 0; i < n; ++i) s += stmt(2);
        return s;
    }

private:
    SplitMix64& r_;

    int pick(int n) { return static_cast<int>(r_.below(static_cast<uint64_t>(n))); }
    std::string lit(int lo, int hi) { return std::to_string(r_.range(lo, hi)); }

    std::string int_lval() {
        switch (pick(11)) {
            case 0: return "x" + lit(0, 2);
            case 1: return "arr[" + lit(0, 3) + "]";
            case 2: return "arr[c % 4]";
            case 3: return "*q0";
            case 4: return "*q1";
            case 5: return "**qq";
            case 6: return "r0->a";
            case 7: return "r0->b";
            case 8: return "s" + lit(0, 1) + ".a";
            case 9: return "ps[c % 3].b";
            default: return "*(r0->p)";
        }
    }

    std::string atom() {
        switch (pick(6)) {
            case 0: return lit(-5, 100);
            case 1: return "c";
            case 2: return "big";
            default: return int_lval();
        }
    }

    std::string expr(int d) {
        if (d == 0 || r_.chance(35)) return atom();
        static const char* ops[] = {"+", "-", "*", "<", "==", "!=", ">="};
        switch (pick(9)) {
            case 0: return "(" + expr(d - 1) + " / " + lit(1, 7) + ")";
            case 1: return "(" + expr(d - 1) + " % " + lit(1, 7) + ")";
            case 2: return "(q0 == q1)";
            case 3: return "!" + atom();
            default: return "(" + expr(d - 1) + " " + ops[pick(7)] + " " + expr(d - 1) + ")";
        }
    }

    std::string int_ptr() {
        switch (pick(9)) {
            case 0: return "&x" + lit(0, 2);
            case 1: return "arr + " + lit(0, 3);
            case 2: return "&arr[c % 4]";
            case 3: return "&s" + lit(0, 1) + ".a";
            case 4: return "&ps[c % 3].a";
            case 5: return "q" + lit(0, 1);
            case 6: return "*qq";
            case 7: return "r0->p";
            default: return "s" + lit(0, 1) + ".p";
        }
    }

    std::string stmt(int d) {
        switch (pick(12)) {
            case 0:
            case 1:
            case 2: return int_lval() + " = " + expr(2) + ";\n";
            case 3: return "q" + lit(0, 1) + " = " + int_ptr() + ";\n";
            case 4: return "r0 = " + std::string(r_.chance(50) ? "&s" + lit(0, 1) : "ps + c % 3") + ";\n";
            case 5: return "qq = &q" + lit(0, 1) + ";\n";
            case 6: return std::string(r_.chance(50) ? "r0->p" : "s" + lit(0, 1) + ".p") + " = " + int_ptr() + ";\n";
            case 7: return "x" + lit(0, 2) + " = nondet();\n";
            case 8: return "c = " + expr(1) + ";\n";
            case 9: return "assert(" + expr(2) + ");\n";
            case 10:
                if (d > 0) {
                    std::string s = "if (" + expr(2) + ") {\n";
                    for (int i = pick(3); i >= 0; --i) s += stmt(d - 1);
                    s += "} else {\n";
                    for (int i = pick(2); i > 0; --i) s += stmt(d - 1);
                    return s + "}\n";
                }
                return "assume(" + expr(1) + ");\n";
            default: return "big = " + expr(2) + ";\n";
        }
    }
};

}  // namespace

std::string random_program(SplitMix64& rng, int statements) { return Gen(rng).program(statements); }

std::vector<std::string> check_program(const Program& p, const MemoryModel& mm, uint64_t seed, int traces) {
    std::vector<std::string> bad;
    std::string tag = std::string(model_name(mm.kind())) + ": ";
    Compiled c;
    try {
        c = compile_program(p, mm);
    } catch (const Error& e) {
        bad.push_back(tag + "compilation failed: " + e.what());
        return bad;
    }
    Machine mc(p);
    std::vector<Trace> ts;
    for (int k = 0; k < traces; ++k) ts.push_back(mc.run(seed + static_cast<uint64_t>(k)));
    const auto& pt = mm.pt();
    for (auto& t : ts) {
        for (auto& st : t.steps)
            if (auto m = pt.check_state(pt.pre(st.stmt), st.pre); !m.empty()) {
                bad.push_back(tag + "abstract state misses stmt " + std::to_string(st.stmt) + ": " + m);
                break;
            }
        for (auto& m : validate(mm, c, t)) bad.push_back(tag + m);
    }
    if (auto* f = dynamic_cast<const FunctorModel*>(&mm))
        for (auto& m : check_pa_laws(f->pa(), ts)) bad.push_back(m);
    return bad;
}

FuzzReport fuzz(const FuzzOptions& o) {
    FuzzReport rep;
    SplitMix64 rng(o.seed);
    for (int i = 0; i < o.count; ++i) {
        auto src = random_program(rng);
        uint64_t tseed = rng.next();
        Program p;
        try {
            p = parse_program(src);
        } catch (const Error& e) {
            rep.violations.push_back("program " + std::to_string(i) + ": generator produced invalid code: " + e.what());
            if (rep.reproducer.empty()) rep.reproducer = src;
            continue;
        }
        ++rep.programs;
        for (auto m : o.models) {
            ++rep.runs;
            auto mm = make_model(p, m, o.ilvl, o.prune);
            auto bad = check_program(p, *mm, tseed, o.traces);
            for (auto& b : bad) rep.violations.push_back("program " + std::to_string(i) + ": " + b);
            if (!bad.empty() && rep.reproducer.empty()) rep.reproducer = src;
        }
    }
    return rep;
}

}  // namespace mpvc

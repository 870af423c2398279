#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mpvc/fuzz.hpp"
#include "mpvc/solve.hpp"
#include "mpvc/vcgen.hpp"

using namespace mpvc;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string file;
    std::string analysis = "B";
    unsigned ilvl = kDefaultIlvl;
    unsigned unroll = 1024;
};

Program load(const Common& c) {
    ParseOptions o;
    o.unroll_bound = c.unroll;
    return parse_file(c.file, o);
}

std::string summary(const MemoryModel& mm, unsigned ilvl) {
    return "partitions=" + std::to_string(mm.partition_count()) + " analysis=" + model_name(mm.kind()) +
           " ilvl=" + std::to_string(ilvl);
}

int cmd_analyze(const Common& c, bool dump_abs, bool dump_parts) {
    auto p = load(c);
    auto mm = make_model(p, parse_model(c.analysis), c.ilvl);
    if (dump_abs) std::cout << mm->pt().dump();
    if (dump_parts) {
        if (auto* f = dynamic_cast<const FunctorModel*>(mm.get()))
            std::cout << f->pa().dump();
        else
            for (size_t k = 0; k < mm->slots().size(); ++k)
                std::cout << "array " << k << " " << mm->slots()[k].prefix << " cells "
                          << mm->slots()[k].cells.size() << "\n";
    }
    std::cout << summary(*mm, c.ilvl) << "\n";
    return 0;
}

int cmd_vcgen(const Common& c, const std::string& out, bool no_prune) {
    auto p = load(c);
    auto mm = make_model(p, parse_model(c.analysis), c.ilvl, !no_prune);
    auto comp = compile_program(p, *mm);
    fs::create_directories(out);
    std::ofstream man(fs::path(out) / "manifest.tsv");
    man << "vc_index\tstmt\tfile\torigin\n";
    for (auto& vc : comp.vcs) {
        std::string name = "vc_" + std::to_string(vc.index) + "_" + std::to_string(vc.stmt) + ".smt2";
        std::ofstream(fs::path(out) / name)
            << emit_vc(vc, comp, "assert at stmt " + std::to_string(vc.stmt) + " (" + vc.origin + ")");
        man << vc.index << "\t" << vc.stmt << "\t" << name << "\t" << vc.origin << "\n";
    }
    nlohmann::json meta = {{"program", c.file},
                           {"analysis", model_name(mm->kind())},
                           {"ilvl", c.ilvl},
                           {"partitions", mm->partition_count()},
                           {"prune", !no_prune},
                           {"vcs", comp.vcs.size()}};
    std::ofstream(fs::path(out) / "meta.json") << meta.dump(2) << "\n";
    for (auto& w : comp.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << comp.vcs.size() << " VCs written to " << out << "\n" << summary(*mm, c.ilvl) << "\n";
    return 0;
}

int cmd_solve(const std::string& dir, std::string solver, double timeout, unsigned jobs) {
    if (solver.empty()) solver = find_solver();
    std::ifstream man(fs::path(dir) / "manifest.tsv");
    if (!man) throw Error("no manifest.tsv in " + dir);
    std::vector<std::string> idx, stmt, files;
    std::string line;
    std::getline(man, line);
    while (std::getline(man, line)) {
        std::istringstream ls(line);
        std::string a, b, f;
        std::getline(ls, a, '\t');
        std::getline(ls, b, '\t');
        std::getline(ls, f, '\t');
        idx.push_back(a);
        stmt.push_back(b);
        files.push_back((fs::path(dir) / f).string());
    }
    nlohmann::json meta;
    if (std::ifstream mf(fs::path(dir) / "meta.json"); mf) meta = nlohmann::json::parse(mf);
    auto res = solve_files(solver, files, timeout, jobs);
    std::cout << "vc_index\tstmt\tstatus\tmillis\n";
    int counts[4] = {0, 0, 0, 0};
    for (size_t i = 0; i < res.size(); ++i) {
        ++counts[static_cast<int>(res[i].status)];
        std::cout << idx[i] << "\t" << stmt[i] << "\t" << status_name(res[i].status) << "\t"
                  << static_cast<long>(res[i].millis) << "\n";
    }
    std::cout << "partitions=" << meta.value("partitions", 0) << " analysis=" << meta.value("analysis", "?")
              << " ilvl=" << meta.value("ilvl", 0) << "\n";
    std::cerr << "valid " << counts[0] << ", unknown " << counts[1] << ", refuted " << counts[2] << ", skipped "
              << counts[3] << "\n";
    return counts[2] > 0 ? 1 : 0;
}

int cmd_fuzz(int count, uint64_t seed, const std::string& analyses, unsigned ilvl, bool no_prune,
             const std::string& repro) {
    FuzzOptions o;
    o.count = count;
    o.seed = seed;
    o.ilvl = ilvl;
    o.prune = !no_prune;
    o.models.clear();
    std::istringstream ls(analyses);
    for (std::string a; std::getline(ls, a, ',');)
        if (!a.empty()) o.models.push_back(parse_model(a));
    auto r = fuzz(o);
    std::cout << "programs=" << r.programs << " runs=" << r.runs << " violations=" << r.violations.size() << "\n";
    for (size_t i = 0; i < r.violations.size() && i < 20; ++i) std::cout << r.violations[i] << "\n";
    if (!r.reproducer.empty()) {
        std::ofstream(repro) << r.reproducer;
        std::cout << "reproducer written to " << repro << "\n";
    }
    return r.violations.empty() ? 0 : 1;
}

int cmd_oracle(const Common& c, uint64_t seed, const std::string& trace) {
    auto p = load(c);
    Machine mc(p);
    auto t = mc.run(seed);
    if (!trace.empty()) std::ofstream(trace) << trace_jsonl(p, t);
    std::cout << outcome_name(t.outcome);
    if (t.outcome != Trace::Outcome::Ok) std::cout << " at stmt " << t.at << ": " << t.message;
    std::cout << " (" << t.steps.size() << " steps)\n";
    // a failed assume just prunes the run
    return t.outcome == Trace::Outcome::AssertFail || t.outcome == Trace::Outcome::UB ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mpvc: verification conditions with memory models built from pointer analyses"};
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App* s, bool analysis) {
        s->add_option("file", c.file, "program")->required()->check(CLI::ExistingFile);
        if (analysis) {
            s->add_option("--analysis", c.analysis, "typed, B, Btop, C or P")
                ->check(CLI::IsMember({"typed", "B", "Btop", "C", "P"}));
            s->add_option("--ilvl", c.ilvl, "largest explicit offset set")->check(CLI::Range(1u, 64u));
        }
        s->add_option("--unroll", c.unroll, "loop unrolling bound");
    };

    bool dump_abs = false, dump_parts = false, no_prune = false;
    auto* analyze = app.add_subcommand("analyze", "run the pointer analysis and build the partition");
    add_common(analyze, true);
    analyze->add_flag("--dump-absstate", dump_abs, "print the abstract state before each statement");
    analyze->add_flag("--dump-partitions", dump_parts, "print the blocks");

    std::string out = "vcs";
    auto* vcgen = app.add_subcommand("vcgen", "write one SMT-LIB file per assert");
    add_common(vcgen, true);
    vcgen->add_option("--out", out, "output directory");
    vcgen->add_flag("--no-prune", no_prune, "keep dispatch cases the analysis rules out");

    std::string dir, solver;
    double timeout = 10;
    unsigned jobs = 1;
    auto* solve = app.add_subcommand("solve", "discharge the VCs of a vcgen directory");
    solve->add_option("dir", dir, "vcgen output directory")->required()->check(CLI::ExistingDirectory);
    solve->add_option("--solver", solver, "command taking the file as last argument (default: z3)");
    solve->add_option("--timeout", timeout, "seconds per VC");
    solve->add_option("--jobs", jobs, "parallel solver processes");

    int count = 100;
    uint64_t seed = 1;
    std::string analyses = "typed,B,Btop,C,P", repro = "fuzz_repro.mc";
    unsigned fuzz_ilvl = kDefaultIlvl;
    bool fuzz_no_prune = false;
    auto* fz = app.add_subcommand("fuzz", "random programs: soundness and translation validation");
    fz->add_option("--count", count, "programs");
    fz->add_option("--seed", seed, "generator seed");
    fz->add_option("--analyses", analyses, "comma-separated models");
    fz->add_option("--ilvl", fuzz_ilvl, "largest explicit offset set");
    fz->add_flag("--no-prune", fuzz_no_prune, "disable case pruning");
    fz->add_option("--repro", repro, "where to write the first failing program");

    uint64_t oseed = 0;
    std::string trace;
    auto* oracle = app.add_subcommand("oracle", "run the concrete interpreter");
    add_common(oracle, false);
    oracle->add_option("--seed", oseed, "input seed");
    oracle->add_option("--trace", trace, "write a JSON-lines trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*analyze) return cmd_analyze(c, dump_abs, dump_parts);
        if (*vcgen) return cmd_vcgen(c, out, no_prune);
        if (*solve) return cmd_solve(dir, solver, timeout, jobs);
        if (*fz) return cmd_fuzz(count, seed, analyses, fuzz_ilvl, fuzz_no_prune, repro);
        if (*oracle) return cmd_oracle(c, oseed, trace);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

#pragma once

#include <string>
#include <vector>

#include "mpvc/mme.hpp"

namespace mpvc {

struct VC {
    int index = 0;
    StmtId stmt = 0;
    std::string origin;
    logic::Term hyp;   // conjunction of everything known on the path
    logic::Term goal;  // compiled assert condition
    logic::Term formula() const { return logic::implies(hyp, goal); }
};

// A formula emitted while compiling one statement; kept for translation validation.
struct Fact {
    enum class Kind { Store, Hyp, Assume, Assert, JoinThen, JoinElse };
    Kind kind = Kind::Store;
    StmtId stmt = 0;
    logic::Term t;
};

// A compiled read, checked against the concrete value.
struct LoadRecord {
    StmtId stmt = 0;
    ExprRef read;
    MVal v;
};

// Array variable introduced at a statement; holds the contents after it (stmt 0: initial).
struct Creation {
    std::string name;
    size_t slot = 0;
    StmtId stmt = 0;
};

struct Compiled {
    std::vector<VC> vcs;
    logic::Symbols syms;
    std::vector<Fact> facts;
    std::vector<LoadRecord> loads;
    std::vector<Creation> created;
    std::map<StmtId, std::vector<std::string>> nondet;  // fresh inputs per statement, evaluation order
    std::vector<std::string> warnings;
};

Compiled compile_program(const Program& p, const MemoryModel& mm);

// Checks every fact and load of the executed statements under the trace's ground binding.
std::vector<std::string> validate(const MemoryModel& mm, const Compiled& c, const Trace& t);

std::string emit_vc(const VC& vc, const Compiled& c, const std::string& comment = "");

}  // namespace mpvc

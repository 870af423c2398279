#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpvc/ast.hpp"

namespace mpvc {

constexpr int kNullVar = -1;

struct ConcLoc {
    int var = kNullVar;
    Int off = 0;
    bool operator==(const ConcLoc&) const = default;
};

struct ConcVal {
    enum class Kind { Undef, Int, Ptr };
    Kind kind = Kind::Undef;
    Int i = 0;
    ConcLoc p;

    static ConcVal vint(Int v) { return {Kind::Int, v, {}}; }
    static ConcVal vptr(ConcLoc l) { return {Kind::Ptr, 0, l}; }
    bool operator==(const ConcVal&) const = default;
};

// One map per variable, keyed by the start offsets of its scalar cells.
struct ConcState {
    std::vector<std::map<Int, ConcVal>> cells;
    bool operator==(const ConcState&) const = default;
};

// Per-variable cell tables, shared by the machine and the analyses.
class Layout {
public:
    explicit Layout(const Program& p);
    const Cell* cell_at(int var, Int off) const;  // cell starting exactly at off
    const std::vector<Cell>& cells(int var) const { return cells_.at(static_cast<size_t>(var)); }
    ConcState empty_state() const;

private:
    std::vector<std::vector<Cell>> cells_;
    std::vector<std::map<Int, size_t>> index_;
};

ConcLoc amm_base(const Program& p, int var);
ConcLoc amm_null();
ConcLoc amm_shift(ConcLoc l, Int n);
std::optional<ConcVal> amm_load(const Layout& lay, const ConcState& m, const TypeRef& u, ConcLoc l);
// In-place store; returns false (state untouched) on undefined behavior.
bool amm_store(const Layout& lay, ConcState& m, const TypeRef& u, ConcLoc l, ConcVal v);

struct TraceStep {
    StmtId stmt = 0;
    ConcState pre;
    ConcState post;  // state after the statement (after both branches for if)
};

struct Trace {
    enum class Outcome { Ok, AssertFail, AssumeFail, UB };
    Outcome outcome = Outcome::Ok;
    StmtId at = 0;  // failing statement
    std::string message;
    std::vector<TraceStep> steps;  // in execution order
    std::vector<Int> nondet;       // values drawn, in order
    ConcState final_state;
};

const char* outcome_name(Trace::Outcome o);

// Reference interpreter. Expressions evaluate over mathematical integers;
// stores wrap into the destination type.
class Machine {
public:
    explicit Machine(const Program& p);
    const Layout& layout() const { return layout_; }

    Trace run(uint64_t seed) const;

    // Evaluation in a given state; nondet draws use `rng` (null: nondet is UB).
    std::optional<ConcVal> eval(const ExprRef& e, const ConcState& m, SplitMix64* rng = nullptr,
                                std::vector<Int>* draws = nullptr) const;
    std::optional<ConcLoc> eval_lval(const LvalRef& lv, const ConcState& m, SplitMix64* rng = nullptr,
                                     std::vector<Int>* draws = nullptr) const;

private:
    const Program& prog_;
    Layout layout_;
};

// One JSON object per executed statement, then an outcome record.
std::string trace_jsonl(const Program& p, const Trace& t);

}  // namespace mpvc

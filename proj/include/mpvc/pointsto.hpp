#pragma once

#include <map>
#include <string>
#include <vector>

#include "mpvc/ast.hpp"
#include "mpvc/concrete.hpp"
#include "mpvc/offsets.hpp"

namespace mpvc {

// Per-variable byte start offsets a pointer may hold.
struct AbsLoc {
    std::map<int, AbsOffsets> m;
    bool may_null = false;

    bool empty() const { return m.empty() && !may_null; }
    bool operator==(const AbsLoc& o) const { return may_null == o.may_null && m == o.m; }
};

struct AbsVal {
    enum class Kind { Bot, Int, Ptr, Any };
    Kind kind = Kind::Bot;
    AbsOffsets i = AbsOffsets::top();
    AbsLoc p;

    static AbsVal bot() { return {}; }
    static AbsVal any() { return {Kind::Any, AbsOffsets::top(), {}}; }
    static AbsVal of_int(AbsOffsets v) { return {Kind::Int, std::move(v), {}}; }
    static AbsVal of_ptr(AbsLoc l) { return {Kind::Ptr, AbsOffsets::top(), std::move(l)}; }
    bool operator==(const AbsVal& o) const;
};

// B keys cells by start offset; B-top keeps one summary cell per variable (key 0).
struct AbsState {
    bool reachable = true;
    std::vector<std::map<Int, AbsVal>> cells;
    bool operator==(const AbsState&) const = default;
};

enum class PtMode { B, BTop };

class PointsTo {
public:
    PointsTo(const Program& p, PtMode mode, unsigned ilvl = kDefaultIlvl);

    const Program& program() const { return prog_; }
    const Layout& layout() const { return layout_; }
    PtMode mode() const { return mode_; }
    unsigned ilvl() const { return ilvl_; }

    const AbsState& pre(StmtId s) const { return pre_.at(static_cast<size_t>(s - 1)); }
    const AbsState& final_state() const { return final_; }
    // State after a statement (after both branches for an if).
    const AbsState& post(StmtId s) const { return post_.at(static_cast<size_t>(s - 1)); }

    // PA operations.
    AbsLoc base(int var) const;
    AbsLoc shift(const AbsLoc& l, const AbsOffsets& bytes) const;
    AbsLoc load_ptr(const AbsState& s, const TypeRef& ptr, const AbsLoc& l) const;
    AbsOffsets load_int(const AbsState& s, const TypeRef& t, const AbsLoc& l) const;

    AbsVal eval(const ExprRef& e, const AbsState& s) const;
    AbsLoc eval_lval(const LvalRef& lv, const AbsState& s) const;
    // Abstract value of an integer index after conversion to the 32-bit size type.
    AbsOffsets index_u32(const AbsOffsets& v) const;

    // Concrete start offsets of l within the bounds of each variable.
    std::vector<std::pair<int, std::vector<Int>>> gamma(const AbsLoc& l) const;
    bool contains(const AbsLoc& l, ConcLoc c) const;
    bool contains(const AbsVal& a, const ConcVal& c) const;
    // Returns an empty string when c is in the concretization, else a description.
    std::string check_state(const AbsState& s, const ConcState& c) const;

    AbsState transfer(const Stmt& st, const AbsState& s) const;
    AbsState join(const AbsState& a, const AbsState& b) const;
    AbsVal join(const AbsVal& a, const AbsVal& b) const;
    AbsLoc join(const AbsLoc& a, const AbsLoc& b) const;

    // Variables whose type contains a sub-object of type t.
    std::vector<int> vars_containing(const TypeRef& t) const;
    AbsLoc top_loc(const TypeRef& pointee) const;

    std::string str(const AbsLoc& l) const;
    std::string str(const AbsVal& v) const;
    std::string dump() const;

private:
    const Program& prog_;
    Layout layout_;
    PtMode mode_;
    unsigned ilvl_;
    std::vector<AbsState> pre_, post_;
    AbsState final_;

    AbsState initial() const;
    AbsState run(const std::vector<StmtRef>& body, AbsState s);
    AbsOffsets clamp(int var, const AbsOffsets& o, bool& empty) const;
    AbsLoc normalize(AbsLoc l) const;
    AbsVal wrap_int(const AbsOffsets& v, ArithKind k) const;
    std::vector<std::pair<int, Int>> target_cells(const AbsLoc& l, const TypeRef& t) const;
};

const char* pt_mode_name(PtMode m);

}  // namespace mpvc

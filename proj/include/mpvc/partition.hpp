#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mpvc/logic.hpp"
#include "mpvc/pointsto.hpp"

namespace mpvc {

enum class Analysis { B, BTop, C, P };
const char* analysis_name(Analysis a);
Analysis parse_analysis(const std::string& s);

struct Block {
    int id = 0;
    int var = -1;
    std::vector<std::pair<Int, Int>> ranges;  // inclusive, sorted, disjoint, non-adjacent

    bool contains(Int byte) const;
    Int min() const { return ranges.front().first; }
    Int max() const { return ranges.back().second; }
    size_t bytes() const;
};

std::string ranges_str(const std::vector<std::pair<Int, Int>>& r);

// Concrete bytes covered by an access of n bytes starting anywhere in l, per variable.
std::vector<std::pair<int, std::vector<Int>>> footprint(const PointsTo& pt, const AbsLoc& l, Int n);

// Accesses through a pointer, grouped by source occurrence.
struct Occurrence {
    int occ = 0;
    std::vector<std::pair<StmtId, LvalRef>> uses;
    std::set<std::pair<int, Int>> bytes;  // cell-rounded footprint
};

// A pointer-analysis instance: blocks plus base/shift/load/domain/slice.
class PA {
public:
    PA(const Program& p, Analysis kind, unsigned ilvl = kDefaultIlvl);

    Analysis kind() const { return kind_; }
    unsigned ilvl() const { return pt_->ilvl(); }
    const Program& program() const { return prog_; }
    const PointsTo& pt() const { return *pt_; }
    const Layout& layout() const { return pt_->layout(); }

    const std::vector<Block>& blocks() const { return blocks_; }
    const Block& block(int id) const { return blocks_.at(static_cast<size_t>(id - 1)); }
    // Block holding the byte, 0 when outside the variable.
    int block_at(int var, Int byte) const;
    std::vector<int> blocks_of_var(int var) const;

    AbsLoc base(int var) const { return pt_->base(var); }
    AbsLoc shift(StmtId s, const AbsLoc& l, const AbsOffsets& bytes) const;
    AbsLoc load(StmtId s, const TypeRef& ptr, const AbsLoc& l) const;
    std::vector<int> domain(const AbsLoc& l) const;
    logic::Term slice(int block, const logic::Term& e) const;
    bool slice_holds(int block, Int byte) const;

    // P only: occurrences and their classes (indices into occurrences()).
    const std::vector<Occurrence>& occurrences() const { return occs_; }
    const std::vector<std::vector<size_t>>& classes() const { return classes_; }

    std::string dump() const;

private:
    const Program& prog_;
    Analysis kind_;
    std::unique_ptr<PointsTo> pt_;
    std::vector<Block> blocks_;
    std::vector<std::vector<int>> byte_block_;  // per variable, per byte
    std::vector<Occurrence> occs_;
    std::vector<std::vector<size_t>> classes_;

    void build_var_blocks();
    void build_cell_blocks();
    void build_deref_blocks();
    void finish(std::vector<Block> blocks);
};

// Law violations of a PA instance: block disjointness, completeness and unique base, slice/block
// agreement, domain coverage, and shift/load soundness against the given traces.
std::vector<std::string> check_pa_laws(const PA& pa, const std::vector<Trace>& traces);

}  // namespace mpvc

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mpvc/concrete.hpp"
#include "mpvc/logic.hpp"
#include "mpvc/partition.hpp"

namespace mpvc {

enum class Model { Typed, B, BTop, C, P };
const char* model_name(Model m);
Model parse_model(const std::string& s);

// A location: logic base (block id) and offset within the variable, plus its abstraction.
struct MLoc {
    logic::Term b, o;
    AbsLoc abs;
};

struct MVal {
    bool is_ptr = false;
    logic::Term i;  // integer value
    MLoc l;         // pointer value
    logic::Term as_loc() const { return logic::mk_loc(l.b, l.o); }
};

// One logic array per slot. An environment holds the current variable of every slot.
struct Slot {
    std::string prefix;
    logic::Sort sort = logic::Sort::ArrInt;
    int block = 0;  // functor models
    struct Cell {
        int var;
        Int off;
        Int index;
    };
    std::vector<Cell> cells;  // concrete cells stored in this slot, with their array index
};

using Env = std::vector<logic::Term>;

class MemoryModel {
public:
    explicit MemoryModel(const Program& p) : prog_(p) {}
    virtual ~MemoryModel() = default;

    const Program& program() const { return prog_; }
    virtual Model kind() const = 0;
    // The points-to result used for abstract values of expressions.
    virtual const PointsTo& pt() const = 0;
    virtual size_t partition_count() const = 0;

    const std::vector<Slot>& slots() const { return slots_; }
    Env emp(logic::Symbols& syms) const;
    // Fresh variables for the slots where a and b differ, with the equalities for each side.
    Env join(const Env& a, const Env& b, logic::Symbols& syms, std::vector<logic::Term>& eq_a,
             std::vector<logic::Term>& eq_b) const;

    virtual MLoc base(int var) const = 0;
    MLoc null() const;
    virtual MLoc shift(StmtId s, const MLoc& l, const logic::Term& bytes, const AbsOffsets& abs) const = 0;
    // Pointer loads may append hypotheses on the loaded location.
    virtual MVal load(StmtId s, const Env& m, const TypeRef& u, const MLoc& l,
                      std::vector<logic::Term>& hyps) const = 0;
    // Updates m with fresh variables and returns the relation between old and new arrays.
    virtual logic::Term store(StmtId s, Env& m, logic::Symbols& syms, const TypeRef& u, const MLoc& l,
                              const MVal& v) const = 0;

    // Ground images of concrete data, for translation validation.
    virtual logic::Value loc_value(const ConcLoc& c) const = 0;
    logic::Value slot_value(size_t slot, const ConcState& m) const;

protected:
    const Program& prog_;
    std::vector<Slot> slots_;
};

// The memory model built from a pointer-analysis instance.
class FunctorModel : public MemoryModel {
public:
    FunctorModel(const Program& p, Analysis a, unsigned ilvl, bool prune = true);

    Model kind() const override;
    const PointsTo& pt() const override { return pa_.pt(); }
    size_t partition_count() const override { return pa_.blocks().size(); }
    const PA& pa() const { return pa_; }
    bool prune() const { return prune_; }

    MLoc base(int var) const override;
    MLoc shift(StmtId s, const MLoc& l, const logic::Term& bytes, const AbsOffsets& abs) const override;
    MVal load(StmtId s, const Env& m, const TypeRef& u, const MLoc& l,
              std::vector<logic::Term>& hyps) const override;
    logic::Term store(StmtId s, Env& m, logic::Symbols& syms, const TypeRef& u, const MLoc& l,
                      const MVal& v) const override;
    logic::Value loc_value(const ConcLoc& c) const override;

    // Blocks a load or store at l dispatches over.
    std::vector<int> cases(const AbsLoc& l) const;
    // Slot holding values of kind ptr in the block, or -1.
    int slot_of(int block, bool ptr) const;
    // Constraint that a loaded location lies in one of the blocks of l (or is null).
    logic::Term located(const logic::Term& b, const logic::Term& o, const AbsLoc& l) const;

private:
    PA pa_;
    bool prune_;
    std::vector<std::pair<int, int>> block_slots_;  // per block: int slot, ptr slot
};

// One array per scalar type, indexed by variable and offset; no pointer analysis.
class TypedModel : public MemoryModel {
public:
    static constexpr Int kStride = 65536;

    TypedModel(const Program& p, unsigned ilvl);

    Model kind() const override { return Model::Typed; }
    const PointsTo& pt() const override { return ranges_.pt(); }
    size_t partition_count() const override { return slots_.size(); }

    MLoc base(int var) const override;
    MLoc shift(StmtId s, const MLoc& l, const logic::Term& bytes, const AbsOffsets& abs) const override;
    MVal load(StmtId s, const Env& m, const TypeRef& u, const MLoc& l,
              std::vector<logic::Term>& hyps) const override;
    logic::Term store(StmtId s, Env& m, logic::Symbols& syms, const TypeRef& u, const MLoc& l,
                      const MVal& v) const override;
    logic::Value loc_value(const ConcLoc& c) const override;

    size_t slot_of(const TypeRef& u) const;

private:
    PA ranges_;  // B analysis, only for value ranges
    std::vector<std::string> keys_;
    logic::Term index(const MLoc& l) const;
};

std::unique_ptr<MemoryModel> make_model(const Program& p, Model m, unsigned ilvl = kDefaultIlvl,
                                        bool prune = true);

}  // namespace mpvc

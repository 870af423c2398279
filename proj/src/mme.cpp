#include "mpvc/mme.hpp"

#include <algorithm>

namespace mpvc {

using namespace logic;

const char* model_name(Model m) {
    switch (m) {
        case Model::Typed: return "typed";
        case Model::B: return "B";
        case Model::BTop: return "Btop";
        case Model::C: return "C";
        case Model::P: return "P";
    }
    return "?";
}

Model parse_model(const std::string& s) {
    if (s == "typed" || s == "T") return Model::Typed;
    switch (parse_analysis(s)) {
        case Analysis::B: return Model::B;
        case Analysis::BTop: return Model::BTop;
        case Analysis::C: return Model::C;
        case Analysis::P: return Model::P;
    }
    return Model::B;
}

Env MemoryModel::emp(Symbols& syms) const {
    Env m;
    for (auto& s : slots_) m.push_back(syms.fresh(s.prefix, s.sort));
    return m;
}

Env MemoryModel::join(const Env& a, const Env& b, Symbols& syms, std::vector<Term>& eq_a,
                      std::vector<Term>& eq_b) const {
    Env out = a;
    for (size_t i = 0; i < slots_.size(); ++i) {
        if (equal(a[i], b[i])) continue;
        out[i] = syms.fresh(slots_[i].prefix, slots_[i].sort);
        eq_a.push_back(eq(out[i], a[i]));
        eq_b.push_back(eq(out[i], b[i]));
    }
    return out;
}

MLoc MemoryModel::null() const {
    AbsLoc l;
    l.may_null = true;
    return {int_lit(0), int_lit(0), l};
}

Value MemoryModel::slot_value(size_t slot, const ConcState& m) const {
    auto& s = slots_.at(slot);
    bool ptr = s.sort == Sort::ArrLoc;
    std::map<Int, Value> vals;
    for (auto& c : s.cells) {
        auto& row = m.cells.at(static_cast<size_t>(c.var));
        auto it = row.find(c.off);
        if (it == row.end() || it->second.kind == ConcVal::Kind::Undef) continue;
        vals[c.index] = ptr ? loc_value(it->second.p) : Value::of_int(it->second.i);
    }
    return Value::of_array(s.sort, std::move(vals), ptr ? Value::of_loc(0, 0) : Value::of_int(0));
}

// ---------------------------------------------------------------------------

namespace {

Analysis analysis_of(Model m) {
    switch (m) {
        case Model::BTop: return Analysis::BTop;
        case Model::C: return Analysis::C;
        case Model::P: return Analysis::P;
        default: return Analysis::B;
    }
}

}  // namespace

FunctorModel::FunctorModel(const Program& p, Analysis a, unsigned ilvl, bool prune)
    : MemoryModel(p), pa_(p, a, ilvl), prune_(prune) {
    for (auto& b : pa_.blocks()) {
        Slot ints, ptrs;
        for (auto& c : pa_.layout().cells(b.var)) {
            if (!b.contains(c.offset)) continue;
            (c.type->is_ptr() ? ptrs : ints).cells.push_back({b.var, c.offset, c.offset});
        }
        std::string name = p.vars[static_cast<size_t>(b.var)].name + "_" + std::to_string(b.id);
        std::pair<int, int> ids{-1, -1};
        if (!ints.cells.empty()) {
            ints.prefix = name;
            ints.sort = Sort::ArrInt;
            ints.block = b.id;
            ids.first = static_cast<int>(slots_.size());
            slots_.push_back(std::move(ints));
        }
        if (!ptrs.cells.empty()) {
            ptrs.prefix = ids.first >= 0 ? name + "p" : name;
            ptrs.sort = Sort::ArrLoc;
            ptrs.block = b.id;
            ids.second = static_cast<int>(slots_.size());
            slots_.push_back(std::move(ptrs));
        }
        block_slots_.push_back(ids);
    }
}

Model FunctorModel::kind() const {
    switch (pa_.kind()) {
        case Analysis::B: return Model::B;
        case Analysis::BTop: return Model::BTop;
        case Analysis::C: return Model::C;
        case Analysis::P: return Model::P;
    }
    return Model::B;
}

int FunctorModel::slot_of(int block, bool ptr) const {
    auto& ids = block_slots_.at(static_cast<size_t>(block - 1));
    return ptr ? ids.second : ids.first;
}

std::vector<int> FunctorModel::cases(const AbsLoc& l) const {
    if (prune_) return pa_.domain(l);
    std::vector<int> out;
    for (auto& [v, o] : l.m) {
        (void)o;
        auto bs = pa_.blocks_of_var(v);
        out.insert(out.end(), bs.begin(), bs.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

MLoc FunctorModel::base(int var) const {
    auto l = pa_.base(var);
    auto dom = pa_.domain(l);
    if (dom.size() != 1) throw Error("internal: base of " + prog_.vars.at(static_cast<size_t>(var)).name +
                                     " does not denote a single block");
    return {int_lit(dom[0]), int_lit(0), l};
}

MLoc FunctorModel::shift(StmtId s, const MLoc& l, const Term& bytes, const AbsOffsets& abs) const {
    auto abs2 = pa_.shift(s, l.abs, abs);
    auto o = add(l.o, bytes);
    auto dom = pa_.domain(abs2);
    if (dom.empty()) return {int_lit(0), o, abs2};
    auto from = pa_.domain(l.abs);
    auto fits = [&](int b) {
        std::vector<Term> alts;
        for (int d : from)
            if (pa_.block(d).var == pa_.block(b).var) alts.push_back(eq(l.b, int_lit(d)));
        return or_(alts);
    };
    Term nb = int_lit(dom.back());
    for (size_t i = dom.size() - 1; i-- > 0;)
        nb = ite(and_({fits(dom[i]), pa_.slice(dom[i], o)}), int_lit(dom[i]), nb);
    return {nb, o, abs2};
}

Term FunctorModel::located(const Term& b, const Term& o, const AbsLoc& l) const {
    std::vector<Term> alts;
    for (int d : pa_.domain(l)) alts.push_back(and_({eq(b, int_lit(d)), pa_.slice(d, o)}));
    if (l.may_null) alts.push_back(and_({eq(b, int_lit(0)), eq(o, int_lit(0))}));
    return or_(alts);
}

MVal FunctorModel::load(StmtId s, const Env& m, const TypeRef& u, const MLoc& l, std::vector<Term>& hyps) const {
    bool ptr = u->is_ptr();
    std::vector<std::pair<int, int>> cs;
    for (int b : cases(l.abs))
        if (int k = slot_of(b, ptr); k >= 0) cs.push_back({b, k});
    if (cs.empty()) throw Error("stmt " + std::to_string(s) + ": load from provably invalid location");
    Term v = select(m[static_cast<size_t>(cs.back().second)], l.o);
    for (size_t i = cs.size() - 1; i-- > 0;)
        v = ite(eq(l.b, int_lit(cs[i].first)), select(m[static_cast<size_t>(cs[i].second)], l.o), v);
    MVal out;
    if (!ptr) {
        out.i = v;
        return out;
    }
    out.is_ptr = true;
    out.l = {loc_base(v), loc_off(v), pa_.load(s, u, l.abs)};
    hyps.push_back(located(out.l.b, out.l.o, out.l.abs));
    return out;
}

Term FunctorModel::store(StmtId s, Env& m, Symbols& syms, const TypeRef& u, const MLoc& l, const MVal& v) const {
    bool ptr = u->is_ptr();
    std::vector<std::pair<int, int>> cs;
    for (int b : cases(l.abs))
        if (int k = slot_of(b, ptr); k >= 0) cs.push_back({b, k});
    if (cs.empty()) throw Error("stmt " + std::to_string(s) + ": store to provably invalid location");
    Term val = ptr ? v.as_loc() : v.i;
    std::vector<Term> parts;
    for (auto& [b, k] : cs) {
        auto& old = m[static_cast<size_t>(k)];
        auto a = syms.fresh(slots_[static_cast<size_t>(k)].prefix, slots_[static_cast<size_t>(k)].sort);
        auto upd = eq(a, logic::store(old, l.o, val));
        parts.push_back(cs.size() == 1 ? upd : ite(eq(l.b, int_lit(b)), upd, eq(a, old)));
        old = a;
    }
    return and_(parts);
}

Value FunctorModel::loc_value(const ConcLoc& c) const {
    if (c.var == kNullVar) return Value::of_loc(0, 0);
    return Value::of_loc(pa_.block_at(c.var, c.off), c.off);
}

// ---------------------------------------------------------------------------

namespace {

std::string type_key(const TypeRef& u) {
    if (!u->is_ptr()) return arith_name(u->arith);
    std::string s = "p_";
    for (char c : type_str(u->elem)) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s;
}

}  // namespace

TypedModel::TypedModel(const Program& p, unsigned ilvl) : MemoryModel(p), ranges_(p, Analysis::B, ilvl) {
    for (size_t v = 0; v < p.vars.size(); ++v)
        for (auto& c : ranges_.layout().cells(static_cast<int>(v))) {
            auto key = type_key(c.type);
            auto it = std::find(keys_.begin(), keys_.end(), key);
            if (it == keys_.end()) {
                keys_.push_back(key);
                slots_.push_back({"T_" + key, c.type->is_ptr() ? Sort::ArrLoc : Sort::ArrInt, 0, {}});
                it = keys_.end() - 1;
            }
            auto& slot = slots_[static_cast<size_t>(it - keys_.begin())];
            slot.cells.push_back({static_cast<int>(v), c.offset, (static_cast<Int>(v) + 1) * kStride + c.offset});
        }
}

size_t TypedModel::slot_of(const TypeRef& u) const {
    auto it = std::find(keys_.begin(), keys_.end(), type_key(u));
    if (it == keys_.end()) throw Error("no memory holds values of type " + type_str(u));
    return static_cast<size_t>(it - keys_.begin());
}

Term TypedModel::index(const MLoc& l) const { return add(mul(l.b, int_lit(kStride)), l.o); }

MLoc TypedModel::base(int var) const { return {int_lit(var + 1), int_lit(0), ranges_.base(var)}; }

MLoc TypedModel::shift(StmtId s, const MLoc& l, const Term& bytes, const AbsOffsets& abs) const {
    return {l.b, add(l.o, bytes), ranges_.shift(s, l.abs, abs)};
}

MVal TypedModel::load(StmtId s, const Env& m, const TypeRef& u, const MLoc& l, std::vector<Term>&) const {
    Term v = select(m[slot_of(u)], index(l));
    MVal out;
    if (!u->is_ptr()) {
        out.i = v;
        return out;
    }
    out.is_ptr = true;
    out.l = {loc_base(v), loc_off(v), ranges_.load(s, u, l.abs)};
    return out;
}

Term TypedModel::store(StmtId, Env& m, Symbols& syms, const TypeRef& u, const MLoc& l, const MVal& v) const {
    size_t k = slot_of(u);
    auto a = syms.fresh(slots_[k].prefix, slots_[k].sort);
    auto rel = eq(a, logic::store(m[k], index(l), u->is_ptr() ? v.as_loc() : v.i));
    m[k] = a;
    return rel;
}

Value TypedModel::loc_value(const ConcLoc& c) const {
    if (c.var == kNullVar) return Value::of_loc(0, 0);
    return Value::of_loc(c.var + 1, c.off);
}

std::unique_ptr<MemoryModel> make_model(const Program& p, Model m, unsigned ilvl, bool prune) {
    if (m == Model::Typed) return std::make_unique<TypedModel>(p, ilvl);
    return std::make_unique<FunctorModel>(p, analysis_of(m), ilvl, prune);
}

}  // namespace mpvc

#include "mpvc/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace mpvc {

const char* analysis_name(Analysis a) {
    switch (a) {
        case Analysis::B: return "B";
        case Analysis::BTop: return "Btop";
        case Analysis::C: return "C";
        case Analysis::P: return "P";
    }
    return "?";
}

Analysis parse_analysis(const std::string& s) {
    if (s == "B" || s == "b") return Analysis::B;
    if (s == "Btop" || s == "btop" || s == "BTop" || s == "B-top") return Analysis::BTop;
    if (s == "C" || s == "c") return Analysis::C;
    if (s == "P" || s == "p") return Analysis::P;
    throw Error("unknown analysis '" + s + "' (expected B, Btop, C or P)");
}

bool Block::contains(Int byte) const {
    for (auto& [lo, hi] : ranges)
        if (lo <= byte && byte <= hi) return true;
    return false;
}

size_t Block::bytes() const {
    size_t n = 0;
    for (auto& [lo, hi] : ranges) n += static_cast<size_t>(hi - lo + 1);
    return n;
}

std::string ranges_str(const std::vector<std::pair<Int, Int>>& r) {
    std::string s = "{";
    for (size_t i = 0; i < r.size(); ++i) {
        if (i) s += ",";
        s += "[" + to_string(r[i].first) + "," + to_string(r[i].second) + "]";
    }
    return s + "}";
}

namespace {

std::vector<std::pair<Int, Int>> to_ranges(const std::vector<Int>& sorted) {
    std::vector<std::pair<Int, Int>> out;
    for (Int b : sorted) {
        if (!out.empty() && out.back().second + 1 == b)
            out.back().second = b;
        else
            out.push_back({b, b});
    }
    return out;
}

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), size_t{0}); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

bool through_pointer(const LvalRef& lv) {
    auto l = lv;
    while (l->kind == Lval::Kind::Field) l = l->base;
    return l->kind == Lval::Kind::Deref;
}

// Accessed lvalues: reads and assignment targets, including those inside address computations.
void accessed(const ExprRef& e, std::vector<LvalRef>& out);

void inner(const LvalRef& lv, std::vector<LvalRef>& out) {
    if (lv->kind == Lval::Kind::Field) inner(lv->base, out);
    if (lv->kind == Lval::Kind::Deref) accessed(lv->addr, out);
}

void accessed(const ExprRef& e, std::vector<LvalRef>& out) {
    if (!e) return;
    if (e->lval) {
        if (e->kind == Expr::Kind::Read) out.push_back(e->lval);
        inner(e->lval, out);
    }
    accessed(e->a, out);
    accessed(e->b, out);
}

}  // namespace

std::vector<std::pair<int, std::vector<Int>>> footprint(const PointsTo& pt, const AbsLoc& l, Int n) {
    std::vector<std::pair<int, std::vector<Int>>> out;
    for (auto& [v, starts] : pt.gamma(l)) {
        Int size = size_of(pt.program().vars[static_cast<size_t>(v)].type);
        std::set<Int> bytes;
        for (Int s : starts)
            for (Int k = 0; k < n && s + k < size; ++k) bytes.insert(s + k);
        out.push_back({v, {bytes.begin(), bytes.end()}});
    }
    return out;
}

PA::PA(const Program& p, Analysis kind, unsigned ilvl) : prog_(p), kind_(kind) {
    pt_ = std::make_unique<PointsTo>(p, kind == Analysis::BTop ? PtMode::BTop : PtMode::B, ilvl);
    switch (kind) {
        case Analysis::B:
        case Analysis::BTop: build_var_blocks(); break;
        case Analysis::C: build_cell_blocks(); break;
        case Analysis::P: build_deref_blocks(); break;
    }
}

void PA::build_var_blocks() {
    std::vector<Block> bs;
    for (size_t v = 0; v < prog_.vars.size(); ++v)
        bs.push_back({0, static_cast<int>(v), {{0, size_of(prog_.vars[v].type) - 1}}});
    finish(std::move(bs));
}

void PA::build_cell_blocks() {
    std::vector<Block> bs;
    for (size_t v = 0; v < prog_.vars.size(); ++v) {
        auto& cells = layout().cells(static_cast<int>(v));
        Int size = size_of(prog_.vars[v].type);
        for (size_t k = 0; k < cells.size(); ++k) {
            // padding after a cell belongs to it
            Int end = k + 1 < cells.size() ? cells[k + 1].offset : size;
            bs.push_back({0, static_cast<int>(v), {{cells[k].offset, end - 1}}});
        }
    }
    finish(std::move(bs));
}

void PA::build_deref_blocks() {
    // cell containing each byte, for rounding
    std::vector<std::map<Int, std::pair<Int, Int>>> cell_of(prog_.vars.size());
    for (size_t v = 0; v < prog_.vars.size(); ++v)
        for (auto& c : layout().cells(static_cast<int>(v)))
            for (Int b = c.offset; b < c.offset + c.size; ++b) cell_of[v][b] = {c.offset, c.offset + c.size};

    // only the body after the last entry marker; the context just sets up state
    StmtId first = 1;
    for (auto* s : prog_.stmts)
        if (s->kind == Stmt::Kind::Entry) first = s->id + 1;
    std::map<int, size_t> by_occ;
    for (auto* s : prog_.stmts) {
        if (s->id < first) continue;
        std::vector<LvalRef> acc;
        if (s->kind == Stmt::Kind::Assign) {
            acc.push_back(s->lhs);
            inner(s->lhs, acc);
        }
        accessed(s->e, acc);
        for (auto& lv : acc) {
            if (!through_pointer(lv)) continue;
            auto [it, fresh] = by_occ.try_emplace(lv->occ, occs_.size());
            if (fresh) occs_.push_back({lv->occ, {}, {}});
            auto& o = occs_[it->second];
            o.uses.push_back({s->id, lv});
            if (!pt_->pre(s->id).reachable) continue;
            auto loc = pt_->eval_lval(lv, pt_->pre(s->id));
            for (auto& [v, bytes] : footprint(*pt_, loc, size_of(lv->type)))
                for (Int b : bytes) {
                    auto c = cell_of[static_cast<size_t>(v)].find(b);
                    if (c == cell_of[static_cast<size_t>(v)].end()) {
                        o.bytes.insert({v, b});
                        continue;
                    }
                    for (Int x = c->second.first; x < c->second.second; ++x) o.bytes.insert({v, x});
                }
        }
    }
    std::sort(occs_.begin(), occs_.end(), [](const Occurrence& a, const Occurrence& b) { return a.occ < b.occ; });

    UnionFind uf(occs_.size());
    std::map<std::pair<int, Int>, size_t> owner;
    for (size_t i = 0; i < occs_.size(); ++i)
        for (auto& b : occs_[i].bytes) {
            auto [it, fresh] = owner.try_emplace(b, i);
            if (!fresh) uf.unite(it->second, i);
        }
    std::map<size_t, size_t> cls;
    for (size_t i = 0; i < occs_.size(); ++i) {
        size_t r = uf.find(i);
        auto [it, fresh] = cls.try_emplace(r, classes_.size());
        if (fresh) classes_.emplace_back();
        classes_[it->second].push_back(i);
    }

    std::vector<Block> bs;
    for (size_t v = 0; v < prog_.vars.size(); ++v) {
        Int size = size_of(prog_.vars[v].type);
        std::map<size_t, std::vector<Int>> per_class;
        std::vector<Int> rest;
        for (Int b = 0; b < size; ++b) {
            auto it = owner.find({static_cast<int>(v), b});
            if (it == owner.end())
                rest.push_back(b);
            else
                per_class[cls.at(uf.find(it->second))].push_back(b);
        }
        for (auto& [c, bytes] : per_class) bs.push_back({0, static_cast<int>(v), to_ranges(bytes)});
        if (!rest.empty()) bs.push_back({0, static_cast<int>(v), to_ranges(rest)});
    }
    finish(std::move(bs));
}

void PA::finish(std::vector<Block> bs) {
    std::sort(bs.begin(), bs.end(), [&](const Block& a, const Block& b) {
        auto& na = prog_.vars[static_cast<size_t>(a.var)].name;
        auto& nb = prog_.vars[static_cast<size_t>(b.var)].name;
        return na != nb ? na < nb : a.min() < b.min();
    });
    byte_block_.assign(prog_.vars.size(), {});
    for (size_t v = 0; v < prog_.vars.size(); ++v)
        byte_block_[v].assign(static_cast<size_t>(size_of(prog_.vars[v].type)), 0);
    for (size_t i = 0; i < bs.size(); ++i) {
        bs[i].id = static_cast<int>(i + 1);
        for (auto& [lo, hi] : bs[i].ranges)
            for (Int b = lo; b <= hi; ++b) {
                auto& slot = byte_block_[static_cast<size_t>(bs[i].var)][static_cast<size_t>(b)];
                if (slot != 0) throw Error("internal: overlapping blocks");
                slot = bs[i].id;
            }
    }
    for (auto& row : byte_block_)
        for (int id : row)
            if (id == 0) throw Error("internal: blocks do not cover every byte");
    blocks_ = std::move(bs);
}

int PA::block_at(int var, Int byte) const {
    if (var < 0 || static_cast<size_t>(var) >= byte_block_.size()) return 0;
    auto& row = byte_block_[static_cast<size_t>(var)];
    if (byte < 0 || byte >= static_cast<Int>(row.size())) return 0;
    return row[static_cast<size_t>(byte)];
}

std::vector<int> PA::blocks_of_var(int var) const {
    std::vector<int> out;
    for (auto& b : blocks_)
        if (b.var == var) out.push_back(b.id);
    return out;
}

AbsLoc PA::shift(StmtId, const AbsLoc& l, const AbsOffsets& bytes) const { return pt_->shift(l, bytes); }

AbsLoc PA::load(StmtId s, const TypeRef& ptr, const AbsLoc& l) const {
    return pt_->load_ptr(pt_->pre(s), ptr, l);
}

std::vector<int> PA::domain(const AbsLoc& l) const {
    std::set<int> ids;
    for (auto& [v, starts] : pt_->gamma(l)) {
        if (starts.empty()) continue;
        if (kind_ == Analysis::B || kind_ == Analysis::BTop) {
            ids.insert(block_at(v, 0));
            continue;
        }
        for (Int o : starts) ids.insert(block_at(v, o));
    }
    return {ids.begin(), ids.end()};
}

logic::Term PA::slice(int id, const logic::Term& e) const {
    using namespace logic;
    auto& b = block(id);
    std::vector<Term> parts;
    for (auto& [lo, hi] : b.ranges) {
        if (lo == hi)
            parts.push_back(eq(e, int_lit(lo)));
        else
            parts.push_back(and_({le(int_lit(lo), e), le(e, int_lit(hi))}));
    }
    return or_(parts);
}

bool PA::slice_holds(int id, Int byte) const { return logic::is_true(slice(id, logic::int_lit(byte))); }

std::string PA::dump() const {
    std::ostringstream os;
    os << "analysis " << analysis_name(kind_) << " ilvl " << ilvl() << " blocks " << blocks_.size() << "\n";
    auto e = logic::var("e", logic::Sort::Int);
    for (auto& b : blocks_)
        os << "block " << b.id << " base=" << prog_.vars[static_cast<size_t>(b.var)].name
           << " bytes=" << ranges_str(b.ranges) << " slice=" << logic::to_sexpr(slice(b.id, e)) << "\n";
    if (kind_ == Analysis::P)
        for (size_t c = 0; c < classes_.size(); ++c) {
            os << "class " << c << " occurrences";
            for (size_t i : classes_[c]) os << " " << occs_[i].occ;
            os << "\n";
        }
    return os.str();
}

}  // namespace mpvc

namespace mpvc {

namespace {

void subexprs(const ExprRef& e, std::vector<ExprRef>& out);

void subexprs(const LvalRef& lv, std::vector<ExprRef>& out) {
    if (lv->kind == Lval::Kind::Field) subexprs(lv->base, out);
    if (lv->kind == Lval::Kind::Deref) subexprs(lv->addr, out);
}

void subexprs(const ExprRef& e, std::vector<ExprRef>& out) {
    if (!e) return;
    out.push_back(e);
    if (e->lval) subexprs(e->lval, out);
    subexprs(e->a, out);
    subexprs(e->b, out);
}

}  // namespace

std::vector<std::string> check_pa_laws(const PA& pa, const std::vector<Trace>& traces) {
    std::vector<std::string> bad;
    const auto& prog = pa.program();
    const auto& pt = pa.pt();
    auto tag = std::string(analysis_name(pa.kind())) + ": ";

    // partition laws by byte enumeration
    std::map<std::pair<int, Int>, int> seen;
    for (auto& b : pa.blocks()) {
        Int size = size_of(prog.vars[static_cast<size_t>(b.var)].type);
        for (auto& [lo, hi] : b.ranges) {
            if (lo < 0 || hi >= size) bad.push_back(tag + "block " + std::to_string(b.id) + " exceeds its base");
            for (Int i = lo; i <= hi; ++i) {
                auto [it, fresh] = seen.try_emplace({b.var, i}, b.id);
                if (!fresh)
                    bad.push_back(tag + "blocks " + std::to_string(it->second) + " and " + std::to_string(b.id) +
                                  " overlap");
            }
        }
        for (Int i = 0; i < size; ++i)
            if (pa.slice_holds(b.id, i) != b.contains(i))
                bad.push_back(tag + "slice of block " + std::to_string(b.id) + " disagrees at byte " + to_string(i));
    }
    for (size_t v = 0; v < prog.vars.size(); ++v)
        for (Int i = 0; i < size_of(prog.vars[v].type); ++i)
            if (!seen.count({static_cast<int>(v), i}))
                bad.push_back(tag + prog.vars[v].name + "+" + to_string(i) + " is in no block");

    // domain coverage for every location the compiler asks about
    for (auto* s : prog.stmts) {
        if (!pt.pre(s->id).reachable) continue;
        std::vector<LvalRef> lvs;
        for_each_lval(*s, [&](const LvalRef& lv) { lvs.push_back(lv); });
        for (auto& lv : lvs) {
            auto l = pt.eval_lval(lv, pt.pre(s->id));
            auto dom = pa.domain(l);
            for (auto& [v, starts] : pt.gamma(l))
                for (Int o : starts) {
                    int id = pa.block_at(v, o);
                    if (!std::binary_search(dom.begin(), dom.end(), id))
                        bad.push_back(tag + "domain misses " + prog.vars[static_cast<size_t>(v)].name + "+" +
                                      to_string(o) + " at stmt " + std::to_string(s->id));
                }
        }
    }

    // shift and load soundness on concrete traces
    Machine mc(prog);
    for (auto& t : traces)
        for (auto& st : t.steps) {
            const Stmt& s = *prog.stmt(st.stmt);
            auto& as = pt.pre(s.id);
            std::vector<ExprRef> es;
            subexprs(s.e, es);
            if (s.lhs) subexprs(s.lhs, es);
            for (auto& e : es) {
                if (e->kind != Expr::Kind::PtrAdd && !(e->kind == Expr::Kind::Read && e->type->is_ptr())) continue;
                auto c = mc.eval(e, st.pre);
                if (!c || c->kind != ConcVal::Kind::Ptr) continue;
                auto a = pt.eval(e, as);
                if (!pt.contains(a, *c))
                    bad.push_back(tag + (e->kind == Expr::Kind::PtrAdd ? "shift" : "load") + " unsound at stmt " +
                                  std::to_string(s.id) + ": " + print_expr(prog, e));
            }
        }
    return bad;
}

}  // namespace mpvc

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpvc/util.hpp"

namespace mpvc {

constexpr unsigned kDefaultIlvl = 8;

// Abstract integer sets: top, interval with congruence, or a small explicit set.
class AbsOffsets {
public:
    enum class Kind { Top, Interval, Set };

    static AbsOffsets top();
    static AbsOffsets singleton(Int k);
    // Normalizes; degenerates to an interval when the set exceeds ilvl.
    static AbsOffsets of_set(std::vector<Int> values, unsigned ilvl);
    // lo/hi absent means -inf/+inf. Returns nullopt when the set is empty.
    static std::optional<AbsOffsets> interval(std::optional<Int> lo, std::optional<Int> hi,
                                              Int r, Int n);
    static AbsOffsets range(Int lo, Int hi);
    static AbsOffsets parse(const std::string& text);

    Kind kind() const { return kind_; }
    bool is_top() const { return kind_ == Kind::Top; }
    bool is_set() const { return kind_ == Kind::Set; }
    bool is_interval() const { return kind_ == Kind::Interval; }
    const std::vector<Int>& values() const { return set_; }
    std::optional<Int> lo() const;
    std::optional<Int> hi() const;
    Int residue() const { return r_; }
    Int modulus() const { return n_; }

    bool contains(Int k) const;
    std::optional<Int> is_singleton() const;
    bool subset_of_range(Int lo, Int hi) const;
    bool leq(const AbsOffsets& o) const;
    // gamma(x) intersected with [lo, hi]; hi - lo must be small.
    std::vector<Int> gamma_bounded(Int lo, Int hi) const;

    std::string str() const;
    bool operator==(const AbsOffsets& o) const;
    bool operator!=(const AbsOffsets& o) const { return !(*this == o); }

private:
    Kind kind_ = Kind::Top;
    std::optional<Int> lo_, hi_;
    Int r_ = 0, n_ = 1;
    std::vector<Int> set_;
};

AbsOffsets join(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl);
AbsOffsets add(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl);
AbsOffsets neg(const AbsOffsets& x);
AbsOffsets sub(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl);
AbsOffsets mul(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl);
AbsOffsets scale(const AbsOffsets& x, Int k, unsigned ilvl);
AbsOffsets widen(const AbsOffsets& x, const AbsOffsets& y);

}  // namespace mpvc

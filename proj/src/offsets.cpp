#include "mpvc/offsets.hpp"

#include <algorithm>
#include <sstream>

namespace mpvc {

namespace {

// Uniform congruence view of a non-top value. n == 0 marks an exact singleton.
struct View {
    std::optional<Int> lo, hi;
    Int r = 0, n = 0;
};

View view_of(const AbsOffsets& x) {
    View v;
    if (x.is_set()) {
        const auto& s = x.values();
        v.lo = s.front();
        v.hi = s.back();
        Int g = 0;
        for (Int e : s) g = gcd(g, e - s.front());
        v.n = g;
        v.r = g == 0 ? s.front() : floor_mod(s.front(), g);
    } else {
        v.lo = x.lo();
        v.hi = x.hi();
        v.r = x.residue();
        v.n = x.modulus();
    }
    return v;
}

AbsOffsets from_view(const View& v) {
    if (v.n == 0) return AbsOffsets::singleton(*v.lo);
    auto r = AbsOffsets::interval(v.lo, v.hi, v.r, v.n);
    return r ? *r : AbsOffsets::top();
}

std::optional<Int> min_lo(const std::optional<Int>& a, const std::optional<Int>& b) {
    if (!a || !b) return std::nullopt;
    return std::min(*a, *b);
}

std::optional<Int> max_hi(const std::optional<Int>& a, const std::optional<Int>& b) {
    if (!a || !b) return std::nullopt;
    return std::max(*a, *b);
}

std::string bound_str(const std::optional<Int>& b, bool upper) {
    if (!b) return upper ? "+inf" : "-inf";
    return to_string(*b);
}

std::optional<Int> parse_bound(const std::string& s) {
    if (s == "-inf" || s == "+inf" || s == "inf") return std::nullopt;
    return parse_int(s);
}

}  // namespace

AbsOffsets AbsOffsets::top() { return AbsOffsets(); }

AbsOffsets AbsOffsets::singleton(Int k) {
    AbsOffsets x;
    x.kind_ = Kind::Set;
    x.set_ = {k};
    return x;
}

AbsOffsets AbsOffsets::of_set(std::vector<Int> values, unsigned ilvl) {
    if (values.empty()) throw Error("empty offset set");
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    AbsOffsets x;
    x.kind_ = Kind::Set;
    x.set_ = std::move(values);
    if (x.set_.size() <= std::max(1u, ilvl)) return x;
    return from_view(view_of(x));
}

std::optional<AbsOffsets> AbsOffsets::interval(std::optional<Int> lo, std::optional<Int> hi,
                                               Int r, Int n) {
    if (n < 1) throw Error("interval modulus must be positive");
    r = floor_mod(r, n);
    if (lo) lo = *lo + floor_mod(r - *lo, n);
    if (hi) hi = *hi - floor_mod(*hi - r, n);
    if (lo && hi) {
        if (*lo > *hi) return std::nullopt;
        if (*lo == *hi) return singleton(*lo);
    }
    if (!lo && !hi && n == 1) return top();
    AbsOffsets x;
    x.kind_ = Kind::Interval;
    x.lo_ = lo;
    x.hi_ = hi;
    x.r_ = r;
    x.n_ = n;
    return x;
}

AbsOffsets AbsOffsets::range(Int lo, Int hi) {
    auto r = interval(lo, hi, 0, 1);
    if (!r) throw Error("empty range");
    return *r;
}

AbsOffsets AbsOffsets::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (c != ' ') t.push_back(c);
    if (t == "top") return top();
    if (!t.empty() && t.front() == '{' && t.back() == '}') {
        std::vector<Int> vals;
        std::stringstream ss(t.substr(1, t.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) vals.push_back(parse_int(item));
        return of_set(vals, static_cast<unsigned>(vals.size()));
    }
    if (!t.empty() && t.front() == '[') {
        auto close = t.find(']');
        auto dots = t.find("..");
        if (close == std::string::npos || dots == std::string::npos || dots > close)
            throw Error("bad offset syntax: " + text);
        auto lo = parse_bound(t.substr(1, dots - 1));
        auto hi = parse_bound(t.substr(dots + 2, close - dots - 2));
        Int r = 0, n = 1;
        std::string rest = t.substr(close + 1);
        if (!rest.empty()) {
            auto pct = rest.find('%');
            if (pct == std::string::npos) throw Error("bad offset syntax: " + text);
            r = parse_int(rest.substr(0, pct));
            n = parse_int(rest.substr(pct + 1));
        }
        auto x = interval(lo, hi, r, n);
        if (!x) throw Error("empty interval: " + text);
        return *x;
    }
    throw Error("bad offset syntax: " + text);
}

std::optional<Int> AbsOffsets::lo() const {
    if (kind_ == Kind::Set) return set_.front();
    return lo_;
}

std::optional<Int> AbsOffsets::hi() const {
    if (kind_ == Kind::Set) return set_.back();
    return hi_;
}

bool AbsOffsets::contains(Int k) const {
    switch (kind_) {
        case Kind::Top: return true;
        case Kind::Set: return std::binary_search(set_.begin(), set_.end(), k);
        case Kind::Interval:
            if (lo_ && k < *lo_) return false;
            if (hi_ && k > *hi_) return false;
            return floor_mod(k - r_, n_) == 0;
    }
    return false;
}

std::optional<Int> AbsOffsets::is_singleton() const {
    if (kind_ == Kind::Set && set_.size() == 1) return set_.front();
    return std::nullopt;
}

bool AbsOffsets::subset_of_range(Int lo, Int hi) const {
    if (kind_ == Kind::Top) return false;
    auto l = this->lo();
    auto h = this->hi();
    return l && h && *l >= lo && *h <= hi;
}

bool AbsOffsets::leq(const AbsOffsets& o) const {
    if (o.is_top()) return true;
    if (is_top()) return false;
    if (is_set()) {
        for (Int k : set_)
            if (!o.contains(k)) return false;
        return true;
    }
    if (o.is_set()) {
        if (!lo_ || !hi_) return false;
        if ((*hi_ - *lo_) / n_ + 1 > static_cast<Int>(o.set_.size())) return false;
        for (Int k = *lo_; k <= *hi_; k += n_)
            if (!o.contains(k)) return false;
        return true;
    }
    if (o.lo_ && (!lo_ || *lo_ < *o.lo_)) return false;
    if (o.hi_ && (!hi_ || *hi_ > *o.hi_)) return false;
    return n_ % o.n_ == 0 && floor_mod(r_ - o.r_, o.n_) == 0;
}

std::vector<Int> AbsOffsets::gamma_bounded(Int lo, Int hi) const {
    std::vector<Int> out;
    if (kind_ == Kind::Set) {
        for (Int k : set_)
            if (k >= lo && k <= hi) out.push_back(k);
        return out;
    }
    for (Int k = lo; k <= hi; ++k)
        if (contains(k)) out.push_back(k);
    return out;
}

std::string AbsOffsets::str() const {
    switch (kind_) {
        case Kind::Top: return "top";
        case Kind::Set: {
            std::string s = "{";
            for (size_t i = 0; i < set_.size(); ++i) {
                if (i) s += ",";
                s += to_string(set_[i]);
            }
            return s + "}";
        }
        case Kind::Interval:
            return "[" + bound_str(lo_, false) + ".." + bound_str(hi_, true) + "] " + to_string(r_) +
                   "%" + to_string(n_);
    }
    return "?";
}

bool AbsOffsets::operator==(const AbsOffsets& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::Top) return true;
    if (kind_ == Kind::Set) return set_ == o.set_;
    return lo_ == o.lo_ && hi_ == o.hi_ && r_ == o.r_ && n_ == o.n_;
}

AbsOffsets join(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl) {
    if (x.is_top() || y.is_top()) return AbsOffsets::top();
    if (x.is_set() && y.is_set()) {
        std::vector<Int> u = x.values();
        u.insert(u.end(), y.values().begin(), y.values().end());
        return AbsOffsets::of_set(std::move(u), ilvl);
    }
    View a = view_of(x), b = view_of(y);
    View j;
    j.lo = min_lo(a.lo, b.lo);
    j.hi = max_hi(a.hi, b.hi);
    j.n = gcd(gcd(a.n, b.n), a.r - b.r);
    j.r = j.n == 0 ? a.r : floor_mod(a.r, j.n);
    return from_view(j);
}

AbsOffsets add(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl) {
    if (x.is_top() || y.is_top()) return AbsOffsets::top();
    if (x.is_set() && y.is_set()) {
        std::vector<Int> sums;
        for (Int a : x.values())
            for (Int b : y.values()) sums.push_back(a + b);
        return AbsOffsets::of_set(std::move(sums), ilvl);
    }
    View a = view_of(x), b = view_of(y);
    View s;
    if (a.lo && b.lo) s.lo = *a.lo + *b.lo;
    if (a.hi && b.hi) s.hi = *a.hi + *b.hi;
    s.n = gcd(a.n, b.n);
    s.r = s.n == 0 ? a.r + b.r : floor_mod(a.r + b.r, s.n);
    if (s.n == 0) s.lo = s.hi = s.r;
    return from_view(s);
}

AbsOffsets neg(const AbsOffsets& x) {
    if (x.is_top()) return x;
    if (x.is_set()) {
        std::vector<Int> v;
        for (Int k : x.values()) v.push_back(-k);
        return AbsOffsets::of_set(std::move(v), static_cast<unsigned>(v.size()));
    }
    std::optional<Int> lo, hi;
    if (x.hi()) lo = -*x.hi();
    if (x.lo()) hi = -*x.lo();
    return *AbsOffsets::interval(lo, hi, -x.residue(), x.modulus());
}

AbsOffsets sub(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl) {
    return add(x, neg(y), ilvl);
}

AbsOffsets scale(const AbsOffsets& x, Int k, unsigned ilvl) {
    if (k == 0) return AbsOffsets::singleton(0);
    if (k < 0) return scale(neg(x), -k, ilvl);
    if (x.is_top()) {
        if (k == 1) return x;
        return *AbsOffsets::interval(std::nullopt, std::nullopt, 0, k);
    }
    if (x.is_set()) {
        std::vector<Int> v;
        for (Int e : x.values()) v.push_back(e * k);
        return AbsOffsets::of_set(std::move(v), ilvl);
    }
    std::optional<Int> lo, hi;
    if (x.lo()) lo = *x.lo() * k;
    if (x.hi()) hi = *x.hi() * k;
    return *AbsOffsets::interval(lo, hi, x.residue() * k, x.modulus() * k);
}

AbsOffsets mul(const AbsOffsets& x, const AbsOffsets& y, unsigned ilvl) {
    if (auto k = x.is_singleton()) return scale(y, *k, ilvl);
    if (auto k = y.is_singleton()) return scale(x, *k, ilvl);
    if (x.is_set() && y.is_set()) {
        std::vector<Int> prods;
        for (Int a : x.values())
            for (Int b : y.values()) prods.push_back(a * b);
        return AbsOffsets::of_set(std::move(prods), ilvl);
    }
    if (x.is_top() || y.is_top() || !x.lo() || !x.hi() || !y.lo() || !y.hi())
        return AbsOffsets::top();
    Int c[4] = {*x.lo() * *y.lo(), *x.lo() * *y.hi(), *x.hi() * *y.lo(), *x.hi() * *y.hi()};
    return AbsOffsets::range(*std::min_element(c, c + 4), *std::max_element(c, c + 4));
}

AbsOffsets widen(const AbsOffsets& x, const AbsOffsets& y) {
    if (y.leq(x)) return x;
    if (x.is_top() || y.is_top()) return AbsOffsets::top();
    View a = view_of(x), b = view_of(y);
    View w;
    bool lo_stable = a.lo && b.lo && *b.lo >= *a.lo;
    bool hi_stable = a.hi && b.hi && *b.hi <= *a.hi;
    if (lo_stable || (!a.lo)) w.lo = a.lo;
    if (hi_stable || (!a.hi)) w.hi = a.hi;
    if (!lo_stable) w.lo = std::nullopt;
    if (!hi_stable) w.hi = std::nullopt;
    Int g = gcd(gcd(a.n, b.n), a.r - b.r);
    if (a.n == 0)
        w.n = g;
    else
        w.n = g == a.n ? a.n : 1;
    if (w.n == 0) w.n = 1;
    w.r = floor_mod(a.r, w.n);
    return from_view(w);
}

}  // namespace mpvc

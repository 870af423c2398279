#include "mpvc/util.hpp"

#include <algorithm>

namespace mpvc {

std::string to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Negate in unsigned space so the minimum value is handled.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    std::string out;
    while (u > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Int parse_int(const std::string& s) {
    if (s.empty()) throw Error("empty integer literal");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i >= s.size()) throw Error("bad integer literal: " + s);
    Int v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw Error("bad integer literal: " + s);
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}

Int gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int floor_mod(Int a, Int n) {
    Int m = a % n;
    if (m < 0) m += (n < 0 ? -n : n);
    return m;
}

Int floor_div(Int a, Int n) { return (a - floor_mod(a, n)) / n; }

}  // namespace mpvc

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mpvc {

// Wide integer used for program values, offsets and logic literals.
using Int = __int128;

std::string to_string(Int v);
Int parse_int(const std::string& s);
Int gcd(Int a, Int b);
Int floor_mod(Int a, Int n);
Int floor_div(Int a, Int n);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// splitmix64 generator; fixed algorithm so runs are reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, n).
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }
    bool chance(unsigned percent) { return below(100) < percent; }

private:
    uint64_t state_;
};

}  // namespace mpvc

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dhl {

typedef uint32_t NodeID;
typedef uint64_t distance_t;

// sentinel strictly above any finite path length; chosen so that the sum of
// two values <= infinity cannot wrap around in 64 bits
constexpr distance_t infinity = distance_t(1) << 62;

constexpr NodeID NO_NODE = UINT32_MAX;

// distance addition saturating at infinity
inline distance_t safe_sum(distance_t a, distance_t b)
{
    distance_t s = a + b;
    return s >= infinity ? infinity : s;
}

// thrown for malformed input files; line is 1-based
class parse_error : public std::runtime_error {
public:
    size_t line;
    parse_error(size_t line, const std::string &what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
};

// thrown for corrupt or incompatible index files
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string &what) : std::runtime_error(what) {}
};

// splitmix64 - tiny deterministic generator for workloads and tests
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next()
    {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound) { return bound ? next() % bound : 0; }

    // uniform in [lo, hi]
    uint64_t next_range(uint64_t lo, uint64_t hi) { return lo + next_below(hi - lo + 1); }
};

} // namespace dhl

// Shared plumbing: error types, deterministic RNG, union-find, small helpers.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdcalc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation failures carry the first violated law and a witness in the message.
struct ValidationError : Error { using Error::Error; };
struct BaseMismatch : Error { using Error::Error; };
struct EndpointMismatch : Error { using Error::Error; };
struct SizeGuardExceeded : Error { using Error::Error; };
struct NotComplemented : Error { using Error::Error; };
struct NotTense : Error { using Error::Error; };
struct NotNew : Error { using Error::Error; };
struct NotPPI : Error { using Error::Error; };
struct NotSumOfReps : Error { using Error::Error; };
struct ModeError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct UnknownObject : Error { using Error::Error; };
struct UnknownSuite : Error { using Error::Error; };
struct ActionEscapesNewElements : Error { using Error::Error; };

// Candidate-function spaces in the internal homs are enumerated exactly; the
// guard bounds the number of candidate families, erroring out instead of
// truncating silently.
inline constexpr std::uint64_t kDefaultEnumGuard = 1000000;

// SplitMix64: fixed, platform-independent stream so reports are reproducible
// byte-for-byte from a seed.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // below(n): uniform-enough draw in [0,n); modulo reduction is fine here,
    // determinism is what matters.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    int range(int lo, int hi) {  // inclusive bounds
        if (hi <= lo) return lo;
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(int num, int den) { return static_cast<int>(below(den)) < num; }
};

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    // Smaller index wins as root, so find() of a class is its canonical element.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Odometer over a mixed-radix tuple space. `radix` lists the digit bounds;
// visits tuples in lexicographic order. Returns false if any radix is zero.
template <typename F>
bool for_each_tuple(const std::vector<int>& radix, F&& visit) {
    for (int r : radix)
        if (r == 0) return false;
    std::vector<int> digits(radix.size(), 0);
    while (true) {
        visit(const_cast<const std::vector<int>&>(digits));
        int pos = static_cast<int>(radix.size()) - 1;
        while (pos >= 0) {
            if (++digits[pos] < radix[pos]) break;
            digits[pos] = 0;
            --pos;
        }
        if (pos < 0) return true;
    }
}

inline std::uint64_t tuple_space_size(const std::vector<int>& radix, std::uint64_t guard) {
    std::uint64_t total = 1;
    for (int r : radix) {
        if (r == 0) return 0;
        total *= static_cast<std::uint64_t>(r);
        if (total > guard) throw SizeGuardExceeded("candidate space exceeds guard of " + std::to_string(guard));
    }
    return total;
}

}  // namespace fdcalc

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace waver {

// Exact rational scalar. mpq_class keeps the canonical reduced form with
// positive denominator, which is exactly the invariant we need.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

inline Int factorial(unsigned n) {
    Int f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= (long)i;
    return f;
}

// binom(n, k) for integer n (possibly negative), k >= 0.
inline Rat binomial(const Rat &n, unsigned k) {
    Rat p = 1;
    for (unsigned i = 0; i < k; ++i) p *= (n - (long)i);
    return p / Rat(factorial(k));
}

inline std::string to_string(const Rat &q) { return q.get_str(); }

struct NonExactDivision : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneratePairing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingRoots : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownRelation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TestSetTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadDeformation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstantTerm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace waver

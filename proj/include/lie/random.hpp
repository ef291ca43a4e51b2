#pragma once

#include <cstdint>
#include <random>

#include "lie/poly.hpp"

namespace lie {

// Seeded source for every randomized decision. Distributions are written out
// by hand so that sequences do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() { return gen_(); }

    // Integer in [lo, hi].
    long integer(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(next() % span);
    }

    // Numerator in [-97, 97], denominator in [1, 97].
    Rational rational() {
        Rational q(integer(-97, 97), integer(1, 97));
        q.canonicalize();
        return q;
    }

    // Nonzero rational with small height, away from the special values 0 and 1.
    Rational generic_parameter() {
        for (;;) {
            Rational q = rational();
            if (q != 0 && q != 1 && q != -1) return q;
        }
    }

    double uniform(double lo, double hi) {
        double u = static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
        return lo + (hi - lo) * u;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace lie

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace bloch {

using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int lcm_int(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return abs_int(a / gcd_int(a, b) * b);
}

// g = s*a + t*b with g >= 0
inline Int ext_gcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int old_r = a, r = b;
    Int old_s = 1, s1 = 0;
    Int old_t = 0, t1 = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s1; old_s = s1; s1 = tmp;
        tmp = old_t - q * t1; old_t = t1; t1 = tmp;
    }
    if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
    s = old_s;
    t = old_t;
    return old_r;
}

// floor division (C++ '/' truncates toward zero)
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_positive(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += abs_int(m);
    return r;
}

// multiplicative inverse of a modulo m (gcd(a, m) = 1)
inline Int mod_inverse(const Int& a, const Int& m) {
    Int s, t;
    Int g = ext_gcd(mod_positive(a, m), m, s, t);
    if (g != 1) throw std::invalid_argument("mod_inverse: not coprime");
    return mod_positive(s, m);
}

inline Int odd_part_of(Int n) {
    n = abs_int(n);
    if (n == 0) return 0;
    while (n % 2 == 0) n >>= 1;
    return n;
}

// deterministic splittable RNG (splitmix64); all seeded sampling goes through this
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

}  // namespace bloch

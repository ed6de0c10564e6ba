#pragma once

#include "bloch/report.hpp"
#include "bloch/ring.hpp"
#include "bloch/scissors.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace bloch {

// class of a unimodular row vector in X_1 = U_2 / A^x; canonical
// representative is (a, 1) when the second coordinate is a unit, else (1, b)
struct ProjPoint {
    std::size_t u1 = 0, u2 = 0;
    bool operator==(const ProjPoint& o) const { return u1 == o.u1 && u2 == o.u2; }
};

using Mat2 = std::array<std::size_t, 4>;  // row-major (a b; c d)

// Unimodular configuration spaces X_n over a finite local ring, the maps
// d, T, phi, the orbit census under SL_2 / GL_2, and the refined cross
// ratio into RP(A).
class ConfigSpace {
public:
    explicit ConfigSpace(RingPtr ring);

    const RingPtr& ring() const { return ring_; }
    const std::vector<ProjPoint>& x1() const { return x1_; }
    std::size_t x1_index(const ProjPoint& p) const;

    ProjPoint normalize(std::size_t u1, std::size_t u2) const;  // throws if not unimodular
    ProjPoint plus(std::size_t a) const { return normalize(a, ring_->one()); }
    ProjPoint minus(std::size_t a) const { return normalize(ring_->one(), a); }

    bool general_position(const ProjPoint& u, const ProjPoint& v) const;
    std::size_t dpair(const ProjPoint& u, const ProjPoint& v) const;  // unit, throws otherwise
    Mat2 tmat(const ProjPoint& u, const ProjPoint& v) const;          // det 1; uT = (0,-1), vT = (d,0)
    ProjPoint apply(const ProjPoint& p, const Mat2& m) const;
    ProjPoint phi(const ProjPoint& u, const ProjPoint& v, const ProjPoint& w) const;

    // Phi_n: X_n -> Y_{n-2} through phi(u1, u2, u_i); entries as ring elements
    std::vector<std::size_t> phi_n(const std::vector<ProjPoint>& tuple) const;
    // section Psi_n: (y_3, ..., y_n) -> (0+, 0-, (y_3)+, ...)
    std::vector<ProjPoint> psi_n(const std::vector<std::size_t>& ys) const;

    // Z_n(A): tuples from W_A with pairwise unit differences of ratios
    std::vector<std::vector<std::size_t>> z_set(unsigned n) const;

    struct Census {
        unsigned n = 0;
        std::size_t tuple_count = 0;
        std::size_t sl2_orbits = 0;
        std::size_t gl2_orbits = 0;
        std::vector<std::vector<ProjPoint>> transversal;  // minimal tuple per SL2 orbit
    };
    // union-find over the elementary/torus generator action
    Census orbit_census(unsigned n, std::size_t guard = 10000000) const;
    // serial reference: closure under the full finite group (small rings only)
    Census orbit_census_reference(unsigned n, std::size_t guard = 300000) const;

    // refined cross ratio of a 4-tuple in general position, as an RP(A) element
    std::vector<Int> cross_ratio(const ScissorsTower& tower,
                                 const std::array<ProjPoint, 4>& c) const;

    // simplicial boundary of the 5-tuple (0+, 0-, 1+, z1+, z2+) pushed through
    // the cross ratio, compared against the explicit five-term combination
    Report verify_boundary(const ScissorsTower& tower) const;

private:
    std::vector<std::vector<ProjPoint>> all_tuples(unsigned n, std::size_t guard) const;
    std::vector<Mat2> sl2_generators() const;
    std::vector<Mat2> gl2_extra_generators() const;

    RingPtr ring_;
    std::vector<ProjPoint> x1_;
    std::vector<std::size_t> x1_lookup_;  // packed (u1 * size + u2) -> index+1, 0 = absent
};

}  // namespace bloch

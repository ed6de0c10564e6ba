#pragma once

#include "bloch/presented_module.hpp"
#include "bloch/ring.hpp"

#include <cstdint>
#include <vector>

namespace bloch {

// Z[G_A] for the square-class group G_A = (Z/2)^r. Elements are dense
// integer vectors indexed by class bit-vectors; multiplication is XOR
// convolution. <a> denotes the basis element of the class of a.
class GroupRing {
public:
    explicit GroupRing(RingPtr ring);

    const RingPtr& ring() const { return ring_; }
    unsigned rank() const { return rank_; }
    std::size_t dimension() const { return std::size_t(1) << rank_; }

    std::vector<Int> zero() const { return std::vector<Int>(dimension()); }
    std::vector<Int> one() const;
    std::vector<Int> basis(std::uint32_t cls) const;
    std::vector<Int> of_unit(std::size_t a) const;  // <a>

    std::vector<Int> add(const std::vector<Int>& x, const std::vector<Int>& y) const;
    std::vector<Int> sub(const std::vector<Int>& x, const std::vector<Int>& y) const;
    std::vector<Int> mul(const std::vector<Int>& x, const std::vector<Int>& y) const;
    std::vector<Int> scale(const std::vector<Int>& x, const Int& c) const;

    Int augmentation(const std::vector<Int>& x) const;

    // <<a>> = <a> - 1
    std::vector<Int> pf(std::size_t a) const;
    // 1 + <a>
    std::vector<Int> pp(std::size_t a) const;
    // 1 - <a>
    std::vector<Int> ppm(std::size_t a) const;

private:
    RingPtr ring_;
    unsigned rank_;
};

// character of G_A with values in {+1, -1}; encoded by the sign mask against
// the stored square-class basis (bit set = -1)
struct Character {
    unsigned rank = 0;
    std::uint32_t sign_mask = 0;

    bool trivial() const { return sign_mask == 0; }
    int value_on_class(std::uint32_t cls) const {
        return (__builtin_popcount(cls & sign_mask) % 2 == 0) ? 1 : -1;
    }
};

// all 2^r characters, trivial first, then ascending sign mask
std::vector<Character> characters(const GroupRing& gr);

// A presented module together with a G_A-action given by one generator-level
// matrix per square-class basis element (each an involution).
class GModulePresentation {
public:
    GModulePresentation(RingPtr ring, PresentedModule mod, std::vector<IntMatrix> basis_action);

    const RingPtr& ring() const { return ring_; }
    const PresentedModule& module() const { return mod_; }
    unsigned rank() const { return static_cast<unsigned>(basis_action_.size()); }
    const IntMatrix& basis_action(unsigned i) const { return basis_action_[i]; }

    // x |-> class-of(a) . x on coordinate vectors
    std::vector<Int> act_class(std::uint32_t cls, const std::vector<Int>& x) const;
    std::vector<Int> act_unit(std::size_t a, const std::vector<Int>& x) const;
    // multiply by a group-ring element
    std::vector<Int> act_ring(const std::vector<Int>& gre, const GroupRing& gr,
                              const std::vector<Int>& x) const;

    // replace the underlying module (same generators), keeping the action
    GModulePresentation with_module(PresentedModule m) const;

private:
    RingPtr ring_;
    PresentedModule mod_;
    std::vector<IntMatrix> basis_action_;
};

// M_chi = odd part of M / I^chi M. Requires the underlying module to be
// finitely generated; the result is the e_chi-summand of the Z[1/2]-module
// M[1/2] (free rank preserved, torsion odd).
PresentedModule eigen_component(const GModulePresentation& m, const Character& chi);

// I_A . M as a submodule of (the odd part of) M.
SubmoduleResult aug_component(const GModulePresentation& m);

// direct check: m is in I^chi M iff the idempotent product
// prod_a (1 + chi(a)<a>)/2 annihilates m (odd exponent modules)
bool in_eigen_ideal(const GModulePresentation& m, const Character& chi, const std::vector<Int>& x);

}  // namespace bloch

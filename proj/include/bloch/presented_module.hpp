#pragma once

#include "bloch/int_matrix.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bloch {

struct Structure {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;  // ascending divisibility chain, entries > 1

    Int torsion_order() const;
    Int exponent() const;  // exponent of the torsion part (1 if free/trivial)
    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_finite() const { return free_rank == 0; }
    std::string to_string() const;  // e.g. "Z^2 + Z/3 + Z/12", "0"
    std::string to_json() const;    // {"free_rank": r, "torsion": [d1, ...]}

    bool operator==(const Structure& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
};

// Finitely presented abelian group Z^n / rowlattice(R). Value type with
// shared immutable state; the Hermite basis of the relation lattice and the
// invariant factors are computed once on first use (thread-safe).
class PresentedModule {
public:
    PresentedModule(std::size_t generators, IntMatrix relations);
    PresentedModule(std::size_t generators, SparseMatrix relations);

    static PresentedModule free_module(std::size_t rank);

    std::size_t generators() const;
    const SparseMatrix& relations() const;

    const HermiteBasis& relation_basis() const;
    const Structure& structure() const;

    std::vector<Int> normal_form(const std::vector<Int>& coords) const;
    bool is_zero(const std::vector<Int>& coords) const;
    bool equal(const std::vector<Int>& a, const std::vector<Int>& b) const;

    bool is_finite() const { return structure().is_finite(); }
    Int order() const;  // torsion order; throws if infinite

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct ModuleElement {
    PresentedModule mod;
    std::vector<Int> coords;

    ModuleElement(PresentedModule m, std::vector<Int> c) : mod(std::move(m)), coords(std::move(c)) {}

    bool is_zero() const { return mod.is_zero(coords); }
    std::vector<Int> normal_form() const { return mod.normal_form(coords); }

    ModuleElement operator+(const ModuleElement& o) const;
    ModuleElement operator-(const ModuleElement& o) const;
    ModuleElement operator-() const;
    ModuleElement times(const Int& c) const;
    bool operator==(const ModuleElement& o) const;
};

struct SubmoduleResult {
    PresentedModule module;  // abstract presentation of the submodule
    IntMatrix inclusion;     // submodule generators in ambient coordinates
};

struct KernelResult {
    PresentedModule module;
    IntMatrix inclusion;  // kernel generators expressed in M-coordinates
};

// Kernel of the map M -> N given on generators by `f` (rows of f = images of
// M's generators). Checks that f carries the relation lattice of M into the
// relation lattice of N.
KernelResult kernel_of_map(const IntMatrix& f, const PresentedModule& m, const PresentedModule& n);

// Submodule of M generated by the given ambient coordinate vectors.
SubmoduleResult submodule(const PresentedModule& m, const std::vector<std::vector<Int>>& gens);

// M / <gens>
PresentedModule quotient_by(const PresentedModule& m, const std::vector<std::vector<Int>>& gens);

// Image of M -> N as a submodule of N.
SubmoduleResult image_of_map(const IntMatrix& f, const PresentedModule& m, const PresentedModule& n);

// Odd part: invariant factors lose their 2-power, free rank preserved.
// Presented on the same generator set (the relation lattice is enlarged to
// {x : 2^s x in L}), so module actions stay valid.
PresentedModule odd_part(const PresentedModule& m);

// All elements of a finite module, as normal-form coordinate vectors.
// Guarded by `limit` (throws if the order exceeds it).
std::vector<std::vector<Int>> enumerate_elements(const PresentedModule& m, std::size_t limit);

}  // namespace bloch

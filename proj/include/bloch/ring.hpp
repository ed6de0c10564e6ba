#pragma once

#include "bloch/integer.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bloch {

class FiniteLocalRing;
using RingPtr = std::shared_ptr<const FiniteLocalRing>;

enum class RingFamily { Field, PadicQuotient, PolyQuotient };

// A^x as an explicit direct sum of cyclic groups, with discrete logs.
struct UnitGroupDecomposition {
    std::vector<Int> factors;            // invariant factors d1 | d2 | ..., each > 1
    std::vector<std::size_t> basis;      // element of order d_i generating the i-th factor
    // coordinates of each unit (indexed by position in units()), 0 <= c_i < d_i
    std::vector<std::vector<long long>> coords;
};

// Finite commutative local ring from one of the three supported families:
// F_q, Z/p^k (p odd), F_q[t]/(t^k) (q odd). Elements are referenced by their
// canonical index in [0, size). Everything is built eagerly at construction;
// instances are immutable and safe to share across threads.
class FiniteLocalRing : public std::enable_shared_from_this<FiniteLocalRing> {
public:
    // Descriptor grammar (whitespace-free, case-sensitive):
    //   F_<q>  |  Z/<p>^<k>  |  Z/<m>  (m = p^k)  |  F_<q>[t]/(t^<k>)
    static RingPtr make(const std::string& descriptor);

    const std::string& descriptor() const { return descriptor_; }
    RingFamily family() const { return family_; }
    std::size_t size() const { return size_; }
    std::size_t residue_size() const { return residue_size_; }
    long characteristic() const { return characteristic_; }

    std::size_t zero() const { return 0; }
    std::size_t one() const { return one_; }
    std::size_t add(std::size_t a, std::size_t b) const;
    std::size_t sub(std::size_t a, std::size_t b) const;
    std::size_t neg(std::size_t a) const;
    std::size_t mul(std::size_t a, std::size_t b) const;
    std::size_t inv(std::size_t a) const;  // throws on non-units
    std::size_t pow(std::size_t a, long long e) const;
    std::size_t from_integer(long long n) const;
    bool is_unit(std::size_t a) const;

    RingPtr residue_field() const;
    std::size_t residue(std::size_t a) const;   // index in residue_field()
    std::size_t lift(std::size_t res) const;    // canonical lift of a residue element

    const std::vector<std::size_t>& units() const { return units_; }
    // W_A = units u with 1-u a unit, canonical order
    const std::vector<std::size_t>& wn_set() const { return wn_; }
    // U_1 = 1 + maximal ideal
    const std::vector<std::size_t>& u1() const { return u1_; }
    bool in_u1(std::size_t a) const;

    const UnitGroupDecomposition& unit_group() const { return unit_group_; }

    unsigned square_class_rank() const { return square_rank_; }
    // bit-vector of length square_class_rank(); zero iff a is a unit square
    std::uint32_t square_class(std::size_t a) const;
    bool is_square_unit(std::size_t a) const { return square_class(a) == 0; }
    const std::vector<std::size_t>& square_class_basis() const { return square_basis_; }
    std::size_t class_representative(std::uint32_t cls) const;

    std::string element_string(std::size_t a) const;

    // field-only: the multiplicative generator used by the discrete-log table
    std::size_t field_generator() const;
    // field-only: monic defining polynomial over F_p, low coefficients first
    const std::vector<long>& field_min_poly() const;

private:
    FiniteLocalRing() = default;
    void build_field(long p, unsigned n);
    void build_padic(long p, unsigned k);
    void build_polyquot(const RingPtr& base, unsigned k);
    void build_common();
    void build_unit_group();

    RingFamily family_ = RingFamily::Field;
    std::string descriptor_;
    std::size_t size_ = 0;
    std::size_t residue_size_ = 0;
    long characteristic_ = 0;
    std::size_t one_ = 1;

    // field data
    long p_ = 0;
    unsigned deg_ = 1;
    std::vector<std::size_t> exp_, log_;  // discrete-log tables
    std::vector<long> min_poly_;          // monic irreducible, low coefficients first

    // p-adic quotient data
    std::size_t modulus_ = 0;

    // polynomial quotient data
    RingPtr base_;
    unsigned trunc_ = 1;

    RingPtr residue_field_;

    std::vector<std::size_t> units_, wn_, u1_;
    std::vector<std::size_t> unit_pos_;  // element index -> position in units_, or npos
    UnitGroupDecomposition unit_group_;
    unsigned square_rank_ = 0;
    std::vector<unsigned> square_factor_idx_;  // which invariant factors are even
    std::vector<std::size_t> square_basis_;
    std::vector<std::uint32_t> square_class_by_pos_;
};

bool is_prime(long n);
// q = p^n with p prime; returns false if q is not a prime power
bool prime_power(long q, long& p, unsigned& n);

}  // namespace bloch

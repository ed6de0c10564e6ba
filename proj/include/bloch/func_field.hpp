#pragma once

#include "bloch/report.hpp"
#include "bloch/ring.hpp"
#include "bloch/scissors.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bloch {

// polynomial over a finite field, low coefficients first, trimmed
struct Poly {
    std::vector<std::size_t> c;

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for 0
};

// Exact arithmetic in F_q[t] and F_q(t), discrete valuations and their
// residue fields, and the specialization machinery.
class FunctionField {
public:
    explicit FunctionField(RingPtr base_field);

    const RingPtr& field() const { return base_; }

    // ---- polynomial layer
    Poly poly_from(const std::vector<std::size_t>& coeffs) const;
    Poly poly_t() const;
    Poly poly_const(std::size_t c) const;
    Poly add(const Poly& a, const Poly& b) const;
    Poly sub(const Poly& a, const Poly& b) const;
    Poly mul(const Poly& a, const Poly& b) const;
    Poly neg(const Poly& a) const;
    // a = q*b + r
    std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) const;
    Poly gcd(const Poly& a, const Poly& b) const;  // monic
    Poly monic(const Poly& a) const;
    std::size_t eval(const Poly& a, std::size_t x) const;
    bool poly_equal(const Poly& a, const Poly& b) const { return a.c == b.c; }
    std::string poly_string(const Poly& a) const;

    bool is_irreducible(const Poly& a) const;
    // deterministic distinct-degree + equal-degree factorization (odd q);
    // result sorted by (degree, coefficient index order), with multiplicities
    std::vector<std::pair<Poly, unsigned>> factor(const Poly& a, std::uint64_t seed = 7) const;

    // ---- rational functions: num/den coprime, den monic
    struct Rational {
        Poly num, den;
        bool is_zero() const { return num.is_zero(); }
    };
    Rational make(Poly num, Poly den) const;
    Rational rat_const(std::size_t c) const { return make(poly_const(c), poly_const(base_->one())); }
    Rational rat_t() const { return make(poly_t(), poly_const(base_->one())); }
    Rational add(const Rational& a, const Rational& b) const;
    Rational sub(const Rational& a, const Rational& b) const;
    Rational mul(const Rational& a, const Rational& b) const;
    Rational div(const Rational& a, const Rational& b) const;
    Rational inv(const Rational& a) const;
    Rational neg(const Rational& a) const;
    bool equal(const Rational& a, const Rational& b) const;
    bool is_one(const Rational& a) const;
    std::string rat_string(const Rational& a) const;
    // parse "t^2+3*t+1" or "(t+1)/(t^2+2)"; coefficients are element indices
    Rational parse(const std::string& text) const;

    // ---- places
    struct Place {
        enum class Kind { Finite, Infinity } kind = Kind::Finite;
        Poly pi;  // monic irreducible (Finite only)
    };
    Place place_t() const;
    Place place_infinity() const;
    Place place_at(const Poly& monic_irreducible) const;
    Place parse_place(const std::string& text) const;  // "t" | "inf" | polynomial
    std::string place_string(const Place& p) const;

    long valuation(const Place& v, const Rational& a) const;  // throws on 0
    RingPtr residue_field(const Place& v) const;
    // residue of a valuation-unit; element of residue_field(v)
    std::size_t residue(const Place& v, const Rational& a) const;
    // (v(a) mod 2, square class of the unit-part residue)
    std::pair<int, std::uint32_t> square_class_data(const Place& v, const Rational& a) const;

    // N_F membership at a place: v(a) even and unit-part residue in N_k.
    struct TnormResult {
        bool member = false;
        bool hypothesis_met = true;  // char k != 3 and zeta_3 not in k
    };
    TnormResult tnorm_membership(const Place& v, const Rational& a) const;

private:
    std::size_t lc(const Poly& a) const { return a.c.back(); }
    void trim(Poly& a) const;
    Poly pow_mod(const Poly& base, const Int& e, const Poly& mod) const;

    RingPtr base_;
};

// Specialization into the induced module: pairs (parity, element of RP~(k)),
// one component per square-class-of-uniformizer coset.
struct InducedElement {
    std::vector<Int> comp[2];

    bool operator==(const InducedElement& o) const = delete;
};

struct FormalTerm {
    Int coeff = 1;
    std::optional<FunctionField::Rational> cls;  // square class <f>, optional
    FunctionField::Rational arg;                 // the symbol [arg]
};
using FormalExpr = std::vector<FormalTerm>;

// terms "c*{f}[g]" joined by + or -, with c and {f} optional;
// e.g. "[t] - 2*{t}[t^2+1] + {(t+1)/t}[1/t]"
FormalExpr parse_expr(const FunctionField& ff, const std::string& text);

class Specializer {
public:
    // builds (or reuses) the tower of the residue field of the place
    Specializer(const FunctionField& ff, FunctionField::Place place);

    const FunctionField& function_field() const { return ff_; }
    const FunctionField::Place& place() const { return place_; }
    const ScissorsTower& tower() const { return *tower_; }

    InducedElement zero() const;
    bool is_zero(const InducedElement& e) const;  // in RP~(k) per component
    InducedElement add(const InducedElement& a, const InducedElement& b) const;
    InducedElement scale(const InducedElement& a, const Int& c) const;
    // action of the square class <b>
    InducedElement act(const FunctionField::Rational& b, const InducedElement& e) const;

    // S_v([a]): residue symbol for valuation units, +-(1 x C~_k) otherwise
    InducedElement specialize_symbol(const FunctionField::Rational& a) const;
    InducedElement specialize(const FormalExpr& e) const;

    // fully reduced variant: [a] -> 1 x [abar] if v(a) = 0, else 0; lands in RP-(k)
    InducedElement specialize_reduced_symbol(const FunctionField::Rational& a) const;
    bool is_zero_reduced(const InducedElement& e) const;

    // odd graded component (the rho_pi x id projection); kernel flag reports
    // whether lambda~1 kills the whole specialized element
    struct DeltaResult {
        std::vector<Int> component;  // RP~(k) coordinates
        bool in_kernel = false;
    };
    DeltaResult delta_pi(const FormalExpr& e) const;

    // T(S_{x,y}) = 0 sampling suite with the crafted nine-case list
    Report verify_relations(std::size_t samples, std::uint64_t seed, int degree_bound) const;

    // proof case label "(i)(a)" ... "(ix)" for a sample pair
    std::string classify_case(const FunctionField::Rational& x,
                              const FunctionField::Rational& y) const;
    // the five-term formal combination S_{x,y}
    FormalExpr five_term(const FunctionField::Rational& x, const FunctionField::Rational& y) const;
    // deterministic list of pairs covering every reachable proof case
    std::vector<std::pair<FunctionField::Rational, FunctionField::Rational>> crafted_pairs() const;

private:
    const FunctionField& ff_;
    FunctionField::Place place_;
    RingPtr residue_;
    ScissorsTower* tower_;
};

}  // namespace bloch

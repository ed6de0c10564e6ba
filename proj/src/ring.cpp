#include "bloch/ring.hpp"

#include "bloch/int_matrix.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bloch {

namespace {

constexpr std::size_t kNoPos = std::numeric_limits<std::size_t>::max();
constexpr long kMaxSize = 1L << 20;

long long ipow(long b, unsigned e) {
    long long r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool prime_power(long q, long& p, unsigned& n) {
    if (q < 2) return false;
    for (long d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            n = 0;
            long m = q;
            while (m % d == 0) {
                m /= d;
                ++n;
            }
            return m == 1;
        }
    }
    p = q;
    n = 1;
    return true;
}

// ---------------------------------------------------------------- parsing

namespace {

bool parse_number(const std::string& s, std::size_t& pos, long& out) {
    std::size_t start = pos;
    long v = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        v = v * 10 + (s[pos] - '0');
        if (v > kMaxSize * 4) return false;
        ++pos;
    }
    if (pos == start) return false;
    out = v;
    return true;
}

[[noreturn]] void bad_descriptor(const std::string& d, const std::string& why) {
    throw std::invalid_argument("bad ring descriptor '" + d + "': " + why);
}

}  // namespace

RingPtr FiniteLocalRing::make(const std::string& descriptor) {
    const std::string& d = descriptor;
    std::size_t pos = 0;
    if (d.rfind("F_", 0) == 0) {
        pos = 2;
        long q;
        if (!parse_number(d, pos, q)) bad_descriptor(d, "expected prime power after F_");
        long p;
        unsigned n;
        if (!prime_power(q, p, n)) bad_descriptor(d, "q is not a prime power");
        if (q > kMaxSize) bad_descriptor(d, "q exceeds 2^20");
        if (pos == d.size()) {
            auto ring = std::shared_ptr<FiniteLocalRing>(new FiniteLocalRing());
            ring->build_field(p, n);
            return ring;
        }
        // F_q[t]/(t^k)
        const std::string tail = "[t]/(t^";
        if (d.compare(pos, tail.size(), tail) != 0) bad_descriptor(d, "expected [t]/(t^k)");
        pos += tail.size();
        long k;
        if (!parse_number(d, pos, k)) bad_descriptor(d, "expected exponent k");
        if (pos + 1 != d.size() || d[pos] != ')') bad_descriptor(d, "expected closing )");
        if (k < 1) bad_descriptor(d, "k must be >= 1");
        std::ostringstream base_desc;
        base_desc << "F_" << q;
        RingPtr base = make(base_desc.str());
        if (k == 1) return base;
        if (p == 2) bad_descriptor(d, "characteristic-2 base rings are supported only as fields");
        double sz = 1;
        for (long i = 0; i < k; ++i) sz *= q;
        if (sz > kMaxSize) bad_descriptor(d, "ring size exceeds 2^20");
        auto ring = std::shared_ptr<FiniteLocalRing>(new FiniteLocalRing());
        ring->build_polyquot(base, static_cast<unsigned>(k));
        return ring;
    }
    if (d.rfind("Z/", 0) == 0) {
        pos = 2;
        long a;
        if (!parse_number(d, pos, a)) bad_descriptor(d, "expected modulus");
        long p;
        unsigned k;
        if (pos < d.size()) {
            if (d[pos] != '^') bad_descriptor(d, "unexpected trailing characters");
            ++pos;
            long kk;
            if (!parse_number(d, pos, kk) || pos != d.size()) bad_descriptor(d, "expected exponent");
            if (!is_prime(a)) bad_descriptor(d, "p must be prime");
            p = a;
            if (kk < 1) bad_descriptor(d, "k must be >= 1");
            k = static_cast<unsigned>(kk);
        } else {
            if (!prime_power(a, p, k)) bad_descriptor(d, "modulus must be a prime power (ring is not local)");
        }
        double sz = 1;
        for (unsigned i = 0; i < k; ++i) sz *= p;
        if (sz > kMaxSize) bad_descriptor(d, "ring size exceeds 2^20");
        if (k == 1) {
            std::ostringstream f;
            f << "F_" << p;
            return make(f.str());
        }
        if (p == 2) bad_descriptor(d, "Z/2^k is outside the supported families");
        auto ring = std::shared_ptr<FiniteLocalRing>(new FiniteLocalRing());
        ring->build_padic(p, k);
        return ring;
    }
    bad_descriptor(d, "expected F_... or Z/...");
}

// ---------------------------------------------------------------- fields

namespace {

// multiply vector by x modulo the monic polynomial f (low-first, degree n)
void shift_mod(std::vector<long>& c, const std::vector<long>& f, long p) {
    long top = c.back();
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1];
    c[0] = 0;
    if (top != 0) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = (c[i] - top * f[i]) % p;
            if (c[i] < 0) c[i] += p;
        }
    }
}

std::size_t pack(const std::vector<long>& c, long p) {
    std::size_t idx = 0;
    for (std::size_t i = c.size(); i > 0; --i) idx = idx * p + c[i - 1];
    return idx;
}

}  // namespace

void FiniteLocalRing::build_field(long p, unsigned n) {
    family_ = RingFamily::Field;
    p_ = p;
    deg_ = n;
    characteristic_ = p;
    size_ = static_cast<std::size_t>(ipow(p, n));
    residue_size_ = size_;
    one_ = 1;
    {
        std::ostringstream os;
        os << "F_" << size_;
        descriptor_ = os.str();
    }

    const std::size_t q = size_;
    // fixed irreducible per (p, n): smallest coefficient vector (by canonical
    // index) making x^n + c_{n-1} x^{n-1} + ... + c_0 primitive; the powers of
    // x then enumerate all units, which fills the discrete-log tables.
    exp_.assign(q - 1, 0);
    log_.assign(q, 0);
    for (std::size_t cand = 0;; ++cand) {
        if (n == 1) {
            // prime field: scan for the smallest primitive root
            long g = static_cast<long>(cand) + 2;
            if (g >= p) {
                if (p == 2) {
                    min_poly_ = {1, 1};
                    exp_ = {1};
                    log_.assign(2, 0);
                    break;
                }
                throw std::logic_error("no primitive root found");
            }
            std::vector<bool> seen(q, false);
            long x = 1;
            bool ok = true;
            for (std::size_t i = 0; i < q - 1; ++i) {
                x = (x * g) % p;
                if (seen[x]) {
                    ok = false;
                    break;
                }
                seen[x] = true;
                exp_[(i + 1) % (q - 1)] = static_cast<std::size_t>(x);
            }
            if (!ok) continue;
            min_poly_ = {static_cast<long>(mod_positive(-g, p).convert_to<long>()), 1};
            exp_[0] = 1;
            for (std::size_t i = 0; i < q - 1; ++i) log_[exp_[i]] = i;
            break;
        }
        // coefficients of the candidate from base-p digits
        std::vector<long> f(n + 1, 0);
        f[n] = 1;
        std::size_t m = cand;
        for (unsigned i = 0; i < n; ++i) {
            f[i] = static_cast<long>(m % p);
            m /= p;
        }
        if (m != 0) throw std::logic_error("no primitive polynomial found");
        if (f[0] == 0) continue;  // x would not be a unit
        // walk powers of x; primitive iff the first return to 1 is at q-1
        std::vector<long> c(n, 0);
        c[0] = 1;
        bool ok = true;
        std::vector<std::size_t> pows(q - 1);
        pows[0] = 1;
        for (std::size_t i = 1; i < q - 1; ++i) {
            shift_mod(c, f, p);
            std::size_t idx = pack(c, p);
            if (idx == 1) {
                ok = false;
                break;
            }
            pows[i] = idx;
        }
        if (ok) {
            shift_mod(c, f, p);
            if (pack(c, p) != 1) ok = false;  // order does not divide q-1 cleanly
        }
        if (!ok) continue;
        min_poly_ = f;
        exp_ = std::move(pows);
        for (std::size_t i = 0; i < q - 1; ++i) log_[exp_[i]] = i;
        break;
    }
    residue_field_ = nullptr;  // the field is its own residue field
    build_common();
}

void FiniteLocalRing::build_padic(long p, unsigned k) {
    family_ = RingFamily::PadicQuotient;
    p_ = p;
    modulus_ = static_cast<std::size_t>(ipow(p, k));
    size_ = modulus_;
    residue_size_ = p;
    characteristic_ = static_cast<long>(modulus_);
    one_ = 1;
    {
        std::ostringstream os;
        os << "Z/" << modulus_;
        descriptor_ = os.str();
    }
    std::ostringstream f;
    f << "F_" << p;
    residue_field_ = make(f.str());
    build_common();
}

void FiniteLocalRing::build_polyquot(const RingPtr& base, unsigned k) {
    family_ = RingFamily::PolyQuotient;
    base_ = base;
    trunc_ = k;
    characteristic_ = base->characteristic();
    residue_size_ = base->size();
    size_ = 1;
    for (unsigned i = 0; i < k; ++i) size_ *= base->size();
    one_ = 1;
    {
        std::ostringstream os;
        os << "F_" << base->size() << "[t]/(t^" << k << ")";
        descriptor_ = os.str();
    }
    residue_field_ = base;
    build_common();
}

// ---------------------------------------------------------------- arithmetic

std::size_t FiniteLocalRing::add(std::size_t a, std::size_t b) const {
    switch (family_) {
        case RingFamily::Field: {
            if (deg_ == 1) return (a + b) % size_;
            std::size_t out = 0, mul = 1;
            const std::size_t p = static_cast<std::size_t>(p_);
            for (unsigned i = 0; i < deg_; ++i) {
                out += ((a % p + b % p) % p) * mul;
                a /= p;
                b /= p;
                mul *= p;
            }
            return out;
        }
        case RingFamily::PadicQuotient:
            return (a + b) % modulus_;
        case RingFamily::PolyQuotient: {
            std::size_t out = 0, mul = 1;
            const std::size_t q = base_->size();
            for (unsigned i = 0; i < trunc_; ++i) {
                out += base_->add(a % q, b % q) * mul;
                a /= q;
                b /= q;
                mul *= q;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteLocalRing::neg(std::size_t a) const {
    switch (family_) {
        case RingFamily::Field: {
            if (deg_ == 1) return (size_ - a) % size_;
            std::size_t out = 0, mul = 1;
            const std::size_t p = static_cast<std::size_t>(p_);
            for (unsigned i = 0; i < deg_; ++i) {
                out += ((p - a % p) % p) * mul;
                a /= p;
                mul *= p;
            }
            return out;
        }
        case RingFamily::PadicQuotient:
            return (modulus_ - a) % modulus_;
        case RingFamily::PolyQuotient: {
            std::size_t out = 0, mul = 1;
            const std::size_t q = base_->size();
            for (unsigned i = 0; i < trunc_; ++i) {
                out += base_->neg(a % q) * mul;
                a /= q;
                mul *= q;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteLocalRing::sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }

std::size_t FiniteLocalRing::mul(std::size_t a, std::size_t b) const {
    switch (family_) {
        case RingFamily::Field: {
            if (a == 0 || b == 0) return 0;
            std::size_t s = log_[a] + log_[b];
            if (s >= size_ - 1) s -= size_ - 1;
            return exp_[s];
        }
        case RingFamily::PadicQuotient:
            return (a * b) % modulus_;
        case RingFamily::PolyQuotient: {
            const std::size_t q = base_->size();
            std::vector<std::size_t> ca(trunc_), cb(trunc_), cc(trunc_, 0);
            for (unsigned i = 0; i < trunc_; ++i) {
                ca[i] = a % q;
                a /= q;
                cb[i] = b % q;
                b /= q;
            }
            for (unsigned i = 0; i < trunc_; ++i) {
                if (ca[i] == 0) continue;
                for (unsigned j = 0; i + j < trunc_; ++j) {
                    if (cb[j] == 0) continue;
                    cc[i + j] = base_->add(cc[i + j], base_->mul(ca[i], cb[j]));
                }
            }
            std::size_t out = 0, mul2 = 1;
            for (unsigned i = 0; i < trunc_; ++i) {
                out += cc[i] * mul2;
                mul2 *= q;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

bool FiniteLocalRing::is_unit(std::size_t a) const {
    switch (family_) {
        case RingFamily::Field:
            return a != 0;
        case RingFamily::PadicQuotient:
            return a % static_cast<std::size_t>(p_) != 0;
        case RingFamily::PolyQuotient:
            return a % base_->size() != 0;
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteLocalRing::inv(std::size_t a) const {
    if (!is_unit(a)) throw std::invalid_argument("inv: not a unit");
    switch (family_) {
        case RingFamily::Field: {
            std::size_t l = log_[a];
            return exp_[(size_ - 1 - l) % (size_ - 1)];
        }
        case RingFamily::PadicQuotient: {
            Int r = mod_inverse(Int(a), Int(modulus_));
            return r.convert_to<std::size_t>();
        }
        case RingFamily::PolyQuotient: {
            const std::size_t q = base_->size();
            std::vector<std::size_t> ca(trunc_), cb(trunc_, 0);
            std::size_t aa = a;
            for (unsigned i = 0; i < trunc_; ++i) {
                ca[i] = aa % q;
                aa /= q;
            }
            cb[0] = base_->inv(ca[0]);
            for (unsigned m = 1; m < trunc_; ++m) {
                std::size_t s = 0;
                for (unsigned i = 1; i <= m; ++i) s = base_->add(s, base_->mul(ca[i], cb[m - i]));
                cb[m] = base_->neg(base_->mul(cb[0], s));
            }
            std::size_t out = 0, mul2 = 1;
            for (unsigned i = 0; i < trunc_; ++i) {
                out += cb[i] * mul2;
                mul2 *= q;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteLocalRing::pow(std::size_t a, long long e) const {
    if (e < 0) return pow(inv(a), -e);
    std::size_t r = one_, b = a;
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

std::size_t FiniteLocalRing::from_integer(long long n) const {
    long long m = n % static_cast<long long>(characteristic_);
    if (m < 0) m += characteristic_;
    std::size_t r = 0, b = one_;
    // characteristic is small; repeated doubling
    long long e = m;
    while (e > 0) {
        if (e & 1) r = add(r, b);
        b = add(b, b);
        e >>= 1;
    }
    return r;
}

RingPtr FiniteLocalRing::residue_field() const {
    if (family_ == RingFamily::Field) return shared_from_this();
    return residue_field_;
}

std::size_t FiniteLocalRing::residue(std::size_t a) const {
    switch (family_) {
        case RingFamily::Field:
            return a;
        case RingFamily::PadicQuotient:
            return a % static_cast<std::size_t>(p_);
        case RingFamily::PolyQuotient:
            return a % base_->size();
    }
    throw std::logic_error("unreachable");
}

std::size_t FiniteLocalRing::lift(std::size_t res) const {
    if (family_ == RingFamily::Field) return res;
    return res;  // canonical lifts coincide with residue indices in both families
}

bool FiniteLocalRing::in_u1(std::size_t a) const {
    return is_unit(a) && residue(a) == residue_field()->one();
}

// ------------------------------------------------------------- unit group

void FiniteLocalRing::build_common() {
    units_.clear();
    unit_pos_.assign(size_, kNoPos);
    for (std::size_t a = 0; a < size_; ++a) {
        if (is_unit(a)) {
            unit_pos_[a] = units_.size();
            units_.push_back(a);
        }
    }
    wn_.clear();
    u1_.clear();
    for (std::size_t a : units_) {
        if (is_unit(sub(one_, a))) wn_.push_back(a);
        if (in_u1(a)) u1_.push_back(a);
    }
    build_unit_group();
}

void FiniteLocalRing::build_unit_group() {
    // generating set, then the triangular relation lattice of the generated
    // chain, then Smith to get an invariant-factor basis with discrete logs
    std::vector<std::size_t> gens;
    if (family_ == RingFamily::Field) {
        if (size_ > 2) gens.push_back(exp_[1]);
    } else if (family_ == RingFamily::PadicQuotient) {
        // lift of a primitive root mod p, adjusted to have full order
        RingPtr k = residue_field();
        std::size_t g0 = k->field_generator();
        std::size_t g = g0;
        // order must be p^{k-1}(p-1); adjust by adding p if needed
        std::size_t full = units_.size();
        auto order_of = [&](std::size_t x) {
            std::size_t e = 1, y = x;
            while (y != one_) {
                y = mul(y, x);
                ++e;
            }
            return e;
        };
        if (order_of(g) != full) g = add(g, from_integer(p_));
        if (order_of(g) != full) throw std::logic_error("no generator for (Z/p^k)^x");
        gens.push_back(g);
    } else {
        // constant lift of the residue-field generator, then 1 + c t^i
        if (base_->size() > 2) gens.push_back(base_->field_generator());
        const std::size_t q = base_->size();
        long p = base_->characteristic();
        unsigned n = 1;
        {
            std::size_t m = q;
            n = 0;
            while (m > 1) {
                m /= static_cast<std::size_t>(p);
                ++n;
            }
        }
        for (unsigned i = 1; i < trunc_; ++i) {
            std::size_t ti = 1;
            for (unsigned j = 0; j < i; ++j) ti *= q;  // index of t^i
            for (unsigned j = 0; j < n; ++j) {
                std::size_t coeff = 1;
                for (unsigned l = 0; l < j; ++l) coeff = static_cast<std::size_t>(p) * coeff;  // alpha^j index
                gens.push_back(one_ + coeff * ti);
            }
        }
    }

    UnitGroupDecomposition& ug = unit_group_;
    ug.factors.clear();
    ug.basis.clear();
    ug.coords.assign(units_.size(), {});

    if (gens.empty()) {  // trivial unit group (F_2)
        square_rank_ = 0;
        square_basis_.clear();
        square_class_by_pos_.assign(units_.size(), 0);
        return;
    }

    const std::size_t m = gens.size();
    // dlog over the generator chain
    std::vector<std::vector<long long>> chain_log(units_.size());
    std::vector<std::size_t> members;  // element indices of the current subgroup
    std::vector<char> seen(size_, 0);
    chain_log[unit_pos_[one_]] = std::vector<long long>{};
    members.push_back(one_);
    seen[one_] = 1;
    std::vector<std::vector<Int>> rel_rows;
    for (std::size_t gi = 0; gi < m; ++gi) {
        std::size_t g = gens[gi];
        // find minimal e >= 1 with g^e in the current subgroup
        std::size_t e = 1, y = g;
        while (!seen[y]) {
            y = mul(y, g);
            ++e;
        }
        // relation: chain_log(g^e) - e * e_gi = 0
        std::vector<Int> rel(m, 0);
        const auto& lye = chain_log[unit_pos_[y]];
        for (std::size_t j = 0; j < lye.size(); ++j) rel[j] = lye[j];
        rel[gi] -= static_cast<long long>(e);
        rel_rows.push_back(std::move(rel));
        // extend members by powers g^f, f = 1..e-1
        std::vector<std::size_t> old = members;
        std::size_t gf = one_;
        for (std::size_t f = 1; f < e; ++f) {
            gf = mul(gf, g);
            for (std::size_t x : old) {
                std::size_t z = mul(x, gf);
                std::vector<long long> lg = chain_log[unit_pos_[x]];
                lg.resize(gi + 1, 0);
                lg[gi] = static_cast<long long>(f);
                chain_log[unit_pos_[z]] = std::move(lg);
                members.push_back(z);
                seen[z] = 1;
            }
        }
        for (std::size_t x : old) chain_log[unit_pos_[x]].resize(gi + 1, 0);
    }
    if (members.size() != units_.size())
        throw std::logic_error("unit group generators do not generate");

    IntMatrix rel = IntMatrix::from_rows(std::move(rel_rows), m);
    auto snf = smith_normal_form(rel, /*with_transforms=*/true);
    const IntMatrix& V = *snf.right;
    const IntMatrix& Vi = *snf.right_inverse;

    // keep factors > 1; remember original column positions
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < m; ++j) {
        Int d = j < snf.factors.size() ? snf.factors[j] : Int(0);
        if (d == 0) throw std::logic_error("unit group relation lattice not full rank");
        if (d > 1) {
            ug.factors.push_back(d);
            keep.push_back(j);
        }
    }
    // basis element j: product of gens^{Vi[j][i]}
    for (std::size_t jj : keep) {
        std::size_t b = one_;
        for (std::size_t i = 0; i < m; ++i) {
            long long e = mod_positive(Vi.at(jj, i), Int(units_.size())).convert_to<long long>();
            b = mul(b, pow(gens[i], e));
        }
        ug.basis.push_back(b);
    }
    // coords of each unit: (chain_log * V) mod d, restricted to kept columns
    for (std::size_t pos = 0; pos < units_.size(); ++pos) {
        const auto& cl = chain_log[pos];
        std::vector<long long> out(keep.size(), 0);
        for (std::size_t kk = 0; kk < keep.size(); ++kk) {
            Int v = 0;
            for (std::size_t i = 0; i < m; ++i) v += Int(cl[i]) * V.at(i, keep[kk]);
            out[kk] = mod_positive(v, ug.factors[kk]).convert_to<long long>();
        }
        ug.coords[pos] = std::move(out);
    }

    // square-class data from even invariant factors
    square_factor_idx_.clear();
    for (std::size_t i = 0; i < ug.factors.size(); ++i)
        if (ug.factors[i] % 2 == 0) square_factor_idx_.push_back(static_cast<unsigned>(i));
    square_rank_ = static_cast<unsigned>(square_factor_idx_.size());
    if (square_rank_ > 30) throw std::logic_error("square-class rank too large");
    square_basis_.clear();
    for (unsigned i : square_factor_idx_) square_basis_.push_back(ug.basis[i]);
    square_class_by_pos_.assign(units_.size(), 0);
    for (std::size_t pos = 0; pos < units_.size(); ++pos) {
        std::uint32_t cls = 0;
        for (unsigned b = 0; b < square_rank_; ++b) {
            if (ug.coords[pos][square_factor_idx_[b]] % 2 != 0) cls |= (1u << b);
        }
        square_class_by_pos_[pos] = cls;
    }
}

std::uint32_t FiniteLocalRing::square_class(std::size_t a) const {
    if (!is_unit(a)) throw std::invalid_argument("square_class: not a unit");
    return square_class_by_pos_[unit_pos_[a]];
}

std::size_t FiniteLocalRing::class_representative(std::uint32_t cls) const {
    std::size_t r = one_;
    for (unsigned b = 0; b < square_rank_; ++b)
        if (cls & (1u << b)) r = mul(r, square_basis_[b]);
    return r;
}

std::size_t FiniteLocalRing::field_generator() const {
    if (family_ != RingFamily::Field) throw std::logic_error("field_generator: not a field");
    if (size_ == 2) return 1;
    return exp_[1];
}

const std::vector<long>& FiniteLocalRing::field_min_poly() const {
    if (family_ != RingFamily::Field) throw std::logic_error("field_min_poly: not a field");
    return min_poly_;
}

std::string FiniteLocalRing::element_string(std::size_t a) const {
    switch (family_) {
        case RingFamily::Field:
        case RingFamily::PadicQuotient: {
            std::ostringstream os;
            os << a;
            return os.str();
        }
        case RingFamily::PolyQuotient: {
            const std::size_t q = base_->size();
            std::ostringstream os;
            bool first = true;
            std::size_t aa = a;
            for (unsigned i = 0; i < trunc_; ++i) {
                std::size_t c = aa % q;
                aa /= q;
                if (c == 0) continue;
                if (!first) os << "+";
                os << c;
                if (i >= 1) os << "t";
                if (i >= 2) os << "^" << i;
                first = false;
            }
            if (first) os << "0";
            return os.str();
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace bloch

#include "bloch/func_field.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bloch {

FunctionField::FunctionField(RingPtr base_field) : base_(std::move(base_field)) {
    if (base_->family() != RingFamily::Field)
        throw std::invalid_argument("FunctionField: base must be a finite field");
}

void FunctionField::trim(Poly& a) const {
    while (!a.c.empty() && a.c.back() == base_->zero()) a.c.pop_back();
}

Poly FunctionField::poly_from(const std::vector<std::size_t>& coeffs) const {
    Poly p{coeffs};
    trim(p);
    return p;
}

Poly FunctionField::poly_t() const { return poly_from({base_->zero(), base_->one()}); }
Poly FunctionField::poly_const(std::size_t c) const { return poly_from({c}); }

Poly FunctionField::add(const Poly& a, const Poly& b) const {
    Poly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), base_->zero());
    for (std::size_t i = 0; i < out.c.size(); ++i) {
        std::size_t x = i < a.c.size() ? a.c[i] : base_->zero();
        std::size_t y = i < b.c.size() ? b.c[i] : base_->zero();
        out.c[i] = base_->add(x, y);
    }
    trim(out);
    return out;
}

Poly FunctionField::neg(const Poly& a) const {
    Poly out = a;
    for (auto& x : out.c) x = base_->neg(x);
    return out;
}

Poly FunctionField::sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

Poly FunctionField::mul(const Poly& a, const Poly& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    Poly out;
    out.c.assign(a.c.size() + b.c.size() - 1, base_->zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == base_->zero()) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = base_->add(out.c[i + j], base_->mul(a.c[i], b.c[j]));
    }
    trim(out);
    return out;
}

std::pair<Poly, Poly> FunctionField::divmod(const Poly& a, const Poly& b) const {
    if (b.is_zero()) throw std::invalid_argument("divmod: division by zero polynomial");
    Poly r = a, q;
    if (a.degree() >= b.degree()) q.c.assign(a.degree() - b.degree() + 1, base_->zero());
    std::size_t binv = base_->inv(lc(b));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        std::size_t coef = base_->mul(lc(r), binv);
        std::size_t shift = r.degree() - b.degree();
        q.c[shift] = coef;
        for (std::size_t i = 0; i < b.c.size(); ++i) {
            r.c[i + shift] = base_->sub(r.c[i + shift], base_->mul(coef, b.c[i]));
        }
        trim(r);
    }
    trim(q);
    return {q, r};
}

Poly FunctionField::gcd(const Poly& a, const Poly& b) const {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).second;
        x = y;
        y = r;
    }
    return monic(x);
}

Poly FunctionField::monic(const Poly& a) const {
    if (a.is_zero()) return a;
    Poly out = a;
    std::size_t s = base_->inv(lc(a));
    for (auto& c : out.c) c = base_->mul(c, s);
    return out;
}

std::size_t FunctionField::eval(const Poly& a, std::size_t x) const {
    std::size_t acc = base_->zero();
    for (std::size_t i = a.c.size(); i > 0; --i) acc = base_->add(base_->mul(acc, x), a.c[i - 1]);
    return acc;
}

std::string FunctionField::poly_string(const Poly& a) const {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = a.c.size(); i > 0; --i) {
        std::size_t c = a.c[i - 1];
        std::size_t d = i - 1;
        if (c == base_->zero()) continue;
        if (!first) os << "+";
        if (d == 0 || c != base_->one()) os << c;
        if (d >= 1) os << "t";
        if (d >= 2) os << "^" << d;
        first = false;
    }
    return os.str();
}

Poly FunctionField::pow_mod(const Poly& b, const Int& e, const Poly& mod) const {
    Poly result = poly_const(base_->one());
    Poly base = divmod(b, mod).second;
    Int ee = e;
    while (ee > 0) {
        if ((ee & 1) != 0) result = divmod(mul(result, base), mod).second;
        base = divmod(mul(base, base), mod).second;
        ee >>= 1;
    }
    return result;
}

bool FunctionField::is_irreducible(const Poly& a) const {
    int d = a.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    const Int q = base_->size();
    // x^{q^d} = x mod a, and gcd(x^{q^{d/l}} - x, a) = 1 for primes l | d
    Int qd = 1;
    for (int i = 0; i < d; ++i) qd *= q;
    Poly x = poly_t();
    if (!poly_equal(pow_mod(x, qd, a), divmod(x, a).second)) return false;
    for (int l = 2; l <= d; ++l) {
        if (d % l != 0 || !is_prime(l)) continue;
        Int qe = 1;
        for (int i = 0; i < d / l; ++i) qe *= q;
        Poly g = gcd(sub(pow_mod(x, qe, a), x), a);
        if (g.degree() != 0) return false;
    }
    return true;
}

namespace {

bool poly_less(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
    for (std::size_t i = a.c.size(); i > 0; --i)
        if (a.c[i - 1] != b.c[i - 1]) return a.c[i - 1] < b.c[i - 1];
    return false;
}

}  // namespace

std::vector<std::pair<Poly, unsigned>> FunctionField::factor(const Poly& input,
                                                             std::uint64_t seed) const {
    if (input.is_zero()) throw std::invalid_argument("factor: zero polynomial");
    if (base_->size() % 2 == 0)
        throw std::invalid_argument("factor: equal-degree splitting requires odd q");
    const std::size_t q = base_->size();
    long p = base_->characteristic();
    unsigned n = 0;
    {
        std::size_t m = q;
        while (m > 1) {
            m /= static_cast<std::size_t>(p);
            ++n;
        }
    }
    Rng rng(seed);

    std::map<std::vector<std::size_t>, unsigned> found;  // coefficient vector -> multiplicity

    std::function<void(Poly, unsigned)> run = [&](Poly f, unsigned scale) {
        f = monic(f);
        if (f.degree() <= 0) return;
        // derivative
        Poly der;
        der.c.assign(f.c.size() > 1 ? f.c.size() - 1 : 0, base_->zero());
        for (std::size_t i = 1; i < f.c.size(); ++i) {
            std::size_t coef = base_->zero();
            for (std::size_t rep = 0; rep < i % static_cast<std::size_t>(p); ++rep)
                coef = base_->add(coef, f.c[i]);
            der.c[i - 1] = coef;
        }
        trim(der);
        if (der.is_zero()) {
            // f = g(t^p); take the p-th root of the coefficients
            Poly g;
            g.c.assign(f.degree() / p + 1, base_->zero());
            long long e = 1;
            for (unsigned i = 0; i + 1 < n; ++i) e *= p;  // c^{p^{n-1}} is the p-th root
            for (std::size_t i = 0; i < g.c.size(); ++i)
                g.c[i] = base_->pow(f.c[i * static_cast<std::size_t>(p)], e);
            trim(g);
            run(g, scale * static_cast<unsigned>(p));
            return;
        }
        Poly sq = divmod(f, gcd(f, der)).first;  // distinct irreducibles with p∤mult
        // distinct-degree splitting of sq
        std::vector<std::pair<Poly, int>> blocks;  // (product of factors of degree d, d)
        {
            Poly rem = sq;
            Poly x = poly_t();
            Poly h = divmod(x, rem).second;
            int d = 0;
            while (rem.degree() > 0) {
                ++d;
                if (2 * d > rem.degree()) {
                    blocks.emplace_back(rem, rem.degree());
                    break;
                }
                h = pow_mod(h, Int(q), rem);
                Poly g = gcd(sub(h, divmod(x, rem).second), rem);
                if (g.degree() > 0) {
                    blocks.emplace_back(g, d);
                    rem = divmod(rem, g).first;
                    if (rem.degree() == 0) break;
                    h = divmod(h, rem).second;
                }
            }
        }
        // equal-degree splitting per block (Cantor–Zassenhaus)
        std::vector<Poly> irreducibles;
        std::function<void(Poly, int)> split = [&](Poly h, int d) {
            if (h.degree() == d) {
                irreducibles.push_back(monic(h));
                return;
            }
            Int qd = 1;
            for (int i = 0; i < d; ++i) qd *= q;
            Int e = (qd - 1) / 2;
            while (true) {
                Poly r;
                r.c.resize(static_cast<std::size_t>(h.degree()), base_->zero());
                for (auto& c : r.c) c = rng.below(q);
                trim(r);
                if (r.degree() < 1) continue;
                Poly s = pow_mod(r, e, h);
                s = sub(s, poly_const(base_->one()));
                Poly g = gcd(s, h);
                if (g.degree() > 0 && g.degree() < h.degree()) {
                    split(g, d);
                    split(divmod(h, g).first, d);
                    return;
                }
            }
        };
        for (auto& [blk, d] : blocks) split(blk, d);
        // true multiplicities by trial division against f
        Poly rem = f;
        for (const auto& pi : irreducibles) {
            unsigned m = 0;
            while (true) {
                auto [qq, rr] = divmod(rem, pi);
                if (!rr.is_zero()) break;
                rem = qq;
                ++m;
            }
            found[pi.c] += m * scale;
        }
        run(rem, scale);
    };
    run(input, 1);

    std::vector<std::pair<Poly, unsigned>> out;
    for (const auto& [c, m] : found) out.emplace_back(Poly{c}, m);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
    return out;
}

// ------------------------------------------------------------ rationals

FunctionField::Rational FunctionField::make(Poly num, Poly den) const {
    if (den.is_zero()) throw std::invalid_argument("rational: zero denominator");
    if (num.is_zero()) return {Poly{}, poly_const(base_->one())};
    Poly g = gcd(num, den);
    if (g.degree() > 0) {
        num = divmod(num, g).first;
        den = divmod(den, g).first;
    }
    std::size_t s = base_->inv(lc(den));
    for (auto& c : num.c) c = base_->mul(c, s);
    for (auto& c : den.c) c = base_->mul(c, s);
    return {num, den};
}

FunctionField::Rational FunctionField::add(const Rational& a, const Rational& b) const {
    return make(FunctionField::add(mul(a.num, b.den), mul(b.num, a.den)), mul(a.den, b.den));
}
FunctionField::Rational FunctionField::sub(const Rational& a, const Rational& b) const {
    return make(FunctionField::sub(mul(a.num, b.den), mul(b.num, a.den)), mul(a.den, b.den));
}
FunctionField::Rational FunctionField::mul(const Rational& a, const Rational& b) const {
    return make(mul(a.num, b.num), mul(a.den, b.den));
}
FunctionField::Rational FunctionField::div(const Rational& a, const Rational& b) const {
    if (b.is_zero()) throw std::invalid_argument("rational: division by zero");
    return make(mul(a.num, b.den), mul(a.den, b.num));
}
FunctionField::Rational FunctionField::inv(const Rational& a) const {
    if (a.is_zero()) throw std::invalid_argument("rational: inverse of zero");
    return make(a.den, a.num);
}
FunctionField::Rational FunctionField::neg(const Rational& a) const {
    return {FunctionField::neg(a.num), a.den};
}
bool FunctionField::equal(const Rational& a, const Rational& b) const {
    return a.num.c == b.num.c && a.den.c == b.den.c;
}
bool FunctionField::is_one(const Rational& a) const {
    return a.num.c == std::vector<std::size_t>{base_->one()} && a.den.c == a.num.c;
}

std::string FunctionField::rat_string(const Rational& a) const {
    if (a.den.degree() == 0 && !a.den.is_zero() && a.den.c[0] == base_->one())
        return poly_string(a.num);
    return "(" + poly_string(a.num) + ")/(" + poly_string(a.den) + ")";
}

// ------------------------------------------------------------ parsing

namespace {

struct Scanner {
    std::string s;
    std::size_t pos = 0;
    explicit Scanner(std::string text) {
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    long number() {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw std::invalid_argument("parse: expected number at '" + s.substr(pos) + "'");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
        }
        return v;
    }
};

}  // namespace

FunctionField::Rational FunctionField::parse(const std::string& text) const {
    Scanner sc(text);
    // poly := term (('+'|'-') term)*, term := coeff ['*']? ['t' ['^' k]] | 't' ...
    auto parse_poly = [&](auto&& self_ref) -> Poly {
        Poly acc;  // zero
        int sign = 1;
        if (sc.eat('-')) sign = -1;
        while (true) {
            std::size_t coeff = base_->one();
            bool have_coeff = false;
            if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
                long v = sc.number();
                if (v >= static_cast<long>(base_->size()))
                    throw std::invalid_argument("parse: coefficient index out of range");
                coeff = static_cast<std::size_t>(v);
                have_coeff = true;
                sc.eat('*');
            }
            unsigned deg = 0;
            if (sc.eat('t')) {
                deg = 1;
                if (sc.eat('^')) deg = static_cast<unsigned>(sc.number());
            } else if (!have_coeff) {
                throw std::invalid_argument("parse: expected term");
            }
            if (sign < 0) coeff = base_->neg(coeff);
            std::vector<std::size_t> mono(deg + 1, base_->zero());
            mono[deg] = coeff;
            acc = add(acc, poly_from(mono));
            if (sc.eat('+'))
                sign = 1;
            else if (sc.eat('-'))
                sign = -1;
            else
                break;
        }
        (void)self_ref;
        return acc;
    };

    auto parse_operand = [&]() -> Poly {
        if (sc.eat('(')) {
            Poly p = parse_poly(parse_poly);
            if (!sc.eat(')')) throw std::invalid_argument("parse: expected ')'");
            return p;
        }
        return parse_poly(parse_poly);
    };

    Poly num = parse_operand();
    Poly den = poly_const(base_->one());
    if (sc.eat('/')) den = parse_operand();
    if (!sc.done()) throw std::invalid_argument("parse: trailing characters in '" + text + "'");
    return make(num, den);
}

FormalExpr parse_expr(const FunctionField& ff, const std::string& text) {
    Scanner sc(text);
    FormalExpr out;
    bool first = true;
    while (!sc.done()) {
        int sign = 1;
        if (sc.eat('-'))
            sign = -1;
        else if (sc.eat('+'))
            sign = 1;
        else if (!first)
            throw std::invalid_argument("parse_expr: expected + or - between terms");
        first = false;
        Int coeff = 1;
        if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
            coeff = Int(sc.number());
            if (!sc.eat('*')) throw std::invalid_argument("parse_expr: expected '*' after coefficient");
        }
        FormalTerm term;
        term.coeff = sign < 0 ? Int(-coeff) : coeff;
        if (sc.eat('{')) {
            std::string inner;
            while (!sc.done() && sc.peek() != '}') {
                inner.push_back(sc.peek());
                ++sc.pos;
            }
            if (!sc.eat('}')) throw std::invalid_argument("parse_expr: expected '}'");
            term.cls = ff.parse(inner);
        }
        if (!sc.eat('[')) throw std::invalid_argument("parse_expr: expected '['");
        std::string inner;
        while (!sc.done() && sc.peek() != ']') {
            inner.push_back(sc.peek());
            ++sc.pos;
        }
        if (!sc.eat(']')) throw std::invalid_argument("parse_expr: expected ']'");
        term.arg = ff.parse(inner);
        out.push_back(std::move(term));
    }
    if (out.empty()) throw std::invalid_argument("parse_expr: empty expression");
    return out;
}

// ------------------------------------------------------------ places

FunctionField::Place FunctionField::place_t() const { return {Place::Kind::Finite, poly_t()}; }
FunctionField::Place FunctionField::place_infinity() const { return {Place::Kind::Infinity, {}}; }

FunctionField::Place FunctionField::place_at(const Poly& pi) const {
    Poly m = monic(pi);
    if (!is_irreducible(m)) throw std::invalid_argument("place_at: polynomial is not irreducible");
    return {Place::Kind::Finite, m};
}

FunctionField::Place FunctionField::parse_place(const std::string& text) const {
    if (text == "inf" || text == "infinity") return place_infinity();
    Rational r = parse(text);
    if (r.den.degree() != 0) throw std::invalid_argument("parse_place: expected a polynomial");
    return place_at(r.num);
}

std::string FunctionField::place_string(const Place& p) const {
    if (p.kind == Place::Kind::Infinity) return "inf";
    return poly_string(p.pi);
}

long FunctionField::valuation(const Place& v, const Rational& a) const {
    if (a.is_zero()) throw std::invalid_argument("valuation: zero element");
    if (v.kind == Place::Kind::Infinity) return a.den.degree() - a.num.degree();
    auto count = [&](Poly f) {
        long c = 0;
        while (f.degree() >= v.pi.degree()) {
            auto [q, r] = divmod(f, v.pi);
            if (!r.is_zero()) break;
            f = q;
            ++c;
        }
        return c;
    };
    return count(a.num) - count(a.den);
}

RingPtr FunctionField::residue_field(const Place& v) const {
    if (v.kind == Place::Kind::Infinity) return base_;
    int d = v.pi.degree();
    if (d == 1) return base_;
    double size = 1;
    for (int i = 0; i < d; ++i) size *= static_cast<double>(base_->size());
    if (size > (1 << 20)) throw std::invalid_argument("residue field too large");
    std::ostringstream os;
    os << "F_" << static_cast<long>(size);
    return FiniteLocalRing::make(os.str());
}

namespace {

// cached embedding data for a degree-d place: the residue field K, the image
// of the base-field generator, and the chosen root of pi in K
struct EmbedData {
    RingPtr K;
    std::vector<std::size_t> gamma_pow;  // images of base-field basis alpha^i
    std::size_t beta;                    // smallest root of pi in K
};

}  // namespace

std::size_t FunctionField::residue(const Place& v, const Rational& a) const {
    if (valuation(v, a) != 0) throw std::invalid_argument("residue: element is not a unit at v");
    if (v.kind == Place::Kind::Infinity) {
        return base_->mul(lc(a.num), base_->inv(lc(a.den)));
    }
    int d = v.pi.degree();
    if (d == 1) {
        std::size_t root = base_->neg(v.pi.c[0]);
        return base_->mul(eval(a.num, root), base_->inv(eval(a.den, root)));
    }
    // general finite place: evaluate in F_{q^d} at a root of pi
    static std::map<std::string, EmbedData> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = base_->descriptor() + "|" + poly_string(v.pi);
    auto it = cache.find(key);
    if (it == cache.end()) {
        EmbedData e;
        e.K = residue_field(v);
        // embed F_q -> K via the smallest root of the F_q minimal polynomial;
        // for prime fields the prime-subfield embedding is canonical
        long p = base_->characteristic();
        unsigned n = 0;
        {
            std::size_t m = base_->size();
            while (m > 1) {
                m /= static_cast<std::size_t>(p);
                ++n;
            }
        }
        std::size_t gamma = 0;
        if (n == 1) {
            gamma = e.K->from_integer(1);
        } else {
            // the base field embeds through the smallest root in K of its
            // defining polynomial over the prime field
            const std::vector<long>& mp = base_->field_min_poly();
            bool found = false;
            for (std::size_t cand = 0; cand < e.K->size() && !found; ++cand) {
                std::size_t acc = e.K->zero();
                std::size_t pw = e.K->one();
                for (unsigned i = 0; i < mp.size(); ++i) {
                    acc = e.K->add(acc, e.K->mul(e.K->from_integer(mp[i]), pw));
                    pw = e.K->mul(pw, cand);
                }
                if (acc == e.K->zero()) {
                    gamma = cand;
                    found = true;
                }
            }
            if (!found) throw std::logic_error("residue: no embedding root found");
        }
        e.gamma_pow.resize(n);
        e.gamma_pow[0] = e.K->one();
        for (unsigned i = 1; i < n; ++i) e.gamma_pow[i] = e.K->mul(e.gamma_pow[i - 1], gamma);
        auto embed = [&](std::size_t x) {
            // digits of x base p are the coefficients over the prime field
            std::size_t acc = e.K->zero();
            for (unsigned i = 0; i < n; ++i) {
                std::size_t digit = x % static_cast<std::size_t>(p);
                x /= static_cast<std::size_t>(p);
                if (digit)
                    acc = e.K->add(acc, e.K->mul(e.K->from_integer(static_cast<long long>(digit)),
                                                 e.gamma_pow[i]));
            }
            return acc;
        };
        // smallest root of pi in K
        bool found = false;
        for (std::size_t cand = 0; cand < e.K->size() && !found; ++cand) {
            std::size_t acc = e.K->zero();
            std::size_t pw = e.K->one();
            for (std::size_t i = 0; i < v.pi.c.size(); ++i) {
                acc = e.K->add(acc, e.K->mul(embed(v.pi.c[i]), pw));
                pw = e.K->mul(pw, cand);
            }
            if (acc == e.K->zero()) {
                e.beta = cand;
                found = true;
            }
        }
        if (!found) throw std::logic_error("residue: pi has no root in the residue field");
        it = cache.emplace(key, std::move(e)).first;
    }
    const EmbedData& e = it->second;
    long p = base_->characteristic();
    unsigned n = static_cast<unsigned>(e.gamma_pow.size());
    auto embed = [&](std::size_t x) {
        std::size_t acc = e.K->zero();
        for (unsigned i = 0; i < n; ++i) {
            std::size_t digit = x % static_cast<std::size_t>(p);
            x /= static_cast<std::size_t>(p);
            if (digit)
                acc = e.K->add(acc, e.K->mul(e.K->from_integer(static_cast<long long>(digit)),
                                             e.gamma_pow[i]));
        }
        return acc;
    };
    auto eval_in_K = [&](const Poly& f) {
        std::size_t acc = e.K->zero();
        std::size_t pw = e.K->one();
        for (std::size_t i = 0; i < f.c.size(); ++i) {
            acc = e.K->add(acc, e.K->mul(embed(f.c[i]), pw));
            pw = e.K->mul(pw, e.beta);
        }
        return acc;
    };
    return e.K->mul(eval_in_K(a.num), e.K->inv(eval_in_K(a.den)));
}

std::pair<int, std::uint32_t> FunctionField::square_class_data(const Place& v,
                                                               const Rational& a) const {
    if (a.is_zero()) throw std::invalid_argument("square_class_data: zero element");
    long val = valuation(v, a);
    Rational u = a;
    if (v.kind == Place::Kind::Infinity) {
        // unit part is a * t^{v}; its residue is the leading-coefficient ratio
        std::size_t res = base_->mul(lc(a.num), base_->inv(lc(a.den)));
        return {static_cast<int>(((val % 2) + 2) % 2), base_->square_class(res)};
    }
    // strip pi powers
    Poly num = a.num, den = a.den;
    auto strip = [&](Poly f) {
        while (f.degree() >= v.pi.degree()) {
            auto [q, r] = divmod(f, v.pi);
            if (!r.is_zero()) break;
            f = q;
        }
        return f;
    };
    num = strip(num);
    den = strip(den);
    Rational unit = make(num, den);
    std::size_t res = residue(v, unit);
    RingPtr k = residue_field(v);
    return {static_cast<int>(((val % 2) + 2) % 2), k->square_class(res)};
}

FunctionField::TnormResult FunctionField::tnorm_membership(const Place& v,
                                                           const Rational& a) const {
    TnormResult out;
    RingPtr k = residue_field(v);
    out.hypothesis_met = (k->characteristic() != 3) && (k->size() % 3 != 1);
    long val = valuation(v, a);
    if (((val % 2) + 2) % 2 != 0) {
        out.member = false;
        return out;
    }
    auto [parity, cls] = square_class_data(v, a);
    // recover the unit-part residue itself (not just its class)
    Poly num = a.num, den = a.den;
    if (v.kind == Place::Kind::Finite) {
        auto strip = [&](Poly f) {
            while (f.degree() >= v.pi.degree()) {
                auto [q, r] = divmod(f, v.pi);
                if (!r.is_zero()) break;
                f = q;
            }
            return f;
        };
        num = strip(num);
        den = strip(den);
    }
    std::size_t res;
    if (v.kind == Place::Kind::Infinity)
        res = base_->mul(lc(a.num), base_->inv(lc(a.den)));
    else
        res = residue(v, make(num, den));
    const auto& norm = tower_for(k).tnorm_subgroup();
    out.member = std::binary_search(norm.begin(), norm.end(), res);
    return out;
}

// ------------------------------------------------------------ specializer

Specializer::Specializer(const FunctionField& ff, FunctionField::Place place)
    : ff_(ff), place_(std::move(place)) {
    residue_ = ff_.residue_field(place_);
    if (residue_->size() < 4)
        throw std::invalid_argument("Specializer: residue field must have at least 4 elements");
    tower_ = &tower_for(residue_);
}

InducedElement Specializer::zero() const {
    InducedElement e;
    e.comp[0] = tower_->rp_zero();
    e.comp[1] = tower_->rp_zero();
    return e;
}

bool Specializer::is_zero(const InducedElement& e) const {
    const auto& rpt = tower_->reduced().rp_tilde.module();
    return rpt.is_zero(e.comp[0]) && rpt.is_zero(e.comp[1]);
}

bool Specializer::is_zero_reduced(const InducedElement& e) const {
    const auto& bar = tower_->reduced().rp_bar.module();
    return bar.is_zero(e.comp[0]) && bar.is_zero(e.comp[1]);
}

InducedElement Specializer::add(const InducedElement& a, const InducedElement& b) const {
    InducedElement out;
    out.comp[0] = add_rows(a.comp[0], b.comp[0]);
    out.comp[1] = add_rows(a.comp[1], b.comp[1]);
    return out;
}

InducedElement Specializer::scale(const InducedElement& a, const Int& c) const {
    InducedElement out;
    out.comp[0] = scale_row(a.comp[0], c);
    out.comp[1] = scale_row(a.comp[1], c);
    return out;
}

InducedElement Specializer::act(const FunctionField::Rational& b, const InducedElement& e) const {
    auto [parity, cls] = ff_.square_class_data(place_, b);
    InducedElement out;
    for (int eps = 0; eps < 2; ++eps) {
        auto moved = tower_->rp().act_class(cls, e.comp[eps]);
        out.comp[(eps + parity) & 1] = std::move(moved);
    }
    return out;
}

InducedElement Specializer::specialize_symbol(const FunctionField::Rational& a) const {
    if (a.is_zero() || ff_.is_one(a))
        throw std::invalid_argument("specialize: symbol argument must avoid 0 and 1");
    InducedElement out = zero();
    long v = ff_.valuation(place_, a);
    if (v == 0) {
        std::size_t res = ff_.residue(place_, a);
        if (res == residue_->one()) return out;  // [1] = 0
        out.comp[0] = tower_->symbol(0, res);
    } else if (v > 0) {
        out.comp[0] = tower_->cbconst();
    } else {
        out.comp[0] = scale_row(tower_->cbconst(), Int(-1));
    }
    return out;
}

InducedElement Specializer::specialize(const FormalExpr& expr) const {
    InducedElement out = zero();
    for (const auto& term : expr) {
        InducedElement v = specialize_symbol(term.arg);
        if (term.cls) v = act(*term.cls, v);
        out = add(out, scale(v, term.coeff));
    }
    return out;
}

InducedElement Specializer::specialize_reduced_symbol(const FunctionField::Rational& a) const {
    if (a.is_zero() || ff_.is_one(a))
        throw std::invalid_argument("specialize: symbol argument must avoid 0 and 1");
    InducedElement out = zero();
    if (ff_.valuation(place_, a) != 0) return out;
    std::size_t res = ff_.residue(place_, a);
    if (res == residue_->one()) return out;
    out.comp[0] = tower_->symbol(0, res);
    return out;
}

Specializer::DeltaResult Specializer::delta_pi(const FormalExpr& expr) const {
    InducedElement e = specialize(expr);
    DeltaResult out;
    out.component = e.comp[1];
    const auto& qsgr = tower_->reduced().qsgr;
    out.in_kernel = qsgr.is_zero(tower_->lambda1_matrix().row_times(e.comp[0])) &&
                    qsgr.is_zero(tower_->lambda1_matrix().row_times(e.comp[1]));
    return out;
}

FormalExpr Specializer::five_term(const FunctionField::Rational& x,
                                  const FunctionField::Rational& y) const {
    const auto& F = ff_;
    auto one = F.rat_const(F.field()->one());
    auto u = F.div(y, x);
    auto w = F.div(F.sub(one, x), F.sub(one, y));
    auto uw = F.mul(u, w);
    FormalExpr e;
    e.push_back({Int(1), std::nullopt, x});
    e.push_back({Int(-1), std::nullopt, y});
    e.push_back({Int(1), x, u});
    e.push_back({Int(-1), F.sub(F.inv(x), one), uw});
    e.push_back({Int(1), F.sub(one, x), w});
    return e;
}

std::string Specializer::classify_case(const FunctionField::Rational& x,
                                       const FunctionField::Rational& y) const {
    const auto& F = ff_;
    auto one = F.rat_const(F.field()->one());
    long vx = F.valuation(place_, x);
    long vy = F.valuation(place_, y);
    auto in_u1 = [&](const FunctionField::Rational& a) {
        return F.valuation(place_, a) == 0 && F.residue(place_, a) == residue_->one();
    };
    bool xu1 = vx == 0 && in_u1(x);
    bool yu1 = vy == 0 && in_u1(y);
    if (vx != 0 && vy != 0) {
        if (vx == vy && vx > 0) return "(i)(a)";
        if (vx == vy && vx < 0) return "(i)(b)";
        if (vx > vy && vy > 0) return "(i)(c)";
        if (vx > 0 && vy < 0) return "(i)(d)";
        if (vx < 0 && vx > vy) return "(i)(e)";
        if (vy > vx && vx > 0) return "(i)(f)";
        if (vy > 0 && vx < 0) return "(i)(g)";
        return "(i)(h)";
    }
    if (xu1 && yu1) {
        long v1x = F.valuation(place_, F.sub(one, x));
        long v1y = F.valuation(place_, F.sub(one, y));
        return v1x != v1y ? "(ii)(a)" : "(ii)(b)";
    }
    if (xu1 && vy != 0) return "(iii)";
    if (vx != 0 && yu1) return vx > 0 ? "(iv)(a)" : "(iv)(b)";
    if (vx == 0 && !xu1 && vy != 0) return vy > 0 ? "(v)(a)" : "(v)(b)";
    if (vy == 0 && !yu1 && vx != 0) return vx > 0 ? "(vi)(a)" : "(vi)(b)";
    if (vx == 0 && !xu1 && yu1) return "(vii)";
    if (xu1 && vy == 0 && !yu1) return "(viii)";
    return "(ix)";
}

std::vector<std::pair<FunctionField::Rational, FunctionField::Rational>>
Specializer::crafted_pairs() const {
    const auto& F = ff_;
    auto one = F.rat_const(F.field()->one());
    FunctionField::Rational pi;
    if (place_.kind == FunctionField::Place::Kind::Infinity)
        pi = F.inv(F.rat_t());
    else
        pi = F.make(place_.pi, F.poly_const(F.field()->one()));
    auto c = F.rat_const(2);   // element index 2, never 0 or 1
    auto c2 = F.rat_const(3);  // element index 3
    auto pi2 = F.mul(pi, pi);
    auto u1a = F.add(one, pi);    // in U_1
    auto u1b = F.add(one, pi2);   // in U_1, different 1-x valuation
    auto ipi = F.inv(pi);
    std::vector<std::pair<FunctionField::Rational, FunctionField::Rational>> out = {
        {pi, F.mul(c, pi)},        // (i)(a)
        {ipi, F.mul(c, ipi)},      // (i)(b)
        {pi2, pi},                 // (i)(c)
        {pi, ipi},                 // (i)(d)
        {ipi, F.inv(pi2)},         // (i)(e)
        {pi, pi2},                 // (i)(f)
        {ipi, pi},                 // (i)(g)
        {F.inv(pi2), ipi},         // (i)(h)
        {u1a, u1b},                // (ii)(a)
        {u1a, F.add(one, F.mul(c, pi))},  // (ii)(b)
        {u1a, pi},                 // (iii)
        {u1a, ipi},                // (iii) negative side
        {pi, u1a},                 // (iv)(a)
        {ipi, u1a},                // (iv)(b)
        {c, pi},                   // (v)(a)
        {c, ipi},                  // (v)(b)
        {pi, c},                   // (vi)(a)
        {ipi, c},                  // (vi)(b)
        {c, u1a},                  // (vii)
        {u1a, c},                  // (viii)
        {c, c2},                   // (ix)
        {c, F.mul(c, u1a)},        // (ix) with equal residues
    };
    return out;
}

Report Specializer::verify_relations(std::size_t samples, std::uint64_t seed,
                                     int degree_bound) const {
    Report rep;
    rep.suite = "spec";
    rep.ring = "F_" + std::to_string(ff_.field()->size()) + "(t) at " +
               ff_.place_string(place_);
    const auto& F = ff_;
    Rng rng(seed);
    const std::size_t q = F.field()->size();

    auto random_rational = [&]() {
        while (true) {
            std::vector<std::size_t> nc(static_cast<std::size_t>(rng.below(degree_bound + 1)) + 1);
            std::vector<std::size_t> dc(static_cast<std::size_t>(rng.below(degree_bound + 1)) + 1);
            for (auto& v : nc) v = rng.below(q);
            for (auto& v : dc) v = rng.below(q);
            Poly num = F.poly_from(nc), den = F.poly_from(dc);
            if (num.is_zero() || den.is_zero()) continue;
            auto r = F.make(std::move(num), std::move(den));
            if (r.is_zero() || F.is_one(r)) continue;
            return r;
        }
    };

    // sample pairs drawn serially (deterministic), verified in parallel,
    // results merged in sample order
    std::vector<std::pair<FunctionField::Rational, FunctionField::Rational>> pairs =
        crafted_pairs();
    const std::size_t crafted_count = pairs.size();
    for (std::size_t i = 0; i < samples; ++i) {
        auto x = random_rational();
        auto y = random_rational();
        if (F.equal(x, y)) {
            --i;
            continue;
        }
        pairs.emplace_back(std::move(x), std::move(y));
    }

    // force the shared lazy tower state before the parallel region
    (void)tower_->reduced();
    (void)tower_->rp_module().relation_basis();

    std::vector<std::string> cls(pairs.size());
    std::vector<char> ok(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        cls[i] = classify_case(pairs[i].first, pairs[i].second);
        ok[i] = is_zero(specialize(five_term(pairs[i].first, pairs[i].second))) ? 1 : 0;
    });

    std::map<std::string, std::size_t> coverage;
    std::size_t failures = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        coverage[cls[i]]++;
        if (!ok[i] && i >= crafted_count) {
            ++failures;
            if (first_failure.empty())
                first_failure = F.rat_string(pairs[i].first) + " ; " +
                                F.rat_string(pairs[i].second) + " " + cls[i];
        }
        if (i < crafted_count)
            rep.checks.push_back({"crafted-case " + cls[i],
                                  F.rat_string(pairs[i].first) + "," +
                                      F.rat_string(pairs[i].second),
                                  ok[i] != 0, true});
    }

    rep.checks.push_back({"samples-all-zero",
                          std::to_string(samples) + " samples, seed " + std::to_string(seed) +
                              (failures ? (", first failure: " + first_failure) : ""),
                          failures == 0, true});
    static const char* const kCases[] = {"(i)(a)", "(i)(b)", "(i)(c)", "(i)(d)", "(i)(e)",
                                         "(i)(f)", "(i)(g)", "(i)(h)", "(ii)(a)", "(ii)(b)",
                                         "(iii)",  "(iv)(a)", "(iv)(b)", "(v)(a)", "(v)(b)",
                                         "(vi)(a)", "(vi)(b)", "(vii)", "(viii)", "(ix)"};
    for (const char* c : kCases) {
        auto it = coverage.find(c);
        std::size_t hits = it == coverage.end() ? 0 : it->second;
        rep.checks.push_back({"case-coverage", std::string(c) + ": " + std::to_string(hits),
                              hits > 0, true});
    }
    return rep;
}

}  // namespace bloch

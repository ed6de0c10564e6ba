#include "bloch/config_space.hpp"

#include "bloch/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bloch {

namespace {

// union-find with path compression; roots tracked to the minimal member
struct UnionFind {
    std::vector<std::int64_t> parent;
    explicit UnionFind(std::size_t n) : parent(n, -1) {}
    std::size_t find(std::size_t x) {
        std::size_t r = x;
        while (parent[r] >= 0) r = static_cast<std::size_t>(parent[r]);
        while (parent[x] >= 0) {
            std::size_t nx = static_cast<std::size_t>(parent[x]);
            parent[x] = static_cast<std::int64_t>(r);
            x = nx;
        }
        return r;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);  // keep the smaller index as root
        parent[a] += parent[b];
        parent[b] = static_cast<std::int64_t>(a);
    }
};

}  // namespace

ConfigSpace::ConfigSpace(RingPtr ring) : ring_(std::move(ring)) {
    const auto& R = *ring_;
    x1_lookup_.assign(R.size() * R.size(), 0);
    // canonical representatives: (a, 1) for all a; (1, b) for non-unit b
    for (std::size_t a = 0; a < R.size(); ++a) x1_.push_back({a, R.one()});
    for (std::size_t b = 0; b < R.size(); ++b)
        if (!R.is_unit(b)) x1_.push_back({R.one(), b});
    for (std::size_t i = 0; i < x1_.size(); ++i)
        x1_lookup_[x1_[i].u1 * R.size() + x1_[i].u2] = i + 1;
}

std::size_t ConfigSpace::x1_index(const ProjPoint& p) const {
    std::size_t v = x1_lookup_[p.u1 * ring_->size() + p.u2];
    if (v == 0) throw std::invalid_argument("x1_index: not a canonical representative");
    return v - 1;
}

ProjPoint ConfigSpace::normalize(std::size_t u1, std::size_t u2) const {
    const auto& R = *ring_;
    if (R.is_unit(u2)) {
        std::size_t s = R.inv(u2);
        return {R.mul(u1, s), R.one()};
    }
    if (R.is_unit(u1)) {
        std::size_t s = R.inv(u1);
        return {R.one(), R.mul(u2, s)};
    }
    throw std::invalid_argument("normalize: vector is not unimodular");
}

bool ConfigSpace::general_position(const ProjPoint& u, const ProjPoint& v) const {
    const auto& R = *ring_;
    return R.is_unit(R.sub(R.mul(u.u1, v.u2), R.mul(u.u2, v.u1)));
}

std::size_t ConfigSpace::dpair(const ProjPoint& u, const ProjPoint& v) const {
    const auto& R = *ring_;
    std::size_t d = R.sub(R.mul(u.u1, v.u2), R.mul(u.u2, v.u1));
    if (!R.is_unit(d)) throw std::invalid_argument("dpair: pair is not in general position");
    return d;
}

Mat2 ConfigSpace::tmat(const ProjPoint& u, const ProjPoint& v) const {
    const auto& R = *ring_;
    std::size_t d = dpair(u, v);
    // (col(u, v))^{-1} * (0 -1; d 0); col(u,v) has rows u, v and determinant d
    std::size_t di = R.inv(d);
    // col^{-1} = di * ( v2 -u2; -v1 u1 )
    std::size_t a = R.mul(di, v.u2), b = R.mul(di, R.neg(u.u2));
    std::size_t c = R.mul(di, R.neg(v.u1)), e = R.mul(di, u.u1);
    // multiply by (0 -1; d 0)
    return {R.mul(b, d), R.neg(a), R.mul(e, d), R.neg(c)};
}

ProjPoint ConfigSpace::apply(const ProjPoint& p, const Mat2& m) const {
    const auto& R = *ring_;
    return normalize(R.add(R.mul(p.u1, m[0]), R.mul(p.u2, m[2])),
                     R.add(R.mul(p.u1, m[1]), R.mul(p.u2, m[3])));
}

ProjPoint ConfigSpace::phi(const ProjPoint& u, const ProjPoint& v, const ProjPoint& w) const {
    return apply(w, tmat(u, v));
}

std::vector<std::size_t> ConfigSpace::phi_n(const std::vector<ProjPoint>& tuple) const {
    if (tuple.size() < 3) throw std::invalid_argument("phi_n: need n >= 3");
    std::vector<std::size_t> out;
    for (std::size_t i = 2; i < tuple.size(); ++i) {
        ProjPoint p = phi(tuple[0], tuple[1], tuple[i]);
        if (p.u2 != ring_->one()) throw std::logic_error("phi_n: image not of the form y+");
        out.push_back(p.u1);
    }
    return out;
}

std::vector<ProjPoint> ConfigSpace::psi_n(const std::vector<std::size_t>& ys) const {
    std::vector<ProjPoint> out;
    out.push_back(plus(ring_->zero()));
    out.push_back(minus(ring_->zero()));
    for (std::size_t y : ys) out.push_back(plus(y));
    return out;
}

std::vector<std::vector<std::size_t>> ConfigSpace::z_set(unsigned n) const {
    const auto& R = *ring_;
    std::vector<std::vector<std::size_t>> out;
    if (n == 0) {
        out.push_back({});  // Z_0 is a single point
        return out;
    }
    std::vector<std::size_t> cur;
    auto ok = [&](std::size_t z) {
        for (std::size_t prev : cur) {
            if (!R.is_unit(R.sub(prev, z))) return false;  // z/prev in W <=> z - prev unit
        }
        return true;
    };
    std::function<void()> rec = [&]() {
        if (cur.size() == n) {
            out.push_back(cur);
            return;
        }
        for (std::size_t z : R.wn_set()) {
            if (ok(z)) {
                cur.push_back(z);
                rec();
                cur.pop_back();
            }
        }
    };
    rec();
    return out;
}

std::vector<std::vector<ProjPoint>> ConfigSpace::all_tuples(unsigned n, std::size_t guard) const {
    double bound = 1;
    for (unsigned i = 0; i < n; ++i) bound *= static_cast<double>(x1_.size());
    if (bound > static_cast<double>(guard))
        throw std::invalid_argument("orbit enumeration guard exceeded");
    std::vector<std::vector<ProjPoint>> out;
    std::vector<ProjPoint> cur;
    std::function<void()> rec = [&]() {
        if (cur.size() == n) {
            out.push_back(cur);
            return;
        }
        for (const auto& p : x1_) {
            bool ok = true;
            for (const auto& q : cur)
                if (!general_position(p, q)) {
                    ok = false;
                    break;
                }
            if (ok) {
                cur.push_back(p);
                rec();
                cur.pop_back();
            }
        }
    };
    rec();
    return out;
}

std::vector<Mat2> ConfigSpace::sl2_generators() const {
    const auto& R = *ring_;
    std::vector<Mat2> gens;
    for (std::size_t m = 1; m < R.size(); ++m) {
        gens.push_back({R.one(), m, R.zero(), R.one()});
        gens.push_back({R.one(), R.zero(), m, R.one()});
    }
    return gens;
}

std::vector<Mat2> ConfigSpace::gl2_extra_generators() const {
    const auto& R = *ring_;
    std::vector<Mat2> gens;
    for (std::size_t u : R.units()) {
        if (u == R.one()) continue;
        gens.push_back({u, R.zero(), R.zero(), R.one()});
    }
    return gens;
}

ConfigSpace::Census ConfigSpace::orbit_census(unsigned n, std::size_t guard) const {
    auto tuples = all_tuples(n, guard);
    const std::size_t N = tuples.size();

    auto index_of = [&]() {
        // pack tuple as mixed radix over x1 indices
        std::vector<std::size_t> packed(N);
        for (std::size_t i = 0; i < N; ++i) {
            std::size_t id = 0;
            for (const auto& p : tuples[i]) id = id * x1_.size() + x1_index(p);
            packed[i] = id;
        }
        return packed;
    }();
    // map packed id -> node
    std::size_t span = 1;
    for (unsigned i = 0; i < n; ++i) span *= x1_.size();
    std::vector<std::uint32_t> node(span, 0);
    for (std::size_t i = 0; i < N; ++i) node[index_of[i]] = static_cast<std::uint32_t>(i) + 1;

    auto run = [&](const std::vector<Mat2>& gens, UnionFind& uf) {
        std::vector<std::uint32_t> image(N);
        for (const auto& g : gens) {
            parallel_for(N, [&](std::size_t i) {
                std::size_t id = 0;
                for (const auto& p : tuples[i]) id = id * x1_.size() + x1_index(apply(p, g));
                image[i] = node[id] - 1;
            });
            for (std::size_t i = 0; i < N; ++i) uf.unite(i, image[i]);
        }
    };

    UnionFind uf(N);
    run(sl2_generators(), uf);
    Census c;
    c.n = n;
    c.tuple_count = N;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < N; ++i)
        if (uf.find(i) == i) roots.push_back(i);
    c.sl2_orbits = roots.size();
    for (std::size_t r : roots) c.transversal.push_back(tuples[r]);

    UnionFind uf2 = uf;
    run(gl2_extra_generators(), uf2);
    std::size_t g2 = 0;
    for (std::size_t i = 0; i < N; ++i)
        if (uf2.find(i) == i) ++g2;
    c.gl2_orbits = g2;
    return c;
}

ConfigSpace::Census ConfigSpace::orbit_census_reference(unsigned n, std::size_t guard) const {
    const auto& R = *ring_;
    if (R.size() > 9) throw std::invalid_argument("reference census is limited to |A| <= 9");
    auto tuples = all_tuples(n, guard);
    const std::size_t N = tuples.size();
    std::size_t span = 1;
    for (unsigned i = 0; i < n; ++i) span *= x1_.size();
    std::vector<std::uint32_t> node(span, 0);
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t id = 0;
        for (const auto& p : tuples[i]) id = id * x1_.size() + x1_index(p);
        node[id] = static_cast<std::uint32_t>(i) + 1;
    }
    // enumerate the full groups
    std::vector<Mat2> sl2, gl2;
    for (std::size_t a = 0; a < R.size(); ++a)
        for (std::size_t b = 0; b < R.size(); ++b)
            for (std::size_t c = 0; c < R.size(); ++c)
                for (std::size_t d = 0; d < R.size(); ++d) {
                    std::size_t det = R.sub(R.mul(a, d), R.mul(b, c));
                    if (!R.is_unit(det)) continue;
                    gl2.push_back({a, b, c, d});
                    if (det == R.one()) sl2.push_back({a, b, c, d});
                }
    auto orbits_under = [&](const std::vector<Mat2>& group) {
        UnionFind uf(N);
        for (std::size_t i = 0; i < N; ++i) {
            for (const auto& g : group) {
                std::size_t id = 0;
                for (const auto& p : tuples[i]) id = id * x1_.size() + x1_index(apply(p, g));
                uf.unite(i, node[id] - 1);
            }
        }
        std::size_t count = 0;
        std::vector<std::size_t> roots;
        for (std::size_t i = 0; i < N; ++i)
            if (uf.find(i) == i) {
                ++count;
                roots.push_back(i);
            }
        return std::make_pair(count, roots);
    };
    Census c;
    c.n = n;
    c.tuple_count = N;
    auto [sc, roots] = orbits_under(sl2);
    c.sl2_orbits = sc;
    for (std::size_t r : roots) c.transversal.push_back(tuples[r]);
    c.gl2_orbits = orbits_under(gl2).first;
    return c;
}

std::vector<Int> ConfigSpace::cross_ratio(const ScissorsTower& tower,
                                          const std::array<ProjPoint, 4>& c) const {
    const auto& R = *ring_;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (!general_position(c[i], c[j]))
                throw std::invalid_argument("cross_ratio: degenerate tuple");
    std::size_t d12 = dpair(c[0], c[1]);
    std::size_t d13 = dpair(c[0], c[2]);
    std::size_t d14 = dpair(c[0], c[3]);
    std::size_t d23 = dpair(c[1], c[2]);
    std::size_t d24 = dpair(c[1], c[3]);
    std::size_t cls = R.mul(R.mul(d13, d12), R.inv(d23));
    std::size_t arg = R.mul(R.mul(d14, d23), R.inv(R.mul(d24, d13)));
    return tower.symbol(R.square_class(cls), arg);
}

Report ConfigSpace::verify_boundary(const ScissorsTower& tower) const {
    Report rep;
    rep.suite = "boundary";
    rep.ring = ring_->descriptor();
    const auto& R = *ring_;
    auto z2 = z_set(2);
    std::vector<CheckResult> checks(z2.size() * 2);
    parallel_for(z2.size(), [&](std::size_t zi) {
        std::size_t z1 = z2[zi][0], z2e = z2[zi][1];
        std::vector<ProjPoint> t5 = {plus(R.zero()), minus(R.zero()), plus(R.one()), plus(z1),
                                     plus(z2e)};
        // delta_4: alternating sum over omitted entries, pushed through cr
        auto total = tower.rp_zero();
        for (int omit = 0; omit < 5; ++omit) {
            std::array<ProjPoint, 4> q{};
            int k = 0;
            for (int i = 0; i < 5; ++i)
                if (i != omit) q[k++] = t5[i];
            auto v = cross_ratio(tower, q);
            if (omit % 2 == 0)
                total = add_rows(total, v);
            else
                total = sub_rows(total, v);
        }
        // the explicit five-term combination
        const std::size_t one = R.one();
        std::size_t z1i = R.inv(z1), z2i = R.inv(z2e);
        auto ft = tower.symbol(R.square_class(R.sub(one, z1)),
                               R.mul(R.sub(one, z1), R.inv(R.sub(one, z2e))));
        ft = sub_rows(ft, tower.symbol(R.square_class(R.sub(z1i, one)),
                                       R.mul(R.sub(one, z1i), R.inv(R.sub(one, z2i)))));
        ft = add_rows(ft, tower.symbol(R.square_class(z1), R.mul(z2e, z1i)));
        ft = sub_rows(ft, tower.symbol(0, z2e));
        ft = add_rows(ft, tower.symbol(0, z1));
        std::string args = R.element_string(z1) + "," + R.element_string(z2e);
        checks[2 * zi] = {"boundary-matches-five-term", args,
                          tower.rp_module().equal(total, ft), true};
        checks[2 * zi + 1] = {"five-term-vanishes", args, tower.rp_zero_element(ft), true};
    });
    rep.checks = std::move(checks);
    return rep;
}

}  // namespace bloch

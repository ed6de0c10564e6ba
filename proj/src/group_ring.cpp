#include "bloch/group_ring.hpp"

#include <stdexcept>

namespace bloch {

GroupRing::GroupRing(RingPtr ring) : ring_(std::move(ring)), rank_(ring_->square_class_rank()) {}

std::vector<Int> GroupRing::one() const {
    auto v = zero();
    v[0] = 1;
    return v;
}

std::vector<Int> GroupRing::basis(std::uint32_t cls) const {
    auto v = zero();
    v[cls] = 1;
    return v;
}

std::vector<Int> GroupRing::of_unit(std::size_t a) const { return basis(ring_->square_class(a)); }

std::vector<Int> GroupRing::add(const std::vector<Int>& x, const std::vector<Int>& y) const {
    return add_rows(x, y);
}

std::vector<Int> GroupRing::sub(const std::vector<Int>& x, const std::vector<Int>& y) const {
    return sub_rows(x, y);
}

std::vector<Int> GroupRing::mul(const std::vector<Int>& x, const std::vector<Int>& y) const {
    auto out = zero();
    const std::size_t n = dimension();
    for (std::size_t g = 0; g < n; ++g) {
        if (x[g] == 0) continue;
        for (std::size_t h = 0; h < n; ++h) {
            if (y[h] == 0) continue;
            out[g ^ h] += x[g] * y[h];
        }
    }
    return out;
}

std::vector<Int> GroupRing::scale(const std::vector<Int>& x, const Int& c) const {
    return scale_row(x, c);
}

Int GroupRing::augmentation(const std::vector<Int>& x) const {
    Int s = 0;
    for (const auto& v : x) s += v;
    return s;
}

std::vector<Int> GroupRing::pf(std::size_t a) const {
    auto v = of_unit(a);
    v[0] -= 1;
    return v;
}

std::vector<Int> GroupRing::pp(std::size_t a) const {
    auto v = of_unit(a);
    v[0] += 1;
    return v;
}

std::vector<Int> GroupRing::ppm(std::size_t a) const {
    auto v = scale_row(of_unit(a), Int(-1));
    v[0] += 1;
    return v;
}

std::vector<Character> characters(const GroupRing& gr) {
    std::vector<Character> out;
    const std::uint32_t count = 1u << gr.rank();
    for (std::uint32_t mask = 0; mask < count; ++mask) out.push_back({gr.rank(), mask});
    return out;
}

GModulePresentation::GModulePresentation(RingPtr ring, PresentedModule mod,
                                         std::vector<IntMatrix> basis_action)
    : ring_(std::move(ring)), mod_(std::move(mod)), basis_action_(std::move(basis_action)) {
    if (basis_action_.size() != ring_->square_class_rank())
        throw std::invalid_argument("GModulePresentation: action count != square-class rank");
    for (const auto& m : basis_action_) {
        if (m.rows() != mod_.generators() || m.cols() != mod_.generators())
            throw std::invalid_argument("GModulePresentation: action shape mismatch");
    }
}

std::vector<Int> GModulePresentation::act_class(std::uint32_t cls, const std::vector<Int>& x) const {
    std::vector<Int> v = x;
    for (unsigned b = 0; b < basis_action_.size(); ++b) {
        if (cls & (1u << b)) v = basis_action_[b].row_times(v);
    }
    return v;
}

std::vector<Int> GModulePresentation::act_unit(std::size_t a, const std::vector<Int>& x) const {
    return act_class(ring_->square_class(a), x);
}

std::vector<Int> GModulePresentation::act_ring(const std::vector<Int>& gre, const GroupRing& gr,
                                               const std::vector<Int>& x) const {
    std::vector<Int> out(mod_.generators());
    for (std::uint32_t cls = 0; cls < gr.dimension(); ++cls) {
        if (gre[cls] == 0) continue;
        auto t = act_class(cls, x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += gre[cls] * t[i];
    }
    return out;
}

GModulePresentation GModulePresentation::with_module(PresentedModule m) const {
    if (m.generators() != mod_.generators())
        throw std::invalid_argument("with_module: generator count changed");
    return GModulePresentation(ring_, std::move(m), basis_action_);
}

PresentedModule eigen_component(const GModulePresentation& m, const Character& chi) {
    const PresentedModule& base = m.module();
    const std::size_t n = base.generators();
    std::vector<std::vector<Int>> extra;
    for (unsigned b = 0; b < m.rank(); ++b) {
        int s = (chi.sign_mask & (1u << b)) ? -1 : 1;
        const IntMatrix& act = m.basis_action(b);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Int> row = act.row(j);
            row[j] -= s;
            extra.push_back(std::move(row));
        }
    }
    return odd_part(quotient_by(base, extra));
}

SubmoduleResult aug_component(const GModulePresentation& m) {
    const PresentedModule om = odd_part(m.module());
    const std::size_t n = om.generators();
    std::vector<std::vector<Int>> gens;
    for (unsigned b = 0; b < m.rank(); ++b) {
        const IntMatrix& act = m.basis_action(b);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Int> row = act.row(j);
            row[j] -= 1;
            gens.push_back(std::move(row));
        }
    }
    return submodule(om, gens);
}

bool in_eigen_ideal(const GModulePresentation& m, const Character& chi, const std::vector<Int>& x) {
    const PresentedModule& mod = m.module();
    Int e = mod.structure().exponent();
    if (e % 2 == 0) throw std::invalid_argument("in_eigen_ideal: module must have odd exponent");
    // y = prod_b (1 + chi(b)<b>) x, then divide by 2^rank modulo the exponent
    std::vector<Int> y = x;
    for (unsigned b = 0; b < m.rank(); ++b) {
        int s = (chi.sign_mask & (1u << b)) ? -1 : 1;
        auto t = m.act_class(1u << b, y);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * t[i];
    }
    if (e > 1) {
        Int inv2 = mod_inverse(Int(2), e);
        for (unsigned b = 0; b < m.rank(); ++b)
            for (auto& v : y) v *= inv2;
    }
    // x in I^chi M  iff  e_chi x = 0  iff  x = (1 - e_chi) x
    return mod.is_zero(y);
}

}  // namespace bloch

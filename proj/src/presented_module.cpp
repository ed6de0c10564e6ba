#include "bloch/presented_module.hpp"

#include <sstream>
#include <stdexcept>

namespace bloch {

Int Structure::torsion_order() const {
    Int o = 1;
    for (const auto& d : torsion) o *= d;
    return o;
}

Int Structure::exponent() const { return torsion.empty() ? Int(1) : torsion.back(); }

std::string Structure::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank > 0) {
        os << "Z";
        if (free_rank > 1) os << "^" << free_rank;
        first = false;
    }
    for (const auto& d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

std::string Structure::to_json() const {
    std::ostringstream os;
    os << "{\"free_rank\": " << free_rank << ", \"torsion\": [";
    for (std::size_t i = 0; i < torsion.size(); ++i) {
        if (i) os << ", ";
        os << torsion[i];
    }
    os << "]}";
    return os.str();
}

struct PresentedModule::Impl {
    std::size_t gens;
    SparseMatrix relations;
    std::once_flag basis_once, structure_once;
    std::unique_ptr<HermiteBasis> basis;
    std::unique_ptr<Structure> structure;
};

PresentedModule::PresentedModule(std::size_t generators, IntMatrix relations)
    : impl_(std::make_shared<Impl>()) {
    if (relations.cols() != generators && relations.rows() != 0)
        throw std::invalid_argument("PresentedModule: relation width != generator count");
    impl_->gens = generators;
    impl_->relations = SparseMatrix(generators);
    for (std::size_t i = 0; i < relations.rows(); ++i)
        impl_->relations.append_dense(relations.row(i));
}

PresentedModule::PresentedModule(std::size_t generators, SparseMatrix relations)
    : impl_(std::make_shared<Impl>()) {
    if (relations.cols != generators)
        throw std::invalid_argument("PresentedModule: relation width != generator count");
    impl_->gens = generators;
    impl_->relations = std::move(relations);
}

PresentedModule PresentedModule::free_module(std::size_t rank) {
    return PresentedModule(rank, IntMatrix(0, rank));
}

std::size_t PresentedModule::generators() const { return impl_->gens; }

const SparseMatrix& PresentedModule::relations() const { return impl_->relations; }

const HermiteBasis& PresentedModule::relation_basis() const {
    std::call_once(impl_->basis_once, [this] {
        auto b = std::make_unique<HermiteBasis>(impl_->gens);
        for (const auto& row : impl_->relations.data) b->insert(row);
        impl_->basis = std::move(b);
    });
    return *impl_->basis;
}

const Structure& PresentedModule::structure() const {
    std::call_once(impl_->structure_once, [this] {
        auto snf = smith_normal_form(relation_basis().to_matrix());
        auto s = std::make_unique<Structure>();
        std::size_t rank = 0;
        for (const auto& d : snf.factors) {
            if (d != 0) ++rank;
            if (d > 1) s->torsion.push_back(d);
        }
        s->free_rank = impl_->gens - rank;
        impl_->structure = std::move(s);
    });
    return *impl_->structure;
}

std::vector<Int> PresentedModule::normal_form(const std::vector<Int>& coords) const {
    return relation_basis().reduce(coords);
}

bool PresentedModule::is_zero(const std::vector<Int>& coords) const {
    return relation_basis().contains(coords);
}

bool PresentedModule::equal(const std::vector<Int>& a, const std::vector<Int>& b) const {
    return is_zero(sub_rows(a, b));
}

Int PresentedModule::order() const {
    if (!is_finite()) throw std::logic_error("order(): module is infinite");
    return structure().torsion_order();
}

ModuleElement ModuleElement::operator+(const ModuleElement& o) const {
    return {mod, add_rows(coords, o.coords)};
}
ModuleElement ModuleElement::operator-(const ModuleElement& o) const {
    return {mod, sub_rows(coords, o.coords)};
}
ModuleElement ModuleElement::operator-() const { return {mod, scale_row(coords, Int(-1))}; }
ModuleElement ModuleElement::times(const Int& c) const { return {mod, scale_row(coords, c)}; }
bool ModuleElement::operator==(const ModuleElement& o) const { return mod.equal(coords, o.coords); }

KernelResult kernel_of_map(const IntMatrix& f, const PresentedModule& m, const PresentedModule& n) {
    if (f.rows() != m.generators() || f.cols() != n.generators())
        throw std::invalid_argument("kernel_of_map: shape mismatch");
    // well-definedness: relations of M must map into the relation lattice of N
    for (const auto& [piv, vec] : m.relation_basis().rows()) {
        if (!n.relation_basis().contains(f.row_times(vec)))
            throw std::invalid_argument("kernel_of_map: map not well-defined on presentations");
    }
    // K = {x : x f in L_N}
    HermiteBasis K = preimage_lattice(f, n.relation_basis());
    IntMatrix incl = K.to_matrix();
    // relations: coordinates of L_M basis vectors in the K basis
    std::vector<std::vector<Int>> rel_rows;
    for (const auto& [piv, vec] : m.relation_basis().rows()) {
        std::vector<Int> c;
        if (!K.solve(vec, c))
            throw std::logic_error("kernel_of_map: relation not inside kernel lattice");
        rel_rows.push_back(std::move(c));
    }
    PresentedModule K_mod(K.rank(), IntMatrix::from_rows(std::move(rel_rows), K.rank()));
    return {std::move(K_mod), std::move(incl)};
}

SubmoduleResult submodule(const PresentedModule& m, const std::vector<std::vector<Int>>& gens) {
    // lattice T = span(gens) + L_M; submodule = T / L_M
    HermiteBasis T(m.generators());
    for (const auto& g : gens) T.insert(g);
    for (const auto& [piv, vec] : m.relation_basis().rows()) T.insert(vec);
    IntMatrix incl = T.to_matrix();
    std::vector<std::vector<Int>> rel_rows;
    for (const auto& [piv, vec] : m.relation_basis().rows()) {
        std::vector<Int> c;
        if (!T.solve(vec, c)) throw std::logic_error("submodule: relation escaped lattice");
        rel_rows.push_back(std::move(c));
    }
    PresentedModule sub(T.rank(), IntMatrix::from_rows(std::move(rel_rows), T.rank()));
    return {std::move(sub), std::move(incl)};
}

PresentedModule quotient_by(const PresentedModule& m, const std::vector<std::vector<Int>>& gens) {
    SparseMatrix rel = m.relations();
    for (const auto& g : gens) rel.append_dense(g);
    return PresentedModule(m.generators(), std::move(rel));
}

SubmoduleResult image_of_map(const IntMatrix& f, const PresentedModule& m, const PresentedModule& n) {
    if (f.rows() != m.generators() || f.cols() != n.generators())
        throw std::invalid_argument("image_of_map: shape mismatch");
    std::vector<std::vector<Int>> gens;
    for (std::size_t i = 0; i < f.rows(); ++i) gens.push_back(f.row(i));
    return submodule(n, gens);
}

PresentedModule odd_part(const PresentedModule& m) {
    const Structure& s = m.structure();
    Int e = s.exponent();
    Int twopow = 1;
    while (e % 2 == 0) {
        e /= 2;
        twopow *= 2;
    }
    if (twopow == 1) return m;
    // lattice K = {x : 2^s x in L}
    IntMatrix scaled(m.generators(), m.generators());
    for (std::size_t i = 0; i < m.generators(); ++i) scaled.at(i, i) = twopow;
    HermiteBasis K = preimage_lattice(scaled, m.relation_basis());
    return PresentedModule(m.generators(), K.to_matrix());
}

std::vector<std::vector<Int>> enumerate_elements(const PresentedModule& m, std::size_t limit) {
    if (!m.is_finite()) throw std::logic_error("enumerate_elements: infinite module");
    if (m.order() > limit) throw std::logic_error("enumerate_elements: order exceeds limit");
    auto snf = smith_normal_form(m.relation_basis().to_matrix(), /*with_transforms=*/true);
    const std::size_t n = m.generators();
    // L * B * R = D with rows of B spanning the relation lattice; the
    // composition Z^n -> Z^n, y |-> y R^{-T}... work with columns instead:
    // coordinates transform x -> x * R, in which the lattice is spanned by
    // d_j e_j. Enumerate residues and map back through R^{-1}.
    std::vector<Int> mods(n, Int(0));
    for (std::size_t j = 0; j < snf.factors.size(); ++j) mods[j] = snf.factors[j];
    // finite module: every generator direction must be constrained
    for (std::size_t j = 0; j < n; ++j)
        if (mods[j] == 0) throw std::logic_error("enumerate_elements: free direction");
    const IntMatrix& Rinv = *snf.right_inverse;

    std::vector<std::vector<Int>> out;
    std::vector<Int> digits(n, Int(0));
    while (true) {
        // x = digits * R^{-1}
        std::vector<Int> x = Rinv.row_times(digits);
        out.push_back(m.normal_form(x));
        std::size_t j = 0;
        while (j < n) {
            digits[j] += 1;
            if (digits[j] < mods[j]) break;
            digits[j] = 0;
            ++j;
        }
        if (j == n) break;
    }
    return out;
}

}  // namespace bloch

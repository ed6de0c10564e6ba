#pragma once

#include "bloch/group_ring.hpp"
#include "bloch/presented_module.hpp"
#include "bloch/report.hpp"
#include "bloch/ring.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace bloch {

// The scissors-congruence tower of one finite local ring A with residue
// field of size >= 4:
//
//   RP(A)  refined pre-Bloch group, a Z[G_A]-module on symbols [x], x in W_A,
//          with the five-term relations S_{x,y} expanded over G_A;
//   P(A)   its coinvariants (plain pre-Bloch group);
//   lambda1 [x] -> <<1-x>><<x>>,  lambda2 [x] -> (1-x)∘x;
//   B(A) = ker(lambda) in P,  RB(A) = ker(lambda1, lambda2) in RP;
//   psi_1, psi_2 cocycles, the constant C~_A, C_A = 2 C~_A;
//   K_i = <psi_i(x)>, D_A = R_A C_A, RP~ = RP/K_1, RP- = RP/(K_1 + D_A);
//   lambda~1 into R_A / p+(-1) R_A with kernel the "Q-kernel".
//
// Elements of RP are integer coordinate vectors over generators
// (class g, symbol x) laid out as g * |W_A| + windex(x).
class ScissorsTower {
public:
    explicit ScissorsTower(RingPtr ring);

    const RingPtr& ring() const { return ring_; }
    const GroupRing& group_ring() const { return gring_; }

    std::size_t wn_count() const { return wn_.size(); }
    const std::vector<std::size_t>& wn() const { return wn_; }
    std::size_t windex(std::size_t x) const;
    std::size_t rp_generator(std::uint32_t cls, std::size_t x) const;
    std::size_t relation_count() const { return relation_count_; }

    const GModulePresentation& rp() const { return *rp_; }
    const PresentedModule& rp_module() const { return rp_->module(); }

    // ---- elements of RP
    std::vector<Int> rp_zero() const;
    std::vector<Int> symbol(std::uint32_t cls, std::size_t x) const;
    std::vector<Int> symbol_of(std::size_t x) const { return symbol(0, x); }
    std::vector<Int> five_term(std::size_t x, std::size_t y) const;  // S_{x,y}
    std::vector<Int> psi(int i, std::size_t unit) const;
    std::vector<Int> cbconst_at(std::size_t a) const;  // C(a)
    const std::vector<Int>& cbconst() const;           // C~_A (least-index witness)
    const std::vector<Int>& cconst() const;            // C_A = 2 C~_A
    // group-ring multiplication on RP coordinates
    std::vector<Int> act(const std::vector<Int>& gre, const std::vector<Int>& x) const;

    bool rp_zero_element(const std::vector<Int>& v) const { return rp_module().is_zero(v); }

    // ---- coinvariants
    const PresentedModule& p_module() const { return *p_; }
    std::vector<Int> project_p(const std::vector<Int>& rp_coords) const;

    // ---- targets
    const PresentedModule& asym2() const { return *asym_; }
    std::vector<Int> asym_pair(std::size_t x, std::size_t y) const;  // x ∘ y
    const IntMatrix& lambda1_matrix() const { return lambda1_; }
    const IntMatrix& lambda2_matrix() const { return lambda2_; }
    std::vector<Int> lambda1(const std::vector<Int>& v) const { return lambda1_.row_times(v); }
    std::vector<Int> lambda2(const std::vector<Int>& v) const { return lambda2_.row_times(v); }

    // ---- kernels
    const PresentedModule& bloch() const;         // B(A)
    const KernelResult& refined_bloch() const;    // RB(A), generators in RP coords

    // ---- submodules
    const SubmoduleResult& k_submodule(int i) const;  // K_1 or K_2
    const SubmoduleResult& dmod() const;              // D_A inside RP
    // N_A = group generated by +-Phi(x)u^2; sorted unit indices
    const std::vector<std::size_t>& tnorm_subgroup() const;
    std::size_t rsq_order() const;  // |G~_A| = [A^x : N_A]
    bool phi_has_root() const;      // X^2 - X + 1 has a root in A

    struct Reduced {
        GModulePresentation rp_tilde;  // RP / K_1
        GModulePresentation rp_bar;    // RP / (K_1 + D_A)
        PresentedModule qsgr;          // R_A / p+(-1) R_A
        KernelResult qkernel;          // ker(lambda~1) in RP~
        PresentedModule qasym;         // asym2 / <(-x)∘x>
        KernelResult qrb;              // ker(lambda~2 restricted to the Q-kernel)
        PresentedModule qp;            // P / <[x] + [x^-1]>
    };
    const Reduced& reduced() const;
    std::vector<Int> lambda_tilde1(const std::vector<Int>& rp_tilde_coords) const;

    // K_V(A) = <[au] - [a] : a in W_A, u in U_1> inside RP-bar
    const SubmoduleResult& kv_local() const;
    GModulePresentation kv_gmodule() const;  // K_V with its inherited G_A-action

    // ---- verification suites
    Report verify_key_identity() const;
    Report verify_cocycle_suite() const;
    Report verify_prop_two() const;
    Report verify_rbl0() const;      // I_A . RB(A) = 0, integrally
    Report verify_constants() const; // C(a) constancy, 3C~ = psi1(-1), 6C~ = 0, C_A = 0 iff Phi root
    Report verify_reduced() const;   // RP-bar identities and the Q-kernel cokernel bound
    Report verify_kv() const;        // RP-bar(A) / K_V(A) matches RP-bar(k)

private:
    void build();
    std::vector<Int> psi_w(int i, std::size_t x) const;  // x in W_A

    RingPtr ring_;
    GroupRing gring_;
    std::vector<std::size_t> wn_;
    std::vector<std::size_t> widx_;  // element index -> W position (or npos)
    std::size_t block_ = 0;          // |W_A|
    std::size_t ngen_ = 0;           // |G_A| * |W_A|
    std::size_t relation_count_ = 0;

    std::optional<GModulePresentation> rp_;
    std::optional<PresentedModule> p_;
    std::optional<PresentedModule> asym_;
    IntMatrix lambda1_, lambda2_;
    std::vector<Int> cb_, cc_;

    struct Lazy;
    std::shared_ptr<Lazy> lazy_;
};

// convenience constructors used by the CLI and tests
ScissorsTower& tower_for(const RingPtr& ring);  // process-wide cache, keyed by descriptor

}  // namespace bloch

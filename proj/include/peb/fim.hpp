#pragma once

#include <optional>
#include <span>
#include <vector>

#include "peb/channel.hpp"
#include "peb/link.hpp"
#include "peb/types.hpp"

namespace peb {

/// Whether path overlap is carried through the sampled FIM or neglected
/// (diagonal per-MPC ranging information).
enum class OverlapModel { full, no_overlap };

/// Fisher information blocks over the stacked MPC parameter vector
/// [tau; Re alpha; Im alpha] of one link.
struct FimBlocks {
    Mat lambda_a;     // K x K, delay-delay
    Mat lambda_b_re;  // K x K, delay-Re(alpha)
    Mat lambda_b_im;  // K x K, delay-Im(alpha)
    Mat lambda_c;     // K x K, amplitude Gram (Lambda_C')

    int size() const { return static_cast<int>(lambda_a.rows()); }
    /// The full 3K x 3K signal-parameter FIM.
    Mat assemble() const;
};

/// Equivalent delay-domain information of a link (K x K) after
/// marginalizing the complex amplitudes.
struct DelayInfo {
    Mat info;
    bool overlap_degenerate = false;
};

/// 2 x 2 (or stacked) position information with metadata.
struct PositionEfim {
    Mat2 info = Mat2::Zero();
    bool overlap_degenerate = false;
};

/// Error ellipse: semi axes (m) and orientation of the major axis.
struct Ellipse {
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double orientation = 0.0;  // radians in [0, pi)
};

/// Sampled-signal FIM blocks of one link. The shared noise covariance
/// C_n = sigma_n^2 I + C_c is applied through a banded Cholesky
/// factorization; no explicit inverse is formed.
FimBlocks fim_blocks(const LinkModel& link, const RrcPulse& pulse,
                     const SignalParams& params, const DmParams& dm);

/// Schur complement Lambda_A - Lambda_B Lambda_C^{-1} Lambda_B^T over the
/// amplitude nuisance parameters. Near-singular Lambda_C (unresolvable
/// path overlap) is regularized and flagged.
DelayInfo efim_delays(const FimBlocks& blocks);

/// Diagonal no-overlap ranging information: lambda_k = 8 pi^2 beta_eff^2
/// |alpha_k|^2 / (N_0 + T_N S_nu(tau_k)).
Vec no_overlap_delay_info(const LinkModel& link, const RrcPulse& pulse,
                          const SignalParams& params, const DmParams& dm);

/// Per-link delay-domain information under the chosen model.
DelayInfo link_delay_info(const LinkModel& link, OverlapModel model,
                          const RrcPulse& pulse, const SignalParams& params,
                          const DmParams& dm);

/// ToA position EFIM: sum over links of G^T Lambda~ G, with G the
/// agent-side (or monostatic) gradient matrix.
PositionEfim efim_position_toa(std::span<const LinkModel> links, OverlapModel model,
                               const RrcPulse& pulse, const SignalParams& params,
                               const DmParams& dm);

/// TDoA position EFIM: one clock-offset nuisance per unsynchronized anchor
/// group (link_group[i] names the group of links[i]); offsets add uniformly
/// to all of a group's delays and are marginalized out.
PositionEfim efim_position_tdoa(std::span<const LinkModel> links,
                                std::span<const int> link_group, int group_count,
                                OverlapModel model, const RrcPulse& pulse,
                                const SignalParams& params, const DmParams& dm);

struct CoopOptions {
    bool include_monostatic = true;
    bool include_cooperative = true;
    /// Prior information mu * I added to every partner's position block
    /// (0 disables; large values emulate perfectly known partners).
    double partner_prior = 0.0;
};

struct CoopResult {
    Mat joint;                           // 2N x 2N position FIM
    std::vector<PositionEfim> per_agent; // 2 x 2 EFIMs after Schur reduction
};

/// Cooperative scenario: monostatic blocks on the diagonal, bistatic
/// agent-to-agent links in the cross blocks; per-agent EFIM is the Schur
/// complement against all other agents' positions.
CoopResult efim_position_coop(int agent_count, std::span<const LinkModel> links,
                              const CoopOptions& opts, OverlapModel model,
                              const RrcPulse& pulse, const SignalParams& params,
                              const DmParams& dm);

/// Position error bound sqrt(tr(I_p^{-1})); +inf for (near-)singular I_p.
double peb(const Mat2& position_fim);

/// Scaled standard-deviation ellipse of I_p^{-1}; nullopt when singular.
std::optional<Ellipse> error_ellipse(const Mat2& position_fim, double scale);

}  // namespace peb

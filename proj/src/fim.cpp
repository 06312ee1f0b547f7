#include "peb/fim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "peb/banded.hpp"

namespace peb {

namespace {

using std::numbers::pi;

constexpr double kConditionLimit = 1e12;
constexpr double kSingularTol = 1e-12;

// Noise covariance band: C[j+d, j] = T_s sum_i S(t_i) s(t_{j+d}-t_i) s(t_j-t_i)
// plus sigma_n^2 on the diagonal. The pulse support limits the bandwidth.
BandMatrix noise_covariance_band(const LinkModel& link, const RrcPulse& pulse,
                                 const SignalParams& params, const DmParams& dm)
{
    const SampleWindow& w = link.window;
    const int n = w.size;
    const double ts = w.dt;
    const int m = static_cast<int>(std::ceil(pulse.support_radius() / ts));
    const int bw = std::min(2 * m, n - 1);

    Vec taps(m + 1);
    for (int d = 0; d <= m; ++d) taps[d] = pulse(d * ts);
    Vec pdp(n);
    for (int i = 0; i < n; ++i) pdp[i] = dm_pdp(w.time(i), dm, link.tau_los);

    BandMatrix c(n, bw);
    Mat& data = c.storage();
    for (int j = 0; j < n; ++j) {
        const int d_max = std::min(bw, n - 1 - j);
        for (int d = 0; d <= d_max; ++d) {
            // overlap of the two pulse supports centered at j and j+d
            const int lo = std::max(0, j + d - m);
            const int hi = std::min(n - 1, j + m);
            double acc = 0.0;
            for (int i = lo; i <= hi; ++i) {
                if (pdp[i] == 0.0) continue;
                acc += pdp[i] * taps[std::abs(j - i)] * taps[std::abs(j + d - i)];
            }
            data(d, j) = ts * acc;
        }
        data(0, j) += params.noise_variance();
    }
    return c;
}

// Columns [s_tau_1 .. s_tau_K, ds_tau_1 .. ds_tau_K], support-limited fill.
Mat signal_and_derivative_columns(const LinkModel& link, const RrcPulse& pulse)
{
    const SampleWindow& w = link.window;
    const int k = link.mpc_count();
    Mat v = Mat::Zero(w.size, 2 * k);
    for (int c = 0; c < k; ++c) {
        const double tau = link.mpcs[c].delay;
        const int lo = std::max(0, static_cast<int>(std::floor((tau - pulse.support_radius() - w.t_start) / w.dt)));
        const int hi = std::min(w.size - 1, static_cast<int>(std::ceil((tau + pulse.support_radius() - w.t_start) / w.dt)));
        for (int i = lo; i <= hi; ++i) {
            const double t = w.time(i) - tau;
            v(i, c) = pulse(t);
            v(i, k + c) = -pulse.derivative(t);
        }
    }
    return v;
}

Mat symmetrize(Mat m) { return 0.5 * (m + m.transpose()); }

// Generalized inverse through an eigendecomposition; rank-deficient
// directions are dropped (generalized Schur complement).
Mat pseudo_inverse_psd(const Mat& a)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    const Vec& ev = es.eigenvalues();
    const double cutoff = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * kSingularTol;
    Vec inv = Vec::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] > cutoff && ev[i] > 0.0) inv[i] = 1.0 / ev[i];
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Mat FimBlocks::assemble() const
{
    const int k = size();
    Mat full = Mat::Zero(3 * k, 3 * k);
    full.block(0, 0, k, k) = lambda_a;
    full.block(0, k, k, k) = lambda_b_re;
    full.block(0, 2 * k, k, k) = lambda_b_im;
    full.block(k, 0, k, k) = lambda_b_re.transpose();
    full.block(2 * k, 0, k, k) = lambda_b_im.transpose();
    full.block(k, k, k, k) = lambda_c;
    full.block(2 * k, 2 * k, k, k) = lambda_c;
    return full;
}

FimBlocks fim_blocks(const LinkModel& link, const RrcPulse& pulse,
                     const SignalParams& params, const DmParams& dm)
{
    const int k = link.mpc_count();
    FimBlocks blocks;
    blocks.lambda_a = Mat::Zero(k, k);
    blocks.lambda_b_re = Mat::Zero(k, k);
    blocks.lambda_b_im = Mat::Zero(k, k);
    blocks.lambda_c = Mat::Zero(k, k);
    if (k == 0) return blocks;

    BandedCholesky chol(noise_covariance_band(link, pulse, params, dm));
    const Mat v = signal_and_derivative_columns(link, pulse);
    const Mat x = chol.half_solve(v);
    const Mat gram = x.transpose() * x;  // [S D]^T C_n^{-1} [S D]

    for (int r = 0; r < k; ++r) {
        const Complex ar = link.mpcs[r].amplitude;
        for (int c = 0; c < k; ++c) {
            const Complex ac = link.mpcs[c].amplitude;
            blocks.lambda_a(r, c) = 2.0 * std::real(ar * std::conj(ac)) * gram(k + c, k + r);
            blocks.lambda_b_re(r, c) = 2.0 * std::real(ar) * gram(c, k + r);
            blocks.lambda_b_im(r, c) = 2.0 * std::imag(ar) * gram(c, k + r);
            blocks.lambda_c(r, c) = 2.0 * gram(r, c);
        }
    }
    blocks.lambda_a = symmetrize(blocks.lambda_a);
    blocks.lambda_c = symmetrize(blocks.lambda_c);
    return blocks;
}

DelayInfo efim_delays(const FimBlocks& blocks)
{
    DelayInfo result;
    const int k = blocks.size();
    if (k == 0) {
        result.info = Mat::Zero(0, 0);
        return result;
    }
    Mat c = blocks.lambda_c;
    Eigen::SelfAdjointEigenSolver<Mat> es(c);
    const double ev_max = es.eigenvalues().maxCoeff();
    const double ev_min = es.eigenvalues().minCoeff();
    if (ev_max <= 0.0) {  // zero-amplitude link: no information at all
        result.info = Mat::Zero(k, k);
        return result;
    }
    if (ev_min <= 0.0 || ev_max / ev_min > kConditionLimit) {
        result.overlap_degenerate = true;
        c.diagonal().array() += kSingularTol * c.trace() / k;
    }
    Eigen::LDLT<Mat> ldlt(c);
    const Mat sr = blocks.lambda_b_re * ldlt.solve(blocks.lambda_b_re.transpose());
    const Mat si = blocks.lambda_b_im * ldlt.solve(blocks.lambda_b_im.transpose());
    result.info = symmetrize(blocks.lambda_a - sr - si);
    return result;
}

Vec no_overlap_delay_info(const LinkModel& link, const RrcPulse& pulse,
                          const SignalParams& params, const DmParams& dm)
{
    const double factor = 8.0 * pi * pi * pulse.mean_square_bandwidth();
    Vec lambda(link.mpc_count());
    for (int i = 0; i < link.mpc_count(); ++i) {
        const LinkMpc& m = link.mpcs[i];
        const double interference =
            params.noise_psd + params.nyquist_period() * dm_pdp(m.delay, dm, link.tau_los);
        lambda[i] = factor * std::norm(m.amplitude) / interference;
    }
    return lambda;
}

DelayInfo link_delay_info(const LinkModel& link, OverlapModel model,
                          const RrcPulse& pulse, const SignalParams& params,
                          const DmParams& dm)
{
    if (model == OverlapModel::full)
        return efim_delays(fim_blocks(link, pulse, params, dm));
    DelayInfo d;
    d.info = no_overlap_delay_info(link, pulse, params, dm).asDiagonal();
    return d;
}

PositionEfim efim_position_toa(std::span<const LinkModel> links, OverlapModel model,
                               const RrcPulse& pulse, const SignalParams& params,
                               const DmParams& dm)
{
    PositionEfim result;
    for (const LinkModel& link : links) {
        if (link.mpcs.empty()) continue;
        const DelayInfo d = link_delay_info(link, model, pulse, params, dm);
        const auto g = link.agent_gradients().rows;
        result.info += g.transpose() * d.info * g;
        result.overlap_degenerate |= d.overlap_degenerate;
    }
    result.info = 0.5 * (result.info + result.info.transpose()).eval();
    return result;
}

PositionEfim efim_position_tdoa(std::span<const LinkModel> links,
                                std::span<const int> link_group, int group_count,
                                OverlapModel model, const RrcPulse& pulse,
                                const SignalParams& params, const DmParams& dm)
{
    PositionEfim result;
    Mat2 app = Mat2::Zero();
    Mat ape = Mat::Zero(2, group_count);
    Vec aee = Vec::Zero(group_count);
    for (std::size_t i = 0; i < links.size(); ++i) {
        const LinkModel& link = links[i];
        if (link.mpcs.empty()) continue;
        const DelayInfo d = link_delay_info(link, model, pulse, params, dm);
        const auto g = link.agent_gradients().rows;
        const Vec ones = Vec::Ones(link.mpc_count());
        app += g.transpose() * d.info * g;
        ape.col(link_group[i]) += g.transpose() * (d.info * ones);
        aee[link_group[i]] += ones.dot(d.info * ones);
        result.overlap_degenerate |= d.overlap_degenerate;
    }
    // Offsets of distinct groups never couple: A_ee is diagonal.
    Mat2 ip = app;
    for (int gidx = 0; gidx < group_count; ++gidx)
        if (aee[gidx] > 0.0) ip -= ape.col(gidx) * ape.col(gidx).transpose() / aee[gidx];
    result.info = 0.5 * (ip + ip.transpose()).eval();
    return result;
}

CoopResult efim_position_coop(int agent_count, std::span<const LinkModel> links,
                              const CoopOptions& opts, OverlapModel model,
                              const RrcPulse& pulse, const SignalParams& params,
                              const DmParams& dm)
{
    CoopResult result;
    result.joint = Mat::Zero(2 * agent_count, 2 * agent_count);
    bool degenerate = false;

    for (const LinkModel& link : links) {
        if (link.mpcs.empty()) continue;
        const bool mono = link.kind == LinkKind::monostatic;
        if (mono && !opts.include_monostatic) continue;
        if (!mono && !opts.include_cooperative) continue;
        const DelayInfo d = link_delay_info(link, model, pulse, params, dm);
        degenerate |= d.overlap_degenerate;
        const int n = link.agent_node;
        const auto gt = link.agent_gradients().rows;
        if (mono) {
            result.joint.block<2, 2>(2 * n, 2 * n) += gt.transpose() * d.info * gt;
            continue;
        }
        const int j = link.anchor_node;
        const auto gr = link.anchor_gradients().rows;
        result.joint.block<2, 2>(2 * n, 2 * n) += gt.transpose() * d.info * gt;
        result.joint.block<2, 2>(2 * j, 2 * j) += gr.transpose() * d.info * gr;
        const Mat2 cross = gt.transpose() * d.info * gr;
        result.joint.block<2, 2>(2 * n, 2 * j) += cross;
        result.joint.block<2, 2>(2 * j, 2 * n) += cross.transpose();
    }
    result.joint = symmetrize(result.joint);

    for (int a = 0; a < agent_count; ++a) {
        Mat partner = Mat::Zero(2 * (agent_count - 1), 2 * (agent_count - 1));
        Mat cross = Mat::Zero(2, 2 * (agent_count - 1));
        int col = 0;
        for (int b = 0; b < agent_count; ++b) {
            if (b == a) continue;
            cross.block<2, 2>(0, 2 * col) = result.joint.block<2, 2>(2 * a, 2 * b);
            int row = 0;
            for (int b2 = 0; b2 < agent_count; ++b2) {
                if (b2 == a) continue;
                partner.block<2, 2>(2 * row, 2 * col) = result.joint.block<2, 2>(2 * b2, 2 * b);
                ++row;
            }
            ++col;
        }
        partner.diagonal().array() += opts.partner_prior;
        PositionEfim efim;
        efim.overlap_degenerate = degenerate;
        Mat2 own = result.joint.block<2, 2>(2 * a, 2 * a);
        if (agent_count > 1)
            own -= cross * pseudo_inverse_psd(partner) * cross.transpose();
        efim.info = 0.5 * (own + own.transpose()).eval();
        result.per_agent.push_back(efim);
    }
    return result;
}

double peb(const Mat2& position_fim)
{
    Eigen::SelfAdjointEigenSolver<Mat2> es(position_fim);
    const double lo = es.eigenvalues()[0];
    const double hi = es.eigenvalues()[1];
    if (hi <= 0.0 || lo <= kSingularTol * hi)
        return std::numeric_limits<double>::infinity();
    return std::sqrt(1.0 / lo + 1.0 / hi);
}

std::optional<Ellipse> error_ellipse(const Mat2& position_fim, double scale)
{
    Eigen::SelfAdjointEigenSolver<Mat2> es(position_fim);
    const double lo = es.eigenvalues()[0];
    const double hi = es.eigenvalues()[1];
    if (hi <= 0.0 || lo <= kSingularTol * hi) return std::nullopt;
    Ellipse e;
    e.semi_major = scale / std::sqrt(lo);
    e.semi_minor = scale / std::sqrt(hi);
    const Vec2 major = es.eigenvectors().col(0);
    double theta = std::atan2(major.y(), major.x());
    if (theta < 0.0) theta += pi;
    if (theta >= pi) theta -= pi;
    e.orientation = theta;
    return e;
}

}  // namespace peb

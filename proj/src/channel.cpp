#include "peb/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace peb {

namespace {
using std::numbers::pi;
}

void SignalParams::validate() const
{
    if (carrier_hz <= 0 || pulse_duration_s <= 0 || noise_psd <= 0)
        throw std::invalid_argument("signal parameters must be positive");
    if (rolloff < 0 || rolloff > 1) throw std::invalid_argument("roll-off must be in [0,1]");
    if (sample_fraction < 8.0)
        throw std::invalid_argument("sample period must satisfy T_s <= T_p/8");
}

void DmParams::validate() const
{
    if (chi < 0 || chi > 1) throw std::invalid_argument("chi must be in [0,1]");
    if (gamma1_s <= 0 || gamma_rise_s <= 0)
        throw std::invalid_argument("PDP shape constants must be positive");
    if (power < 0) throw std::invalid_argument("PDP power must be non-negative");
}

double DmParams::norm_constant() const
{
    return (gamma1_s + gamma_rise_s) /
           (gamma1_s * (gamma1_s + gamma_rise_s * (1.0 - chi)));
}

RrcPulse::RrcPulse(double pulse_duration_s, double rolloff)
    : tp_(pulse_duration_s), beta_(rolloff), msb_(0.0)
{
    if (tp_ <= 0) throw std::invalid_argument("pulse duration must be positive");
    if (beta_ <= 0 || beta_ > 1) throw std::invalid_argument("roll-off must be in (0,1]");

    // beta_eff^2 via Simpson quadrature of s'(t)^2 over the truncation window.
    const int n = 16000;  // even
    const double a = -support_radius();
    const double h = 2.0 * support_radius() / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double d = derivative_impl(a + i * h);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * d * d;
    }
    msb_ = acc * h / 3.0 / (4.0 * pi * pi);
}

double RrcPulse::value_raw(double x) const
{
    // x = t / T_p, unit-energy time-domain RRC.
    const double b = beta_;
    const double scale = 1.0 / std::sqrt(tp_);
    if (std::abs(x) < 1e-9) return scale * (1.0 - b + 4.0 * b / pi);
    const double xs = std::abs(x) - 1.0 / (4.0 * b);
    if (std::abs(xs) < 1e-9) {
        const double s = std::sin(pi / (4.0 * b));
        const double c = std::cos(pi / (4.0 * b));
        return scale * (b / std::sqrt(2.0)) * ((1.0 + 2.0 / pi) * s + (1.0 - 2.0 / pi) * c);
    }
    const double num = std::sin(pi * x * (1.0 - b)) + 4.0 * b * x * std::cos(pi * x * (1.0 + b));
    const double den = pi * x * (1.0 - 16.0 * b * b * x * x);
    return scale * num / den;
}

double RrcPulse::operator()(double t) const
{
    if (std::abs(t) > support_radius()) return 0.0;
    return value_raw(t / tp_);
}

double RrcPulse::derivative(double t) const { return derivative_impl(t); }

double RrcPulse::derivative_impl(double t) const
{
    if (std::abs(t) > support_radius()) return 0.0;
    // Fourth-order central stencil on the untruncated waveform, which is
    // analytic apart from removable singularities handled inside value_raw.
    // Differentiating across the truncation edge would manufacture spikes.
    const double h = 1e-4;
    const double x = t / tp_;
    const double f1 = value_raw(x + h) - value_raw(x - h);
    const double f2 = value_raw(x + 2.0 * h) - value_raw(x - 2.0 * h);
    return (8.0 * f1 - f2) / (12.0 * h * tp_);
}

Vec sample_signal(const RrcPulse& pulse, double tau, const SampleWindow& window)
{
    const double t_end = window.time(window.size - 1);
    if (tau - pulse.support_radius() < window.t_start - 1e-12 ||
        tau + pulse.support_radius() > t_end + 1e-12)
        throw std::out_of_range("delayed pulse falls outside the observation window");
    Vec v(window.size);
    for (int i = 0; i < window.size; ++i) v[i] = pulse(window.time(i) - tau);
    return v;
}

Vec sample_derivative(const RrcPulse& pulse, double tau, const SampleWindow& window)
{
    const double t_end = window.time(window.size - 1);
    if (tau - pulse.support_radius() < window.t_start - 1e-12 ||
        tau + pulse.support_radius() > t_end + 1e-12)
        throw std::out_of_range("delayed pulse falls outside the observation window");
    Vec v(window.size);
    for (int i = 0; i < window.size; ++i) v[i] = -pulse.derivative(window.time(i) - tau);
    return v;
}

double friis_magnitude(double path_length_m, int order, const SignalParams& params)
{
    if (path_length_m <= 0) throw GeometryError("zero path length has no Friis amplitude");
    const double free_space = kSpeedOfLight / (4.0 * pi * params.carrier_hz * path_length_m);
    return free_space * std::pow(10.0, -params.reflection_loss_db * order / 20.0);
}

Complex mpc_amplitude(double path_length_m, double delay_s, int order,
                      const SignalParams& params)
{
    const double mag = friis_magnitude(path_length_m, order, params);
    const double phase = -2.0 * pi * params.carrier_hz * delay_s;
    return std::polar(mag, phase);
}

double dm_pdp(double tau, const DmParams& dm, double tau_los)
{
    const double u = tau - tau_los;
    if (u < 0.0) return 0.0;
    return dm.power * dm.norm_constant() *
           (1.0 - dm.chi * std::exp(-u / dm.gamma_rise_s)) * std::exp(-u / dm.gamma1_s);
}

Mat dm_covariance(const RrcPulse& pulse, const SampleWindow& window,
                  const DmParams& dm, double tau_los)
{
    const int n = window.size;
    Vec pdp(n), shape(n);
    Mat shifted(n, n);
    for (int i = 0; i < n; ++i) pdp[i] = dm_pdp(window.time(i), dm, tau_los);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) shifted(i, j) = pulse((i - j) * window.dt);
    return window.dt * shifted * pdp.asDiagonal() * shifted.transpose();
}

Mat noise_covariance(const RrcPulse& pulse, const SampleWindow& window,
                     const SignalParams& params, const DmParams& dm, double tau_los)
{
    Mat c = dm_covariance(pulse, window, dm, tau_los);
    c.diagonal().array() += params.noise_variance();
    return c;
}

double whitening_weight_sq(double tau, const SignalParams& params, const DmParams& dm,
                           double tau_los)
{
    const double n0 = params.noise_psd;
    return n0 / (n0 + params.nyquist_period() * dm_pdp(tau, dm, tau_los));
}

}  // namespace peb

#pragma once

#include "peb/types.hpp"

namespace peb {

/// Transmit-signal and sampling parameters.
struct SignalParams {
    double carrier_hz = 7e9;
    double pulse_duration_s = 1e-9;   // T_p
    double rolloff = 0.6;             // beta_r
    double sample_fraction = 16.0;    // T_s = T_p / sample_fraction, >= 8
    double noise_psd = 2e-8;          // N_0 (two-sided PSD N_0/2 = 1e-8)
    double reflection_loss_db = 3.0;  // attenuation per reflection

    double sample_period() const { return pulse_duration_s / sample_fraction; }
    /// Effective Nyquist period of the block-spectrum approximation;
    /// equals T_p for an RRC pulse.
    double nyquist_period() const { return pulse_duration_s; }
    double noise_variance() const { return noise_psd / sample_period(); }

    void validate() const;
};

/// Double-exponential power delay profile of the diffuse multipath.
struct DmParams {
    double power = 1.16e-6;     // Omega_1, total normalized power
    double gamma1_s = 20e-9;    // decay constant
    double gamma_rise_s = 5e-9; // rise constant
    double chi = 0.98;          // onset suppression

    void validate() const;
    /// Normalization making the PDP integrate to `power`.
    double norm_constant() const;
};

/// Unit-energy root-raised-cosine pulse with symbol period T_p, truncated
/// to |t| <= 8 T_p.
class RrcPulse {
public:
    RrcPulse(double pulse_duration_s, double rolloff);

    double operator()(double t) const;
    /// Time derivative s'(t), accurate to ~1e-10 relative.
    double derivative(double t) const;

    double pulse_duration() const { return tp_; }
    double support_radius() const { return 8.0 * tp_; }
    /// Mean-square (RMS^2) bandwidth beta_eff^2 = (1/4pi^2) int s'(t)^2 dt,
    /// computed once by quadrature.
    double mean_square_bandwidth() const { return msb_; }

private:
    double value_raw(double x) const;  // x = t / T_p
    double derivative_impl(double t) const;
    double tp_;
    double beta_;
    double msb_;
};

/// Uniform sample grid t_i = t_start + i * dt, i = 0..size-1.
struct SampleWindow {
    double t_start = 0.0;
    double dt = 0.0;
    int size = 0;

    double time(int i) const { return t_start + i * dt; }
};

/// Sampled delayed pulse, s_tau[i] = s(t_i - tau). Throws when the
/// truncated pulse support does not fit inside the window.
Vec sample_signal(const RrcPulse& pulse, double tau, const SampleWindow& window);

/// Derivative of the sampled pulse w.r.t. the delay: -s'(t_i - tau).
Vec sample_derivative(const RrcPulse& pulse, double tau, const SampleWindow& window);

/// Friis free-space magnitude at carrier frequency with `order` specular
/// reflections: (c / (4 pi f_c d)) * 10^(-loss_db * order / 20).
double friis_magnitude(double path_length_m, int order, const SignalParams& params);

/// Deterministic MPC amplitude; carrier phase -2 pi f_c tau.
Complex mpc_amplitude(double path_length_m, double delay_s, int order,
                      const SignalParams& params);

/// Diffuse-multipath PDP S_nu(tau), zero before the LOS onset.
double dm_pdp(double tau, const DmParams& dm, double tau_los);

/// Dense DM covariance [C_c]_{n,m} = T_s sum_i S_nu(t_i) s(t_n-t_i) s(t_m-t_i).
/// Reference implementation; the FIM path uses a banded equivalent.
Mat dm_covariance(const RrcPulse& pulse, const SampleWindow& window,
                  const DmParams& dm, double tau_los);

/// Full noise covariance C_n = (N_0/T_s) I + C_c.
Mat noise_covariance(const RrcPulse& pulse, const SampleWindow& window,
                     const SignalParams& params, const DmParams& dm, double tau_los);

/// Whitening weight w^2 = N_0 / (N_0 + T_N S_nu(tau)), in (0, 1].
double whitening_weight_sq(double tau, const SignalParams& params, const DmParams& dm,
                           double tau_los);

}  // namespace peb

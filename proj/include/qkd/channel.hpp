#pragma once

namespace qkd::channel {

/// Fiber + threshold-detector model used to simulate the protocol observables.
struct ChannelParams {
    double eta_det = 0.65;    // detector efficiency
    double p_d = 7.2e-8;      // dark count probability per detector
    double alpha_db = 0.2;    // fiber attenuation, dB/km
    double delta_a = 0.08;    // polarization misalignment, radians
    double f_ec = 1.16;       // error correction efficiency

    void validate() const;
    double system_transmittance(double distance_km) const;
};

/// Overall gain Q at one intensity: 1 - (1-p_d)^2 exp(-eta beta).
double gain(const ChannelParams& p, double distance_km, double beta);

/// Error gain E*Q from misalignment, dark counts and double-click assignment.
double error_gain(const ChannelParams& p, double distance_km, double beta);

/// Per-photon-number truth of the same detector model; test oracle for the
/// LP soundness checks, never an input to the security bounds.
struct YieldTruth {
    double yield;       // Y^n
    double error_prob;  // xi^n = e^n * Y^n
};

YieldTruth true_yield_oracle(const ChannelParams& p, double distance_km, int n);

}  // namespace qkd::channel

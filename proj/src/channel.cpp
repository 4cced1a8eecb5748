#include "qkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd::channel {

void ChannelParams::validate() const {
    if (eta_det < 0.0 || eta_det > 1.0) throw std::invalid_argument("eta_det outside [0,1]");
    if (p_d < 0.0 || p_d > 1.0) throw std::invalid_argument("p_d outside [0,1]");
    if (alpha_db < 0.0) throw std::invalid_argument("negative attenuation");
    if (delta_a < 0.0) throw std::invalid_argument("negative misalignment");
    if (f_ec < 1.0) throw std::invalid_argument("error correction efficiency below 1");
}

double ChannelParams::system_transmittance(double distance_km) const {
    return eta_det * std::pow(10.0, -alpha_db * distance_km / 10.0);
}

double gain(const ChannelParams& p, double distance_km, double beta) {
    double eta = p.system_transmittance(distance_km);
    double q = 1.0 - (1.0 - p.p_d) * (1.0 - p.p_d) * std::exp(-eta * beta);
    return q;
}

double error_gain(const ChannelParams& p, double distance_km, double beta) {
    double eta = p.system_transmittance(distance_km);
    double c2 = std::cos(p.delta_a) * std::cos(p.delta_a);
    double s2 = std::sin(p.delta_a) * std::sin(p.delta_a);
    double h = 0.5 * (std::exp(-eta * beta * c2) - std::exp(-eta * beta * s2));
    double pd = p.p_d;
    double eq = pd * pd / 2.0 + pd * (1.0 - pd) * (1.0 + h) +
                (1.0 - pd) * (1.0 - pd) * (0.5 + h - 0.5 * std::exp(-eta * beta));
    double q = gain(p, distance_km, beta);
    if (eq < 0.0) eq = 0.0;
    if (eq > q) eq = q;
    return eq;
}

YieldTruth true_yield_oracle(const ChannelParams& p, double distance_km, int n) {
    if (n < 0) throw std::invalid_argument("negative photon number");
    double eta = p.system_transmittance(distance_km);
    double c2 = std::cos(p.delta_a) * std::cos(p.delta_a);
    double s2 = std::sin(p.delta_a) * std::sin(p.delta_a);
    double q = 1.0 - p.p_d;
    // A/B: no click at the correct/wrong detector; AB0: no click at either
    double A = q * std::pow(1.0 - eta * c2, n);
    double B = q * std::pow(1.0 - eta * s2, n);
    double AB0 = q * q * std::pow(1.0 - eta, n);
    YieldTruth t;
    t.yield = 1.0 - AB0;
    t.error_prob = 0.5 + 0.5 * A - 0.5 * B - 0.5 * AB0;  // wrong-only + half of double clicks
    return t;
}

}  // namespace qkd::channel

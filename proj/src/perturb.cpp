#include "qkd/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd::perturb {

PerturbedStatistics perturb_statistics(const source::PhotonStatistics& stats,
                                       double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in [0,1]");
    PerturbedStatistics out;
    out.base = stats;
    out.epsilon = epsilon;
    out.kappa = std::sqrt(epsilon);
    out.lower.resize(stats.probs.size());
    out.upper.resize(stats.probs.size());
    for (std::size_t i = 0; i < stats.probs.size(); ++i) {
        out.lower[i] = std::max(stats.probs[i] - out.kappa, 0.0);
        out.upper[i] = std::min(stats.probs[i] + out.kappa, 1.0);
    }
    return out;
}

EigGapBound dk_gamma(std::span<const double> spectrum_desc, int n, double kappa) {
    if (spectrum_desc.empty()) throw std::invalid_argument("empty spectrum");
    if (n < 0 || n >= static_cast<int>(spectrum_desc.size()))
        throw std::invalid_argument("eigenvalue index out of range");
    if (kappa < 0.0) throw std::invalid_argument("negative kappa");
    double gap = -1.0;
    if (n > 0) gap = std::abs(spectrum_desc[n - 1] - spectrum_desc[n]);
    if (n + 1 < static_cast<int>(spectrum_desc.size())) {
        double g = std::abs(spectrum_desc[n] - spectrum_desc[n + 1]);
        gap = gap < 0.0 ? g : std::min(gap, g);
    }
    EigGapBound b;
    b.index = n;
    if (gap < 0.0) {  // single-entry spectrum: no isolation information
        b.delta = -kappa;
        b.gamma = 1.0;
        return b;
    }
    b.delta = gap - kappa;
    if (b.delta <= 0.0) {
        b.gamma = 1.0;
    } else {
        b.gamma = std::min(1.0, (kappa / b.delta) * (kappa / b.delta));
    }
    return b;
}

double truncation_fidelity(std::span<const double> spectrum, int M) {
    if (M < 0) throw std::invalid_argument("negative projection rank");
    double s = 0.0;
    for (int i = 0; i <= M && i < static_cast<int>(spectrum.size()); ++i)
        s += spectrum[i];
    return std::clamp(s, 0.0, 1.0);
}

double fuchs_trace_bound(double fidelity_lower) {
    double f = std::clamp(fidelity_lower, 0.0, 1.0);
    return std::sqrt(1.0 - f);
}

}  // namespace qkd::perturb

#pragma once

#include <span>
#include <vector>

#include "qkd/source.hpp"

namespace qkd::perturb {

/// Photon statistics with the leakage slack applied entrywise:
/// lower = max(p - sqrt(eps), 0), upper = min(p + sqrt(eps), 1).
struct PerturbedStatistics {
    source::PhotonStatistics base;
    double epsilon = 0.0;
    double kappa = 0.0;  // sqrt(epsilon), half-trace-distance bound
    std::vector<double> lower, upper;
};

PerturbedStatistics perturb_statistics(const source::PhotonStatistics& stats,
                                       double epsilon);

/// Davis-Kahan style eigenvector-fidelity bound for eigenvalue index n of a
/// descending spectrum: gamma = min(1, kappa^2 / delta^2) with
/// delta = (minimum adjacent absolute gap) - kappa; vacuous (gamma = 1) when
/// delta <= 0. Boundary indices use their single neighbor.
struct EigGapBound {
    int index = 0;
    double delta = 0.0;
    double gamma = 1.0;
};

EigGapBound dk_gamma(std::span<const double> spectrum_desc, int n, double kappa);

/// Fidelity retained by projecting onto the top-(M+1) eigenvalue subspace:
/// equals the retained spectral mass.
double truncation_fidelity(std::span<const double> spectrum, int M);

/// Fuchs-van de Graaf: half trace distance <= sqrt(1 - F).
double fuchs_trace_bound(double fidelity_lower);

}  // namespace qkd::perturb

#pragma once

#include <stdexcept>
#include <string>

namespace qkd::gram {

/// Inputs of the 4x4 Gram completion: the known ideal-state overlap and the
/// eigenvector-rotation weights of the two intensities.
struct GramProblem {
    double ideal_overlap = 1.0;  // <n_gamma | n_zeta>, real in [0,1]
    double gamma_zeta = 0.0;
    double gamma_gamma = 0.0;
};

/// Certified lower bound on Re<n^eps_gamma | n^eps_zeta>.
struct CertifiedBound {
    double value = 0.0;           // dual objective, clamped to [-1, 1]
    double dual_objective = 0.0;  // before clamping
    double primal_objective = 0.0;  // objective of a verified feasible point
    double dual_residual = 0.0;     // max(0, -lambda_min) of the dual slack
};

class UncertifiedError : public std::runtime_error {
  public:
    explicit UncertifiedError(const std::string& m) : std::runtime_error(m) {}
};

/// Solves the Gram-matrix SDP (unit diagonal, two orthogonality zeros, fixed
/// ideal overlap) by an interior-point barrier on the three free entries and
/// returns the weak-duality-certified dual bound. Throws UncertifiedError if
/// the dual slack matrix cannot be verified PSD to within tol.
CertifiedBound overlap_lower_bound(const GramProblem& problem, double tol = 1e-8);

/// Squared-overlap input for the CS constraints: max(value, 0)^2.
double squared_overlap_bound(const CertifiedBound& bound);

}  // namespace qkd::gram

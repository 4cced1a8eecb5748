#pragma once

// Independent brute-force computations used only by tests. Everything here
// goes through explicit truncated Fock spaces or dense linear algebra and
// shares no code path with the library implementations it checks.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qkd/source.hpp"
#include "qkd/tha.hpp"

namespace oracles {

using cplx = std::complex<double>;

/// Fock amplitudes of |alpha> up to the cutoff (inclusive).
Eigen::VectorXcd fock_coherent(cplx alpha, int cutoff);

/// Photon-class weights of N-phase randomization via a DFT projection of
/// grid coherent states in truncated Fock space.
std::vector<double> discrete_pmf_dft(double beta, int N, int cutoff);

/// <n_{gamma,h}|n_{zeta,h}> by direct inner product of normalized projected
/// coherent-grid vectors.
double discrete_overlap_direct(int n, double zeta, double gamma, int N, int cutoff);

/// Ideal discrete-randomization coin overlap via explicit dual-rail vectors.
double discrete_coin_overlap_direct(int n, double beta, int N, int cutoff);

/// THA same-encoding brute force in Fock(B) (x) Fock(E): photon-class
/// statistics and cross-intensity overlaps.
struct ThaFock {
    std::vector<double> stats;                 // p^eps_{n|beta,a}
    std::vector<Eigen::VectorXcd> class_vecs;  // unnormalized |n-bar>
};
ThaFock tha_fock_single(const qkd::tha::ThaScenario& sc, double beta,
                        const qkd::source::EncodingLabel& a, int cutoff_b,
                        int cutoff_e);
double tha_overlap_fock(const qkd::tha::ThaScenario& sc, double zeta, double gamma,
                        const qkd::source::EncodingLabel& a, int n, int cutoff_b,
                        int cutoff_e);

/// THA cross-basis inner products via a three-mode Fock construction.
Eigen::Matrix2cd tha_cross_basis_fock(const qkd::tha::ThaScenario& sc, double beta,
                                      int n, int cutoff_b, int cutoff_e);

/// Exact fidelity of the two PM leak mixtures inside the joint span of their
/// defining coherent product vectors (no truncation loss).
double pm_fidelity_gram_span(const qkd::tha::PmScenario& sc, double zeta, double gamma);

/// Fidelity between two density matrices, (Tr sqrt(sqrt(r) s sqrt(r)))^2.
double density_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

}  // namespace oracles

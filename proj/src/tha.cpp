#include "qkd/tha.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkd::tha {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// sum_l s^(lN+n)/(lN+n)! for complex s, |s| modest; factorially convergent.
cplx wrapped_series_c(cplx s, int n, int N) {
    if (std::abs(s) == 0.0) return n == 0 ? cplx(1.0) : cplx(0.0);
    cplx term = std::pow(s, n) / std::exp(std::lgamma(n + 1.0));
    cplx sum = 0.0;
    for (int l = 0;; ++l) {
        sum += term;
        int m = l * N + n;
        for (int k = m + 1; k <= m + N; ++k) term *= s / static_cast<double>(k);
        if (std::abs(term) < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
        if (l > 500) break;
    }
    return sum;
}

/// <alpha|beta> for coherent amplitudes.
cplx coherent_overlap(cplx alpha, cplx beta) {
    return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(alpha) * beta);
}

/// Dual-mode amplitudes of V^a applied to coherent amplitude alpha.
std::array<cplx, 2> encoded_modes(const source::EncodingLabel& a, cplx alpha) {
    const double r = 1.0 / std::sqrt(2.0);
    if (a.basis == source::Basis::Z)
        return a.bit == 0 ? std::array<cplx, 2>{alpha, 0.0} : std::array<cplx, 2>{0.0, alpha};
    return a.bit == 0 ? std::array<cplx, 2>{alpha * r, alpha * r}
                      : std::array<cplx, 2>{alpha * r, -alpha * r};
}

/// Scan-plus-refine maximization of a smooth 2pi-periodic function.
template <typename F>
double max_over_phase(F&& f) {
    const int grid = 512;
    double best_x = 0.0, best = -1.0;
    for (int i = 0; i < grid; ++i) {
        double x = 2.0 * kPi * i / grid;
        double v = f(x);
        if (v > best) { best = v; best_x = x; }
    }
    double lo = best_x - 2.0 * kPi / grid, hi = best_x + 2.0 * kPi / grid;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = f(a), fb = f(b);
    for (int it = 0; it < 80; ++it) {
        if (fa < fb) {
            lo = a; a = b; fa = fb;
            b = lo + gr * (hi - lo); fb = f(b);
        } else {
            hi = b; b = a; fb = fa;
            a = hi - gr * (hi - lo); fa = f(a);
        }
    }
    return std::max({best, fa, fb});
}

}  // namespace

void ThaScenario::validate() const {
    if (back_intensity < 0.0) throw std::invalid_argument("negative back-reflection intensity");
    if (phase_count < 2) throw std::invalid_argument("phase count must be >= 2");
    if (mu <= 0.0) throw std::invalid_argument("reference intensity must be positive");
}

double ThaScenario::epsilon_of(double beta_max) const {
    return 1.0 - std::exp(-omega_of(beta_max));
}

double encoding_phase(const source::EncodingLabel& a) {
    if (a.basis == source::Basis::Z) return a.bit == 0 ? 0.0 : kPi;
    return a.bit == 0 ? kPi / 2.0 : 3.0 * kPi / 2.0;
}

Eigen::MatrixXcd tha_gram(const ThaScenario& sc, const std::vector<double>& intensities) {
    sc.validate();
    const int N = sc.phase_count;
    const std::array<source::EncodingLabel, 4> encs = {
        source::EncodingLabel::zero_z(), source::EncodingLabel::one_z(),
        source::EncodingLabel::zero_x(), source::EncodingLabel::one_x()};
    struct State { double beta; int enc; int l; };
    std::vector<State> states;
    for (std::size_t b = 0; b < intensities.size(); ++b)
        for (int e = 0; e < 4; ++e)
            for (int l = 0; l < N; ++l)
                states.push_back({intensities[b], e, l});
    Eigen::MatrixXcd g(states.size(), states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            const State& si = states[i];
            const State& sj = states[j];
            cplx ai = std::sqrt(si.beta) * std::exp(cplx(0.0, 2.0 * kPi * si.l / N));
            cplx aj = std::sqrt(sj.beta) * std::exp(cplx(0.0, 2.0 * kPi * sj.l / N));
            auto mi = encoded_modes(encs[si.enc], ai);
            auto mj = encoded_modes(encs[sj.enc], aj);
            cplx ei = std::sqrt(sc.omega_of(si.beta)) *
                      std::exp(cplx(0.0, 2.0 * kPi * si.l / N + encoding_phase(encs[si.enc])));
            cplx ej = std::sqrt(sc.omega_of(sj.beta)) *
                      std::exp(cplx(0.0, 2.0 * kPi * sj.l / N + encoding_phase(encs[sj.enc])));
            g(i, j) = coherent_overlap(mi[0], mj[0]) * coherent_overlap(mi[1], mj[1]) *
                      coherent_overlap(ei, ej);
        }
    }
    return g;
}

std::vector<double> tha_photon_statistics(const ThaScenario& sc, double beta,
                                          const source::EncodingLabel& a) {
    sc.validate();
    (void)a;  // the encoding phase cancels in same-encoding inner products
    const int N = sc.phase_count;
    double total_intensity = beta + sc.omega_of(beta);
    std::vector<double> p(N);
    double norm = 0.0;
    for (int n = 0; n < N; ++n) {
        p[n] = std::real(wrapped_series_c(total_intensity, n, N));
        norm += p[n];
    }
    for (double& v : p) v /= norm;
    return p;
}

double tha_intensity_overlap(const ThaScenario& sc, double zeta, double gamma,
                             const source::EncodingLabel& a, int n) {
    sc.validate();
    (void)a;
    if (n < 0) throw std::invalid_argument("negative photon number");
    const int N = sc.phase_count;
    if (n >= N) throw std::invalid_argument("photon class beyond N-1");
    double oz = sc.omega_of(zeta), og = sc.omega_of(gamma);
    double tz = std::real(wrapped_series_c(zeta + oz, n, N));
    double tg = std::real(wrapped_series_c(gamma + og, n, N));
    if (tz <= 0.0 || tg <= 0.0) return 0.0;  // one state has no weight in the class
    double s = std::sqrt(zeta * gamma) + std::sqrt(oz * og);
    double num = std::real(wrapped_series_c(s, n, N));
    return std::clamp(num / std::sqrt(tz * tg), 0.0, 1.0);
}

Eigen::Matrix2cd tha_cross_basis_overlaps(const ThaScenario& sc, double beta, int n) {
    sc.validate();
    if (n < 0) throw std::invalid_argument("negative photon number");
    const int N = sc.phase_count;
    if (n >= N) throw std::invalid_argument("photon class beyond N-1");
    const double om = sc.omega_of(beta);
    const std::array<source::EncodingLabel, 2> zs = {source::EncodingLabel::zero_z(),
                                                     source::EncodingLabel::one_z()};
    const std::array<source::EncodingLabel, 2> xs = {source::EncodingLabel::zero_x(),
                                                     source::EncodingLabel::one_x()};
    double norm = std::real(wrapped_series_c(beta + om, n, N));
    Eigen::Matrix2cd O = Eigen::Matrix2cd::Zero();
    if (norm <= 0.0) return O;
    // B part of the kernel contributes beta * (+-1/sqrt2), E part Omega e^{i dphi}
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            double b_coef = beta / std::sqrt(2.0);
            if (j == 1 && k == 1) b_coef = -b_coef;
            cplx phase = std::exp(cplx(0.0, encoding_phase(xs[k]) - encoding_phase(zs[j])));
            cplx s = b_coef + om * phase;
            O(j, k) = wrapped_series_c(s, n, N) / norm;
        }
    }
    return O;
}

double tha_coin_fidelity(const ThaScenario& sc, double beta, int n) {
    Eigen::Matrix2cd O = tha_cross_basis_overlaps(sc, beta, n);
    if (O.isZero()) return 1.0;  // class carries no weight
    // q's of the virtual states are exactly 1/2 (statistics are encoding-free);
    // the free phases phi_Z, phi_X of the virtual states are Alice's to choose
    auto val = [&](double phi_x) {
        cplx u = O(0, 0) + std::exp(cplx(0.0, phi_x)) * O(0, 1);
        cplx w = O(1, 0) - std::exp(cplx(0.0, phi_x)) * O(1, 1);
        return std::abs(u) + std::abs(w);  // the phi_Z phase aligns the two groups
    };
    double best = max_over_phase(val);
    double amp = best / (2.0 * std::sqrt(2.0));
    return std::clamp(amp * amp, 0.0, 1.0);
}

void PmScenario::validate() const {
    if (encoder_intensity < 0.0 || pm_intensity < 0.0)
        throw std::invalid_argument("negative leak intensity");
    if (phase_count < 1) throw std::invalid_argument("phase count must be >= 1");
    if (mu <= 0.0) throw std::invalid_argument("reference intensity must be positive");
}

namespace {

struct FockBasis {
    int M;                              // total photon cutoff
    std::vector<std::pair<int, int>> states;  // (n1, n2), n1 + n2 <= M
    explicit FockBasis(int cutoff) : M(cutoff) {
        for (int t = 0; t <= M; ++t)
            for (int n1 = 0; n1 <= t; ++n1) states.push_back({n1, t - n1});
    }
};

Eigen::VectorXcd projected_coherent(const FockBasis& basis, cplx a1, cplx a2) {
    Eigen::VectorXcd v(basis.states.size());
    double pref = std::exp(-0.5 * (std::norm(a1) + std::norm(a2)));
    for (std::size_t i = 0; i < basis.states.size(); ++i) {
        auto [n1, n2] = basis.states[i];
        cplx amp = std::pow(a1, n1) * std::pow(a2, n2) *
                   std::exp(-0.5 * (std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0)));
        v(i) = pref * amp;
    }
    return v;
}

double poisson_cdf(double mean, int M) {
    double term = std::exp(-mean);
    double cum = 0.0;
    for (int n = 0; n <= M; ++n) {
        cum += term;
        term *= mean / static_cast<double>(n + 1);
    }
    return std::min(cum, 1.0);
}

double matrix_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fidelity: eigensolve failed on rho");
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sq = es.eigenvectors() * w.asDiagonal() *
                          es.eigenvectors().adjoint();
    Eigen::MatrixXcd inner = sq * sigma * sq;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(inner);
    if (es2.info() != Eigen::Success)
        throw std::runtime_error("fidelity: eigensolve failed on the inner product");
    double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

double bures_from_fidelity(double f) {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(std::clamp(f, 0.0, 1.0))));
}

int choose_cutoff(double mean) {
    int M = 2;
    while (1.0 - poisson_cdf(mean, M) > 1e-15 && M < 64) ++M;
    return M;
}

}  // namespace

double pm_leak_fidelity(const PmScenario& sc, double zeta, double gamma) {
    sc.validate();
    const int N = sc.phase_count;
    double oz = sc.omega_of(zeta), og = sc.omega_of(gamma);
    double lam = sc.pm_intensity;
    int M = sc.fock_cutoff > 0 ? sc.fock_cutoff
                               : choose_cutoff(std::max(oz, og) + lam);
    FockBasis basis(M);
    auto mixture = [&](double om) {
        Eigen::MatrixXcd rho =
            Eigen::MatrixXcd::Zero(basis.states.size(), basis.states.size());
        for (int j = 0; j < N; ++j) {
            double phi = 2.0 * kPi * j / N;
            cplx a1 = std::sqrt(om) * std::exp(cplx(0.0, phi));  // phi_a drops out
            cplx a2 = std::sqrt(lam) * std::exp(cplx(0.0, phi));
            Eigen::VectorXcd v = projected_coherent(basis, a1, a2);
            rho += v * v.adjoint() / static_cast<double>(N);
        }
        double mass = rho.real().trace();
        return std::make_pair((rho / mass).eval(), mass);
    };
    auto [rz, mass_z] = mixture(oz);
    auto [rg, mass_g] = mixture(og);
    double fm = matrix_fidelity(rz, rg);
    double d = bures_from_fidelity(fm) + bures_from_fidelity(mass_z) +
               bures_from_fidelity(mass_g);
    d = std::clamp(d, 0.0, std::sqrt(2.0));
    double rf = 1.0 - 0.5 * d * d;
    return std::clamp(rf * rf, 0.0, 1.0);
}

double pm_coin_fidelity(const PmScenario& sc, double beta, int n) {
    sc.validate();
    if (n < 0) throw std::invalid_argument("negative photon number");
    const int N = sc.phase_count;
    const double om = sc.omega_of(beta);
    const double lam = sc.pm_intensity;
    const std::array<source::EncodingLabel, 4> encs = {
        source::EncodingLabel::zero_z(), source::EncodingLabel::one_z(),
        source::EncodingLabel::zero_x(), source::EncodingLabel::one_x()};
    double phi[4];
    for (int i = 0; i < 4; ++i) phi[i] = encoding_phase(encs[i]);
    const double denom = 2.0 * std::sqrt(std::pow(2.0, n + 1));
    double best = 0.0;
    std::array<int, 4> k{};
    // exhaustive search over the N^4 purification offsets
    for (k[0] = 0; k[0] < N; ++k[0])
        for (k[1] = 0; k[1] < N; ++k[1])
            for (k[2] = 0; k[2] < N; ++k[2])
                for (k[3] = 0; k[3] < N; ++k[3]) {
                    double del[4];
                    for (int i = 0; i < 4; ++i) del[i] = 2.0 * kPi * k[i] / N;
                    auto leak = [&](int ix, int iz) {  // <Psi_{ix}|Psi_{iz}>
                        cplx t1 = std::exp(
                            -om * (1.0 - std::exp(cplx(0.0, (phi[iz] + del[iz]) -
                                                            (phi[ix] + del[ix])))));
                        cplx t2 = std::exp(
                            -lam * (1.0 - std::exp(cplx(0.0, del[iz] - del[ix]))));
                        return t1 * t2;
                    };
                    cplx s = leak(2, 0) + leak(3, 0) + leak(2, 1) -
                             ((n % 2 == 0) ? 1.0 : -1.0) * leak(3, 1);
                    double f = std::norm(s / denom);
                    best = std::max(best, f);
                }
    return std::min(best, 1.0);
}

}  // namespace qkd::tha

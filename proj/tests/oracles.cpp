#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracles {

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

// dual-rail encoded coherent state in Fock(B1) (x) Fock(B2)
Eigen::VectorXcd encoded_coherent(const qkd::source::EncodingLabel& a, cplx alpha,
                                  int cutoff) {
    const double r = 1.0 / std::sqrt(2.0);
    cplx u1, u2;
    if (a.basis == qkd::source::Basis::Z) {
        u1 = a.bit == 0 ? alpha : cplx(0.0);
        u2 = a.bit == 0 ? cplx(0.0) : alpha;
    } else {
        u1 = alpha * r;
        u2 = a.bit == 0 ? alpha * r : -alpha * r;
    }
    return kron(fock_coherent(u1, cutoff), fock_coherent(u2, cutoff));
}

}  // namespace

Eigen::VectorXcd fock_coherent(cplx alpha, int cutoff) {
    Eigen::VectorXcd v(cutoff + 1);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= cutoff; ++n) {
        v(n) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

std::vector<double> discrete_pmf_dft(double beta, int N, int cutoff) {
    std::vector<Eigen::VectorXcd> grid;
    for (int l = 0; l < N; ++l)
        grid.push_back(fock_coherent(std::sqrt(beta) *
                                         std::exp(cplx(0.0, 2.0 * kPi * l / N)),
                                     cutoff));
    std::vector<double> p(N);
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
        Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(cutoff + 1);
        for (int l = 0; l < N; ++l)
            proj += std::exp(cplx(0.0, -2.0 * kPi * n * l / N)) * grid[l] /
                    static_cast<double>(N);
        p[n] = proj.squaredNorm();
        total += p[n];
    }
    for (double& v : p) v /= total;
    return p;
}

double discrete_overlap_direct(int n, double zeta, double gamma, int N, int cutoff) {
    auto project = [&](double b) {
        Eigen::VectorXcd proj = Eigen::VectorXcd::Zero(cutoff + 1);
        for (int l = 0; l < N; ++l)
            proj += std::exp(cplx(0.0, -2.0 * kPi * n * l / N)) *
                    fock_coherent(std::sqrt(b) * std::exp(cplx(0.0, 2.0 * kPi * l / N)),
                                  cutoff) /
                    static_cast<double>(N);
        return proj.normalized().eval();
    };
    return std::abs(project(gamma).dot(project(zeta)));
}

double discrete_coin_overlap_direct(int n, double beta, int N, int cutoff) {
    using qkd::source::EncodingLabel;
    auto class_vec = [&](const EncodingLabel& a) {
        Eigen::VectorXcd acc =
            Eigen::VectorXcd::Zero((cutoff + 1) * (cutoff + 1));
        for (int l = 0; l < N; ++l) {
            cplx alpha = std::sqrt(beta) * std::exp(cplx(0.0, 2.0 * kPi * l / N));
            acc += std::exp(cplx(0.0, -2.0 * kPi * n * l / N)) *
                   encoded_coherent(a, alpha, cutoff) / static_cast<double>(N);
        }
        return acc.normalized().eval();
    };
    Eigen::VectorXcd z0 = class_vec(EncodingLabel::zero_z());
    Eigen::VectorXcd z1 = class_vec(EncodingLabel::one_z());
    Eigen::VectorXcd x0 = class_vec(EncodingLabel::zero_x());
    Eigen::VectorXcd x1 = class_vec(EncodingLabel::one_x());
    const double r = 1.0 / std::sqrt(2.0);
    cplx acc = 0.5 * (r * z0.dot(x0) + r * z0.dot(x1) + r * z1.dot(x0) -
                      r * z1.dot(x1));
    return std::abs(acc);
}

ThaFock tha_fock_single(const qkd::tha::ThaScenario& sc, double beta,
                        const qkd::source::EncodingLabel& a, int cutoff_b,
                        int cutoff_e) {
    const int N = sc.phase_count;
    const double om = sc.omega_of(beta);
    ThaFock out;
    out.class_vecs.resize(N);
    double total = 0.0;
    out.stats.resize(N);
    for (int n = 0; n < N; ++n) {
        Eigen::VectorXcd acc =
            Eigen::VectorXcd::Zero((cutoff_b + 1) * (cutoff_e + 1));
        for (int l = 0; l < N; ++l) {
            double th = 2.0 * kPi * l / N;
            Eigen::VectorXcd vb =
                fock_coherent(std::sqrt(beta) * std::exp(cplx(0.0, th)), cutoff_b);
            Eigen::VectorXcd ve = fock_coherent(
                std::sqrt(om) *
                    std::exp(cplx(0.0, th + qkd::tha::encoding_phase(a))),
                cutoff_e);
            acc += std::exp(cplx(0.0, -2.0 * kPi * n * l / N)) * kron(vb, ve);
        }
        out.class_vecs[n] = acc;
        out.stats[n] = acc.squaredNorm();
        total += out.stats[n];
    }
    for (double& v : out.stats) v /= total;
    return out;
}

double tha_overlap_fock(const qkd::tha::ThaScenario& sc, double zeta, double gamma,
                        const qkd::source::EncodingLabel& a, int n, int cutoff_b,
                        int cutoff_e) {
    ThaFock fz = tha_fock_single(sc, zeta, a, cutoff_b, cutoff_e);
    ThaFock fg = tha_fock_single(sc, gamma, a, cutoff_b, cutoff_e);
    double nz = fz.class_vecs[n].norm(), ng = fg.class_vecs[n].norm();
    if (nz == 0.0 || ng == 0.0) return 0.0;
    return std::abs(fg.class_vecs[n].dot(fz.class_vecs[n])) / (nz * ng);
}

Eigen::Matrix2cd tha_cross_basis_fock(const qkd::tha::ThaScenario& sc, double beta,
                                      int n, int cutoff_b, int cutoff_e) {
    using qkd::source::EncodingLabel;
    const int N = sc.phase_count;
    const double om = sc.omega_of(beta);
    auto class_vec = [&](const EncodingLabel& a) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(
            (cutoff_b + 1) * (cutoff_b + 1) * (cutoff_e + 1));
        for (int l = 0; l < N; ++l) {
            double th = 2.0 * kPi * l / N;
            cplx alpha = std::sqrt(beta) * std::exp(cplx(0.0, th));
            Eigen::VectorXcd vb = encoded_coherent(a, alpha, cutoff_b);
            Eigen::VectorXcd ve = fock_coherent(
                std::sqrt(om) *
                    std::exp(cplx(0.0, th + qkd::tha::encoding_phase(a))),
                cutoff_e);
            acc += std::exp(cplx(0.0, -2.0 * kPi * n * l / N)) * kron(vb, ve);
        }
        return acc;
    };
    Eigen::VectorXcd zv[2] = {class_vec(EncodingLabel::zero_z()),
                              class_vec(EncodingLabel::one_z())};
    Eigen::VectorXcd xv[2] = {class_vec(EncodingLabel::zero_x()),
                              class_vec(EncodingLabel::one_x())};
    Eigen::Matrix2cd O;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            O(j, k) = zv[j].dot(xv[k]) / (zv[j].norm() * xv[k].norm());
    return O;
}

double density_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sq =
        es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(sq * sigma * sq);
    double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

double pm_fidelity_gram_span(const qkd::tha::PmScenario& sc, double zeta,
                             double gamma) {
    // the N-phase cyclic symmetry splits the joint span into rank-one blocks,
    // one per phase sector m: both mixtures decompose as sums of the sector
    // projections of their defining product vectors, so
    //   F = (sum_m |<m-bar_zeta | m-bar_gamma>|)^2
    // with the sector inner products obtained exactly from the deviation Gram
    // (exp(w) - 1 evaluated by series to dodge cancellation at small leaks).
    const int N = sc.phase_count;
    const double lam = sc.pm_intensity;
    const double oz = sc.omega_of(zeta), og = sc.omega_of(gamma);
    auto expm1c = [](cplx w) {
        if (std::abs(w) > 0.25) return std::exp(w) - 1.0;
        cplx term = w, sum = w;
        for (int k = 2; k <= 24; ++k) {
            term *= w / static_cast<double>(k);
            sum += term;
            if (std::abs(term) < 1e-20 * std::abs(sum)) break;
        }
        return sum;
    };
    // log-kernel between grid states of intensities (a, b) at phase lag d
    auto log_kernel = [&](double a, double b, double d_phase) {
        cplx rot = std::exp(cplx(0.0, d_phase));
        return std::sqrt(a * b) * rot - 0.5 * (a + b) + lam * (rot - 1.0);
    };
    auto sector_inner = [&](double a, double b, int m) {
        cplx acc = 0.0;
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                double lag = 2.0 * kPi * (k - j) / N;
                cplx dev = expm1c(log_kernel(a, b, lag));
                acc += std::exp(cplx(0.0, 2.0 * kPi * m * (j - k) / N)) * dev;
            }
        }
        acc /= static_cast<double>(N) * N;
        if (m == 0) acc += 1.0;  // the all-ones part lives solely in sector 0
        return acc;
    };
    double root_f = 0.0;
    for (int m = 0; m < N; ++m) root_f += std::abs(sector_inner(oz, og, m));
    return std::min(root_f * root_f, 1.0);
}

}  // namespace oracles

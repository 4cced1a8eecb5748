#include "qkd/gramsdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

namespace qkd::gram {

namespace {

using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;

// Free entries v = (x, y, z) sit at (1,4), (2,3), (3,4) of
//   G = [ 1  c  0  x ]
//       [ c  1  y  0 ]
//       [ 0  y  1  z ]
//       [ x  0  z  1 ]
Mat4 gram_of(double c, const Vec3& v) {
    Mat4 g;
    g << 1.0, c, 0.0, v(0),
         c, 1.0, v(1), 0.0,
         0.0, v(1), 1.0, v(2),
         v(0), 0.0, v(2), 1.0;
    return g;
}

struct Weights {
    double w_fixed;  // multiplies the fixed entry G21
    Vec3 w;          // multiplies (x, y, z)
};

Weights objective_weights(const GramProblem& p) {
    double gz = std::clamp(p.gamma_zeta, 0.0, 1.0);
    double gg = std::clamp(p.gamma_gamma, 0.0, 1.0);
    Weights w;
    w.w_fixed = std::sqrt((1.0 - gz) * (1.0 - gg));
    w.w = Vec3(std::sqrt((1.0 - gz) * gg),   // x = G41 pairs perp_gamma with ideal_zeta
               std::sqrt((1.0 - gg) * gz),   // y = G23 pairs ideal_gamma with perp_zeta
               std::sqrt(gz * gg));          // z = G43 pairs the two perp states
    return w;
}

bool is_pd(const Mat4& g, double margin) {
    Eigen::LLT<Mat4> llt(g - margin * Mat4::Identity());
    return llt.info() == Eigen::Success;
}

// A dual candidate is the 7-vector of multipliers behind the slack matrix
//   Z = C - sum_i y_i A_i,
// identified by Z's constrained entries; the free entries of Z are pinned to
// the objective coefficients. Verification re-builds Z exactly, checks PSD
// (shifting the diagonal multipliers when rounding left a tiny negative
// eigenvalue, which only lowers the reported objective), and evaluates the
// weak-duality bound at the true fixed overlap.
struct DualCandidate {
    double diag[4];  // Z_jj
    double z01, z02, z13;
};

struct Certified {
    double objective;
    double residual;
};

std::optional<Certified> certify(const DualCandidate& cand, const Weights& wt,
                                 double c_true, double tol) {
    Mat4 z = Mat4::Zero();
    for (int i = 0; i < 4; ++i) z(i, i) = cand.diag[i];
    z(0, 1) = z(1, 0) = cand.z01;
    z(0, 2) = z(2, 0) = cand.z02;
    z(1, 3) = z(3, 1) = cand.z13;
    z(0, 3) = z(3, 0) = 0.5 * wt.w(0);
    z(1, 2) = z(2, 1) = 0.5 * wt.w(1);
    z(2, 3) = z(3, 2) = 0.5 * wt.w(2);
    if (!z.allFinite()) return std::nullopt;
    Eigen::SelfAdjointEigenSolver<Mat4> es(z);
    double lam = es.eigenvalues().minCoeff();
    double shift = 0.0;
    if (lam < 0.0) {
        shift = lam;  // y_jj -> y_jj + lam keeps feasibility, costs 4|lam|
        z -= lam * Mat4::Identity();
        Eigen::SelfAdjointEigenSolver<Mat4> es2(z);
        lam = es2.eigenvalues().minCoeff();
    }
    Certified out;
    out.residual = std::max(0.0, -lam);
    if (out.residual > tol) return std::nullopt;
    double y_sum = 0.0;
    for (int i = 0; i < 4; ++i) y_sum += -(cand.diag[i]) + shift;
    double y12 = 0.5 * wt.w_fixed - cand.z01;
    out.objective = y_sum + 2.0 * c_true * y12;
    if (!std::isfinite(out.objective)) return std::nullopt;
    return out;
}

// Complementary-slackness construction: at the coplanar-fan optimum the slack
// matrix lives on the kernel of the rank-2 optimal Gram matrix. Valid (PSD)
// exactly in the regime where the opened angle stays below pi; elsewhere the
// verification rejects it and the barrier candidate takes over.
DualCandidate kernel_candidate(const Weights& wt, double c_true) {
    const double c0 = std::min(c_true, 1.0 - 1e-14);
    const double s = std::sqrt(std::max(0.0, 1.0 - c0 * c0));
    const double wx = wt.w(0), wy = wt.w(1), wz = wt.w(2);
    double b = s * wx / 2.0 + c0 * wz / 2.0;
    double e = -c0 * wx / 2.0 + s * wz / 2.0;
    double a = (wy / 2.0 - e * c0) / s;
    Eigen::Vector4d k1(-c0, 1.0, s, 0.0), k2(s, 0.0, c0, 1.0);
    Mat4 z = a * k1 * k1.transpose() + b * k2 * k2.transpose() +
             e * (k1 * k2.transpose() + k2 * k1.transpose());
    DualCandidate cand;
    for (int i = 0; i < 4; ++i) cand.diag[i] = z(i, i);
    cand.z01 = z(0, 1);
    cand.z02 = z(0, 2);
    cand.z13 = z(1, 3);
    return cand;
}

}  // namespace

CertifiedBound overlap_lower_bound(const GramProblem& p, double tol) {
    if (p.ideal_overlap < 0.0 || p.ideal_overlap > 1.0 ||
        p.gamma_zeta < 0.0 || p.gamma_zeta > 1.0 ||
        p.gamma_gamma < 0.0 || p.gamma_gamma > 1.0)
        throw std::invalid_argument("Gram problem inputs outside [0,1]");

    const double c_true = p.ideal_overlap;
    // strict interior for the barrier needs |c| < 1; every dual candidate is
    // re-evaluated against c_true, so the inset never costs soundness
    const double c = std::min(c_true, 1.0 - 1e-9);
    Weights wt = objective_weights(p);

    // coplanar-fan configuration: feasible for every c (a Gram matrix of unit
    // plane vectors) and optimal whenever the opened angle stays below pi
    const double s_true = std::sqrt(std::max(0.0, 1.0 - c_true * c_true));
    const Vec3 fan(-s_true, -s_true, -c_true);

    Vec3 v = 0.9 * Vec3(-std::sqrt(1.0 - c * c), -std::sqrt(1.0 - c * c), -c);
    if (!is_pd(gram_of(c, v), 1e-13)) v = Vec3::Zero();
    Mat4 g = gram_of(c, v);

    // short-step barrier path on f_t = t * w.v - logdet G(v), Armijo-damped
    auto barrier_value = [&](double t, const Vec3& vv, bool* ok) {
        Eigen::LLT<Mat4> llt(gram_of(c, vv));
        if (llt.info() != Eigen::Success) {
            *ok = false;
            return 0.0;
        }
        *ok = true;
        double logdet = 0.0;
        for (int i = 0; i < 4; ++i) logdet += std::log(llt.matrixL()(i, i));
        return t * wt.w.dot(vv) - 2.0 * logdet;
    };
    double t = 4.0;
    const double t_final = 1e8;
    while (true) {
        for (int it = 0; it < 80; ++it) {
            Mat4 gi = g.inverse();
            if (!gi.allFinite()) break;
            Vec3 grad(t * wt.w(0) - 2.0 * gi(0, 3),
                      t * wt.w(1) - 2.0 * gi(1, 2),
                      t * wt.w(2) - 2.0 * gi(2, 3));
            auto pair_h = [&](int i1, int j1, int i2, int j2) {
                return 2.0 * (gi(i1, i2) * gi(j1, j2) + gi(i1, j2) * gi(j1, i2));
            };
            Eigen::Matrix3d h;
            h(0, 0) = pair_h(0, 3, 0, 3);
            h(1, 1) = pair_h(1, 2, 1, 2);
            h(2, 2) = pair_h(2, 3, 2, 3);
            h(0, 1) = h(1, 0) = pair_h(0, 3, 1, 2);
            h(0, 2) = h(2, 0) = pair_h(0, 3, 2, 3);
            h(1, 2) = h(2, 1) = pair_h(1, 2, 2, 3);
            Vec3 step = h.ldlt().solve(-grad);
            if (!step.allFinite()) break;
            double decrement = -grad.dot(step);
            if (!(decrement > 0.0)) break;
            bool ok = false;
            double f0 = barrier_value(t, v, &ok);
            if (!ok) break;
            double alpha = 1.0;
            Vec3 cand;
            bool accepted = false;
            while (alpha > 1e-16) {
                cand = v + alpha * step;
                bool pd = false;
                double f1 = barrier_value(t, cand, &pd);
                if (pd && f1 <= f0 - 0.25 * alpha * decrement) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
            v = cand;
            g = gram_of(c, v);
            if (decrement * alpha < 1e-11) break;
        }
        if (t >= t_final) break;
        t = std::min(t * 3.0, t_final);
    }

    std::optional<Certified> best;
    Mat4 gi = g.inverse() / t;
    if (gi.allFinite()) {
        DualCandidate barrier_cand;
        for (int i = 0; i < 4; ++i) barrier_cand.diag[i] = gi(i, i);
        barrier_cand.z01 = gi(0, 1);
        barrier_cand.z02 = gi(0, 2);
        barrier_cand.z13 = gi(1, 3);
        best = certify(barrier_cand, wt, c_true, tol);
    }
    std::optional<Certified> kc = certify(kernel_candidate(wt, c_true), wt, c_true, tol);
    if (kc && (!best || kc->objective > best->objective)) best = kc;
    if (!best) throw UncertifiedError("Gram SDP: no dual candidate passed the PSD check");

    CertifiedBound out;
    out.dual_objective = best->objective;
    out.dual_residual = best->residual;
    out.value = std::clamp(out.dual_objective, -1.0, 1.0);

    // primal value at the fan point (feasible by construction for c_true)
    Eigen::SelfAdjointEigenSolver<Mat4> esp(gram_of(c_true, fan));
    if (esp.eigenvalues().minCoeff() < -1e-12)
        throw UncertifiedError("Gram SDP primal point failed the PSD check");
    out.primal_objective = wt.w_fixed * c_true + wt.w.dot(fan);
    return out;
}

double squared_overlap_bound(const CertifiedBound& b) {
    double v = std::max(b.value, 0.0);
    return std::min(v * v, 1.0);
}

}  // namespace qkd::gram

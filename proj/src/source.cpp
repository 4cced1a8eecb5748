#include "qkd/source.hpp"

#include <cmath>
#include <algorithm>

namespace qkd::source {

void IntensitySet::validate() const {
    if (!(mu > nu && nu > omega && omega >= 0.0))
        throw std::invalid_argument("intensities must satisfy mu > nu > omega >= 0");
    double s = p_mu + p_nu + p_omega;
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("intensity selection probabilities must sum to 1");
}

PhotonStatistics poisson_pmf(double beta, int n_cut) {
    if (beta < 0.0) throw std::invalid_argument("negative intensity");
    if (n_cut < 0) throw std::invalid_argument("negative n_cut");
    PhotonStatistics st;
    st.intensity = beta;
    st.dist = PhaseDistribution::uniform();
    st.n_cut = n_cut;
    st.probs.resize(n_cut + 1);
    double term = std::exp(-beta);  // n = 0
    double cum = 0.0;
    for (int n = 0; n <= n_cut; ++n) {
        st.probs[n] = term;
        cum += term;
        term *= beta / static_cast<double>(n + 1);
    }
    st.tail = std::max(0.0, 1.0 - cum);
    return st;
}

double wrapped_exp_series(double b, int n, int N) {
    if (b < 0.0) throw std::invalid_argument("negative series argument");
    if (b == 0.0) return n == 0 ? 1.0 : 0.0;
    // first term b^n/n! via logs to dodge overflow at large n
    double sum = 0.0;
    double term = std::exp(n * std::log(b) - std::lgamma(n + 1.0));
    for (int l = 0;; ++l) {
        sum += term;
        // advance m -> m + N
        int m = l * N + n;
        for (int k = m + 1; k <= m + N; ++k) term *= b / static_cast<double>(k);
        if (term < 1e-18 * sum) break;  // factorial decay
        if (l > 500) break;
    }
    return sum;
}

PhotonStatistics discrete_pmf(double beta, int N) {
    if (beta < 0.0) throw std::invalid_argument("negative intensity");
    if (N < 2) throw std::invalid_argument("discrete phase count must be >= 2");
    PhotonStatistics st;
    st.intensity = beta;
    st.dist = PhaseDistribution::discrete(N);
    st.n_cut = N - 1;
    st.probs.resize(N);
    double pref = std::exp(-beta);
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
        st.probs[n] = pref * wrapped_exp_series(beta, n, N);
        total += st.probs[n];
    }
    // the N classes partition the Poisson law; renormalize the residual rounding
    for (double& p : st.probs) p /= total;
    st.tail = 0.0;
    return st;
}

double ideal_intensity_overlap(int n, double zeta, double gamma,
                               const PhaseDistribution& dist) {
    if (n < 0) throw std::invalid_argument("negative photon number");
    if (zeta < 0.0 || gamma < 0.0) throw std::invalid_argument("negative intensity");
    if (zeta == gamma) return 1.0;
    if (!dist.is_discrete()) return 1.0;  // Fock states for every intensity
    int N = dist.discrete_count;
    double tz = wrapped_exp_series(zeta, n, N);
    double tg = wrapped_exp_series(gamma, n, N);
    if (tz <= 0.0 || tg <= 0.0) return 1.0;  // state undefined (zero weight class)
    double num = wrapped_exp_series(std::sqrt(zeta * gamma), n, N);
    return std::clamp(num / std::sqrt(tz * tg), 0.0, 1.0);
}

namespace {

// Fock amplitude of |m_a> on |m-k>|k>, Eq.-(41)-style dual-mode expansion.
double mode_amplitude(const EncodingLabel& a, int m, int k) {
    if (a.basis == Basis::Z) {
        if (a.bit == 0) return k == 0 ? 1.0 : 0.0;
        return k == m ? 1.0 : 0.0;
    }
    double lc = 0.5 * (std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                       std::lgamma(m - k + 1.0)) -
                0.5 * m * std::log(2.0);
    double v = std::exp(lc);
    if (a.bit == 1 && (k % 2 == 1)) v = -v;
    return v;
}

}  // namespace

double encoding_fock_overlap(const EncodingLabel& a, const EncodingLabel& b, int m) {
    if (m < 0) throw std::invalid_argument("negative photon number");
    double s = 0.0;
    for (int k = 0; k <= m; ++k) s += mode_amplitude(a, m, k) * mode_amplitude(b, m, k);
    return s;
}

double ideal_coin_overlap(int n, double beta, const PhaseDistribution& dist) {
    if (n < 0) throw std::invalid_argument("negative photon number");
    if (beta < 0.0) throw std::invalid_argument("negative intensity");
    const EncodingLabel zs[2] = {EncodingLabel::zero_z(), EncodingLabel::one_z()};
    const EncodingLabel xs[2] = {EncodingLabel::zero_x(), EncodingLabel::one_x()};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double acc = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            double a_sign = (j == 1 && k == 1) ? -inv_sqrt2 : inv_sqrt2;  // <j_Z|k_X>
            double be;
            if (!dist.is_discrete()) {
                be = encoding_fock_overlap(zs[j], xs[k], n);
            } else {
                int N = dist.discrete_count;
                double norm = wrapped_exp_series(beta, n, N);
                if (norm <= 0.0) return 1.0;
                double s = 0.0;
                double w = std::exp(n * std::log(beta > 0 ? beta : 1.0) -
                                    std::lgamma(n + 1.0));
                if (beta == 0.0) w = (n == 0) ? 1.0 : 0.0;
                for (int l = 0;; ++l) {
                    int m = l * N + n;
                    s += w * encoding_fock_overlap(zs[j], xs[k], m);
                    for (int t = m + 1; t <= m + N; ++t) w *= beta / static_cast<double>(t);
                    if (w < 1e-18 * norm) break;
                    if (l > 500) break;
                }
                be = s / norm;
            }
            acc += 0.5 * a_sign * be;
        }
    }
    return std::clamp(std::abs(acc), 0.0, 1.0);
}

}  // namespace qkd::source

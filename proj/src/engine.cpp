#include "qkd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/gramsdp.hpp"
#include "qkd/perturb.hpp"
#include "qkd/phase_error.hpp"
#include "qkd/tha.hpp"

namespace qkd::engine {

int SourceScenario::resolved_n_cut() const {
    if (const auto* g = std::get_if<GeneralEpsilonModel>(&model)) {
        if (g->dist.is_discrete()) return g->dist.discrete_count - 1;
        return n_cut;
    }
    if (const auto* t = std::get_if<CharacterizedThaModel>(&model))
        return t->phase_count - 1;
    return n_cut;  // ExtraPm keeps the Poisson truncation
}

void SourceScenario::validate() const {
    intensities.validate();
    channel.validate();
    if (n_cut < 1) throw std::invalid_argument("n_cut must be >= 1");
    if (const auto* g = std::get_if<GeneralEpsilonModel>(&model)) {
        if (g->epsilon < 0.0 || g->epsilon > 1.0)
            throw std::invalid_argument("epsilon outside [0,1]");
    } else if (const auto* t = std::get_if<CharacterizedThaModel>(&model)) {
        if (t->back_intensity < 0.0) throw std::invalid_argument("negative I");
        if (t->phase_count < 2) throw std::invalid_argument("THA needs N >= 2");
    } else if (const auto* m = std::get_if<ExtraPmModel>(&model)) {
        if (m->encoder_intensity < 0.0 || m->pm_intensity < 0.0)
            throw std::invalid_argument("negative leak intensity");
        if (m->phase_count < 1) throw std::invalid_argument("PM needs N >= 1");
    }
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("entropy argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double key_rate(double p1_lower, double y1_lower, double eph1_upper,
                double gain_mu_z, double qber_mu_z, double f_ec) {
    double lambda_ec = f_ec * gain_mu_z * binary_entropy(std::clamp(qber_mu_z, 0.0, 1.0));
    double eph = std::clamp(eph1_upper, 0.0, 0.5);
    double r = p1_lower * y1_lower * (1.0 - binary_entropy(eph)) - lambda_ec;
    return std::max(0.0, r);
}

Evaluator::Evaluator(const SourceScenario& scenario, const EngineConfig& config)
    : scenario_(scenario), config_(config), rng_(config.seed) {
    scenario_.validate();
}

const Evaluator::SourceBundle& Evaluator::bundle(double mu, double nu) {
    auto key = std::make_pair(mu, nu);
    auto it = bundles_.find(key);
    if (it != bundles_.end()) return it->second;

    SourceBundle b;
    b.n_cut = scenario_.resolved_n_cut();
    const double omega = scenario_.intensities.omega;
    const std::array<double, 3> betas = {mu, nu, omega};
    const int nc = b.n_cut;

    if (const auto* g = std::get_if<GeneralEpsilonModel>(&scenario_.model)) {
        const double kappa = std::sqrt(g->epsilon);
        std::array<std::vector<double>, 3> spectra;
        std::array<std::vector<perturb::EigGapBound>, 3> gaps;
        for (int i = 0; i < 3; ++i) {
            source::PhotonStatistics st =
                g->dist.is_discrete() ? source::discrete_pmf(betas[i], g->dist.discrete_count)
                                      : source::poisson_pmf(betas[i], nc + 1);
            spectra[i] = st.probs;
            perturb::PerturbedStatistics ps = perturb::perturb_statistics(st, g->epsilon);
            b.p_lower[i].assign(ps.lower.begin(), ps.lower.begin() + nc + 1);
            b.p_upper[i].assign(ps.upper.begin(), ps.upper.begin() + nc + 1);
            gaps[i].resize(nc + 1);
            for (int n = 0; n <= nc; ++n)
                gaps[i][n] = perturb::dk_gamma(spectra[i], n, kappa);
        }
        b.mode = g->dist.is_discrete() ? decoy::GainMode::DiscreteExact
                                       : decoy::GainMode::General;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                std::vector<double> zz(nc + 1);
                for (int n = 0; n <= nc; ++n) {
                    gram::GramProblem gp;
                    gp.ideal_overlap =
                        source::ideal_intensity_overlap(n, betas[i], betas[j], g->dist);
                    gp.gamma_zeta = gaps[i][n].gamma;
                    gp.gamma_gamma = gaps[j][n].gamma;
                    zz[n] = gram::squared_overlap_bound(gram::overlap_lower_bound(gp));
                }
                b.z[i][j] = zz;
                b.z[j][i] = std::move(zz);
            }
        }
        b.p1_lower_mu = nc >= 1 ? b.p_lower[0][1] : 0.0;
        double f_leg = coin::real_ideal_fidelity_lower(b.p_lower[0][1], b.p_upper[0][1],
                                                       gaps[0][1].gamma);
        double mid = source::ideal_coin_overlap(1, mu, g->dist);
        b.coin_fidelity_1 = coin::bures_triangle_fidelity(f_leg, mid, f_leg);
    } else if (const auto* t = std::get_if<CharacterizedThaModel>(&scenario_.model)) {
        tha::ThaScenario sc{t->back_intensity, t->phase_count, mu};
        auto enc = source::EncodingLabel::zero_z();
        for (int i = 0; i < 3; ++i) {
            b.p_lower[i] = tha::tha_photon_statistics(sc, betas[i], enc);
            b.p_upper[i] = b.p_lower[i];
        }
        b.mode = decoy::GainMode::ThaExact;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                std::vector<double> zz(nc + 1);
                for (int n = 0; n <= nc; ++n) {
                    double ov = tha::tha_intensity_overlap(sc, betas[i], betas[j], enc, n);
                    zz[n] = ov * ov;
                }
                b.z[i][j] = zz;
                b.z[j][i] = std::move(zz);
            }
        }
        b.p1_lower_mu = b.p_lower[0][1];
        b.coin_fidelity_1 = tha::tha_coin_fidelity(sc, mu, 1);
    } else {
        const auto& m = std::get<ExtraPmModel>(scenario_.model);
        tha::PmScenario sc;
        sc.encoder_intensity = m.encoder_intensity;
        sc.pm_intensity = m.pm_intensity;
        sc.phase_count = m.phase_count;
        sc.mu = mu;
        for (int i = 0; i < 3; ++i) {
            source::PhotonStatistics st = source::poisson_pmf(betas[i], nc);
            b.p_lower[i] = st.probs;
            b.p_upper[i] = st.probs;
        }
        b.mode = decoy::GainMode::General;  // exact Poisson statistics, open tail
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                double f = tha::pm_leak_fidelity(sc, betas[i], betas[j]);
                std::vector<double> zz(nc + 1, std::clamp(f, 0.0, 1.0));
                b.z[i][j] = zz;
                b.z[j][i] = std::move(zz);
            }
        }
        b.p1_lower_mu = b.p_lower[0][1];
        b.coin_fidelity_1 = tha::pm_coin_fidelity(sc, mu, 1);
    }
    return bundles_.emplace(key, std::move(b)).first->second;
}

decoy::DecoyInputs Evaluator::inputs_at(double distance_km, double mu, double nu) {
    const SourceBundle& b = bundle(mu, nu);
    decoy::DecoyInputs in;
    in.n_cut = b.n_cut;
    in.mode = b.mode;
    in.p_lower = b.p_lower;
    in.p_upper = b.p_upper;
    in.z = b.z;
    const std::array<double, 3> betas = {mu, nu, scenario_.intensities.omega};
    for (int i = 0; i < 3; ++i) {
        in.gains[i] = channel::gain(scenario_.channel, distance_km, betas[i]);
        in.error_gains[i] = channel::error_gain(scenario_.channel, distance_km, betas[i]);
    }
    return in;
}

KeyRatePoint Evaluator::evaluate_point(double distance_km, double mu, double nu,
                                       bool update_references) {
    KeyRatePoint pt;
    pt.distance_km = distance_km;
    pt.mu = mu;
    pt.nu = nu;
    pt.gain_mu_z = channel::gain(scenario_.channel, distance_km, mu);
    double eq = channel::error_gain(scenario_.channel, distance_km, mu);
    pt.qber_mu_z = pt.gain_mu_z > 0.0 ? eq / pt.gain_mu_z : 0.0;

    decoy::DecoyInputs in = inputs_at(distance_km, mu, nu);
    const SourceBundle& b = bundle(mu, nu);
    pt.p1_lower = b.p1_lower_mu;
    pt.coin_fidelity = b.coin_fidelity_1;

    decoy::Target target{1, 0};
    decoy::LpOutcome ylp, elp;
    try {
        // the channel model and the leak models are encoding-symmetric, so one
        // solve serves all four encodings of the basis
        const decoy::RefMatrix* warm_y = yield_refs_ ? &*yield_refs_ : nullptr;
        ylp = decoy::solve_yield_best(in, target, warm_y, config_.reference_policy, rng_);
        const decoy::RefMatrix* warm_e = error_refs_ ? &*error_refs_ : nullptr;
        elp = decoy::solve_error_best(in, target, warm_e, config_.reference_policy, rng_);
    } catch (const lp::InfeasibleError&) {
        pt.status = "infeasible";
        pt.rate = 0.0;
        return pt;
    }
    if (update_references) {
        yield_refs_ = ylp.solution;
        error_refs_ = elp.solution;
    }

    decoy::BoundSet bs = decoy::combine_bounds({ylp.bound, ylp.bound},
                                               {elp.bound, elp.bound});
    pt.y1_lower = bs.yield_lower;
    pt.bit_error_x = bs.bit_error_upper;

    coin::CoinAssessment ca =
        coin::coin_imbalance(b.coin_fidelity_1, bs.yield_lower, bs.yield_lower);
    pt.delta1 = ca.delta;
    pt.eph1_upper = ca.vacuous
                        ? 0.5
                        : coin::phase_error_upper(std::min(bs.bit_error_upper, 0.5),
                                                  ca.delta);
    pt.lambda_ec = scenario_.channel.f_ec * pt.gain_mu_z *
                   binary_entropy(std::clamp(pt.qber_mu_z, 0.0, 1.0));
    pt.rate = key_rate(pt.p1_lower, pt.y1_lower, pt.eph1_upper, pt.gain_mu_z,
                       pt.qber_mu_z, scenario_.channel.f_ec);
    if (pt.rate <= 0.0 && pt.status == "ok") pt.status = "zero";
    return pt;
}

KeyRatePoint Evaluator::optimize_intensities(double distance_km) {
    const GridSpec& gs = config_.grid;
    double mu_lo = gs.mu_min, mu_hi = gs.mu_max;
    double nu_lo = gs.nu_min;
    double nu_hi_frac = 0.5;  // nu <= mu/2
    KeyRatePoint best;
    best.rate = -1.0;
    auto scan = [&](double mlo, double mhi, double nlo, double nhi_abs, int mpts,
                    int npts) {
        for (int i = 0; i < mpts; ++i) {
            double mu = mpts == 1 ? mlo : mlo + (mhi - mlo) * i / (mpts - 1);
            mu = std::clamp(mu, gs.mu_min, gs.mu_max);
            double nu_cap = std::min(nhi_abs, nu_hi_frac * mu);
            for (int j = 0; j < npts; ++j) {
                double nu = npts == 1 ? nlo : nlo + (nu_cap - nlo) * j / (npts - 1);
                nu = std::clamp(nu, gs.nu_min, nu_hi_frac * mu);
                if (!(mu > nu && nu > scenario_.intensities.omega)) continue;
                KeyRatePoint pt;
                try {
                    pt = evaluate_point(distance_km, mu, nu, false);
                } catch (const std::exception&) {
                    continue;  // unusable candidate, keep scanning
                }
                if (pt.rate > best.rate ||
                    (pt.rate == best.rate &&
                     (pt.mu < best.mu || (pt.mu == best.mu && pt.nu < best.nu)))) {
                    best = pt;
                }
            }
        }
    };
    scan(mu_lo, mu_hi, nu_lo, nu_hi_frac * mu_hi, gs.mu_points, gs.nu_points);
    double mu_span = (mu_hi - mu_lo);
    double nu_span = (nu_hi_frac * mu_hi - nu_lo);
    for (int round = 0; round < gs.refine_rounds; ++round) {
        mu_span /= gs.shrink;
        nu_span /= gs.shrink;
        double mlo = std::max(gs.mu_min, best.mu - mu_span / 2.0);
        double mhi = std::min(gs.mu_max, best.mu + mu_span / 2.0);
        double nlo = std::max(gs.nu_min, best.nu - nu_span / 2.0);
        double nhi = best.nu + nu_span / 2.0;
        scan(mlo, mhi, nlo, nhi, 5, 5);
    }
    // refresh the warm-start chain at the incumbent
    KeyRatePoint final_pt = evaluate_point(distance_km, best.mu, best.nu, true);
    return final_pt;
}

std::vector<KeyRatePoint> sweep(const SourceScenario& scenario,
                                const std::vector<double>& distances_km,
                                const EngineConfig& config) {
    if (!std::is_sorted(distances_km.begin(), distances_km.end()))
        throw std::invalid_argument("distances must be ascending");
    Evaluator ev(scenario, config);
    std::vector<KeyRatePoint> out;
    out.reserve(distances_km.size());
    for (double d : distances_km) {
        try {
            if (config.optimize_intensities) {
                out.push_back(ev.optimize_intensities(d));
            } else {
                out.push_back(ev.evaluate_point(d, scenario.intensities.mu,
                                                scenario.intensities.nu, true));
            }
        } catch (const std::exception& e) {
            KeyRatePoint pt;
            pt.distance_km = d;
            pt.status = std::string("error: ") + e.what();
            pt.rate = 0.0;
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace qkd::engine

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/decoylp.hpp"
#include "qkd/source.hpp"

namespace qkd::engine {

/// Uncharacterized leakage of magnitude epsilon (Eq.-(2) deviation).
struct GeneralEpsilonModel {
    double epsilon = 0.0;
    source::PhaseDistribution dist = source::PhaseDistribution::uniform();
};

/// Coherent-state THA against N-phase active randomization, fully characterized.
struct CharacterizedThaModel {
    double back_intensity = 0.0;  // I
    int phase_count = 8;
};

/// Uniform passive randomization plus an extra N-phase PM; coherent leaks of
/// intensity I from the encoder/IM path and I_l from the PM path.
struct ExtraPmModel {
    double encoder_intensity = 0.0;  // I
    double pm_intensity = 0.0;       // I_l
    int phase_count = 4;
};

using LeakModel = std::variant<GeneralEpsilonModel, CharacterizedThaModel, ExtraPmModel>;

struct SourceScenario {
    LeakModel model;
    source::IntensitySet intensities;  // omega fixed to 0 by default
    channel::ChannelParams channel;
    int n_cut = 10;  // uniform-phase truncation; discrete models force N-1

    int resolved_n_cut() const;
    void validate() const;
};

/// One evaluated distance point.
struct KeyRatePoint {
    double distance_km = 0.0;
    double mu = 0.0, nu = 0.0;
    double gain_mu_z = 0.0, qber_mu_z = 0.0;
    double y1_lower = 0.0;
    double eph1_upper = 0.5;
    double lambda_ec = 0.0;
    double rate = 0.0;
    // diagnostics
    double p1_lower = 0.0, bit_error_x = 0.5, delta1 = 0.5, coin_fidelity = 0.0;
    std::string status = "ok";
};

struct GridSpec {
    double mu_min = 0.05, mu_max = 1.0;
    int mu_points = 10;
    double nu_min = 0.005;  // nu ranges in [nu_min, mu/2]
    int nu_points = 8;
    int refine_rounds = 2;
    double shrink = 5.0;
};

struct EngineConfig {
    GridSpec grid;
    decoy::ReferencePolicy reference_policy;
    std::uint64_t seed = 1;
    bool optimize_intensities = true;
};

double binary_entropy(double x);

/// Second line of the key-rate bound with p_Z = p_mu = 1.
double key_rate(double p1_lower, double y1_lower, double eph1_upper,
                double gain_mu_z, double qber_mu_z, double f_ec);

/// Scenario pipeline with cached source-side quantities and the warm-start
/// reference chain. Not thread-safe; one evaluator per sweep lane.
class Evaluator {
  public:
    Evaluator(const SourceScenario& scenario, const EngineConfig& config);

    /// Source-side (distance-independent) inputs at one intensity choice.
    struct SourceBundle {
        int n_cut = 0;
        decoy::GainMode mode = decoy::GainMode::General;
        std::array<std::vector<double>, 3> p_lower, p_upper;
        std::array<std::array<std::vector<double>, 3>, 3> z;
        double p1_lower_mu = 0.0;
        double coin_fidelity_1 = 1.0;  // F^{1,eps,L} at beta = mu
    };

    const SourceBundle& bundle(double mu, double nu);
    decoy::DecoyInputs inputs_at(double distance_km, double mu, double nu);

    KeyRatePoint evaluate_point(double distance_km, double mu, double nu,
                                bool update_references);

    /// Grid search with local refinement; returns the best point found.
    KeyRatePoint optimize_intensities(double distance_km);

    const SourceScenario& scenario() const { return scenario_; }

  private:
    SourceScenario scenario_;
    EngineConfig config_;
    std::mt19937_64 rng_;
    std::map<std::pair<double, double>, SourceBundle> bundles_;
    std::optional<decoy::RefMatrix> yield_refs_, error_refs_;
};

/// Distance sweep (ascending); per-point failures are recorded and skipped.
std::vector<KeyRatePoint> sweep(const SourceScenario& scenario,
                                const std::vector<double>& distances_km,
                                const EngineConfig& config);

}  // namespace qkd::engine

#include "qkd/decoylp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd::decoy {

namespace {

constexpr double kRefClamp = 1e-6;  // keep tangents off the diverging poles

int var_index(int n_cut, int intensity, int n) { return intensity * (n_cut + 1) + n; }

lp::Problem build_problem(const DecoyInputs& in, Target target, const RefMatrix& refs,
                          bool error_side) {
    const int nc = in.n_cut;
    const int nv = 3 * (nc + 1);
    lp::Problem p;
    p.num_vars = nv;
    p.objective.assign(nv, 0.0);
    p.objective[var_index(nc, target.intensity, target.n)] = 1.0;
    p.sense = error_side ? lp::Sense::Maximize : lp::Sense::Minimize;

    auto push_row = [&](std::vector<double>&& coeffs, double rhs, bool eq = false) {
        p.rows.push_back({std::move(coeffs), rhs, eq});
    };

    // linearized CS rows for every ordered intensity pair and photon class
    for (int s = 0; s < 3; ++s) {
        for (int g = 0; g < 3; ++g) {
            if (s == g) continue;
            for (int n = 0; n <= nc; ++n) {
                double zr = std::clamp(in.z[s][g][n], 0.0, 1.0);
                double ref = std::clamp(refs[s][n], kRefClamp, 1.0 - kRefClamp);
                cs::LinearizedCs lin = cs::linearize(ref, zr);
                // lower tangent: intercept + slope*v_s <= v_g
                if (!(lin.lower.intercept == 0.0 && lin.lower.slope == 0.0)) {
                    std::vector<double> row(nv, 0.0);
                    row[var_index(nc, s, n)] = lin.lower.slope;
                    row[var_index(nc, g, n)] = -1.0;
                    push_row(std::move(row), -lin.lower.intercept);
                }
                // upper tangent: v_g <= intercept + slope*v_s
                if (!(lin.upper.intercept == 1.0 && lin.upper.slope == 0.0)) {
                    std::vector<double> row(nv, 0.0);
                    row[var_index(nc, g, n)] = 1.0;
                    row[var_index(nc, s, n)] = -lin.upper.slope;
                    push_row(std::move(row), lin.upper.intercept);
                }
            }
        }
    }

    // gain rows
    for (int i = 0; i < 3; ++i) {
        double obs = error_side ? in.error_gains[i] : in.gains[i];
        const auto& pl = in.p_lower[i];
        if (in.mode == GainMode::ThaExact) {
            std::vector<double> row(nv, 0.0);
            for (int n = 0; n <= nc; ++n) row[var_index(nc, i, n)] = pl[n];
            push_row(std::move(row), obs, /*eq=*/true);
            continue;
        }
        double sum_pl = 0.0;
        std::vector<double> row(nv, 0.0);
        for (int n = 0; n <= nc; ++n) {
            row[var_index(nc, i, n)] = pl[n];
            sum_pl += pl[n];
        }
        std::vector<double> neg(row);
        for (double& v : neg) v = -v;
        push_row(std::move(row), obs);                      // obs >= sum pl Y
        push_row(std::move(neg), 1.0 - sum_pl - obs);       // obs <= 1 - sum pl (1-Y)
        if (in.mode == GainMode::DiscreteExact) {
            std::vector<double> up(nv, 0.0);
            for (int n = 0; n <= nc; ++n) up[var_index(nc, i, n)] = -in.p_upper[i][n];
            push_row(std::move(up), -obs);                  // obs <= sum pu Y
        }
    }
    return p;
}

LpOutcome run(const DecoyInputs& in, Target target, const RefMatrix& refs,
              bool error_side) {
    lp::Problem p = build_problem(in, target, refs, error_side);
    lp::Solution s = lp::solve(p);
    LpOutcome out;
    out.bound = std::clamp(s.certified_bound, 0.0, 1.0);
    for (int i = 0; i < 3; ++i) {
        out.solution[i].resize(in.n_cut + 1);
        for (int n = 0; n <= in.n_cut; ++n)
            out.solution[i][n] = s.x[var_index(in.n_cut, i, n)];
    }
    return out;
}

LpOutcome best_of(const DecoyInputs& in, Target target, const RefMatrix* warm,
                  const ReferencePolicy& policy, std::mt19937_64& rng,
                  bool error_side) {
    in.validate();
    bool have = false;
    LpOutcome best;
    auto consider = [&](const RefMatrix& refs) {
        LpOutcome o = run(in, target, refs, error_side);
        bool better = !have || (error_side ? o.bound < best.bound : o.bound > best.bound);
        if (better) {
            best = std::move(o);
            have = true;
        }
    };
    if (warm != nullptr) {
        consider(*warm);
    } else {
        for (int k = 0; k < std::max(1, policy.restarts); ++k)
            consider(random_references(in.n_cut, rng));
    }
    for (int k = 0; k < policy.polish_iters; ++k) consider(best.solution);
    return best;
}

}  // namespace

void DecoyInputs::validate() const {
    if (n_cut < 0) throw std::invalid_argument("negative n_cut");
    for (int i = 0; i < 3; ++i) {
        if (!(gains[i] >= 0.0 && gains[i] <= 1.0))
            throw std::invalid_argument("gain outside [0,1]");
        if (error_gains[i] < 0.0 || error_gains[i] > gains[i] + 1e-12)
            throw std::invalid_argument("error gain outside [0, gain]");
        if (static_cast<int>(p_lower[i].size()) != n_cut + 1 ||
            static_cast<int>(p_upper[i].size()) != n_cut + 1)
            throw std::invalid_argument("statistics length mismatch");
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && static_cast<int>(z[i][j].size()) != n_cut + 1)
                throw std::invalid_argument("overlap catalog length mismatch");
}

LpOutcome solve_yield_lp(const DecoyInputs& in, Target target, const RefMatrix& refs) {
    in.validate();
    return run(in, target, refs, /*error_side=*/false);
}

LpOutcome solve_error_lp(const DecoyInputs& in, Target target, const RefMatrix& refs) {
    in.validate();
    return run(in, target, refs, /*error_side=*/true);
}

LpOutcome solve_yield_best(const DecoyInputs& in, Target target, const RefMatrix* warm,
                           const ReferencePolicy& policy, std::mt19937_64& rng) {
    return best_of(in, target, warm, policy, rng, /*error_side=*/false);
}

LpOutcome solve_error_best(const DecoyInputs& in, Target target, const RefMatrix* warm,
                           const ReferencePolicy& policy, std::mt19937_64& rng) {
    return best_of(in, target, warm, policy, rng, /*error_side=*/true);
}

BoundSet combine_bounds(const std::vector<double>& yields,
                        const std::vector<double>& xis) {
    if (yields.empty() || xis.empty())
        throw std::invalid_argument("combine_bounds needs per-encoding values");
    BoundSet b;
    b.yield_lower = *std::min_element(yields.begin(), yields.end());
    b.xi_upper = *std::max_element(xis.begin(), xis.end());
    if (b.yield_lower <= 0.0) {
        b.bit_error_upper = 1.0;  // vacuous point, rate floors at zero downstream
    } else {
        b.bit_error_upper = std::min(1.0, b.xi_upper / b.yield_lower);
    }
    return b;
}

RefMatrix random_references(int n_cut, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RefMatrix m;
    for (int i = 0; i < 3; ++i) {
        m[i].resize(n_cut + 1);
        for (int n = 0; n <= n_cut; ++n)
            m[i][n] = std::clamp(u(rng), kRefClamp, 1.0 - kRefClamp);
    }
    return m;
}

}  // namespace qkd::decoy

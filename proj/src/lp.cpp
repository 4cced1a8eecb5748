#include "qkd/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qkd::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kZeroSnap = 1e-13;

// Dense tableau simplex on:  min c.x  s.t.  A x + s = b, x,s >= 0.
// Rows arrive pre-scaled with b >= 0 handled via artificials.
struct Tableau {
    int m = 0;            // constraint rows
    int n = 0;            // structural columns
    int n_art = 0;        // artificial columns
    std::vector<double> t;  // (m+1) x (width+1), row-major; last tableau row = objective
    std::vector<int> basis;
    int width() const { return n + m + n_art; }
    double& at(int r, int c) { return t[static_cast<std::size_t>(r) * (width() + 1) + c]; }
    double at(int r, int c) const { return t[static_cast<std::size_t>(r) * (width() + 1) + c]; }
    double& rhs(int r) { return t[static_cast<std::size_t>(r) * (width() + 1) + width()]; }
    double rhs(int r) const { return t[static_cast<std::size_t>(r) * (width() + 1) + width()]; }
};

void pivot(Tableau& tb, int prow, int pcol) {
    int w = tb.width();
    double piv = tb.at(prow, pcol);
    double inv = 1.0 / piv;
    for (int c = 0; c <= w; ++c) tb.at(prow, c) *= inv;
    tb.at(prow, pcol) = 1.0;
    for (int r = 0; r <= tb.m; ++r) {
        if (r == prow) continue;
        double f = tb.at(r, pcol);
        if (std::abs(f) < kZeroSnap) {
            tb.at(r, pcol) = 0.0;
            continue;
        }
        for (int c = 0; c <= w; ++c) tb.at(r, c) -= f * tb.at(prow, c);
        tb.at(r, pcol) = 0.0;
    }
    tb.basis[prow] = pcol;
}

// Returns false on iteration stall (caller retries with Bland).
bool run_simplex(Tableau& tb, const std::vector<bool>& allowed, bool bland,
                 int max_iter, int* iters) {
    int w = tb.width();
    for (int it = 0; it < max_iter; ++it) {
        int pcol = -1;
        double best = -kPivotTol;
        for (int c = 0; c < w; ++c) {
            if (!allowed[c]) continue;
            double rc = tb.at(tb.m, c);
            if (bland) {
                if (rc < -kPivotTol) { pcol = c; break; }
            } else if (rc < best) {
                best = rc;
                pcol = c;
            }
        }
        if (pcol < 0) { *iters += it; return true; }  // optimal
        int prow = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < tb.m; ++r) {
            double a = tb.at(r, pcol);
            if (a > kPivotTol) {
                double ratio = tb.rhs(r) / a;
                if (ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && prow >= 0 && tb.basis[r] < tb.basis[prow])) {
                    best_ratio = ratio;
                    prow = r;
                }
            }
        }
        if (prow < 0) { *iters += it; return true; }  // unbounded direction; box rows prevent this
        pivot(tb, prow, pcol);
        if (tb.rhs(prow) < 0.0 && tb.rhs(prow) > -1e-12) tb.rhs(prow) = 0.0;
    }
    *iters += max_iter;
    return false;
}

struct ScaledData {
    // rows as <= constraints over structural vars (box rows included)
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    std::vector<double> c;
    int n = 0;
};

ScaledData expand(const Problem& p) {
    ScaledData d;
    d.n = p.num_vars;
    d.c = p.objective;
    if (p.sense == Sense::Maximize)
        for (double& v : d.c) v = -v;
    for (const auto& row : p.rows) {
        if (static_cast<int>(row.coeffs.size()) != p.num_vars)
            throw SolverError("row width mismatch");
        d.a.push_back(row.coeffs);
        d.b.push_back(row.rhs);
        if (row.equality) {
            std::vector<double> neg(row.coeffs.size());
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -row.coeffs[i];
            d.a.push_back(std::move(neg));
            d.b.push_back(-row.rhs);
        }
    }
    for (int i = 0; i < p.num_vars; ++i) {  // x_i <= 1
        std::vector<double> r(p.num_vars, 0.0);
        r[i] = 1.0;
        d.a.push_back(std::move(r));
        d.b.push_back(1.0);
    }
    // row equilibration: unit max-abs coefficient
    for (std::size_t i = 0; i < d.a.size(); ++i) {
        double mx = 0.0;
        for (double v : d.a[i]) mx = std::max(mx, std::abs(v));
        mx = std::max(mx, std::abs(d.b[i]) * 1e-3);
        if (mx > 0.0 && (mx > 4.0 || mx < 0.25)) {
            double f = 1.0 / mx;
            for (double& v : d.a[i]) v *= f;
            d.b[i] *= f;
        }
    }
    return d;
}

struct Attempt {
    std::vector<double> x;
    double phase1 = 0.0;
    int iterations = 0;
    bool stalled = false;
    std::vector<double> dual;   // multipliers >= 0 per scaled row
    std::vector<int> basis;     // final basis (tableau column indices)
    std::vector<double> sgn;    // row sign flips applied for the tableau
};

Attempt attempt_solve(const ScaledData& d, bool bland_all) {
    int m = static_cast<int>(d.a.size());
    int n = d.n;
    Tableau tb;
    tb.m = m;
    tb.n = n;
    // negative-rhs rows need an artificial after sign flip
    std::vector<int> art_of_row(m, -1);
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (d.b[i] < 0.0) art_of_row[i] = n_art++;
    tb.n_art = n_art;
    int w = tb.width();
    tb.t.assign(static_cast<std::size_t>(m + 1) * (w + 1), 0.0);
    tb.basis.assign(m, -1);
    for (int i = 0; i < m; ++i) {
        double sgn = d.b[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tb.at(i, j) = sgn * d.a[i][j];
        tb.at(i, n + i) = sgn;  // slack
        tb.rhs(i) = sgn * d.b[i];
        if (art_of_row[i] >= 0) {
            tb.at(i, n + m + art_of_row[i]) = 1.0;
            tb.basis[i] = n + m + art_of_row[i];
        } else {
            tb.basis[i] = n + i;
        }
    }
    Attempt out;
    std::vector<bool> allowed(w, true);
    if (n_art > 0) {
        // phase 1: minimize sum of artificials
        for (int c = 0; c <= w; ++c) {
            double s = 0.0;
            for (int i = 0; i < m; ++i)
                if (art_of_row[i] >= 0) s -= (c == w ? tb.rhs(i) : tb.at(i, c));
            if (c == w) tb.rhs(m) = s;
            else tb.at(m, c) = s;
        }
        for (int k = 0; k < n_art; ++k) tb.at(m, n + m + k) = 0.0;
        bool ok = run_simplex(tb, allowed, bland_all, 2000 + 60 * (m + n), &out.iterations);
        if (!ok) {
            out.stalled = true;
            ok = run_simplex(tb, allowed, true, 4000 + 120 * (m + n), &out.iterations);
            if (!ok) { out.phase1 = 1.0; return out; }
        }
        out.phase1 = std::abs(tb.rhs(m));
        if (out.phase1 > 1e-8) return out;
        // pivot basic artificials out where possible
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] >= n + m) {
                int pc = -1;
                for (int c = 0; c < n + m; ++c)
                    if (std::abs(tb.at(i, c)) > 1e-7) { pc = c; break; }
                if (pc >= 0) pivot(tb, i, pc);
            }
        }
        for (int k = 0; k < n_art; ++k) allowed[n + m + k] = false;
    }
    // phase 2 objective row: price out the basic columns
    for (int c = 0; c <= w; ++c) tb.at(m, c) = 0.0;
    for (int j = 0; j < n; ++j) tb.at(m, j) = d.c[j];
    for (int i = 0; i < m; ++i) {
        int bj = tb.basis[i];
        double f = tb.at(m, bj);
        if (f != 0.0) {
            for (int c = 0; c < w; ++c) tb.at(m, c) -= f * tb.at(i, c);
            tb.rhs(m) -= f * tb.rhs(i);
            tb.at(m, bj) = 0.0;
        }
    }
    bool ok = run_simplex(tb, allowed, bland_all, 2000 + 60 * (m + n), &out.iterations);
    if (!ok) {
        out.stalled = true;
        run_simplex(tb, allowed, true, 4000 + 120 * (m + n), &out.iterations);
    }
    out.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.rhs(i);
    for (double& v : out.x) v = std::clamp(v, 0.0, 1.0);
    // multipliers: reduced cost of slack i equals the >=0 Lagrangian dual of row i
    out.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) out.dual[i] = std::max(0.0, tb.at(m, n + i));
    out.basis = tb.basis;
    out.sgn.assign(m, 1.0);
    for (int i = 0; i < m; ++i)
        if (d.b[i] < 0.0) out.sgn[i] = -1.0;
    return out;
}

// Recompute the primal point and duals from the final basis with fresh
// factorizations of the original data; accumulated tableau drift drops out.
void refresh_from_basis(const ScaledData& d, Attempt* at) {
    const int m = static_cast<int>(d.a.size());
    const int n = d.n;
    if (static_cast<int>(at->basis.size()) != m) return;
    Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs(m), cb = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) rhs(i) = at->sgn[i] * d.b[i];
    for (int k = 0; k < m; ++k) {
        int bj = at->basis[k];
        if (bj < n) {
            for (int i = 0; i < m; ++i) bmat(i, k) = at->sgn[i] * d.a[i][bj];
            cb(k) = d.c[bj];
        } else if (bj < n + m) {
            bmat(bj - n, k) = at->sgn[bj - n];
        } else {
            return;  // artificial still basic; keep the tableau reading
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(bmat);
    if (qr.rank() < m) return;
    Eigen::VectorXd xb = qr.solve(rhs);
    Eigen::VectorXd q = bmat.transpose().colPivHouseholderQr().solve(cb);
    std::vector<double> x(n, 0.0);
    for (int k = 0; k < m; ++k)
        if (at->basis[k] < n) x[at->basis[k]] = std::clamp(xb(k), 0.0, 1.0);
    std::vector<double> dual(m, 0.0);
    for (int i = 0; i < m; ++i) dual[i] = std::max(0.0, -at->sgn[i] * q(i));
    at->x = std::move(x);
    at->dual = std::move(dual);
}

}  // namespace

Solution solve(const Problem& problem, double feas_tol) {
    if (static_cast<int>(problem.objective.size()) != problem.num_vars)
        throw SolverError("objective width mismatch");
    ScaledData d = expand(problem);
    int m = static_cast<int>(d.a.size());

    auto evaluate = [&](const Attempt& at, Solution* s) -> double {
        s->x = at.x;
        s->iterations = at.iterations;
        double obj = 0.0;
        for (int j = 0; j < d.n; ++j) obj += d.c[j] * at.x[j];
        s->objective = obj;
        double resid = 0.0;
        for (int i = 0; i < m; ++i) {
            double ax = 0.0;
            for (int j = 0; j < d.n; ++j) ax += d.a[i][j] * at.x[j];
            resid = std::max(resid, ax - d.b[i]);
        }
        s->primal_residual = std::max(resid, 0.0);
        // Lagrangian bound, valid for any y >= 0: sum_j min(0, c_j + (A^T y)_j) - y.b
        double bound = 0.0;
        std::vector<double> r = d.c;
        for (int i = 0; i < m; ++i) {
            double y = at.dual[i];
            if (y == 0.0) continue;
            bound -= y * d.b[i];
            for (int j = 0; j < d.n; ++j) r[j] += y * d.a[i][j];
        }
        for (int j = 0; j < d.n; ++j) bound += std::min(0.0, r[j]);
        s->certified_bound = bound;
        return obj - bound;  // optimality gap estimate (>= 0 up to roundoff)
    };

    auto consider = [&](const Attempt& at, Solution* best, double* best_gap) {
        Solution s;
        double gap = evaluate(at, &s);
        bool take = best->x.empty() ||
                    s.primal_residual + std::max(gap, 0.0) <
                        best->primal_residual + std::max(*best_gap, 0.0);
        if (take) {
            *best = s;
            *best_gap = gap;
        }
    };

    auto acceptable = [&](const Solution& s, double g) {
        return s.primal_residual <= feas_tol &&
               g <= 1e-6 * std::max(1.0, std::abs(s.objective));
    };

    Solution sol;
    double gap = std::numeric_limits<double>::infinity();
    Attempt at = attempt_solve(d, false);
    if (at.phase1 > 1e-8) {
        Attempt atb = attempt_solve(d, true);
        if (atb.phase1 > 1e-8)
            throw InfeasibleError("LP infeasible: observations inconsistent (phase-1 " +
                                  std::to_string(std::min(at.phase1, atb.phase1)) + ")");
        at = std::move(atb);
    }
    consider(at, &sol, &gap);
    if (!acceptable(sol, gap)) {
        Attempt refreshed = at;
        refresh_from_basis(d, &refreshed);
        consider(refreshed, &sol, &gap);
    }
    if (!acceptable(sol, gap)) {
        // re-solve with Bland's rule throughout
        Attempt at2 = attempt_solve(d, true);
        if (at2.phase1 > 1e-8)
            throw InfeasibleError("LP infeasible: observations inconsistent");
        consider(at2, &sol, &gap);
        Attempt refreshed2 = at2;
        refresh_from_basis(d, &refreshed2);
        consider(refreshed2, &sol, &gap);
    }
    // the reported bound is the Lagrangian certificate, valid independently of
    // the primal point quality; the residual stays visible to the caller
    if (problem.sense == Sense::Maximize) {
        sol.objective = -sol.objective;
        sol.certified_bound = -sol.certified_bound;
    }
    return sol;
}

}  // namespace qkd::lp

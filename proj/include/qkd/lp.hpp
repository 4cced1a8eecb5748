#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkd::lp {

enum class Sense { Minimize, Maximize };

/// Dense LP over box variables x in [0,1]^n:
///   optimize c.x  s.t.  a_i.x <= b_i  (or == for equality rows).
struct Problem {
    int num_vars = 0;
    std::vector<double> objective;
    struct Row {
        std::vector<double> coeffs;
        double rhs = 0.0;
        bool equality = false;
    };
    std::vector<Row> rows;
    Sense sense = Sense::Minimize;
};

struct Solution {
    std::vector<double> x;       // feasibility-checked primal point
    double objective = 0.0;      // c.x at the returned point
    double certified_bound = 0.0;  // Lagrangian dual bound: <= optimum when
                                   // minimizing, >= optimum when maximizing;
                                   // valid independently of simplex accuracy
    double primal_residual = 0.0;  // max constraint violation at x
    int iterations = 0;
};

class InfeasibleError : public std::runtime_error {
  public:
    explicit InfeasibleError(const std::string& m) : std::runtime_error(m) {}
};

class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& m) : std::runtime_error(m) {}
};

/// Two-phase dense simplex with row equilibration and a certified dual bound.
/// Deterministic: fixed pivot rules, no randomness.
Solution solve(const Problem& problem, double feas_tol = 1e-9);

}  // namespace qkd::lp

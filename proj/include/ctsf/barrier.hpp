// Log-barrier interior-point solver for the concave programs the optimizer
// stages reduce to:
//
//     maximize   sum_g  w_g * ln(d_g + a_g.x)  +  l.x
//     subject to G x <= h            (plus x >= 0, supplied as rows of G)
//
// Phase I minimizes the max constraint violation to find a strictly feasible
// point (or an infeasibility certificate naming the worst constraint); phase
// II follows the central path with damped Newton steps. Problems here are
// tiny (dim = number of bands), so dense linear algebra is the right tool.

#pragma once

#include <string>
#include <vector>

namespace ctsf {

struct LogTerm {
    double weight = 1.0;
    double offset = 1.0;           // d_g, must keep d_g + a_g.x > 0
    std::vector<double> coeffs;    // a_g
};

struct LinConstraint {
    std::vector<double> a;
    double b = 0.0;
    std::string name;
};

struct LogProgram {
    int dim = 0;
    std::vector<LogTerm> terms;
    std::vector<double> linear;    // l, optional; empty means zero
    std::vector<LinConstraint> cons;
};

struct BarrierResult {
    bool feasible = false;
    bool converged = false;
    std::vector<double> x;
    double objective = 0.0;       // sum of weighted natural logs at x
    double kkt_residual = 0.0;    // scaled stationarity residual at exit
    double max_violation = 0.0;   // max_j (a_j.x - b_j), original units
    std::string worst_constraint;
};

// warm, if given, seeds phase I (and skips it entirely when strictly
// feasible). Fully deterministic.
BarrierResult maximize_log_program(const LogProgram& prog,
                                   const std::vector<double>* warm = nullptr);

}  // namespace ctsf

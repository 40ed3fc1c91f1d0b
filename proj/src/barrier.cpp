#include "ctsf/barrier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctsf {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rows {
    MatrixXd A;           // normalized rows
    VectorXd b;           // normalized right-hand sides
    std::vector<double> scale;  // original row inf-norm, for reporting
    std::vector<std::string> name;
};

// Normalizes every row to unit inf-norm. Rows with an all-zero coefficient
// vector cannot enter the barrier (their slack is constant); they are checked
// once and dropped, or reported as trivially infeasible.
bool collect_rows(const LogProgram& prog, Rows& rows, BarrierResult& res) {
    const int n = prog.dim;
    std::vector<int> keep;
    for (int j = 0; j < static_cast<int>(prog.cons.size()); ++j) {
        const auto& c = prog.cons[j];
        double mx = 0.0;
        for (double v : c.a) mx = std::max(mx, std::abs(v));
        if (mx == 0.0) {
            if (c.b < -1e-12) {
                res.feasible = false;
                res.max_violation = -c.b;
                res.worst_constraint = c.name;
                return false;
            }
            continue;
        }
        keep.push_back(j);
    }
    rows.A.resize(keep.size(), n);
    rows.b.resize(keep.size());
    rows.scale.resize(keep.size());
    rows.name.resize(keep.size());
    for (int r = 0; r < static_cast<int>(keep.size()); ++r) {
        const auto& c = prog.cons[keep[r]];
        double mx = 0.0;
        for (double v : c.a) mx = std::max(mx, std::abs(v));
        for (int i = 0; i < n; ++i) rows.A(r, i) = c.a[i] / mx;
        rows.b(r) = c.b / mx;
        rows.scale[r] = mx;
        rows.name[r] = c.name;
    }
    return true;
}

double objective_at(const LogProgram& prog, const VectorXd& x) {
    double s = 0.0;
    for (const auto& t : prog.terms) {
        double v = t.offset;
        for (int i = 0; i < prog.dim; ++i) v += t.coeffs[i] * x(i);
        if (v <= 0.0) return -kInf;
        s += t.weight * std::log(v);
    }
    if (!prog.linear.empty())
        for (int i = 0; i < prog.dim; ++i) s += prog.linear[i] * x(i);
    return s;
}

void record_violation(const Rows& rows, const VectorXd& x, BarrierResult& res) {
    res.max_violation = 0.0;
    res.worst_constraint.clear();
    for (int r = 0; r < rows.A.rows(); ++r) {
        const double v = (rows.A.row(r).dot(x) - rows.b(r)) * rows.scale[r];
        if (v > res.max_violation) {
            res.max_violation = v;
            res.worst_constraint = rows.name[r];
        }
    }
}

// Phase I: minimize s subject to A x - b <= s via the same barrier scheme,
// stopping as soon as the iterate is strictly feasible with margin.
bool phase_one(const Rows& rows, VectorXd& x) {
    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(rows.A.rows());
    if (m == 0) return true;

    VectorXd g0 = rows.A * x - rows.b;
    double s = g0.maxCoeff() + 1.0;
    // The margin must stay well below the thinnest slab a caller can build
    // (the ratchet caps in the optimizer leave ~1e-9 of room), otherwise a
    // feasible but narrow polytope gets declared empty.
    const double margin = 1e-12;
    // Any strictly feasible start is usable: phase II only needs positive
    // slacks, so a warm point sitting close to the boundary still counts.
    if (g0.maxCoeff() < 0.0) return true;

    double t = 1.0;
    for (int outer = 0; outer < 60; ++outer) {
        for (int inner = 0; inner < 80; ++inner) {
            const VectorXd g = rows.A * x - rows.b;
            const VectorXd slack = (VectorXd::Constant(m, s) - g).cwiseMax(1e-300);
            VectorXd inv = slack.cwiseInverse();

            // Gradient and Hessian in (x, s).
            VectorXd gx = rows.A.transpose() * inv;
            double gs = t - inv.sum();
            MatrixXd Hxx = rows.A.transpose() * inv.cwiseAbs2().asDiagonal() * rows.A;
            VectorXd Hxs = -rows.A.transpose() * inv.cwiseAbs2();
            double Hss = inv.cwiseAbs2().sum();

            MatrixXd H(n + 1, n + 1);
            H.topLeftCorner(n, n) = Hxx;
            H.topRightCorner(n, 1) = Hxs;
            H.bottomLeftCorner(1, n) = Hxs.transpose();
            H(n, n) = Hss;
            H.diagonal().array() += 1e-12;
            VectorXd grad(n + 1);
            grad.head(n) = gx;
            grad(n) = gs;

            VectorXd d = H.ldlt().solve(-grad);
            const double lambda2 = -grad.dot(d);
            if (!(lambda2 > 1e-14)) break;

            // Keep all slacks positive along the step.
            const VectorXd gd = rows.A * d.head(n);
            double amax = 1.0;
            for (int r = 0; r < m; ++r) {
                const double dir = gd(r) - d(n);
                if (dir > 0.0) amax = std::min(amax, 0.99 * slack(r) / dir);
            }
            double step = amax;
            const double phi0 = t * s - slack.array().log().sum();
            for (int bt = 0; bt < 60; ++bt) {
                const VectorXd xn = x + step * d.head(n);
                const double sn = s + step * d(n);
                const VectorXd sl = VectorXd::Constant(m, sn) - (rows.A * xn - rows.b);
                if (sl.minCoeff() > 0.0) {
                    const double phi = t * sn - sl.array().log().sum();
                    if (phi <= phi0 + 0.25 * step * grad.dot(d)) {
                        x = xn;
                        s = sn;
                        break;
                    }
                }
                step *= 0.5;
            }
            if ((rows.A * x - rows.b).maxCoeff() < -margin) return true;
        }
        if ((rows.A * x - rows.b).maxCoeff() < -margin) return true;
        if (static_cast<double>(m) / t < 1e-12 && s > -margin) return false;
        t *= 20.0;
    }
    return (rows.A * x - rows.b).maxCoeff() < 0.0;
}

}  // namespace

BarrierResult maximize_log_program(const LogProgram& prog, const std::vector<double>* warm) {
    const int n = prog.dim;
    for (const auto& t : prog.terms)
        if (static_cast<int>(t.coeffs.size()) != n)
            throw std::invalid_argument("log term dimension mismatch");
    for (const auto& c : prog.cons)
        if (static_cast<int>(c.a.size()) != n)
            throw std::invalid_argument("constraint dimension mismatch");

    if (!prog.linear.empty() && static_cast<int>(prog.linear.size()) != n)
        throw std::invalid_argument("linear term dimension mismatch");

    BarrierResult res;
    Rows rows;
    if (!collect_rows(prog, rows, res)) return res;
    const int m = static_cast<int>(rows.A.rows());

    VectorXd lin = VectorXd::Zero(n);
    if (!prog.linear.empty())
        for (int i = 0; i < n; ++i) lin(i) = prog.linear[i];

    VectorXd x = VectorXd::Zero(n);
    if (warm && static_cast<int>(warm->size()) == n)
        for (int i = 0; i < n; ++i) x(i) = (*warm)[i];

    if (!phase_one(rows, x)) {
        record_violation(rows, x, res);
        res.feasible = false;
        return res;
    }
    res.feasible = true;

    // Phase II along the central path. Objective gradient pieces are
    // recomputed in full each step; the problems are a handful of variables.
    auto term_values = [&](const VectorXd& xx, VectorXd& vals) {
        vals.resize(prog.terms.size());
        for (int g = 0; g < static_cast<int>(prog.terms.size()); ++g) {
            double v = prog.terms[g].offset;
            for (int i = 0; i < n; ++i) v += prog.terms[g].coeffs[i] * xx(i);
            vals(g) = v;
        }
    };

    double t = 1.0;
    const double gap_tol = 1e-10;
    double kkt = kInf;
    for (int outer = 0; outer < 80; ++outer) {
        for (int inner = 0; inner < 80; ++inner) {
            VectorXd vals;
            term_values(x, vals);
            const VectorXd slack = (rows.b - rows.A * x).cwiseMax(1e-300);
            const VectorXd sinv = slack.cwiseInverse();

            VectorXd grad = -t * lin;
            MatrixXd H = MatrixXd::Zero(n, n);
            for (int g = 0; g < static_cast<int>(prog.terms.size()); ++g) {
                const auto& tm = prog.terms[g];
                Eigen::Map<const VectorXd> a(tm.coeffs.data(), n);
                grad -= t * tm.weight / vals(g) * a;
                H += t * tm.weight / (vals(g) * vals(g)) * (a * a.transpose());
            }
            grad += rows.A.transpose() * sinv;
            H += rows.A.transpose() * sinv.cwiseAbs2().asDiagonal() * rows.A;
            H.diagonal().array() += 1e-13;

            VectorXd d = H.ldlt().solve(-grad);
            const double lambda2 = -grad.dot(d);
            if (!(lambda2 > 2e-13)) break;

            // Largest step keeping strict feasibility of constraints and of
            // every log argument.
            double amax = 1.0;
            const VectorXd Ad = rows.A * d;
            for (int r = 0; r < m; ++r)
                if (Ad(r) > 0.0) amax = std::min(amax, 0.99 * slack(r) / Ad(r));
            for (int g = 0; g < static_cast<int>(prog.terms.size()); ++g) {
                Eigen::Map<const VectorXd> a(prog.terms[g].coeffs.data(), n);
                const double dir = a.dot(d);
                if (dir < 0.0) amax = std::min(amax, 0.99 * vals(g) / (-dir));
            }

            const double phi0 = -t * objective_at(prog, x) - slack.array().log().sum();
            double step = amax;
            for (int bt = 0; bt < 60; ++bt) {
                const VectorXd xn = x + step * d;
                const VectorXd sl = rows.b - rows.A * xn;
                const double f = objective_at(prog, xn);
                if (sl.minCoeff() > 0.0 && std::isfinite(f)) {
                    const double phi = -t * f - sl.array().log().sum();
                    if (phi <= phi0 + 0.25 * step * grad.dot(d)) {
                        x = xn;
                        break;
                    }
                }
                step *= 0.5;
                if (bt == 59) inner = 80;  // stalled; move to next t
            }
        }

        // Stationarity residual with the barrier duals lambda_j = 1/(t s_j).
        {
            VectorXd vals;
            term_values(x, vals);
            const VectorXd slack = (rows.b - rows.A * x).cwiseMax(1e-300);
            VectorXd r = lin;
            double gscale = 1.0;
            for (int g = 0; g < static_cast<int>(prog.terms.size()); ++g) {
                Eigen::Map<const VectorXd> a(prog.terms[g].coeffs.data(), n);
                r += prog.terms[g].weight / vals(g) * a;
            }
            gscale = std::max(1.0, r.lpNorm<Eigen::Infinity>());
            r -= rows.A.transpose() * (1.0 / t * slack.cwiseInverse());
            kkt = r.lpNorm<Eigen::Infinity>() / gscale;
        }
        if (static_cast<double>(std::max(m, 1)) / t < gap_tol) break;
        t *= 20.0;
    }

    res.converged = true;
    res.kkt_residual = kkt;
    res.x.assign(x.data(), x.data() + n);
    res.objective = objective_at(prog, x);
    record_violation(rows, x, res);
    return res;
}

}  // namespace ctsf

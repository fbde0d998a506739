#include "mburqr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mburqr/errors.hpp"

namespace mburqr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Run {
    std::vector<double> best;
    double best_value;
    std::size_t iterations = 0;
    bool converged = false;
};

class Simplex {
public:
    Simplex(const Objective& f, std::size_t& evaluations) : f_(f), evaluations_(evaluations) {}

    double eval(const std::vector<double>& x) {
        ++evaluations_;
        const double v = f_(x);
        return std::isfinite(v) ? v : kInf;
    }

private:
    const Objective& f_;
    std::size_t& evaluations_;
};

Run run_once(Simplex& s, const std::vector<double>& start, double start_value,
             const NmOptions& opt, std::size_t max_iter, std::size_t iteration_offset,
             const NmObserver& observer) {
    const std::size_t d = start.size();
    std::vector<std::vector<double>> pts(d + 1, start);
    std::vector<double> vals(d + 1, start_value);
    for (std::size_t i = 0; i < d; ++i) {
        pts[i + 1][i] += opt.initial_step * std::max(1.0, std::fabs(start[i]));
        vals[i + 1] = s.eval(pts[i + 1]);
    }

    std::vector<std::size_t> order(d + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(d + 1);
        std::vector<double> v2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            p2[i] = std::move(pts[order[i]]);
            v2[i] = vals[order[i]];
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    auto converged = [&] {
        double fspread = 0.0;
        double xspread = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            fspread = std::max(fspread, std::fabs(vals[i] - vals[0]));
            for (std::size_t j = 0; j < d; ++j)
                xspread = std::max(xspread, std::fabs(pts[i][j] - pts[0][j]));
        }
        return std::isfinite(fspread) && fspread <= opt.f_tolerance && xspread <= opt.x_tolerance;
    };
    auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
        std::vector<double> out(d);
        for (std::size_t j = 0; j < d; ++j) out[j] = c[j] + t * (w[j] - c[j]);
        return out;
    };

    sort_simplex();
    Run run;
    std::vector<double> centroid(d);
    while (true) {
        if (converged()) {
            run.converged = true;
            break;
        }
        if (run.iterations >= max_iter) break;
        ++run.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
        for (double& c : centroid) c /= static_cast<double>(d);

        const std::vector<double>& worst = pts[d];
        std::vector<double> xr = along(centroid, worst, -1.0);
        const double fr = s.eval(xr);
        bool shrink = false;

        if (fr < vals[0]) {
            std::vector<double> xe = along(centroid, worst, -2.0);
            const double fe = s.eval(xe);
            if (fe < fr) {
                pts[d] = std::move(xe);
                vals[d] = fe;
            } else {
                pts[d] = std::move(xr);
                vals[d] = fr;
            }
        } else if (fr < vals[d - 1]) {
            pts[d] = std::move(xr);
            vals[d] = fr;
        } else if (fr < vals[d]) {
            std::vector<double> xc = along(centroid, xr, 0.5);
            const double fc = s.eval(xc);
            if (fc <= fr) {
                pts[d] = std::move(xc);
                vals[d] = fc;
            } else {
                shrink = true;
            }
        } else {
            std::vector<double> xcc = along(centroid, worst, 0.5);
            const double fcc = s.eval(xcc);
            if (fcc < vals[d]) {
                pts[d] = std::move(xcc);
                vals[d] = fcc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (std::size_t i = 1; i <= d; ++i) {
                pts[i] = along(pts[0], pts[i], 0.5);
                vals[i] = s.eval(pts[i]);
            }
        }
        sort_simplex();
        if (observer) observer(iteration_offset + run.iterations, vals[0]);
    }
    run.best = pts[0];
    run.best_value = vals[0];
    return run;
}

}  // namespace

NmOutcome nelder_mead_minimize(const Objective& objective, std::span<const double> start,
                               const NmOptions& options, const NmObserver& observer) {
    const std::size_t d = start.size();
    if (d == 0) throw DomainError("nelder_mead_minimize: dimension must be at least 1");
    if (!(options.f_tolerance > 0.0) || !(options.x_tolerance > 0.0))
        throw DomainError("nelder_mead_minimize: tolerances must be positive");
    if (!(options.initial_step > 0.0))
        throw DomainError("nelder_mead_minimize: initial step must be positive");
    const std::size_t max_iter = options.max_iterations == 0 ? 200 * d : options.max_iterations;

    NmOutcome out;
    Simplex simplex(objective, out.evaluations);
    std::vector<double> x(start.begin(), start.end());
    double fx = simplex.eval(x);
    if (!std::isfinite(fx)) {
        throw StartError("nelder_mead_minimize: objective is not finite at the start point");
    }

    for (std::size_t attempt = 0; attempt <= options.restarts; ++attempt) {
        Run run = run_once(simplex, x, fx, options, max_iter, out.iterations, observer);
        out.iterations += run.iterations;
        out.converged = run.converged;
        const double improvement = fx - run.best_value;
        if (run.best_value < fx) {
            x = std::move(run.best);
            fx = run.best_value;
        }
        if (attempt > 0) ++out.restarts_used;
        if (attempt > 0 && improvement <= options.f_tolerance) break;
    }
    out.minimizer = std::move(x);
    out.minimum = fx;
    return out;
}

}  // namespace mburqr

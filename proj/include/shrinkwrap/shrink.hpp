#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkwrap/anchor_grid.hpp"
#include "shrinkwrap/parallel.hpp"
#include "shrinkwrap/resample.hpp"
#include "shrinkwrap/sdf/field.hpp"

namespace shrinkwrap {

enum class ResampleMode {
    Alternate,  // both passes per iteration, pass order alternating by parity
    Both,       // both passes per iteration, always row-first
    Off,
};

struct ShrinkConfig {
    int n_theta = 200;
    int n_phi = 100;
    double step = 0.2;
    double epsilon = 1e-8;
    int max_iters = 500;
    double residual_tol = 1e-4;
    int resample_every = 1;
    ResampleMode resample_mode = ResampleMode::Alternate;
    double momentum = 0.0;  // used by the 2D mode only
    double initial_radius = 1.5;
    Vec3 initial_center{0, 0, 0};
    int threads = 1;

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
        if (!(residual_tol > 0.0))
            throw std::invalid_argument("residual_tol must be > 0");
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
        if (resample_every < 1)
            throw std::invalid_argument("resample_every must be >= 1");
        if (momentum < 0.0 || momentum >= 1.0)
            throw std::invalid_argument("momentum must be in [0,1)");
    }
};

/// Thrown when the residual rises for three consecutive iterations by more
/// than 10% each; carries the tail of the residual history.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string msg, std::vector<double> tail)
        : std::runtime_error(std::move(msg)), residual_tail(std::move(tail)) {}
    std::vector<double> residual_tail;
};

struct StepResult {
    double residual = 0.0;
    double max_displacement = 0.0;
};

/// One contraction step: every distinct anchor moves by
/// x <- x - s(x) * grad(x) / (|grad(x)| + eps) * step. Pole rows are updated
/// once and broadcast. Anchors where the gradient nearly vanishes (medial
/// sets) are skipped for this iteration; resampling pulls them along later.
/// Returns the mean |s| over distinct anchors measured at the new positions.
inline StepResult shrink_step(AnchorGrid& grid, const ScalarField3& field,
                              const ShrinkConfig& cfg) {
    const int nt = grid.n_theta, np = grid.n_phi;
    const int distinct = grid.distinct_anchor_count();

    // Distinct anchor k: 0 = north pole, 1 = south pole, then interior rows.
    auto anchor_pos = [&](int k) -> Vec3 {
        if (k == 0) return grid.at(0, 0);
        if (k == 1) return grid.at(0, np);
        const int idx = k - 2;
        return grid.at(idx % nt, 1 + idx / nt);
    };

    std::vector<Vec3> updated(distinct);
    std::vector<double> moved(distinct, 0.0);
    std::vector<int> bad(distinct, 0);
    parallel_for(static_cast<std::size_t>(distinct), cfg.threads, [&](std::size_t k) {
        const Vec3 x = anchor_pos(static_cast<int>(k));
        const double s = field.eval(x);
        if (!std::isfinite(s)) {
            bad[k] = 1;
            updated[k] = x;
            return;
        }
        const Vec3 g = field.grad(x);
        const double gn = g.norm();
        if (!g.all_finite() || gn <= 10.0 * cfg.epsilon) {
            updated[k] = x;  // direction meaningless here; skip this iteration
            return;
        }
        const Vec3 delta = g * (s * cfg.step / (gn + cfg.epsilon));
        updated[k] = x - delta;
        moved[k] = delta.norm();
    });
    for (int k = 0; k < distinct; ++k)
        if (bad[k])
            throw std::runtime_error("non-finite field value at anchor " +
                                     std::to_string(k));

    for (int i = 0; i < nt; ++i) {
        grid.at(i, 0) = updated[0];
        grid.at(i, np) = updated[1];
    }
    for (int k = 2; k < distinct; ++k) {
        const int idx = k - 2;
        grid.at(idx % nt, 1 + idx / nt) = updated[k];
    }

    // Residual: discretized mean |s| over the new surface, fixed-order sum.
    std::vector<double> abs_s(distinct);
    parallel_for(static_cast<std::size_t>(distinct), cfg.threads, [&](std::size_t k) {
        abs_s[k] = std::abs(field.eval(updated[k]));
    });
    StepResult r;
    double acc = 0.0;
    for (int k = 0; k < distinct; ++k) acc += abs_s[k];
    r.residual = acc / distinct;
    for (int k = 0; k < distinct; ++k)
        r.max_displacement = std::max(r.max_displacement, moved[k]);
    return r;
}

struct ShrinkResult {
    AnchorGrid grid;
    std::vector<double> history;  // residual per iteration
    bool converged = false;
    std::vector<std::string> warnings;
};

/// Full shrink loop: initialize the sphere, iterate shrink_step with
/// interleaved bidirectional resampling, stop at residual_tol or max_iters.
inline ShrinkResult run_shrink(const ScalarField3& field, const ShrinkConfig& cfg,
                               std::ostream* log = nullptr) {
    cfg.validate();
    ShrinkResult result;
    result.grid = init_sphere(cfg.n_theta, cfg.n_phi, cfg.initial_radius,
                              cfg.initial_center);

    // The initial sphere should sit strictly outside the shape.
    for (int j = 0; j <= cfg.n_phi; ++j)
        for (int i = 0; i < cfg.n_theta; ++i)
            if (field.eval(result.grid.at(i, j)) <= 0.0) {
                result.warnings.push_back(
                    "initial sphere is not strictly outside the shape");
                goto checked;
            }
checked:

    int rising = 0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const StepResult step = shrink_step(result.grid, field, cfg);
        if (cfg.resample_mode != ResampleMode::Off &&
            (iter + 1) % cfg.resample_every == 0) {
            const PassOrder order =
                (cfg.resample_mode == ResampleMode::Both || iter % 2 == 0)
                    ? PassOrder::RowFirst
                    : PassOrder::ColumnFirst;
            result.grid = resample_bidirectional(std::move(result.grid), order);
        }
        if (log)
            *log << "iter " << iter << " residual " << step.residual
                 << " max-displacement " << step.max_displacement << "\n";

        if (!result.history.empty() &&
            step.residual > result.history.back() * 1.10) {
            if (++rising >= 3) {
                std::vector<double> tail(result.history.end() -
                                             std::min<std::size_t>(
                                                 result.history.size(), 8),
                                         result.history.end());
                tail.push_back(step.residual);
                throw DivergenceError("shrink residual diverging", std::move(tail));
            }
        } else {
            rising = 0;
        }
        result.history.push_back(step.residual);
        if (step.residual <= cfg.residual_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace shrinkwrap

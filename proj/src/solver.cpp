#include "kiri/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <limits>

namespace kiri {

std::vector<Eigen::Vector3d> EquilibriumState::vertex_positions() const {
    std::vector<Eigen::Vector3d> out(positions.size() / 3);
    for (size_t i = 0; i < out.size(); ++i) out[i] = positions.segment<3>(3 * i);
    return out;
}

namespace {

using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsResult {
    Eigen::VectorXd x;
    double energy = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Limited-memory quasi-Newton with backtracking line search; every accepted
// step decreases the energy. Used for globalization from far-from-minimum
// starts; the tight tolerance is reached by the Newton-CG polish below.
LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0, double grad_tol,
                           int max_iterations, int history) {
    LbfgsResult res;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd g(x.size());
    double e = f(x, g);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;
    Eigen::VectorXd p(x.size()), x_new(x.size()), g_new(x.size());

    int it = 0;
    for (; it < max_iterations; ++it) {
        res.grad_norm = g.norm();
        if (res.grad_norm <= grad_tol) {
            res.converged = true;
            break;
        }

        // two-loop recursion
        p = -g;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[i] = rho_hist[i] * s_hist[i].dot(p);
            p -= alpha[i] * y_hist[i];
        }
        if (!y_hist.empty()) {
            const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
            p *= gamma;
        }
        for (size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * y_hist[i].dot(p);
            p += (alpha[i] - beta) * s_hist[i];
        }

        double dir_deriv = g.dot(p);
        if (!(dir_deriv < 0.0)) {  // not a descent direction; restart
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            p = -g;
            dir_deriv = g.dot(p);
        }

        // Armijo backtracking; cap the raw steepest-descent step to a sane
        // geometric displacement so the first iterations don't thrash.
        double step = 1.0;
        if (y_hist.empty()) {
            const double pmax = p.cwiseAbs().maxCoeff();
            if (pmax > 1e-30) step = std::min(1.0, 1e-2 / pmax);
        }
        double e_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + step * p;
            try {
                e_new = f(x_new, g_new);
            } catch (const ElementInversionError&) {
                e_new = std::numeric_limits<double>::infinity();
            }
            if (e_new <= e + 1e-4 * step * dir_deriv) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (y_hist.empty()) break;  // stalled even along -g
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            continue;
        }

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x.swap(x_new);
        g.swap(g_new);
        e = e_new;
    }
    res.grad_norm = g.norm();
    res.converged = res.converged || res.grad_norm <= grad_tol;
    res.x = std::move(x);
    res.energy = e;
    res.iterations = it;
    return res;
}

// Inexact Newton with conjugate-gradient inner solves. Hessian-vector
// products come from central differences of the analytic gradient, so no
// second derivatives are needed. Negative curvature falls back to the
// progress made so far (or steepest descent on the first inner step).
LbfgsResult newton_cg_minimize(const Objective& f, Eigen::VectorXd x0, double grad_tol,
                               int max_outer, int* eval_count = nullptr) {
    LbfgsResult res;
    Eigen::VectorXd x = std::move(x0);
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n), gp(n), gm(n), p(n), r(n), d(n), hd(n), x_new(n), g_new(n);
    double e = f(x, g);
    int evals = 1;

    const double x_scale = std::max(1.0, x.cwiseAbs().maxCoeff());

    auto hess_vec = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        const double vn = v.norm();
        const double h = 1e-6 * x_scale / std::max(vn, 1e-30);
        f(x + h * v, gp);
        f(x - h * v, gm);
        evals += 2;
        out = (gp - gm) / (2.0 * h);
    };

    int it = 0;
    for (; it < max_outer; ++it) {
        const double gnorm = g.norm();
        res.grad_norm = gnorm;
        if (gnorm <= grad_tol) {
            res.converged = true;
            break;
        }

        // CG on H p = -g, forcing term per Eisenstat-Walker
        const double cg_tol = std::min(0.1, std::sqrt(gnorm)) * gnorm;
        p.setZero();
        r = -g;
        d = r;
        double r2 = r.squaredNorm();
        bool used_fallback = false;
        const int max_cg = std::min(n, 400);
        for (int cg = 0; cg < max_cg; ++cg) {
            hess_vec(d, hd);
            const double dhd = d.dot(hd);
            if (dhd <= 1e-16 * d.squaredNorm()) {
                if (cg == 0) {
                    p = r;  // steepest descent
                    used_fallback = true;
                }
                break;
            }
            const double alpha = r2 / dhd;
            p += alpha * d;
            r -= alpha * hd;
            const double r2_new = r.squaredNorm();
            if (std::sqrt(r2_new) <= cg_tol) break;
            d = r + (r2_new / r2) * d;
            r2 = r2_new;
        }

        double dir_deriv = g.dot(p);
        if (!(dir_deriv < 0.0)) {
            p = -g;
            dir_deriv = g.dot(p);
            used_fallback = true;
        }

        double step = 1.0;
        if (used_fallback) {
            const double pmax = p.cwiseAbs().maxCoeff();
            if (pmax > 1e-30) step = std::min(1.0, 1e-2 / pmax);
        }
        double e_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + step * p;
            try {
                e_new = f(x_new, g_new);
                ++evals;
            } catch (const ElementInversionError&) {
                e_new = std::numeric_limits<double>::infinity();
            }
            if (e_new <= e + 1e-4 * step * dir_deriv) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted && !used_fallback) {
            // Newton direction rejected by the line search (finite-difference
            // curvature can be noisy far from the minimum); retry once along
            // steepest descent before giving up.
            p = -g;
            dir_deriv = g.dot(p);
            const double pmax = p.cwiseAbs().maxCoeff();
            step = pmax > 1e-30 ? std::min(1.0, 1e-2 / pmax) : 1.0;
            for (int ls = 0; ls < 40; ++ls) {
                x_new = x + step * p;
                try {
                    e_new = f(x_new, g_new);
                    ++evals;
                } catch (const ElementInversionError&) {
                    e_new = std::numeric_limits<double>::infinity();
                }
                if (e_new <= e + 1e-4 * step * dir_deriv) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
        }
        if (!accepted) break;
        x.swap(x_new);
        g.swap(g_new);
        e = e_new;
    }
    res.grad_norm = g.norm();
    res.converged = res.converged || res.grad_norm <= grad_tol;
    res.x = std::move(x);
    res.energy = e;
    res.iterations = it;
    if (eval_count) *eval_count += evals;
    return res;
}

bool solver_trace() {
    static const bool on = std::getenv("KIRI_SOLVER_TRACE") != nullptr;
    return on;
}

// Globalize with limited-memory quasi-Newton to a loose tolerance, then
// polish with Newton-CG to the requested one. Alternate the two while
// progress is being made; quasi-Newton handles the long flat valleys and
// Newton-CG the stiff ill-conditioned tail.
LbfgsResult solve(const Objective& f, Eigen::VectorXd x0, double grad_tol, int max_iterations,
                  int history) {
    const double loose = std::max(grad_tol, 1e3 * grad_tol);
    LbfgsResult res = lbfgs_minimize(f, std::move(x0), loose, std::min(max_iterations, 400),
                                     history);
    int total_iters = res.iterations;
    const int outer_cap = std::max(20, max_iterations / 100);
    for (int round = 0; round < 10; ++round) {
        if (solver_trace())
            std::fprintf(stderr, "[solve] round %d lbfgs iters=%d |g|=%.3e E=%.9g\n", round,
                         res.iterations, res.grad_norm, res.energy);
        const double e_before = res.energy;
        const double g_before = res.grad_norm;
        LbfgsResult fine = newton_cg_minimize(f, std::move(res.x), grad_tol, outer_cap);
        if (solver_trace())
            std::fprintf(stderr, "[solve] round %d newton iters=%d |g|=%.3e E=%.9g conv=%d\n",
                         round, fine.iterations, fine.grad_norm, fine.energy, fine.converged);
        res = std::move(fine);
        res.iterations = total_iters += res.iterations;
        if (res.converged) break;

        // quasi-Newton interlude; give it a bigger budget near the minimum
        // where its iterations are cheap and Newton-CG's are not
        const int budget = res.grad_norm < 1e2 * grad_tol ? 3000 : 400;
        LbfgsResult again = lbfgs_minimize(f, std::move(res.x), grad_tol, budget, history);
        total_iters += again.iterations;
        res = std::move(again);
        res.iterations = total_iters;
        if (res.converged) break;

        // Progress shows in the energy far from the minimum and in the
        // gradient near it; stop only when neither improves.
        const bool energy_progress =
            e_before - res.energy > 1e-12 * std::max(1.0, std::abs(res.energy));
        const bool gradient_progress = res.grad_norm < 0.8 * g_before;
        if (!energy_progress && !gradient_progress) break;
    }
    return res;
}

// Distributed transverse seed load per vertex (mN), uniform or alternating
// across quadrants for the mode-2 shape family.
Eigen::VectorXd seed_load(const ShellModel& model, SeedKind seed, double load_factor) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(model.dof_count());
    const double q = load_factor * model.c_s;  // pressure, kPa
    const bool mode2 = seed == SeedKind::Mode2Positive || seed == SeedKind::Mode2Negative;
    const double global_sign =
        (seed == SeedKind::GlobalPositive || seed == SeedKind::Mode2Positive) ? 1.0 : -1.0;
    for (int i = 0; i < model.mesh.vertex_count(); ++i) {
        double s = global_sign;
        if (mode2) {
            const auto& v = model.mesh.vertices[i];
            // +z on the +-x arms, -z on the +-y arms
            s *= (std::abs(v.x()) >= std::abs(v.y())) ? 1.0 : -1.0;
        }
        load[3 * i + 2] = s * q * model.vertex_area[i];
    }
    for (int dof : model.pinned_dofs) load[dof] = 0.0;
    return load;
}

// Rigid rotations about the pinned center are exact zero-energy modes the pin
// set cannot remove. Project them out of the gradient so the minimizer works
// in the quotient space and states keep the orientation they were seeded in.
enum class RotGauge { None, AboutZ, All };

void project_rotations(const ShellModel& model, const Eigen::VectorXd& x, Eigen::VectorXd& g,
                       RotGauge gauge) {
    if (gauge == RotGauge::None) return;
    const int n = static_cast<int>(x.size()) / 3;
    const Eigen::Vector3d c = x.segment<3>(3 * model.center_vertex);
    const int first = gauge == RotGauge::AboutZ ? 2 : 0;
    std::vector<Eigen::VectorXd> basis;
    for (int axis = first; axis < 3; ++axis) {
        Eigen::VectorXd gen(x.size());
        const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
        for (int i = 0; i < n; ++i)
            gen.segment<3>(3 * i) = e.cross(Eigen::Vector3d(x.segment<3>(3 * i)) - c);
        for (int dof : model.pinned_dofs) gen[dof] = 0.0;
        for (const auto& b : basis) gen -= b.dot(gen) * b;
        const double norm = gen.norm();
        if (norm > 1e-12) basis.push_back(gen / norm);
    }
    for (const auto& b : basis) g -= b.dot(g) * b;
}

Objective make_objective(const ShellModel& model, const Eigen::VectorXd* load,
                         const std::vector<int>* extra_fixed, RotGauge gauge) {
    return [&model, load, extra_fixed, gauge](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        double e = total_energy_and_gradient(model, x, g, true);
        if (load) {
            e -= load->dot(x);
            g -= *load;
            for (int dof : model.pinned_dofs) g[dof] = 0.0;
        }
        if (extra_fixed)
            for (int dof : *extra_fixed) g[dof] = 0.0;
        project_rotations(model, x, g, gauge);
        return e;
    };
}

EquilibriumState make_state(const ShellModel& model, const LbfgsResult& res) {
    EquilibriumState st;
    st.positions = res.x;
    st.energy_membrane = membrane_energy(model, res.x);
    st.energy_bending = bending_energy(model, res.x);
    st.energy_total = st.energy_membrane + st.energy_bending;
    st.gradient_norm = res.grad_norm;
    st.converged = res.converged;
    st.iterations = res.iterations;
    classify_state(model, st);
    return st;
}

}  // namespace

double height_of(const Eigen::VectorXd& positions) {
    double zmin = std::numeric_limits<double>::max(), zmax = -zmin;
    for (int i = 0; i < positions.size() / 3; ++i) {
        zmin = std::min(zmin, positions[3 * i + 2]);
        zmax = std::max(zmax, positions[3 * i + 2]);
    }
    return zmax - zmin;
}

void classify_state(const ShellModel& model, EquilibriumState& state) {
    state.height = height_of(state.positions);
    const double zc = state.positions[3 * model.center_vertex + 2];
    std::array<double, 4> rel;
    double mean = 0.0;
    for (int k = 0; k < 4; ++k) {
        rel[k] = state.positions[3 * model.tip_vertices[k] + 2] - zc;
        mean += rel[k] / 4.0;
    }
    state.sign = mean >= 0.0 ? StateSign::Positive : StateSign::Negative;

    const double flat_tol = 1e-6 * model.length_scale;
    const double m = std::max({std::abs(rel[0]), std::abs(rel[1]), std::abs(rel[2]), std::abs(rel[3])});
    if (state.height < flat_tol || m < flat_tol) {
        state.mode = ModeLabel::Unclassified;
        return;
    }
    // tips ordered +x, +y, -x, -y; alternating deflection marks mode 2
    const bool significant = std::min({std::abs(rel[0]), std::abs(rel[1]), std::abs(rel[2]),
                                       std::abs(rel[3])}) > 0.05 * m;
    const bool all_same = rel[0] * rel[1] > 0 && rel[0] * rel[2] > 0 && rel[0] * rel[3] > 0;
    const bool alternating = significant && rel[0] * rel[2] > 0 && rel[1] * rel[3] > 0 &&
                             rel[0] * rel[1] < 0;
    if (all_same)
        state.mode = ModeLabel::Mode1;
    else if (alternating)
        state.mode = ModeLabel::Mode2;
    else
        state.mode = ModeLabel::Unclassified;
}

EquilibriumState minimize(const ShellModel& model, const Eigen::VectorXd& start_positions,
                          SeedKind seed, const SolverOptions& opts) {
    const double tol = opts.gradient_tolerance(model);
    const Eigen::VectorXd load = seed_load(model, seed, opts.seed_load_factor);

    // phase 1: loaded, to break the flat symmetry. Only needs to settle into
    // the right basin, so a loose tolerance suffices; phase 2 does the
    // tight convergence.
    LbfgsResult loaded = solve(make_objective(model, &load, nullptr, RotGauge::All), start_positions,
                                        1e4 * tol, opts.max_iterations, opts.lbfgs_history);
    // phase 2: unloaded
    LbfgsResult relaxed =
        solve(make_objective(model, nullptr, nullptr, RotGauge::All), std::move(loaded.x), tol,
                       opts.max_iterations, opts.lbfgs_history);
    // A nearly-flat result is the monostable case. The exactly flat plate is
    // then typically an equilibrium, but the residual out-of-plane ripple
    // left at the gradient tolerance never decays on its own. Project the
    // candidate onto the flat configuration and keep it when that does not
    // worsen the residual.
    if (relaxed.converged && height_of(relaxed.x) < 1e-3 * model.length_scale) {
        auto f = make_objective(model, nullptr, nullptr, RotGauge::All);
        Eigen::VectorXd x_flat = relaxed.x;
        for (int i = 0; i < x_flat.size() / 3; ++i) x_flat[3 * i + 2] = 0.0;
        Eigen::VectorXd g_flat(x_flat.size());
        const double e_flat = f(x_flat, g_flat);
        if (g_flat.norm() <= std::max(relaxed.grad_norm, tol)) {
            relaxed.x = std::move(x_flat);
            relaxed.grad_norm = g_flat.norm();
            relaxed.energy = e_flat;
        }
    }
    EquilibriumState st = make_state(model, relaxed);
    st.iterations = loaded.iterations + relaxed.iterations;
    if (!relaxed.converged)
        throw NonConvergenceError("minimize: iteration cap reached (gradient norm " +
                                      std::to_string(relaxed.grad_norm) + ", tolerance " +
                                      std::to_string(tol) + ")",
                                  st);
    return st;
}

double aligned_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.size()) / 3;
    Eigen::Matrix3Xd pa(3, n), pb(3, n);
    for (int i = 0; i < n; ++i) {
        pa.col(i) = a.segment<3>(3 * i);
        pb.col(i) = b.segment<3>(3 * i);
    }
    const Eigen::Vector3d ca = pa.rowwise().mean();
    const Eigen::Vector3d cb = pb.rowwise().mean();
    pa.colwise() -= ca;
    pb.colwise() -= cb;
    const Eigen::Matrix3d cov = pb * pa.transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() > 0 ? 1.0 : -1.0;
    const Eigen::Matrix3d r = svd.matrixU() * d * svd.matrixV().transpose();
    return ((r * pa) - pb).colwise().norm().maxCoeff();
}

std::vector<EquilibriumState> find_stable_states(const ShellModel& model,
                                                 const std::vector<SeedKind>& seeds,
                                                 const SolverOptions& opts,
                                                 std::vector<std::string>* failures) {
    std::vector<EquilibriumState> states;
    const Eigen::VectorXd flat = model.flat_positions();
    for (SeedKind seed : seeds) {
        EquilibriumState st;
        try {
            st = minimize(model, flat, seed, opts);
        } catch (const NonConvergenceError& e) {
            if (failures) failures->push_back(e.what());
            continue;
        }
        bool duplicate = false;
        for (const auto& prev : states) {
            if (aligned_distance(prev.positions, st.positions) < 1e-3 * model.length_scale) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) states.push_back(std::move(st));
    }
    return states;
}

SnapResult snap_through(const ShellModel& model, const EquilibriumState& from_state,
                        const SnapOptions& snap_opts, const SolverOptions& opts) {
    SnapResult result;
    result.final_state = from_state;
    const double tol = opts.gradient_tolerance(model);

    const double zc = from_state.positions[3 * model.center_vertex + 2];
    double mean_tip = 0.0;
    for (int k = 0; k < 4; ++k)
        mean_tip += (from_state.positions[3 * model.tip_vertices[k] + 2] - zc) / 4.0;
    const double dir = mean_tip >= 0.0 ? -1.0 : 1.0;  // push toward the other side
    const double travel = snap_opts.max_travel_factor * std::abs(mean_tip);

    if (travel < 1e-9 * model.length_scale) {
        result.curve.push_back({0.0, 0.0, from_state.energy_total});
        result.final_state = from_state;
        return result;  // flat or monostable start: nothing to push through
    }

    std::vector<int> tip_z_dofs;
    for (int k = 0; k < 4; ++k) tip_z_dofs.push_back(3 * model.tip_vertices[k] + 2);

    Eigen::VectorXd x = from_state.positions;
    Eigen::VectorXd g_raw(model.dof_count());
    Eigen::VectorXd force_load;  // force-ramp control

    const std::array<double, 4> tip_z0 = {x[tip_z_dofs[0]], x[tip_z_dofs[1]], x[tip_z_dofs[2]],
                                          x[tip_z_dofs[3]]};

    for (int step = 0; step <= snap_opts.steps; ++step) {
        const double frac = static_cast<double>(step) / snap_opts.steps;
        LbfgsResult loaded;
        double displacement = 0.0;
        double force = 0.0;
        if (snap_opts.control == SnapControl::DisplacementSteps) {
            const double delta = frac * travel;
            for (int k = 0; k < 4; ++k) x[tip_z_dofs[k]] = tip_z0[k] + dir * delta;
            loaded = solve(make_objective(model, nullptr, &tip_z_dofs, RotGauge::AboutZ), x, tol,
                                    opts.max_iterations, opts.lbfgs_history);
            x = loaded.x;
            const double e_int = total_energy_and_gradient(model, x, g_raw, false);
            loaded.energy = e_int;
            for (int dof : tip_z_dofs) force += dir * g_raw[dof];
            displacement = delta;
        } else {
            const double f_total = frac * snap_opts.max_force_factor * model.c_s *
                                   model.length_scale;
            force_load = Eigen::VectorXd::Zero(model.dof_count());
            for (int dof : tip_z_dofs) force_load[dof] = dir * f_total / 4.0;
            loaded = solve(make_objective(model, &force_load, nullptr, RotGauge::AboutZ), x, tol,
                                    opts.max_iterations, opts.lbfgs_history);
            x = loaded.x;
            loaded.energy = total_energy(model, x);
            force = f_total;
            double mean = 0.0;
            for (int k = 0; k < 4; ++k) mean += (x[tip_z_dofs[k]] - tip_z0[k]) / 4.0;
            displacement = dir * mean;
        }
        result.curve.push_back({force, displacement, loaded.energy});

        // Unloading can only return to the start basin while the tips are
        // still on the starting side of the center plane; skip the (costly)
        // unload solve until they have crossed.
        double mean_rel = 0.0;
        for (int k = 0; k < 4; ++k)
            mean_rel += (x[tip_z_dofs[k]] - x[3 * model.center_vertex + 2]) / 4.0;
        if (mean_rel * mean_tip > 0.0) continue;

        // unload and see where the structure relaxes
        LbfgsResult relaxed = solve(make_objective(model, nullptr, nullptr, RotGauge::All), x, tol,
                                             opts.max_iterations, opts.lbfgs_history);
        EquilibriumState candidate = make_state(model, relaxed);
        if (candidate.converged && candidate.sign != from_state.sign &&
            aligned_distance(candidate.positions, from_state.positions) >
                1e-3 * model.length_scale) {
            result.snapped = true;
            result.final_state = std::move(candidate);
            break;
        }
        result.final_state = std::move(candidate);
    }
    if (result.final_state.positions.size() == 0) {
        // control range exhausted before the tips crossed: report where the
        // structure relaxes from the last loaded state
        LbfgsResult relaxed = solve(make_objective(model, nullptr, nullptr, RotGauge::All), x, tol,
                                             opts.max_iterations, opts.lbfgs_history);
        result.final_state = make_state(model, relaxed);
    }
    return result;
}

}  // namespace kiri

#include "pulsebench/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace pulsebench {

namespace {

constexpr Complex kI{0.0, 1.0};

// Dormand-Prince 5(4) tableau with the continuous extension used by scipy's RK45.
constexpr std::array<double, 6> kC = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0};
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 5.0, 0, 0, 0, 0},
    {3.0 / 40.0, 9.0 / 40.0, 0, 0, 0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0, 0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
};
constexpr std::array<double, 6> kB = {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
                                      11.0 / 84.0};
constexpr std::array<double, 7> kE = {-71.0 / 57600.0, 0.0, 71.0 / 16695.0, -71.0 / 1920.0,
                                      17253.0 / 339200.0, -22.0 / 525.0, 1.0 / 40.0};
constexpr double kP[7][4] = {
    {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
    {0, 0, 0, 0},
    {0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
    {0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
    {0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
    {0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
    {0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kDriftTol = 1e-12;

double rms(const Operator& m) {
    return std::sqrt(m.cwiseAbs2().sum() / static_cast<double>(m.size()));
}

// Piecewise-constant step limit between sorted breakpoints.
struct StepProfile {
    std::vector<double> points;  // breakpoints inside (t0, t1) plus t1
    std::vector<double> limits;  // limit on [points[i-1], points[i])

    StepProfile(const Hamiltonian& h, double t0, double t1, double global_max) {
        std::vector<double> pts;
        for (const auto& w : h.windows()) {
            if (w.t0 > t0 && w.t0 < t1) pts.push_back(w.t0);
            if (w.t1 > t0 && w.t1 < t1) pts.push_back(w.t1);
        }
        std::sort(pts.begin(), pts.end());
        // Breakpoints within rounding distance of each other or of the ends would force
        // steps below the underflow floor; merge them.
        const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
        double prev = t0;
        for (double p : pts) {
            if (close(p, prev) || close(p, t1)) continue;
            points.push_back(p);
            prev = p;
        }
        points.push_back(t1);
        limits.resize(points.size());
        double left = t0;
        const double inf = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double mid = 0.5 * (left + points[i]);
            double lim = global_max > 0.0 ? global_max : inf;
            for (const auto& w : h.windows()) {
                if (mid >= w.t0 && mid <= w.t1) lim = std::min(lim, w.max_step);
            }
            limits[i] = lim;
            left = points[i];
        }
    }
};

class Dopri5 {
public:
    Dopri5(const Hamiltonian& h, std::vector<Operator> collapse, const IntegratorConfig& cfg, IntegratorStats* stats)
        : f_(h, std::move(collapse)), h_(h), cfg_(cfg), stats_(stats) {
        const auto n = f_.dim();
        for (auto& k : k_) k.resize(n, n);
        ytmp_.resize(n, n);
        ynew_.resize(n, n);
        err_.resize(n, n);
    }

    /// Integrates y from t0 to t1; `emit` receives every requested output time in (t0, t1].
    template <typename Emit>
    Operator run(Operator y, double t0, double t1, const std::vector<double>& outputs, Emit&& emit) {
        if (!(t1 > t0)) return y;
        StepProfile profile(h_, t0, t1, cfg_.max_step);
        const double trace0 = y.trace().real();
        std::size_t seg = 0;
        std::size_t next_out = 0;
        while (next_out < outputs.size() && outputs[next_out] <= t0) ++next_out;

        double t = t0;
        bool fresh = true;  // k1 must be re-evaluated (start or after a breakpoint)
        double h_abs = 0.0;
        bool at_breakpoint = true;

        while (t < t1) {
            while (seg + 1 < profile.points.size() && profile.points[seg] <= t) ++seg;
            const double seg_end = profile.points[seg];
            const double limit = profile.limits[seg];
            const double t_eval0 = at_breakpoint ? std::nextafter(t, std::numeric_limits<double>::infinity()) : t;
            if (fresh) {
                eval(t_eval0, y, k_[0]);
                fresh = false;
            }
            if (h_abs == 0.0) h_abs = initial_step(t_eval0, y, std::min(limit, seg_end - t));

            bool rejected = false;
            while (true) {
                const double min_step = 10.0 * std::abs(std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
                double step = std::min(h_abs, limit);
                bool lands = false;
                if (t + step >= seg_end || seg_end - (t + step) < min_step) {
                    step = seg_end - t;
                    lands = true;
                }
                if (step < min_step) {
                    std::ostringstream os;
                    os << "step size underflow at t=" << t << " (step " << step << ")";
                    throw IntegratorError(os.str());
                }
                const double t_new = lands ? seg_end : t + step;
                const double t_end_eval =
                    lands ? std::nextafter(t_new, -std::numeric_limits<double>::infinity()) : t_new;
                for (int s = 1; s < 6; ++s) {
                    ytmp_ = y;
                    for (int j = 0; j < s; ++j) {
                        if (kA[s][j] != 0.0) ytmp_.noalias() += (step * kA[s][j]) * k_[j];
                    }
                    const double ts = s == 5 ? t_end_eval : (s == 0 ? t_eval0 : t + kC[s] * step);
                    eval(ts, ytmp_, k_[s]);
                }
                ynew_ = y;
                for (int j = 0; j < 6; ++j) {
                    if (kB[j] != 0.0) ynew_.noalias() += (step * kB[j]) * k_[j];
                }
                eval(t_end_eval, ynew_, k_[6]);
                err_.setZero();
                for (int j = 0; j < 7; ++j) {
                    if (kE[j] != 0.0) err_.noalias() += (step * kE[j]) * k_[j];
                }
                double acc = 0.0;
                for (Eigen::Index i = 0; i < err_.size(); ++i) {
                    const double sc = cfg_.atol + cfg_.rtol * std::max(std::abs(y.data()[i]), std::abs(ynew_.data()[i]));
                    acc += std::norm(err_.data()[i]) / (sc * sc);
                }
                const double err_norm = std::sqrt(acc / static_cast<double>(err_.size()));
                if (err_norm < 1.0) {
                    double factor = err_norm == 0.0 ? kMaxFactor
                                                    : std::min(kMaxFactor, kSafety * std::pow(err_norm, -0.2));
                    if (rejected) factor = std::min(1.0, factor);
                    h_abs = std::max(h_abs, step) * factor;
                    if (lands) h_abs = std::max(h_abs, step);
                    if (stats_) ++stats_->accepted;
                    // Dense output for requested times inside (t, t_new].
                    while (next_out < outputs.size() && outputs[next_out] <= t_new) {
                        const double tq = outputs[next_out];
                        if (tq == t_new) {
                            emit(tq, normalized(ynew_, trace0));
                        } else {
                            emit(tq, dense(y, step, (tq - t) / step));
                        }
                        ++next_out;
                    }
                    t = t_new;
                    y.swap(ynew_);
                    renormalize(y, trace0);
                    if (lands) {
                        fresh = true;
                        at_breakpoint = true;
                    } else {
                        std::swap(k_[0], k_[6]);
                        at_breakpoint = false;
                    }
                    break;
                }
                if (stats_) ++stats_->rejected;
                h_abs = step * std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2));
                rejected = true;
            }
        }
        return y;
    }

private:
    void eval(double t, const Operator& y, Operator& out) {
        f_(t, y, out);
        if (stats_) ++stats_->rhs_evals;
    }

    double initial_step(double t, const Operator& y, double span) {
        const auto& f0 = k_[0];
        Operator scale = (cfg_.atol + cfg_.rtol * y.cwiseAbs().array()).matrix().cast<Complex>();
        const double d0 = rms(y.cwiseQuotient(scale));
        const double d1 = rms(f0.cwiseQuotient(scale));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, span);
        Operator y1 = y + h0 * f0;
        Operator f1(y.rows(), y.cols());
        eval(t + h0, y1, f1);
        const double d2 = rms((f1 - f0).cwiseQuotient(scale)) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        return std::min(100.0 * h0, h1);
    }

    Operator dense(const Operator& y, double step, double theta) const {
        const double q[4] = {theta, theta * theta, theta * theta * theta, theta * theta * theta * theta};
        Operator out = y;
        for (int i = 0; i < 7; ++i) {
            const double w = kP[i][0] * q[0] + kP[i][1] * q[1] + kP[i][2] * q[2] + kP[i][3] * q[3];
            if (w != 0.0) out.noalias() += (step * w) * k_[i];
        }
        return out;
    }

    static Operator normalized(const Operator& y, double trace0) {
        Operator out = y;
        renormalize(out, trace0);
        return out;
    }

    static void renormalize(Operator& y, double trace0) {
        const double herm = hermiticity_residual(y);
        const double tr = y.trace().real();
        if (herm > kDriftTol || std::abs(tr - trace0) > kDriftTol) {
            Operator hm = 0.5 * (y + y.adjoint());
            const double trh = hm.trace().real();
            y = trh != 0.0 ? Operator(hm * (trace0 / trh)) : hm;
        }
    }

    LindbladGenerator f_;
    const Hamiltonian& h_;
    const IntegratorConfig& cfg_;
    IntegratorStats* stats_;
    std::array<Operator, 7> k_;
    Operator ytmp_, ynew_, err_;
};

void check_state(const Operator& rho, double t, double tol, double trace0) {
    try {
        validate_density(rho, StateTolerances{tol, tol, tol}, trace0);
    } catch (const InvariantError& e) {
        std::ostringstream os;
        os << "state invariant lost at t=" << t << ": " << e.what();
        throw IntegratorError(os.str());
    }
}

}  // namespace

LindbladSpec LindbladSpec::uniform(std::size_t n_qubits, double gamma1, double gamma_phi) {
    return LindbladSpec{std::vector<double>(n_qubits, gamma1), std::vector<double>(n_qubits, gamma_phi)};
}

LindbladSpec LindbladSpec::from_times(const std::vector<double>& t1, const std::vector<double>& t2_star) {
    if (t1.size() != t2_star.size()) throw std::invalid_argument("T1 and T2* lists differ in length");
    LindbladSpec s;
    for (std::size_t k = 0; k < t1.size(); ++k) {
        if (!(t1[k] > 0.0) || !(t2_star[k] > 0.0)) throw std::invalid_argument("coherence times must be positive");
        const double g1 = 1.0 / t1[k];
        const double gphi = 1.0 / t2_star[k] - 0.5 * g1;
        if (gphi < 0.0) throw std::invalid_argument("T2* exceeds 2 T1; dephasing rate would be negative");
        s.gamma1.push_back(g1);
        s.gamma_phi.push_back(gphi);
    }
    return s;
}

void LindbladSpec::validate(std::size_t n_qubits) const {
    if (gamma1.size() != n_qubits || gamma_phi.size() != n_qubits) {
        throw DimensionError("Lindblad rates need one entry per qubit");
    }
    for (std::size_t k = 0; k < n_qubits; ++k) {
        if (!(gamma1[k] >= 0.0) || !(gamma_phi[k] >= 0.0)) throw std::invalid_argument("Lindblad rates must be >= 0");
    }
}

std::vector<Operator> collapse_operators(const LindbladSpec& spec, std::size_t n_qubits) {
    spec.validate(n_qubits);
    std::vector<Operator> out;
    for (std::size_t k = 0; k < n_qubits; ++k) {
        if (spec.gamma1[k] > 0.0) out.push_back(std::sqrt(spec.gamma1[k]) * embed_qubit(sigma_minus(), k, n_qubits));
        if (spec.gamma_phi[k] > 0.0) {
            out.push_back(std::sqrt(spec.gamma_phi[k]) * embed_qubit(pauli(PauliAxis::Z), k, n_qubits));
        }
    }
    return out;
}

LindbladGenerator::LindbladGenerator(const Hamiltonian& h, std::vector<Operator> collapse)
    : h_(h), ls_(std::move(collapse)), dim_(h.dim()) {
    decay_ = Operator::Zero(dim_, dim_);
    for (const auto& l : ls_) {
        if (l.rows() != dim_ || l.cols() != dim_) throw DimensionError("collapse operator dimension mismatch");
        ls_dag_.push_back(l.adjoint());
        decay_.noalias() += 0.5 * ls_dag_.back() * l;
    }
    h_buf_.resize(dim_, dim_);
    heff_.resize(dim_, dim_);
    tmp_.resize(dim_, dim_);
}

void LindbladGenerator::operator()(double t, const Operator& rho, Operator& drho) {
    h_.evaluate(t, h_buf_);
    heff_ = h_buf_ - kI * decay_;
    drho.noalias() = -kI * (heff_ * rho);
    drho.noalias() += kI * (rho * heff_.adjoint());
    for (std::size_t k = 0; k < ls_.size(); ++k) {
        tmp_.noalias() = ls_[k] * rho;
        drho.noalias() += tmp_ * ls_dag_[k];
    }
}

Operator lindblad_rhs(const Operator& h, const Operator& rho, const std::vector<Operator>& collapse) {
    if (h.rows() != rho.rows()) throw DimensionError("Hamiltonian and state dimensions differ");
    Operator out = -kI * (h * rho - rho * h);
    for (const auto& l : collapse) {
        const Operator ld = l.adjoint();
        const Operator ldl = ld * l;
        out += l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

std::vector<double> IntegratorConfig::uniform_grid(double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("grid needs at least one step");
    std::vector<double> g(steps + 1);
    for (int i = 0; i <= steps; ++i) g[i] = t0 + (t1 - t0) * i / steps;
    g.back() = t1;
    return g;
}

void IntegratorConfig::validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("rtol and atol must be positive");
    if (grid.size() < 1) throw std::invalid_argument("output grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("output grid must be strictly increasing");
    }
}

void Trajectory::add_metric(const std::string& name, std::vector<double> values) {
    metric_names.push_back(name);
    metric_values.push_back(std::move(values));
}

void Trajectory::compute_metrics(const std::vector<MetricFn>& metrics) {
    for (const auto& m : metrics) {
        std::vector<double> v;
        v.reserve(states.size());
        for (const auto& s : states) v.push_back(m.fn(s));
        add_metric(m.name, std::move(v));
    }
}

bool Trajectory::has_metric(const std::string& name) const {
    return std::find(metric_names.begin(), metric_names.end(), name) != metric_names.end();
}

const std::vector<double>& Trajectory::metric(const std::string& name) const {
    for (std::size_t i = 0; i < metric_names.size(); ++i) {
        if (metric_names[i] == name) return metric_values[i];
    }
    throw std::out_of_range("no metric named '" + name + "'");
}

void Trajectory::append(const Trajectory& other, bool skip_first) {
    const std::size_t start = skip_first ? 1 : 0;
    for (std::size_t i = start; i < other.times.size(); ++i) {
        times.push_back(other.times[i]);
        if (i < other.states.size()) states.push_back(other.states[i]);
    }
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::string& time_column) {
    os << time_column;
    for (const auto& n : traj.metric_names) os << ',' << n;
    os << '\n';
    char buf[64];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
        os << buf;
        for (const auto& col : traj.metric_values) {
            std::snprintf(buf, sizeof buf, "%.17g", col[i]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

Trajectory evolve(const Operator& rho0, const Hamiltonian& h, const std::vector<Operator>& collapse,
                  const IntegratorConfig& config, IntegratorStats* stats) {
    config.validate();
    if (rho0.rows() != h.dim()) throw DimensionError("initial state and Hamiltonian dimensions differ");
    const double trace0 = rho0.trace().real();
    check_state(rho0, config.grid.front(), config.validation_tol, trace0);
    Trajectory traj;
    traj.times.push_back(config.grid.front());
    traj.states.push_back(rho0);
    Dopri5 solver(h, collapse, config, stats);
    solver.run(rho0, config.grid.front(), config.grid.back(), config.grid, [&](double t, const Operator& s) {
        check_state(s, t, config.validation_tol, trace0);
        traj.times.push_back(t);
        traj.states.push_back(s);
    });
    return traj;
}

Operator propagate(const Operator& rho0, const Hamiltonian& h, const std::vector<Operator>& collapse, double t0,
                   double t1, const IntegratorConfig& config, IntegratorStats* stats) {
    if (rho0.rows() != h.dim()) throw DimensionError("initial state and Hamiltonian dimensions differ");
    Dopri5 solver(h, collapse, config, stats);
    const std::vector<double> none;
    Operator out = solver.run(rho0, t0, t1, none, [](double, const Operator&) {});
    check_state(out, t1, config.validation_tol, rho0.trace().real());
    return out;
}

Trajectory evolve_piecewise(const Operator& rho0, const std::vector<Segment>& segments,
                            const std::vector<StateMap>& maps, const IntegratorConfig& config,
                            IntegratorStats* stats) {
    config.validate();
    if (segments.empty()) throw std::invalid_argument("evolve_piecewise needs at least one segment");
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].t0 != segments[i - 1].t1) throw std::invalid_argument("segments must be contiguous");
    }
    const double trace0 = rho0.trace().real();
    check_state(rho0, segments.front().t0, config.validation_tol, trace0);
    Trajectory traj;
    if (config.grid.front() == segments.front().t0) {
        traj.times.push_back(config.grid.front());
        traj.states.push_back(rho0);
    }
    Operator y = rho0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (!seg.hamiltonian) throw std::invalid_argument("segment without Hamiltonian");
        Dopri5 solver(*seg.hamiltonian, seg.collapse, config, stats);
        const double seg_trace = y.trace().real();
        y = solver.run(y, seg.t0, seg.t1, config.grid, [&](double t, const Operator& s) {
            check_state(s, t, config.validation_tol, seg_trace);
            traj.times.push_back(t);
            traj.states.push_back(s);
        });
        if (i < maps.size() && maps[i]) {
            y = maps[i](y, seg.t1);
            if (!traj.times.empty() && traj.times.back() == seg.t1) traj.states.back() = y;
        }
    }
    return traj;
}

}  // namespace pulsebench

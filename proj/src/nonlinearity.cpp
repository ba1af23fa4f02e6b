#include "frac/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "frac/errors.hpp"

namespace frac {

namespace {

double modulation(std::span<const double> x, double period) {
    double prod = 1.0;
    for (double xi : x) prod *= std::cos(2.0 * M_PI * xi / period);
    return 1.0 + 0.5 * prod;
}

// maximize a scalar function over t > 0: coarse log grid + golden refinement
double maximize_logt(const std::function<double(double)>& g, double t_lo, double t_hi,
                     double* arg = nullptr) {
    double best = -std::numeric_limits<double>::infinity();
    double best_t = t_lo;
    const int n = 400;
    const double lr = std::log(t_hi / t_lo);
    for (int i = 0; i <= n; ++i) {
        const double t = t_lo * std::exp(lr * i / n);
        const double v = g(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    double a = best_t / std::exp(lr / n), b = best_t * std::exp(lr / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = g(x1);
        }
        if (b - a < 1e-12 * std::max(1.0, a)) break;
    }
    const double v = std::max(f1, f2);
    if (arg != nullptr) *arg = 0.5 * (a + b);
    return std::max(best, v);
}

std::vector<std::vector<double>> x_grid(int N, double period, int per_axis) {
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(static_cast<std::size_t>(N), 0);
    while (true) {
        std::vector<double> x(static_cast<std::size_t>(N));
        for (int d = 0; d < N; ++d)
            x[static_cast<std::size_t>(d)] = period * idx[static_cast<std::size_t>(d)] / per_axis;
        pts.push_back(std::move(x));
        int d = 0;
        for (; d < N; ++d) {
            if (++idx[static_cast<std::size_t>(d)] < per_axis) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d == N) break;
    }
    return pts;
}

// symmetric sample grid in t: log-spaced magnitudes plus 0
std::vector<double> t_grid(double t_abs_max, int count) {
    std::vector<double> ts;
    ts.push_back(0.0);
    const int half = count / 2;
    for (int i = 1; i <= half; ++i) {
        const double mag = t_abs_max * std::pow(10.0, -6.0 * (half - i) / half);
        ts.push_back(mag);
        ts.push_back(-mag);
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

}  // namespace

Nonlinearity builtin_nonlinearity(const std::string& label, double p, double period) {
    Nonlinearity nl;
    nl.label = label;
    nl.period = period;
    if (label == "zero") {
        nl.p = 3.0;
        nl.C = 0.0;
        nl.f = [](std::span<const double>, double) { return 0.0; };
        nl.F = [](std::span<const double>, double) { return 0.0; };
        nl.df = [](std::span<const double>, double) { return 0.0; };
        return nl;
    }
    if (label == "log_superlinear") {
        nl.p = 2.0;
        nl.C = 1.0;  // |t| log(1+|t|) <= t^2
        nl.f = [](std::span<const double>, double t) { return t * std::log1p(std::abs(t)); };
        nl.F = [](std::span<const double>, double t) {
            const double a = std::abs(t);
            return 0.5 * t * t * std::log1p(a) - 0.25 * t * t + 0.5 * a - 0.5 * std::log1p(a);
        };
        nl.df = [](std::span<const double>, double t) {
            const double a = std::abs(t);
            return std::log1p(a) + a / (1.0 + a);
        };
        return nl;
    }
    if (label == "pure_power") {
        if (!(p > 1.0)) throw InvalidParams("pure_power: need p > 1");
        nl.p = p;
        nl.C = 1.0;
        nl.f = [p](std::span<const double>, double t) { return std::pow(std::abs(t), p - 1.0) * t; };
        nl.F = [p](std::span<const double>, double t) {
            return std::pow(std::abs(t), p + 1.0) / (p + 1.0);
        };
        nl.df = [p](std::span<const double>, double t) { return p * std::pow(std::abs(t), p - 1.0); };
        return nl;
    }
    if (label == "modulated_power") {
        if (!(p > 1.0)) throw InvalidParams("modulated_power: need p > 1");
        nl.p = p;
        nl.C = 1.5;  // a(x) in [1/2, 3/2]
        nl.x_dependent = true;
        nl.f = [p, period](std::span<const double> x, double t) {
            return modulation(x, period) * std::pow(std::abs(t), p - 1.0) * t;
        };
        nl.F = [p, period](std::span<const double> x, double t) {
            return modulation(x, period) * std::pow(std::abs(t), p + 1.0) / (p + 1.0);
        };
        nl.df = [p, period](std::span<const double> x, double t) {
            return modulation(x, period) * p * std::pow(std::abs(t), p - 1.0);
        };
        return nl;
    }
    throw UnknownLabel("builtin_nonlinearity: unknown label '" + label + "'");
}

double fit_C_eps(const Nonlinearity& nl, double eps, int N) {
    const auto xs = nl.x_dependent ? x_grid(N, nl.period, 8)
                                   : std::vector<std::vector<double>>{std::vector<double>(
                                         static_cast<std::size_t>(N), 0.0)};
    double worst = 0.0;
    for (const auto& x : xs) {
        for (int sign = -1; sign <= 1; sign += 2) {
            auto g = [&](double t) {
                const double tt = sign * t;
                const double excess = std::abs(nl.F(x, tt)) - eps * t * t;
                return excess / std::pow(t, nl.p + 1.0);
            };
            worst = std::max(worst, maximize_logt(g, 1e-8, 1e8));
        }
    }
    return std::max(worst, 0.0);
}

double fit_B_A(const Nonlinearity& nl, double A, int N) {
    const auto xs = nl.x_dependent ? x_grid(N, nl.period, 8)
                                   : std::vector<std::vector<double>>{std::vector<double>(
                                         static_cast<std::size_t>(N), 0.0)};
    double worst = 0.0;
    for (const auto& x : xs) {
        for (int sign = -1; sign <= 1; sign += 2) {
            double arg = 0.0;
            auto g = [&](double t) { return A * t * t - nl.F(x, sign * t); };
            const double v = maximize_logt(g, 1e-6, 1e9, &arg);
            if (arg > 1e8 && g(arg) > 0.0 && g(arg) >= g(arg / 2.0))
                return std::numeric_limits<double>::infinity();  // no superquadratic growth
            worst = std::max(worst, v);
        }
    }
    return std::max(worst, 0.0);
}

namespace {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass:
            return "pass";
        case Verdict::fail:
            return "fail";
        default:
            return "inconclusive";
    }
}

HypothesisCheck make_fail(std::string name, std::vector<double> x, double t, double lhs, double rhs,
                          std::string note) {
    HypothesisCheck c;
    c.name = std::move(name);
    c.verdict = Verdict::fail;
    c.witness = Witness{std::move(x), t, lhs, rhs};
    c.note = std::move(note);
    return c;
}

}  // namespace

HypothesisReport check_hypotheses(const Nonlinearity& nl, const SamplerConfig& cfg) {
    HypothesisReport rep;
    const auto xs = x_grid(cfg.N, nl.period, cfg.x_per_axis);
    const auto ts = t_grid(cfg.t_abs_max, cfg.t_count);

    // periodicity in every axis
    {
        HypothesisCheck c;
        c.name = "periodic_in_x";
        c.verdict = Verdict::pass;
        for (const auto& x : xs) {
            for (double t : ts) {
                for (int d = 0; d < cfg.N && c.verdict == Verdict::pass; ++d) {
                    std::vector<double> shifted = x;
                    shifted[static_cast<std::size_t>(d)] += nl.period;
                    const double a = nl.f(x, t), b = nl.f(shifted, t);
                    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a)))
                        c = make_fail("periodic_in_x", x, t, a, b, "f(x+Te_d,t) != f(x,t)");
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // continuity: finite values, small increments under small t-perturbation
    {
        HypothesisCheck c;
        c.name = "continuous";
        c.verdict = Verdict::pass;
        for (const auto& x : xs) {
            for (double t : ts) {
                const double v = nl.f(x, t);
                const double h = 1e-7 * (1.0 + std::abs(t));
                const double v2 = nl.f(x, t + h);
                if (!std::isfinite(v) || std::abs(v2 - v) > 1e-2 * (1.0 + std::abs(v))) {
                    c = make_fail("continuous", x, t, v, v2, "jump under small increment");
                    break;
                }
            }
        }
        c.note = "sampled modulus of continuity";
        rep.checks.push_back(std::move(c));
    }

    // f(x,t) = o(t) near t = 0: the ratio f/t must decay on a shrinking grid
    {
        HypothesisCheck c;
        c.name = "vanishing_slope_at_zero";
        c.verdict = Verdict::pass;
        double prev = std::numeric_limits<double>::infinity();
        for (double mag = 1e-1; mag >= 1e-8; mag /= 10.0) {
            double ratio = 0.0;
            for (const auto& x : xs)
                ratio = std::max(ratio, std::max(std::abs(nl.f(x, mag) / mag),
                                                 std::abs(nl.f(x, -mag) / mag)));
            if (ratio > prev + 1e-12) {
                c = make_fail("vanishing_slope_at_zero", xs.front(), mag, ratio, prev,
                              "|f/t| fails to decay toward 0");
                break;
            }
            prev = ratio;
        }
        if (c.verdict == Verdict::pass && prev > 1e-3) c.verdict = Verdict::inconclusive;
        rep.checks.push_back(std::move(c));
    }

    // growth bound |f| <= C (1 + |t|^p)
    {
        HypothesisCheck c;
        c.name = "growth_bound";
        c.verdict = Verdict::pass;
        for (const auto& x : xs) {
            for (double t : ts) {
                const double lhs = std::abs(nl.f(x, t));
                const double rhs = nl.C * (1.0 + std::pow(std::abs(t), nl.p));
                if (lhs > rhs * (1.0 + 1e-12)) {
                    c = make_fail("growth_bound", x, t, lhs, rhs, "|f| above C(1+|t|^p)");
                    break;
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // F(x,t)/t^2 -> infinity (superquadratic potential)
    {
        HypothesisCheck c;
        c.name = "superquadratic_potential";
        c.verdict = Verdict::pass;
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool monotone = true;
        double prev = -std::numeric_limits<double>::infinity();
        for (double mag = 10.0; mag <= 1e6; mag *= 10.0) {
            double ratio = std::numeric_limits<double>::infinity();
            for (const auto& x : xs)
                ratio = std::min(ratio, std::min(nl.F(x, mag), nl.F(x, -mag)) / (mag * mag));
            if (ratio < prev) monotone = false;
            prev = ratio;
            lo = std::min(lo, ratio);
            hi = ratio;
        }
        if (!monotone || hi < 2.0 * std::max(lo, 1e-12) || hi < 1.0) {
            c.verdict = Verdict::fail;
            c.witness = Witness{xs.front(), 1e6, hi, lo};
            c.note = "F/t^2 not growing on the sample";
        }
        rep.checks.push_back(std::move(c));
    }

    // quotient monotonicity: G(x, theta t) <= gamma G(x, t), theta in [0,1]
    {
        HypothesisCheck c;
        c.name = "g_quotient_monotone";
        c.verdict = Verdict::pass;
        for (const auto& x : xs) {
            for (double t : ts) {
                const double gt = nl.G(x, t);
                for (int i = 0; i < cfg.theta_count; ++i) {
                    const double theta = static_cast<double>(i) / (cfg.theta_count - 1);
                    const double gth = nl.G(x, theta * t);
                    if (gth > nl.gamma * gt + 1e-9 * (1.0 + std::abs(gt))) {
                        c = make_fail("g_quotient_monotone", x, t, gth, nl.gamma * gt,
                                      "G(x,theta t) > gamma G(x,t)");
                        break;
                    }
                }
                if (c.verdict == Verdict::fail) break;
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // G >= 0 and F >= 0 on the sample (consequences used by the geometry)
    {
        HypothesisCheck c;
        c.name = "g_nonnegative";
        c.verdict = Verdict::pass;
        for (const auto& x : xs)
            for (double t : ts)
                if (nl.G(x, t) < -1e-10) {
                    c = make_fail("g_nonnegative", x, t, nl.G(x, t), 0.0, "G < 0");
                    break;
                }
        rep.checks.push_back(std::move(c));
    }
    {
        HypothesisCheck c;
        c.name = "potential_nonnegative";
        c.verdict = Verdict::pass;
        for (const auto& x : xs)
            for (double t : ts)
                if (nl.F(x, t) < -1e-10) {
                    c = make_fail("potential_nonnegative", x, t, nl.F(x, t), 0.0, "F < 0");
                    break;
                }
        rep.checks.push_back(std::move(c));
    }

    // Ambrosetti-Rabinowitz search: mu > 2, R > 0 with 0 < mu F <= f t
    {
        std::vector<double> mus = {nl.p + 1.0, 4.0, 3.0, 2.5, 2.1};
        std::sort(mus.begin(), mus.end(), std::greater<double>());
        mus.erase(std::unique(mus.begin(), mus.end()), mus.end());
        const double Rs[] = {1.0, 10.0, 100.0};
        for (double t = 10.0; t <= 1e8; t *= 10.0) {
            double ratio = std::numeric_limits<double>::infinity();
            for (const auto& x : xs)
                ratio = std::min(ratio, nl.f(x, t) * t / std::max(nl.F(x, t), 1e-300));
            rep.ar.ratio_trace.emplace_back(t, ratio);
        }
        for (double mu : mus) {
            if (!(mu > 2.0)) continue;
            for (double R : Rs) {
                bool ok = true;
                Witness w;
                for (const auto& x : xs) {
                    for (double mag = R; mag <= 1e8 && ok; mag *= 1.3) {
                        for (int sign = -1; sign <= 1 && ok; sign += 2) {
                            const double t = sign * mag;
                            const double muF = mu * nl.F(x, t);
                            const double ft = nl.f(x, t) * t;
                            if (!(muF > 0.0) || muF > ft * (1.0 + 1e-12)) {
                                ok = false;
                                w = Witness{x, t, muF, ft};
                            }
                        }
                    }
                    if (!ok) break;
                }
                if (ok) {
                    rep.ar.holds = true;
                    rep.ar.mu = mu;
                    rep.ar.R = R;
                    break;
                }
                if (!rep.ar.witness) rep.ar.witness = w;
            }
            if (rep.ar.holds) break;
        }
    }

    for (double eps : cfg.eps_list) rep.C_eps[eps] = fit_C_eps(nl, eps, cfg.N);
    for (double A : cfg.A_list) rep.B_A[A] = fit_B_A(nl, A, cfg.N);
    return rep;
}

bool HypothesisReport::all_pass() const {
    for (const auto& c : checks)
        if (c.verdict != Verdict::pass) return false;
    return true;
}

std::string HypothesisReport::to_json() const {
    using nlohmann::json;
    json j;
    json cs = json::array();
    for (const auto& c : checks) {
        json e;
        e["name"] = c.name;
        e["verdict"] = verdict_name(c.verdict);
        e["note"] = c.note;
        if (c.witness) {
            e["witness"] = {{"x", c.witness->x},
                            {"t", c.witness->t},
                            {"lhs", c.witness->lhs},
                            {"rhs", c.witness->rhs}};
        }
        cs.push_back(std::move(e));
    }
    j["checks"] = std::move(cs);
    j["ar"] = {{"holds", ar.holds}, {"mu", ar.mu}, {"R", ar.R}};
    if (ar.witness)
        j["ar"]["witness"] = {{"x", ar.witness->x},
                              {"t", ar.witness->t},
                              {"mu_F", ar.witness->lhs},
                              {"f_t", ar.witness->rhs}};
    nlohmann::json trace = json::array();
    for (const auto& [t, r] : ar.ratio_trace) trace.push_back({{"t", t}, {"ratio", r}});
    j["ar"]["ratio_trace"] = std::move(trace);
    json ce = json::object(), ba = json::object();
    for (const auto& [eps, v] : C_eps) ce[std::to_string(eps)] = v;
    for (const auto& [A, v] : B_A)
        ba[std::to_string(A)] = std::isfinite(v) ? json(v) : json("infinite");
    j["C_eps"] = std::move(ce);
    j["B_A"] = std::move(ba);
    return j.dump(2);
}

}  // namespace frac

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frac {

// Superlinear boundary nonlinearity: the callable triple (f, F, G) with
// G(x,t) = f(x,t) t - 2 F(x,t), growth exponent p, quotient constant gamma,
// and the growth constant C of |f(x,t)| <= C (1 + |t|^p). df is the partial
// t-derivative, used by the Newton polish.
struct Nonlinearity {
    std::string label;
    double p = 3.0;
    double gamma = 1.0;
    double C = 1.0;
    bool x_dependent = false;
    double period = 2.0 * 3.14159265358979323846;  // spatial period of f(.,t)

    std::function<double(std::span<const double>, double)> f;
    std::function<double(std::span<const double>, double)> F;
    std::function<double(std::span<const double>, double)> df;

    double G(std::span<const double> x, double t) const { return f(x, t) * t - 2.0 * F(x, t); }
};

// Built-in families:
//   zero                 -- f = 0 control (only the trivial critical point)
//   log_superlinear      -- f = t log(1+|t|); superlinear but fails (AR)
//   pure_power           -- f = |t|^{p-1} t
//   modulated_power      -- f = a(x) |t|^{p-1} t, a(x) = 1 + cos-product/2
// UnknownLabel otherwise. p is ignored by zero/log_superlinear.
Nonlinearity builtin_nonlinearity(const std::string& label, double p = 3.0,
                                  double period = 2.0 * 3.14159265358979323846);

// Smallest constant on the sampled domain with
// |F(x,t)| <= eps t^2 + C_eps |t|^{p+1}; 1-D maximization over t, grid over x.
double fit_C_eps(const Nonlinearity& nl, double eps, int N);

// sup over the sampled domain of A t^2 - F(x,t); +inf when F grows at most
// quadratically (the fit diverges for the zero control).
double fit_B_A(const Nonlinearity& nl, double A, int N);

// --- hypothesis verification (sampled, never a proof) ---------------------

struct Witness {
    std::vector<double> x;
    double t = 0.0;
    double lhs = 0.0;  // the two sides of the violated inequality
    double rhs = 0.0;
};

enum class Verdict { pass, fail, inconclusive };

struct HypothesisCheck {
    std::string name;
    Verdict verdict = Verdict::inconclusive;
    std::optional<Witness> witness;  // always present on fail
    std::string note;
};

struct ARResult {
    bool holds = false;
    double mu = 0.0;  // found pair when holds
    double R = 0.0;
    std::optional<Witness> witness;                  // violation for the best mu tried
    std::vector<std::pair<double, double>> ratio_trace;  // (t, f t / F)
};

struct SamplerConfig {
    int N = 1;
    double t_abs_max = 100.0;
    int t_count = 201;
    int x_per_axis = 8;
    int theta_count = 11;
    std::vector<double> eps_list = {0.25, 0.125};
    std::vector<double> A_list = {1.0};
    std::uint64_t seed = 1234;
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    ARResult ar;
    std::map<double, double> C_eps;  // per requested eps
    std::map<double, double> B_A;    // per requested A
    bool all_pass() const;
    std::string to_json() const;
};

HypothesisReport check_hypotheses(const Nonlinearity& nl, const SamplerConfig& cfg);

}  // namespace frac

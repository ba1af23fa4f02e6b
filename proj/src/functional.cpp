#include "frac/functional.hpp"

#include <cmath>

#include "frac/errors.hpp"
#include "frac/kernels.hpp"

namespace frac {

Functional::Functional(const ProblemParams& p, Nonlinearity nl, double kappa)
    : p_(p), nl_(std::move(nl)), kappa_(kappa) {
    p_.validate();
    if (!(kappa_ > 0.0)) throw InvalidParams("Functional: kappa must be positive");
    padM_ = static_cast<int>(std::ceil((nl_.p + 1.0) * p_.M / 2.0));
    padM_ = std::max(padM_, p_.M);
    sym_ = symbol_table(p_, false);
    sym_shifted_ = symbol_table(p_, true);
    dual_w_ = sym_;
    if (p_.m == 0.0) {
        // constants carry no m = 0 energy; weigh their residual like |k| = 1
        FourierField probe(p_);
        const double w0 = std::pow(p_.omega(), 2.0 * p_.s);
        for (std::size_t i = 0; i < dual_w_.size(); ++i)
            if (probe.ksq(i) == 0.0) dual_w_[i] = w0;
    }
    if (nl_.x_dependent) {
        std::size_t n = 1;
        for (int d = 0; d < p_.N; ++d) n *= static_cast<std::size_t>(padM_);
        pad_coords_.resize(n);
        const double h = p_.T / padM_;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> x(static_cast<std::size_t>(p_.N));
            std::size_t rem = j;
            for (int d = p_.N - 1; d >= 0; --d) {
                x[static_cast<std::size_t>(d)] =
                    h * static_cast<double>(rem % static_cast<std::size_t>(padM_));
                rem /= static_cast<std::size_t>(padM_);
            }
            pad_coords_[j] = std::move(x);
        }
    }
}

double Functional::integral_of(const std::function<double(std::span<const double>, double)>& fn,
                               const FourierField& u) const {
    const std::vector<double> vals = to_grid_values(u, padM_);
    const double w = std::pow(p_.T / padM_, p_.N);
    const std::vector<double> origin(static_cast<std::size_t>(p_.N), 0.0);
    double acc = 0.0;
    if (nl_.x_dependent) {
        for (std::size_t j = 0; j < vals.size(); ++j) acc += fn(pad_coords_[j], vals[j]);
    } else {
        for (std::size_t j = 0; j < vals.size(); ++j) acc += fn(origin, vals[j]);
    }
    return acc * w;
}

double Functional::potential_integral(const FourierField& u) const {
    return integral_of(nl_.F, u);
}

double Functional::g_integral(const FourierField& u) const {
    return integral_of([this](std::span<const double> x, double t) { return nl_.G(x, t); }, u);
}

double Functional::quadratic_part(const FourierField& u) const {
    return 0.5 * kappa_ *
           kernels::active().weighted_norm_sq(u.data(), sym_shifted_.data(), u.size());
}

double Functional::value(const FourierField& u) const {
    return quadratic_part(u) - kappa_ * potential_integral(u);
}

FourierField Functional::gradient(const FourierField& u) const {
    // pointwise f on the padded grid, transformed back and truncated
    const std::vector<double> vals = to_grid_values(u, padM_);
    std::vector<double> fv(vals.size());
    const std::vector<double> origin(static_cast<std::size_t>(p_.N), 0.0);
    if (nl_.x_dependent) {
        for (std::size_t j = 0; j < vals.size(); ++j) fv[j] = nl_.f(pad_coords_[j], vals[j]);
    } else {
        for (std::size_t j = 0; j < vals.size(); ++j) fv[j] = nl_.f(origin, vals[j]);
    }
    FourierField g = from_grid_values(p_, fv, padM_);
    g *= -1.0;
    // add the shifted-multiplier part
    FourierField lin = u;
    kernels::active().cmul_real(lin.data(), sym_shifted_.data(), lin.size());
    g += lin;
    g *= kappa_;
    return g;
}

double Functional::xnorm_sq(const FourierField& u) const {
    return kappa_ * kernels::active().weighted_norm_sq(u.data(), sym_.data(), u.size());
}

double Functional::xnorm(const FourierField& u) const { return std::sqrt(xnorm_sq(u)); }

double Functional::dual_norm(const FourierField& g) const {
    if (raw_l2_dual) return l2_norm(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += std::norm(g.data()[i]) / dual_w_[i];
    return std::sqrt(acc / kappa_);
}

std::pair<double, double> Functional::cerami_measure(const FourierField& u) const {
    const double level = value(u);
    const double res = (1.0 + xnorm(u)) * dual_norm(gradient(u));
    return {level, res};
}

std::vector<double> Functional::padded_values(const FourierField& u) const {
    return to_grid_values(u, padM_);
}

FourierField Functional::hessian_apply_cached(const std::vector<double>& u_vals,
                                              const FourierField& h) const {
    const std::vector<double> hv = to_grid_values(h, padM_);
    std::vector<double> prod(hv.size());
    const std::vector<double> origin(static_cast<std::size_t>(p_.N), 0.0);
    if (nl_.x_dependent) {
        for (std::size_t j = 0; j < hv.size(); ++j)
            prod[j] = nl_.df(pad_coords_[j], u_vals[j]) * hv[j];
    } else {
        for (std::size_t j = 0; j < hv.size(); ++j) prod[j] = nl_.df(origin, u_vals[j]) * hv[j];
    }
    FourierField out = from_grid_values(p_, prod, padM_);
    out *= -1.0;
    FourierField lin = h;
    kernels::active().cmul_real(lin.data(), sym_shifted_.data(), lin.size());
    out += lin;
    out *= kappa_;
    return out;
}

FourierField Functional::hessian_apply(const FourierField& u, const FourierField& h) const {
    return hessian_apply_cached(padded_values(u), h);
}

double Functional::inner_l2(const FourierField& a, const FourierField& b) {
    if (a.size() != b.size()) throw InvalidParams("inner_l2: size mismatch");
    return kernels::active().dot_re(a.data(), b.data(), a.size());
}

}  // namespace frac

#include "frac/field.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "frac/errors.hpp"
#include "frac/fft.hpp"
#include "frac/kernels.hpp"

namespace frac {

namespace {

std::vector<int> grid_dims(const ProblemParams& p, int M) {
    return std::vector<int>(static_cast<std::size_t>(p.N), M);
}

// Flat grid index of mode k folded into an M^N spectrum.
std::size_t mode_bin(std::span<const int> k, int N, int M) {
    std::size_t idx = 0;
    for (int d = 0; d < N; ++d) {
        int kd = ((k[d] % M) + M) % M;
        idx = idx * static_cast<std::size_t>(M) + static_cast<std::size_t>(kd);
    }
    return idx;
}

}  // namespace

GridField::GridField(const ProblemParams& p, std::vector<double> v) : params(p), values(std::move(v)) {
    if (values.size() != p.grid_count())
        throw InvalidParams("GridField: value count does not match M^N");
}

double GridField::quad_weight() const {
    return std::pow(params.T / params.M, params.N);
}

void GridField::coords(std::size_t flat, double* x) const {
    const double h = params.T / params.M;
    for (int d = params.N - 1; d >= 0; --d) {
        x[d] = h * static_cast<double>(flat % static_cast<std::size_t>(params.M));
        flat /= static_cast<std::size_t>(params.M);
    }
}

FourierField::FourierField(const ProblemParams& p, bool hermitian)
    : params_(p), coeffs_(p.mode_count(), cdouble{0.0, 0.0}), hermitian_(hermitian) {
    params_.validate();
}

std::size_t FourierField::flat_index(std::span<const int> k) const {
    const int K = params_.K;
    std::size_t idx = 0;
    for (int d = 0; d < params_.N; ++d) {
        if (k[d] < -K || k[d] > K) throw InvalidParams("FourierField: index outside cutoff");
        idx = idx * static_cast<std::size_t>(params_.side()) + static_cast<std::size_t>(k[d] + K);
    }
    return idx;
}

void FourierField::unflatten(std::size_t flat, int* k) const {
    const int side = params_.side();
    for (int d = params_.N - 1; d >= 0; --d) {
        k[d] = static_cast<int>(flat % static_cast<std::size_t>(side)) - params_.K;
        flat /= static_cast<std::size_t>(side);
    }
}

double FourierField::ksq(std::size_t flat) const {
    int k[4];
    unflatten(flat, k);
    double s = 0.0;
    for (int d = 0; d < params_.N; ++d) s += static_cast<double>(k[d]) * k[d];
    return s;
}

cdouble FourierField::coeff(std::span<const int> k) const { return coeffs_[flat_index(k)]; }

void FourierField::set_coeff(std::span<const int> k, cdouble v) { coeffs_[flat_index(k)] = v; }

bool FourierField::check_hermitian(double tol) const {
    double maxc = 0.0;
    for (const auto& c : coeffs_) maxc = std::max(maxc, std::abs(c));
    const double bound = tol * std::max(1.0, maxc);
    int k[4], kneg[4];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        unflatten(i, k);
        for (int d = 0; d < params_.N; ++d) kneg[d] = -k[d];
        const cdouble mirror = coeffs_[flat_index(std::span<const int>(kneg, params_.N))];
        if (std::abs(coeffs_[i] - std::conj(mirror)) > bound) return false;
    }
    return true;
}

void FourierField::symmetrize() {
    int k[4], kneg[4];
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        unflatten(i, k);
        for (int d = 0; d < params_.N; ++d) kneg[d] = -k[d];
        const std::size_t j = flat_index(std::span<const int>(kneg, params_.N));
        if (j < i) continue;
        const cdouble a = coeffs_[i], b = coeffs_[j];
        const cdouble avg = 0.5 * (a + std::conj(b));
        coeffs_[i] = avg;
        coeffs_[j] = std::conj(avg);
    }
    hermitian_ = true;
}

FourierField& FourierField::operator+=(const FourierField& other) {
    kernels::active().axpy(coeffs_.data(), 1.0, other.coeffs_.data(), coeffs_.size());
    return *this;
}

FourierField& FourierField::operator*=(double a) {
    kernels::active().scale(coeffs_.data(), a, coeffs_.size());
    return *this;
}

void FourierField::add_scaled(const FourierField& other, double a) {
    kernels::active().axpy(coeffs_.data(), a, other.coeffs_.data(), coeffs_.size());
}

std::vector<double> symbol_table(const ProblemParams& p, bool shifted) {
    const std::size_t n = p.mode_count();
    std::vector<double> table(n);
    const double shift = shifted ? p.mass_shift() : 0.0;
    FourierField probe(p);  // for index bookkeeping only
    for (std::size_t i = 0; i < n; ++i) table[i] = p.symbol(probe.ksq(i)) - shift;
    return table;
}

FourierField to_fourier(const GridField& g) {
    const ProblemParams& p = g.params;
    const std::size_t n = p.grid_count();
    std::vector<cdouble> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cdouble{g.values[i], 0.0};
    const Fft& fft = Fft::plan(grid_dims(p, p.M));
    std::vector<cdouble> bins(n);
    fft.forward(buf.data(), bins.data());

    FourierField u(p);
    const double scale = std::sqrt(std::pow(p.T, p.N)) / static_cast<double>(n);
    int k[4];
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.unflatten(i, k);
        u.data()[i] = scale * bins[mode_bin(std::span<const int>(k, p.N), p.N, p.M)];
    }
    u.symmetrize();  // input was real; removes roundoff asymmetry
    return u;
}

std::vector<double> to_grid_values(const FourierField& u, int M_eval) {
    const ProblemParams& p = u.params();
    if (M_eval < 2 * p.K + 1) throw InvalidParams("to_grid_values: grid too small for cutoff");
    std::size_t n = 1;
    for (int d = 0; d < p.N; ++d) n *= static_cast<std::size_t>(M_eval);
    std::vector<cdouble> spec(n, cdouble{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(std::pow(p.T, p.N));
    int k[4];
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.unflatten(i, k);
        spec[mode_bin(std::span<const int>(k, p.N), p.N, M_eval)] = scale * u.data()[i];
    }
    const Fft& fft = Fft::plan(grid_dims(p, M_eval));
    std::vector<cdouble> vals(n);
    fft.backward(spec.data(), vals.data());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = vals[i].real();
    return out;
}

GridField to_grid(const FourierField& u) {
    if (!u.hermitian() || !u.check_hermitian())
        throw NonHermitian("to_grid: real output requested from an asymmetric field");
    GridField g(u.params());
    g.values = to_grid_values(u, u.params().M);
    return g;
}

FourierField from_grid_values(const ProblemParams& p, std::span<const double> values, int M_eval) {
    std::size_t n = 1;
    for (int d = 0; d < p.N; ++d) n *= static_cast<std::size_t>(M_eval);
    if (values.size() != n) throw InvalidParams("from_grid_values: size mismatch");
    std::vector<cdouble> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = cdouble{values[i], 0.0};
    const Fft& fft = Fft::plan(grid_dims(p, M_eval));
    std::vector<cdouble> bins(n);
    fft.forward(buf.data(), bins.data());

    FourierField u(p);
    const double scale = std::sqrt(std::pow(p.T, p.N)) / static_cast<double>(n);
    int k[4];
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.unflatten(i, k);
        u.data()[i] = scale * bins[mode_bin(std::span<const int>(k, p.N), p.N, M_eval)];
    }
    u.symmetrize();
    return u;
}

FourierField apply_operator(const FourierField& u, bool shift) {
    FourierField out = u;
    const std::vector<double> table = symbol_table(u.params(), shift);
    kernels::active().cmul_real(out.data(), table.data(), out.size());
    return out;
}

double hs_norm_sq(const FourierField& u) {
    const std::vector<double> table = symbol_table(u.params(), false);
    return kernels::active().weighted_norm_sq(u.data(), table.data(), u.size());
}

double hs_norm(const FourierField& u) { return std::sqrt(hs_norm_sq(u)); }

double l2_norm_sq(const FourierField& u) {
    return kernels::active().norm_sq(u.data(), u.size());
}

double l2_norm(const FourierField& u) { return std::sqrt(l2_norm_sq(u)); }

double gagliardo_seminorm(const FourierField& u) {
    const ProblemParams& p = u.params();
    const double w2s = std::pow(p.omega(), 2.0 * p.s);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double ksq = u.ksq(i);
        if (ksq == 0.0) continue;
        acc += w2s * std::pow(ksq, p.s) * std::norm(u.data()[i]);
    }
    return std::sqrt(acc);
}

double lq_norm(const GridField& g, double q) {
    if (q < 1.0) throw InvalidExponent("lq_norm: q must be >= 1");
    double acc = 0.0;
    if (q == 2.0) {
        for (double v : g.values) acc += v * v;
    } else {
        for (double v : g.values) acc += std::pow(std::abs(v), q);
    }
    return std::pow(acc * g.quad_weight(), 1.0 / q);
}

double trace_lq_norm(const FourierField& u, double q, int oversample) {
    if (q < 1.0) throw InvalidExponent("trace_lq_norm: q must be >= 1");
    const ProblemParams& p = u.params();
    const int Me = std::max(p.M, oversample * (2 * p.K + 1));
    const std::vector<double> vals = to_grid_values(u, Me);
    const double w = std::pow(p.T / Me, p.N);
    double acc = 0.0;
    if (q == 2.0) {
        for (double v : vals) acc += v * v;
    } else {
        for (double v : vals) acc += std::pow(std::abs(v), q);
    }
    return std::pow(acc * w, 1.0 / q);
}

double mean_value(const FourierField& u) {
    const ProblemParams& p = u.params();
    std::vector<int> zero(static_cast<std::size_t>(p.N), 0);
    return (u.coeff(zero) / std::sqrt(std::pow(p.T, p.N))).real();
}

FourierField random_real_field(const ProblemParams& p, Rng& rng, int kmax, bool zero_mean) {
    if (kmax < 0 || kmax > p.K) kmax = p.K;
    FourierField u(p);
    int k[4], kneg[4];
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.unflatten(i, k);
        bool in_range = true;
        for (int d = 0; d < p.N; ++d)
            if (k[d] < -kmax || k[d] > kmax) in_range = false;
        if (!in_range) continue;
        // assign each conjugate pair once, at its lexicographically positive member
        int lead = 0;
        for (int d = 0; d < p.N; ++d) {
            if (k[d] != 0) {
                lead = k[d];
                break;
            }
        }
        if (lead < 0) continue;
        if (lead == 0) {  // k = 0
            if (!zero_mean) u.data()[i] = cdouble{rng.normal(), 0.0};
            continue;
        }
        const cdouble c{rng.normal() * M_SQRT1_2, rng.normal() * M_SQRT1_2};
        u.data()[i] = c;
        for (int d = 0; d < p.N; ++d) kneg[d] = -k[d];
        u.set_coeff(std::span<const int>(kneg, p.N), std::conj(c));
    }
    return u;
}

std::string field_to_json(const FourierField& u) {
    using nlohmann::json;
    const ProblemParams& p = u.params();
    json j;
    j["N"] = p.N;
    j["T"] = p.T;
    j["s"] = p.s;
    j["m"] = p.m;
    j["K"] = p.K;
    json entries = json::array();
    int k[4];
    for (std::size_t i = 0; i < u.size(); ++i) {
        const cdouble c = u.data()[i];
        if (c == cdouble{0.0, 0.0}) continue;
        u.unflatten(i, k);
        json e;
        e["k"] = std::vector<int>(k, k + p.N);
        e["re"] = c.real();
        e["im"] = c.imag();
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j.dump(2);
}

FourierField field_from_json(const std::string& text, int grid_M) {
    using nlohmann::json;
    json j = json::parse(text);
    ProblemParams p;
    p.N = j.at("N").get<int>();
    p.T = j.at("T").get<double>();
    p.s = j.at("s").get<double>();
    p.m = j.at("m").get<double>();
    p.K = j.at("K").get<int>();
    p.M = std::max(grid_M, 2 * p.K + 2);
    FourierField u(p);
    for (const auto& e : j.at("entries")) {
        std::vector<int> k = e.at("k").get<std::vector<int>>();
        if (static_cast<int>(k.size()) != p.N) throw InvalidParams("field_from_json: bad index arity");
        u.set_coeff(k, cdouble{e.at("re").get<double>(), e.at("im").get<double>()});
    }
    u.set_hermitian(u.check_hermitian());
    return u;
}

void grid_to_csv(const GridField& g, std::ostream& os) {
    const ProblemParams& p = g.params;
    os.precision(17);
    os << "# N=" << p.N << " M=" << p.M << " T=" << p.T << " s=" << p.s << " m=" << p.m
       << " K=" << p.K << "\n";
    std::vector<std::size_t> idx(static_cast<std::size_t>(p.N));
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        std::size_t rem = i;
        for (int d = p.N - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = rem % static_cast<std::size_t>(p.M);
            rem /= static_cast<std::size_t>(p.M);
        }
        for (int d = 0; d < p.N; ++d) os << idx[static_cast<std::size_t>(d)] << ",";
        os << g.values[i] << "\n";
    }
}

GridField grid_from_csv(std::istream& is) {
    std::string header;
    std::getline(is, header);
    ProblemParams p;
    auto grab = [&header](const std::string& key) {
        auto pos = header.find(key + "=");
        if (pos == std::string::npos) throw InvalidParams("grid_from_csv: missing " + key);
        return std::stod(header.substr(pos + key.size() + 1));
    };
    p.N = static_cast<int>(grab("N"));
    p.M = static_cast<int>(grab("M"));
    p.T = grab("T");
    p.s = grab("s");
    p.m = grab("m");
    p.K = static_cast<int>(grab("K"));
    GridField g(p);
    std::string line;
    std::size_t row = 0;
    while (std::getline(is, line) && row < g.values.size()) {
        const auto pos = line.rfind(',');
        if (pos == std::string::npos) continue;
        g.values[row++] = std::stod(line.substr(pos + 1));
    }
    if (row != g.values.size()) throw InvalidParams("grid_from_csv: row count mismatch");
    return g;
}

}  // namespace frac

#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "frac/params.hpp"
#include "frac/rng.hpp"

namespace frac {

using cdouble = std::complex<double>;

// Real samples on the uniform grid x_j = j*T/M, j in {0..M-1}^N, row-major
// with axis 0 slowest.
struct GridField {
    ProblemParams params;
    std::vector<double> values;

    explicit GridField(const ProblemParams& p) : params(p), values(p.grid_count(), 0.0) {}
    GridField(const ProblemParams& p, std::vector<double> v);

    double quad_weight() const;  // (T/M)^N
    void coords(std::size_t flat, double* x) const;
};

// Truncated Fourier series sum_{|k|_inf <= K} c_k e^{i omega k.x} / sqrt(T^N),
// stored as the dense (2K+1)^N coefficient box (absent modes are exactly 0).
// Real-valued fields keep c_{-k} = conj(c_k); the flag records that claim and
// is re-verified before any real-output operation.
class FourierField {
public:
    explicit FourierField(const ProblemParams& p, bool hermitian = true);

    const ProblemParams& params() const { return params_; }
    bool hermitian() const { return hermitian_; }
    void set_hermitian(bool h) { hermitian_ = h; }

    std::size_t size() const { return coeffs_.size(); }
    cdouble* data() { return coeffs_.data(); }
    const cdouble* data() const { return coeffs_.data(); }

    // Multi-index access, k_d in [-K, K].
    cdouble coeff(std::span<const int> k) const;
    void set_coeff(std::span<const int> k, cdouble v);
    std::size_t flat_index(std::span<const int> k) const;
    void unflatten(std::size_t flat, int* k) const;  // flat -> multi-index

    double ksq(std::size_t flat) const;  // |k|^2 for the flat index

    // Verifies c_{-k} = conj(c_k) within tol (absolute, relative to max |c|).
    bool check_hermitian(double tol = 1e-12) const;
    // Projects onto the Hermitian part: c_k <- (c_k + conj(c_{-k}))/2.
    void symmetrize();

    FourierField& operator+=(const FourierField& other);
    FourierField& operator*=(double a);
    void add_scaled(const FourierField& other, double a);

private:
    ProblemParams params_;
    std::vector<cdouble> coeffs_;
    bool hermitian_;
};

// Per-mode values of (omega^2|k|^2 + m^2)^s over the coefficient box,
// optionally with the m^{2s} shift subtracted.
std::vector<double> symbol_table(const ProblemParams& p, bool shifted);

// --- transforms ---------------------------------------------------------

// Quadrature of c_k = (1/sqrt(T^N)) int u e^{-i omega k.x} dx on the grid;
// exact for band-limited input since M >= 2K+2.
FourierField to_fourier(const GridField& g);

// Evaluates the series at the grid points; requires the Hermitian flag.
GridField to_grid(const FourierField& u);

// Same, on an M_eval^N grid (zero padding / oversampling); internal helper
// shared by the de-aliased nonlinear evaluation.
std::vector<double> to_grid_values(const FourierField& u, int M_eval);
FourierField from_grid_values(const ProblemParams& p, std::span<const double> values, int M_eval);

// --- operator and norms --------------------------------------------------

// Applies the multiplier (omega^2|k|^2 + m^2)^s, or the same minus m^{2s}
// when shift is set. Mode support is unchanged.
FourierField apply_operator(const FourierField& u, bool shift);

double hs_norm(const FourierField& u);            // sqrt(sum symbol |c_k|^2)
double hs_norm_sq(const FourierField& u);
double l2_norm(const FourierField& u);            // sqrt(sum |c_k|^2)
double l2_norm_sq(const FourierField& u);
double gagliardo_seminorm(const FourierField& u); // sqrt(sum omega^{2s}|k|^{2s}|c_k|^2)

// Uniform-grid quadrature of (int |g|^q dx)^{1/q}; InvalidExponent for q < 1.
double lq_norm(const GridField& g, double q);
// Convenience: sample u on an oversampled grid first (factor >= 1).
double trace_lq_norm(const FourierField& u, double q, int oversample = 2);

double mean_value(const FourierField& u);  // c_0 / sqrt(T^N)

// Random real field with |k|_inf <= kmax (defaults to K); unit-normal
// coefficients, Hermitian by construction.
FourierField random_real_field(const ProblemParams& p, Rng& rng, int kmax = -1,
                               bool zero_mean = false);

// --- serialization -------------------------------------------------------

std::string field_to_json(const FourierField& u);
FourierField field_from_json(const std::string& text, int grid_M = 0);

void grid_to_csv(const GridField& g, std::ostream& os);
GridField grid_from_csv(std::istream& is);

}  // namespace frac

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "geamlab/linalg.hpp"
#include "geamlab/mcf.hpp"

namespace geamlab {

enum class SkewPath { Spectral, Commutator };

// Carries a state, its cached spectral decomposition (eigenvalues clipped to
// [0, inf) before kernel evaluation) and a monotone function.
class SkewContext {
  public:
    SkewContext(DensityMatrix rho, MonotoneFunction f)
        : rho_(std::move(rho)), f_(std::move(f)) {
        lambda_ = rho_.spectrum().eigenvalues;
        // Roundoff-level values (genuine spectra of unit-trace states never sit
        // this low without being exact zeros) are snapped to 0 so the boundary
        // branch of the kernel applies; the generic branch loses ~eps^alpha
        // accuracy there for the slowly converging families.
        for (double& l : lambda_)
            if (l < 1e-12) l = 0.0;
    }

    const DensityMatrix& state() const { return rho_; }
    const MonotoneFunction& monotone() const { return f_; }
    std::size_t dim() const { return rho_.dim(); }
    const std::vector<double>& eigenvalues() const { return lambda_; }
    const Matrix& eigenvectors() const { return rho_.spectrum().eigenvectors; }

    // A expressed in the eigenbasis of rho: V^dag A V.
    Matrix to_eigenbasis(const Matrix& a) const {
        return eigenvectors().adjoint() * a * eigenvectors();
    }

  private:
    DensityMatrix rho_;
    MonotoneFunction f_;
    std::vector<double> lambda_;
};

// Metric adjusted skew information I_f(rho, H).
//
// Spectral path: (f0/2) sum_{m,n} (l_m - l_n)^2 c_f(l_m, l_n) |<m|H|n>|^2.
// Commutator path: builds A = i[rho, H], expands it in the eigenbasis where
// c_f(L, R) acts entrywise as c_f(l_m, l_n), and evaluates
// (f0/2) tr(A^dag c_f(L,R) A). The two routes agree to roundoff but share no
// intermediate values beyond the eigenbasis itself.
inline double skew_information(const SkewContext& ctx, const HermitianMatrix& h,
                               SkewPath path = SkewPath::Spectral) {
    if (h.dim() != ctx.dim()) throw dimension_error("skew_information: dimension mismatch");
    const auto& l = ctx.eigenvalues();
    const std::size_t d = ctx.dim();
    const MonotoneFunction& f = ctx.monotone();
    double total = 0.0;
    if (path == SkewPath::Spectral) {
        Matrix ht = ctx.to_eigenbasis(h.matrix());
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t n = 0; n < d; ++n) {
                if (m == n) continue;
                double gap = l[m] - l[n];
                if (gap == 0.0) continue;
                total += gap * gap * c_value(f, l[m], l[n]) * std::norm(ht(m, n));
            }
    } else {
        const Matrix& rho = ctx.state().matrix();
        Matrix comm = (rho * h.matrix() - h.matrix() * rho) * cplx{0.0, 1.0};
        Matrix at = ctx.to_eigenbasis(comm);
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t n = 0; n < d; ++n) {
                if (l[m] == 0.0 && l[n] == 0.0) continue;  // zero-weight pair
                total += c_value(f, l[m], l[n]) * std::norm(at(m, n));
            }
    }
    return 0.5 * f.f0 * total;
}

// Total quantum uncertainty Q_f(rho) = (f0/2) sum_{m,n} (l_m-l_n)^2 c_f(l_m,l_n);
// equals the sum of I_f over any operator orthonormal Hermitian basis.
inline double quantum_uncertainty(const SkewContext& ctx) {
    const auto& l = ctx.eigenvalues();
    const MonotoneFunction& f = ctx.monotone();
    double total = 0.0;
    for (std::size_t m = 0; m < l.size(); ++m)
        for (std::size_t n = 0; n < l.size(); ++n) {
            double gap = l[m] - l[n];
            if (gap == 0.0) continue;
            total += gap * gap * c_value(f, l[m], l[n]);
        }
    return 0.5 * f.f0 * total;
}

inline double max_coherence(const SkewContext& ctx) {
    return quantum_uncertainty(ctx) / static_cast<double>(ctx.dim());
}

// Quantum f entropy S_f(rho) = d - 1 - (d+1) C_f(rho) with C_f = Q_f/(d+1).
inline double f_entropy(const SkewContext& ctx) {
    return static_cast<double>(ctx.dim()) - 1.0 - quantum_uncertainty(ctx);
}

inline void check_operator_orthonormal(const std::vector<Matrix>& basis, std::size_t d,
                                       double eps = 1e-10) {
    if (basis.size() != d * d)
        throw std::invalid_argument("operator basis must have d^2 elements");
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a; b < basis.size(); ++b) {
            cplx g = basis[a].hs_inner(basis[b]);
            double target = (a == b) ? 1.0 : 0.0;
            if (std::abs(g - cplx{target, 0.0}) > eps)
                throw numeric_error("operator basis is not Hilbert-Schmidt orthonormal");
        }
}

// sum_k S_ftilde^{X_k}(rho|rho) over an operator orthonormal Hermitian basis,
// where S_ftilde^X(rho|rho) = sum_{m,n} m_ftilde(l_m, l_n) |<m|X|n>|^2.
// Satisfies sum - 1 = S_f(rho).
inline double quasientropy_sum(const SkewContext& ctx, const std::vector<Matrix>& basis) {
    check_operator_orthonormal(basis, ctx.dim());
    MonotoneFunction ft = f_tilde_transform(ctx.monotone());
    const auto& l = ctx.eigenvalues();
    const std::size_t d = ctx.dim();
    double total = 0.0;
    for (const Matrix& x : basis) {
        Matrix xt = ctx.to_eigenbasis(x);
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t n = 0; n < d; ++n)
                total += inverse_mean(ft, l[m], l[n]) * std::norm(xt(m, n));
    }
    return total;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Monte-Carlo estimate of the Haar average C_f^U(rho), i.e. the integral of
// sum_i I_f(rho, U |i><i| U^dag) over Haar-random U. Converges to
// Q_f(rho)/(d+1).
inline MonteCarloEstimate unitary_average_mc(const SkewContext& ctx, std::size_t samples,
                                             std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("unitary_average_mc: samples < 100");
    const std::size_t d = ctx.dim();
    const auto& l = ctx.eigenvalues();
    const MonotoneFunction& f = ctx.monotone();
    // Precompute the pair weights (l_m - l_n)^2 c_f(l_m, l_n).
    std::vector<double> weight(d * d, 0.0);
    for (std::size_t m = 0; m < d; ++m)
        for (std::size_t n = 0; n < d; ++n) {
            double gap = l[m] - l[n];
            if (gap != 0.0) weight[m * d + n] = gap * gap * c_value(f, l[m], l[n]);
        }
    Rng rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        // In the eigenbasis, U|i><i|U^dag has entries W_mi conj(W_ni) with
        // W = V^dag U, so the basis-summed skew information needs only the
        // column amplitudes |W_mi|^2.
        Matrix w = ctx.eigenvectors().adjoint() * sample_haar_unitary(d, rng);
        double value = 0.0;
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t n = 0; n < d; ++n) {
                double wm = weight[m * d + n];
                if (wm == 0.0) continue;
                double overlap = 0.0;
                for (std::size_t i = 0; i < d; ++i)
                    overlap += std::norm(w(m, i)) * std::norm(w(n, i));
                value += wm * overlap;
            }
        value *= 0.5 * f.f0;
        sum += value;
        sum_sq += value * value;
    }
    MonteCarloEstimate est;
    est.mean = sum / static_cast<double>(samples);
    double var = sum_sq / static_cast<double>(samples) - est.mean * est.mean;
    est.stderr_ = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    return est;
}

}  // namespace geamlab

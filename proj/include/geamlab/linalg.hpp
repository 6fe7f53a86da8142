#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "geamlab/common.hpp"
#include "geamlab/rng.hpp"

namespace geamlab {

// Dense complex matrix, row-major. Dimensions here stay below ~100, so all
// operations are plain loops.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw dimension_error("matrix product: inner dimension mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                cplx a = (*this)(i, k);
                if (a == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
            }
        return r;
    }
    Matrix operator*(cplx s) const {
        Matrix r = *this;
        for (auto& v : r.data_) v *= s;
        return r;
    }
    friend Matrix operator*(cplx s, const Matrix& m) { return m * s; }
    Matrix operator*(double s) const { return *this * cplx{s, 0.0}; }
    friend Matrix operator*(double s, const Matrix& m) { return m * cplx{s, 0.0}; }

    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }
    Matrix conjugate() const {
        Matrix r = *this;
        for (auto& v : r.data_) v = std::conj(v);
        return r;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    // Hilbert-Schmidt inner product <A, B> = tr(A^dag B).
    cplx hs_inner(const Matrix& o) const {
        check_same_shape(o);
        cplx s = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i) s += std::conj(data_[i]) * o.data_[i];
        return s;
    }

    bool is_hermitian(double eps) const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > eps) return false;
        return true;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw dimension_error("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

// Hermitian matrix; construction symmetrizes A <- (A + A^dag)/2 and rejects
// inputs that are not Hermitian to begin with (within tolerance).
class HermitianMatrix {
  public:
    explicit HermitianMatrix(const Matrix& a, double eps = 1e-9) {
        if (!a.is_square()) throw dimension_error("HermitianMatrix: not square");
        if (!a.is_hermitian(eps)) throw numeric_error("HermitianMatrix: input not Hermitian");
        mat_ = (a + a.adjoint()) * 0.5;
    }

    std::size_t dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

  private:
    Matrix mat_;
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // orthonormal columns, A = V diag(l) V^dag
};

// Cyclic Jacobi eigensolver for complex Hermitian matrices. Off-diagonal
// Frobenius stopping tolerance 1e-13 (relative to the matrix norm), cap of
// 100 sweeps.
inline SpectralDecomposition hermitian_eig(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    Matrix a = h.matrix();
    Matrix v = Matrix::identity(n);

    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double stop = tol().eig_offdiag * std::max(1.0, a.frobenius_norm());
    const int max_sweeps = 100;
    int sweep = 0;
    while (offdiag() > stop) {
        if (++sweep > max_sweeps) {
            throw numeric_error("hermitian_eig: no convergence after 100 sweeps, off-diagonal norm " +
                                std::to_string(offdiag()));
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) continue;
                const cplx phase = a(p, q) / r;  // a_pq = r * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double zeta = (aqq - app) / (2.0 * r);
                const double t = (zeta >= 0.0) ? 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                                               : 1.0 / (zeta - std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary J: J_pp = c, J_pq = s, J_qp = -s*conj(phase), J_qq = c*conj(phase).
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);
                // Columns: A <- A J, V <- V J.
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + jqp * aiq;
                    a(i, q) = s * aip + jqq * aiq;
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip + jqp * viq;
                    v(i, q) = s * vip + jqq * viq;
                }
                // Rows: A <- J^dag A.
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj + std::conj(jqp) * aqj;
                    a(q, j) = s * apj + std::conj(jqq) * aqj;
                }
                a(p, q) = std::conj(a(q, p));  // keep exactly Hermitian
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

// Positive unit-trace Hermitian matrix. Construction validates the spectrum.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Matrix& a) : herm_(a) {
        if (std::abs(herm_.matrix().trace() - cplx{1.0, 0.0}) > tol().trace)
            throw numeric_error("DensityMatrix: trace differs from 1");
        eig_ = hermitian_eig(herm_);
        double lmin = eig_.eigenvalues.back();
        if (lmin < -tol().psd)
            throw numeric_error("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
        double p = purity_of(herm_.matrix());
        double d = static_cast<double>(dim());
        if (p < 1.0 / d - tol().psd || p > 1.0 + tol().psd)
            throw numeric_error("DensityMatrix: purity out of range");
    }

    std::size_t dim() const { return herm_.dim(); }
    const Matrix& matrix() const { return herm_.matrix(); }
    const HermitianMatrix& hermitian() const { return herm_; }
    const SpectralDecomposition& spectrum() const { return eig_; }
    double purity() const { return purity_of(herm_.matrix()); }

  private:
    static double purity_of(const Matrix& m) {
        double n = m.frobenius_norm();
        return n * n;  // tr rho^2 for Hermitian rho
    }

    HermitianMatrix herm_;
    SpectralDecomposition eig_;
};

struct BipartiteDims {
    std::size_t d_a = 0, d_b = 0;
    std::size_t total() const { return d_a * d_b; }
};

enum class Subsystem { A, B };

// Kronecker product, A's indices major: (A(x)B)[(ia*rb+ib),(ja*cb+jb)] = A[ia,ja]*B[ib,jb].
inline Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cplx av = a(ia, ja);
            if (av == cplx{0.0, 0.0}) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return r;
}

inline Matrix partial_trace_matrix(const Matrix& rho, BipartiteDims dims, Subsystem keep) {
    if (rho.rows() != dims.total() || rho.cols() != dims.total())
        throw dimension_error("partial_trace: dims do not match state dimension");
    const std::size_t da = dims.d_a, db = dims.d_b;
    if (keep == Subsystem::A) {
        Matrix r(da, da);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t b = 0; b < db; ++b) r(i, j) += rho(i * db + b, j * db + b);
        return r;
    }
    Matrix r(db, db);
    for (std::size_t i = 0; i < db; ++i)
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t a = 0; a < da; ++a) r(i, j) += rho(a * db + i, a * db + j);
    return r;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, BipartiteDims dims, Subsystem keep) {
    return DensityMatrix(partial_trace_matrix(rho.matrix(), dims, keep));
}

inline double purity(const DensityMatrix& rho) { return rho.purity(); }

// --- sampling ---------------------------------------------------------------

inline Matrix sample_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix g(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) g(i, j) = cplx{rng.gaussian(), rng.gaussian()};
    return g;
}

// rho = G G^dag / tr(G G^dag) with G a d x rank complex Gaussian.
inline DensityMatrix sample_mixed_state(std::size_t d, std::size_t rank, Rng& rng) {
    if (rank < 1 || rank > d) throw std::invalid_argument("sample_mixed_state: rank out of range");
    Matrix g = sample_ginibre(d, rank, rng);
    Matrix m = g * g.adjoint();
    cplx tr = m.trace();
    return DensityMatrix(m * (1.0 / tr.real()));
}

inline DensityMatrix sample_pure_state(std::size_t d, Rng& rng) {
    Matrix v = sample_ginibre(d, 1, rng);
    double n = v.frobenius_norm();
    v = v * (1.0 / n);
    return DensityMatrix(v * v.adjoint());
}

// Haar unitary via modified Gram-Schmidt QR of a square Ginibre matrix;
// MGS leaves R with a positive diagonal, which is the Haar-correct gauge.
inline Matrix sample_haar_unitary(std::size_t d, Rng& rng) {
    Matrix g = sample_ginibre(d, d, rng);
    Matrix q(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<cplx> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = g(i, k);
        for (std::size_t j = 0; j < k; ++j) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, j)) * col[i];
            for (std::size_t i = 0; i < d; ++i) col[i] -= proj * q(i, j);
        }
        double n = 0.0;
        for (std::size_t i = 0; i < d; ++i) n += std::norm(col[i]);
        n = std::sqrt(n);
        for (std::size_t i = 0; i < d; ++i) q(i, k) = col[i] / n;
    }
    return q;
}

// --- special operators -------------------------------------------------------

// Swap F with F(|i>|j>) = |j>|i> on C^d (x) C^d.
inline Matrix swap_operator(std::size_t d) {
    Matrix f(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
    return f;
}

// |phi+> = (1/sqrt(d)) sum_i |i>|i>, returned as a d^2 x 1 column.
inline Matrix max_entangled_vector(std::size_t d) {
    Matrix v(d * d, 1);
    for (std::size_t i = 0; i < d; ++i) v(i * d + i, 0) = 1.0 / std::sqrt(static_cast<double>(d));
    return v;
}

// |Psi-> = (|01> - |10>)/sqrt(2); qubits only.
inline Matrix singlet_vector(std::size_t d) {
    if (d != 2) throw std::invalid_argument("singlet requires d = 2");
    Matrix v(4, 1);
    v(1, 0) = 1.0 / std::sqrt(2.0);
    v(2, 0) = -1.0 / std::sqrt(2.0);
    return v;
}

inline Matrix projector(const Matrix& v) { return v * v.adjoint(); }

// Generalized Gell-Mann set, Hilbert-Schmidt orthonormal, d^2 elements.
// Order: G_0 = I/sqrt(d), then for each index pair i < j (lexicographic) the
// symmetric element (E_ij + E_ji)/sqrt(2) followed by the antisymmetric
// i(E_ji - E_ij)/sqrt(2), then the diagonal ladder
// (sum_{m<=l} E_mm - l E_(l+1)(l+1)) / sqrt(l(l+1)) for l = 1..d-1.
// For d = 2 the traceless part is {sigma_x, sigma_y, sigma_z}/sqrt(2).
inline std::vector<Matrix> standard_hermitian_basis(std::size_t d) {
    std::vector<Matrix> basis;
    basis.reserve(d * d);
    basis.push_back(Matrix::identity(d) * (1.0 / std::sqrt(static_cast<double>(d))));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            Matrix sym(d, d);
            sym(i, j) = inv_sqrt2;
            sym(j, i) = inv_sqrt2;
            basis.push_back(sym);
            Matrix anti(d, d);
            anti(j, i) = cplx{0.0, inv_sqrt2};
            anti(i, j) = cplx{0.0, -inv_sqrt2};
            basis.push_back(anti);
        }
    }
    for (std::size_t l = 1; l < d; ++l) {
        Matrix diag(d, d);
        double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (std::size_t m = 0; m < l; ++m) diag(m, m) = norm;
        diag(l, l) = -static_cast<double>(l) * norm;
        basis.push_back(diag);
    }
    return basis;
}

inline Matrix pauli(char which) {
    Matrix m(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = cplx{0.0, -1.0}; m(1, 0) = cplx{0.0, 1.0}; break;
        case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw std::invalid_argument("pauli: expected x, y or z");
    }
    return m;
}

}  // namespace geamlab

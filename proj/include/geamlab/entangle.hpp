#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "geamlab/coherence.hpp"
#include "geamlab/geam.hpp"
#include "geamlab/skewinfo.hpp"

namespace geamlab {

enum class Verdict { Entangled, Inconclusive };

inline const char* to_string(Verdict v) {
    return v == Verdict::Entangled ? "entangled" : "inconclusive";
}

struct DetectionReport {
    std::string criterion;  // F, G, F-scaled, G-scaled
    double value = 0.0;
    double threshold = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    // metadata
    std::size_t d = 0;  // local dimension
    std::string f_name;
    std::string spec_name;
    std::string state_description;
    double param = 0.0;
};

// --- reference families --------------------------------------------------------

struct ReferenceState {
    std::string family;
    double param = 0.0;
    std::size_t local_dim = 0;
    DensityMatrix state;
};

// Isotropic rho = ((1-q)/d^2) I + q |phi+><phi+|, Werner
// rho = ((d-x)/(d^3-d)) I + ((dx-1)/(d^3-d)) F, and the two-qubit Werner form
// rho = ((1-p)/4) I + p |Psi-><Psi-| (x = (1-3p)/2). Both marginals are
// maximally mixed; construction verifies that.
inline ReferenceState build_reference(const std::string& family, std::size_t d, double param) {
    Matrix m(d * d, d * d);
    if (family == "isotropic") {
        if (param < 0.0 || param > 1.0)
            throw std::invalid_argument("isotropic: q must lie in [0, 1]");
        double dd = static_cast<double>(d);
        m = Matrix::identity(d * d) * ((1.0 - param) / (dd * dd)) +
            projector(max_entangled_vector(d)) * param;
    } else if (family == "werner") {
        if (param < -1.0 || param > 1.0)
            throw std::invalid_argument("werner: x must lie in [-1, 1]");
        double dd = static_cast<double>(d);
        double denom = dd * dd * dd - dd;
        m = Matrix::identity(d * d) * ((dd - param) / denom) +
            swap_operator(d) * ((dd * param - 1.0) / denom);
    } else if (family == "werner-qubit") {
        if (d != 2) throw std::invalid_argument("werner-qubit: d must be 2");
        if (param < -1.0 / 3.0 || param > 1.0)
            throw std::invalid_argument("werner-qubit: p must lie in [-1/3, 1]");
        m = Matrix::identity(4) * ((1.0 - param) / 4.0) + projector(singlet_vector(2)) * param;
    } else {
        throw std::invalid_argument("unknown reference family: " + family);
    }
    ReferenceState ref{family, param, d, DensityMatrix(m)};
    BipartiteDims dims{d, d};
    Matrix eye_over_d = Matrix::identity(d) * (1.0 / static_cast<double>(d));
    if ((partial_trace_matrix(ref.state.matrix(), dims, Subsystem::A) - eye_over_d).max_abs() > 1e-12 ||
        (partial_trace_matrix(ref.state.matrix(), dims, Subsystem::B) - eye_over_d).max_abs() > 1e-12)
        throw numeric_error("build_reference: marginals are not maximally mixed");
    return ref;
}

// --- criteria --------------------------------------------------------------------

namespace detail {

inline void check_matching_geams(const Geam& ga, const Geam& gb) {
    const GeamSpec& a = ga.spec;
    const GeamSpec& b = gb.spec;
    if (a.dim() != b.dim())
        throw dimension_error("criterion: local dimensions differ (unequal d_A, d_B unsupported)");
    if (a.frames() != b.frames() || a.frame_sizes() != b.frame_sizes())
        throw std::invalid_argument("criterion: GEAM shapes differ");
    for (std::size_t k = 0; k < a.frames(); ++k)
        if (std::abs(a.gamma(k) - b.gamma(k)) > 1e-12 ||
            std::abs(a.s_of(k) - b.s_of(k)) > 1e-12)
            throw std::invalid_argument("criterion: GEAM parameters differ");
}

}  // namespace detail

// Criterion F (skew information of local-sum observables): rho_AB is
// entangled if (1/N) sum_{k,l} I_f(rho_AB, P^A (x) I + I (x) P^B) exceeds
// 2S(d-1)/N. The scaled variant divides every operator by gamma_k = 1/N and
// compares against 2NS(d-1); verdicts always agree.
inline DetectionReport criterion_F(const DensityMatrix& rho_ab, const Geam& ga, const Geam& gb,
                                   const MonotoneFunction& f, bool scaled = false) {
    detail::check_matching_geams(ga, gb);
    const std::size_t d = ga.dim();
    if (rho_ab.dim() != d * d) throw dimension_error("criterion_F: state dimension mismatch");
    if (scaled && !ga.spec.uniform_gamma())
        throw std::invalid_argument("criterion_F: scaled variant needs gamma_k = 1/N");
    if (!ga.spec.conical()) throw std::invalid_argument("criterion_F: non-conical spec");

    SkewContext ctx(rho_ab, f);
    const Matrix eye = Matrix::identity(d);
    const double n = static_cast<double>(ga.spec.frames());
    double value = 0.0;
    for (std::size_t k = 0; k < ga.ops.size(); ++k) {
        double scale = scaled ? 1.0 / ga.spec.gamma(k) : 1.0;
        for (std::size_t l = 0; l < ga.ops[k].size(); ++l) {
            Matrix op = tensor_product(ga.ops[k][l].matrix(), eye) +
                        tensor_product(eye, gb.ops[k][l].matrix());
            value += skew_information(ctx, HermitianMatrix(op * scale));
        }
    }
    value /= n;
    double s = ga.spec.s();
    double threshold = scaled ? 2.0 * n * s * (static_cast<double>(d) - 1.0)
                              : 2.0 * s * (static_cast<double>(d) - 1.0) / n;

    DetectionReport r;
    r.criterion = scaled ? "F-scaled" : "F";
    r.value = value;
    r.threshold = threshold;
    r.verdict = value > threshold ? Verdict::Entangled : Verdict::Inconclusive;
    r.d = d;
    r.f_name = f.name;
    r.spec_name = ga.spec.preset().empty() ? "custom" : ga.spec.preset();
    return r;
}

// Criterion G (correlation-matrix overlaps): rho_AB is entangled if
// sum_{k,l} |tr((P^A (x) P^B)(rho_AB - rho_A (x) rho_B))| exceeds
// S sqrt((1 - tr rho_A^2)(1 - tr rho_B^2)). No monotone function enters.
inline DetectionReport criterion_G(const DensityMatrix& rho_ab, const Geam& ga, const Geam& gb,
                                   bool scaled = false) {
    detail::check_matching_geams(ga, gb);
    const std::size_t d = ga.dim();
    if (rho_ab.dim() != d * d) throw dimension_error("criterion_G: state dimension mismatch");
    if (scaled && !ga.spec.uniform_gamma())
        throw std::invalid_argument("criterion_G: scaled variant needs gamma_k = 1/N");
    if (!ga.spec.conical()) throw std::invalid_argument("criterion_G: non-conical spec");

    BipartiteDims dims{d, d};
    Matrix rho_a = partial_trace_matrix(rho_ab.matrix(), dims, Subsystem::A);
    Matrix rho_b = partial_trace_matrix(rho_ab.matrix(), dims, Subsystem::B);
    Matrix delta = rho_ab.matrix() - tensor_product(rho_a, rho_b);

    const double n = static_cast<double>(ga.spec.frames());
    double value = 0.0;
    for (std::size_t k = 0; k < ga.ops.size(); ++k) {
        double scale = scaled ? n * n : 1.0;  // each factor carries 1/gamma_k = N
        for (std::size_t l = 0; l < ga.ops[k].size(); ++l) {
            Matrix op = tensor_product(ga.ops[k][l].matrix(), gb.ops[k][l].matrix());
            value += scale * std::abs((op * delta).trace().real());
        }
    }
    double pa = rho_a.frobenius_norm(), pb = rho_b.frobenius_norm();
    double threshold = ga.spec.s() * std::sqrt((1.0 - pa * pa) * (1.0 - pb * pb));
    if (scaled) threshold *= n * n;

    DetectionReport r;
    r.criterion = scaled ? "G-scaled" : "G";
    r.value = value;
    r.threshold = threshold;
    r.verdict = value > threshold ? Verdict::Entangled : Verdict::Inconclusive;
    r.d = d;
    r.spec_name = ga.spec.preset().empty() ? "custom" : ga.spec.preset();
    return r;
}

// --- closed forms for the reference families --------------------------------------

struct IsotropicReference {
    double f_closed = 0.0;   // criterion F value for f = sld, conjugate pair
    double q_star = 0.0;     // critical q beyond which F exceeds its threshold
};

// F(rho_iso) = 4 q^2 S (d^2-1) d / (N [2(1-q) + q d^2]) for f(t) = (t+1)/2
// with P^B the conjugate of P^A; the critical q is the positive root of
// 2d(d+1) q^2 - (d^2-2) q - 2 = 0.
inline IsotropicReference isotropic_reference(std::size_t d, double q, const GeamSpec& spec) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("isotropic_reference: q must lie in [0, 1]");
    double dd = static_cast<double>(d);
    double n = static_cast<double>(spec.frames());
    IsotropicReference out;
    out.f_closed = 4.0 * q * q * spec.s() * (dd * dd - 1.0) * dd /
                   (n * (2.0 * (1.0 - q) + q * dd * dd));
    double a = dd * dd - 2.0;
    out.q_star = (a + std::sqrt(a * a + 16.0 * dd * (dd + 1.0))) / (4.0 * dd * (dd + 1.0));
    return out;
}

struct WernerReference {
    double g_closed = 0.0;     // criterion G value, identical GEAMs on both sides
    double x_threshold = 0.0;  // entangled for x < 2/d - 1
    double p_threshold = 0.0;  // two-qubit form: entangled for p > 1/3
};

// G(rho_werner) = S |1 - d x| / d; detection region x < 2/d - 1. For d = 2,
// p = (1 - 2x)/3 maps it onto the two-qubit criterion p > 1/3.
inline WernerReference werner_reference(std::size_t d, double x, const GeamSpec& spec) {
    if (x < -1.0 || x > 1.0) throw std::invalid_argument("werner_reference: x must lie in [-1, 1]");
    double dd = static_cast<double>(d);
    WernerReference out;
    out.g_closed = spec.s() * std::abs(1.0 - dd * x) / dd;
    out.x_threshold = 2.0 / dd - 1.0;
    out.p_threshold = 1.0 / 3.0;
    return out;
}

// Entrywise complex conjugate of every measurement operator; the trace
// conditions and the spectrum are unchanged.
inline Geam conjugate_geam(const Geam& g) {
    Geam out;
    out.spec = g.spec;
    out.signs = g.signs;
    out.min_eigenvalue = g.min_eigenvalue;
    for (const auto& frame : g.ops) {
        std::vector<HermitianMatrix> conj_frame;
        conj_frame.reserve(frame.size());
        for (const auto& p : frame) conj_frame.emplace_back(p.matrix().conjugate());
        out.ops.push_back(std::move(conj_frame));
    }
    return out;
}

}  // namespace geamlab

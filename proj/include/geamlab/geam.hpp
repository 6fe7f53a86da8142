#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geamlab/linalg.hpp"
#include "geamlab/rng.hpp"

namespace geamlab {

// Symbolic parameters of a generalized equiangular measurement: N frames of
// sizes M_k with probabilities gamma_k and per-frame 2-design constants S_k.
// Uniform S_k = S is the conical 2-design case; the closed-form results only
// hold there.
class GeamSpec {
  public:
    static GeamSpec make(std::size_t d, std::vector<std::size_t> frame_sizes,
                         std::vector<double> gamma, std::vector<double> s_k,
                         std::string preset = "") {
        GeamSpec g;
        g.d_ = d;
        g.frame_sizes_ = std::move(frame_sizes);
        g.gamma_ = std::move(gamma);
        g.s_k_ = std::move(s_k);
        g.preset_ = std::move(preset);
        g.validate();
        for (std::size_t k = 1; k < g.s_k_.size(); ++k)
            if (std::abs(g.s_k_[k] - g.s_k_[0]) > 1e-15) g.conical_ = false;
        return g;
    }

    static GeamSpec make_conical(std::size_t d, std::vector<std::size_t> frame_sizes,
                                 std::vector<double> gamma, double s, std::string preset = "") {
        std::vector<double> s_k(frame_sizes.size(), s);
        return make(d, std::move(frame_sizes), std::move(gamma), std::move(s_k),
                    std::move(preset));
    }

    std::size_t dim() const { return d_; }
    std::size_t frames() const { return frame_sizes_.size(); }
    std::size_t frame_size(std::size_t k) const { return frame_sizes_[k]; }
    const std::vector<std::size_t>& frame_sizes() const { return frame_sizes_; }
    double gamma(std::size_t k) const { return gamma_[k]; }
    const std::vector<double>& gammas() const { return gamma_; }
    double s_of(std::size_t k) const { return s_k_[k]; }
    bool conical() const { return conical_; }
    const std::string& preset() const { return preset_; }

    // Uniform S; only meaningful for conical specs.
    double s() const {
        if (!conical_) throw std::invalid_argument("GeamSpec::s: non-conical spec");
        return s_k_[0];
    }

    double a(std::size_t k) const {
        return static_cast<double>(d_) * gamma_[k] / static_cast<double>(frame_sizes_[k]);
    }
    // b_k back-solved from S_k = d gamma_k^2 (d b_k - 1) / (M_k (M_k - 1)).
    double b(std::size_t k) const {
        double d = static_cast<double>(d_);
        double m = static_cast<double>(frame_sizes_[k]);
        return (1.0 + s_k_[k] * m * (m - 1.0) / (d * gamma_[k] * gamma_[k])) / d;
    }
    double c(std::size_t k) const {
        double d = static_cast<double>(d_);
        double m = static_cast<double>(frame_sizes_[k]);
        return (m - d * b(k)) / (d * (m - 1.0));
    }
    double tau(std::size_t k, int sign) const {
        double m = static_cast<double>(frame_sizes_[k]);
        double sm = std::sqrt(m);
        return sign * std::sqrt(s_k_[k] / (m * (sm + 1.0) * (sm + 1.0)));
    }

    // Upper limit of S for frame k: min{ d g^2/M, (d-1)/(M-1) * d g^2/M }.
    double s_cap(std::size_t k) const {
        double d = static_cast<double>(d_);
        double m = static_cast<double>(frame_sizes_[k]);
        double base = d * gamma_[k] * gamma_[k] / m;
        return std::min(base, (d - 1.0) / (m - 1.0) * base);
    }
    double s_cap() const {
        double cap = s_cap(0);
        for (std::size_t k = 1; k < frames(); ++k) cap = std::min(cap, s_cap(k));
        return cap;
    }

    bool uniform_gamma(double eps = 1e-12) const {
        double g0 = 1.0 / static_cast<double>(frames());
        for (double g : gamma_)
            if (std::abs(g - g0) > eps) return false;
        return true;
    }

    // Empty placeholder; every meaningful instance goes through make()/make_conical().
    GeamSpec() = default;

  private:
    void validate() const {
        const std::size_t n = frame_sizes_.size();
        if (n == 0 || gamma_.size() != n || s_k_.size() != n)
            throw std::invalid_argument("GeamSpec: inconsistent parameter list lengths");
        double gsum = 0.0;
        std::size_t msum = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!(gamma_[k] > 0.0)) throw std::invalid_argument("GeamSpec: gamma_k must be positive");
            if (frame_sizes_[k] < 2) throw std::invalid_argument("GeamSpec: frame size must be >= 2");
            gsum += gamma_[k];
            msum += frame_sizes_[k];
        }
        if (std::abs(gsum - 1.0) > 1e-12)
            throw std::invalid_argument("GeamSpec: gamma_k must sum to 1");
        if (msum != d_ * d_ + n - 1)
            throw std::invalid_argument("GeamSpec: sum M_k must equal d^2 + N - 1");
        for (std::size_t k = 0; k < n; ++k) {
            if (s_k_[k] < 0.0) throw std::invalid_argument("GeamSpec: S_k must be nonnegative");
            if (s_k_[k] > s_cap(k) + 1e-12)
                throw std::invalid_argument("GeamSpec: S_k above the 2-design cap");
            double bk = b(k);
            double bmax = std::min(static_cast<double>(d_), static_cast<double>(frame_sizes_[k])) /
                          static_cast<double>(d_);
            if (bk < 1.0 / static_cast<double>(d_) - 1e-12 || bk > bmax + 1e-12)
                throw std::invalid_argument("GeamSpec: derived b_k out of range");
        }
    }

    std::size_t d_ = 0;
    std::vector<std::size_t> frame_sizes_;
    std::vector<double> gamma_;
    std::vector<double> s_k_;
    bool conical_ = true;
    std::string preset_;
};

// Same shape, different uniform S.
inline GeamSpec with_s(const GeamSpec& base, double s) {
    return GeamSpec::make_conical(base.dim(), base.frame_sizes(), base.gammas(), s,
                                  base.preset());
}

// --- presets (MUB / MUM / SIC / GSIC / (N,M)-POVM) ---------------------------

inline GeamSpec preset_mub(std::size_t d) {
    double dd = static_cast<double>(d);
    return GeamSpec::make_conical(d, std::vector<std::size_t>(d + 1, d),
                                  std::vector<double>(d + 1, 1.0 / (dd + 1.0)),
                                  1.0 / ((dd + 1.0) * (dd + 1.0)), "mub");
}

inline GeamSpec preset_mum(std::size_t d, double b) {
    double dd = static_cast<double>(d);
    if (!(b > 1.0 / dd) || b > 1.0) throw std::invalid_argument("mum: need 1/d < b <= 1");
    double s = (dd * b - 1.0) / ((dd + 1.0) * (dd * dd - 1.0));
    std::ostringstream os;
    os << "mum:" << b;
    return GeamSpec::make_conical(d, std::vector<std::size_t>(d + 1, d),
                                  std::vector<double>(d + 1, 1.0 / (dd + 1.0)), s, os.str());
}

inline GeamSpec preset_sic(std::size_t d) {
    double dd = static_cast<double>(d);
    return GeamSpec::make_conical(d, {d * d}, {1.0}, 1.0 / (dd * (dd + 1.0)), "sic");
}

inline GeamSpec preset_gsic(std::size_t d, double b) {
    double dd = static_cast<double>(d);
    if (!(b > 1.0 / dd) || b > 1.0) throw std::invalid_argument("gsic: need 1/d < b <= 1");
    double s = (dd * b - 1.0) / (dd * (dd * dd - 1.0));
    std::ostringstream os;
    os << "gsic:" << b;
    return GeamSpec::make_conical(d, {d * d}, {1.0}, s, os.str());
}

inline GeamSpec preset_nm_povm(std::size_t d, std::size_t n, std::size_t m, double b) {
    double dd = static_cast<double>(d);
    if (n * (m - 1) != d * d - 1)
        throw std::invalid_argument("nm-povm: need N(M-1) = d^2 - 1");
    double bmax = std::min(dd, static_cast<double>(m)) / dd;
    if (!(b > 1.0 / dd) || b > bmax)
        throw std::invalid_argument("nm-povm: need 1/d < b <= min{d,M}/d");
    double s = dd * (dd * b - 1.0) /
               (static_cast<double>(n) * static_cast<double>(m) * (dd * dd - 1.0));
    std::ostringstream os;
    os << "nm:" << n << "," << m << "," << b;
    return GeamSpec::make_conical(d, std::vector<std::size_t>(n, m),
                                  std::vector<double>(n, 1.0 / static_cast<double>(n)), s,
                                  os.str());
}

// Selector syntax: mub | mum:b | sic | gsic:b | nm:N,M,b
inline GeamSpec parse_preset(const std::string& s, std::size_t d) {
    auto colon = s.find(':');
    std::string family = s.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (family == "mub") return preset_mub(d);
    if (family == "sic") return preset_sic(d);
    if (family == "mum") return preset_mum(d, std::stod(args));
    if (family == "gsic") return preset_gsic(d, std::stod(args));
    if (family == "nm") {
        std::size_t c1 = args.find(',');
        if (c1 == std::string::npos) throw std::invalid_argument("nm preset needs nm:N,M[,b]");
        std::size_t c2 = args.find(',', c1 + 1);
        std::size_t n = std::stoul(args.substr(0, c1));
        std::size_t m = std::stoul(args.substr(c1 + 1, c2 - c1 - 1));
        // b defaults to its upper bound min{d,M}/d
        double b = c2 == std::string::npos
                       ? std::min(static_cast<double>(d), static_cast<double>(m)) / d
                       : std::stod(args.substr(c2 + 1));
        return preset_nm_povm(d, n, m, b);
    }
    throw std::invalid_argument("unknown preset: " + s);
}

// --- Hermitian basis and operator construction --------------------------------

// G_0 = I/sqrt(d) plus traceless orthonormal G_{k,l} split into frames.
struct HermitianBasis {
    std::size_t d = 0;
    Matrix g0;
    std::vector<std::vector<Matrix>> frames;  // frames[k][l] = G_{k,l}, M_k - 1 elements

    Matrix frame_sum(std::size_t k) const {
        Matrix g(d, d);
        for (const Matrix& e : frames[k]) g = g + e;
        return g;
    }

    std::vector<Matrix> all_elements() const {
        std::vector<Matrix> v{g0};
        for (const auto& fr : frames)
            for (const auto& e : fr) v.push_back(e);
        return v;
    }
};

// Deterministic frame assignment: the generalized Gell-Mann elements (in the
// order documented at standard_hermitian_basis) are dealt out in sequence,
// frame 1 taking the first M_1 - 1, and so on. An optional RNG permutes the
// assignment for robustness testing.
inline HermitianBasis gell_mann_basis(std::size_t d, const std::vector<std::size_t>& partition,
                                      Rng* permute = nullptr) {
    std::size_t need = 0;
    for (std::size_t m : partition) need += m - 1;
    if (need != d * d - 1)
        throw std::invalid_argument("gell_mann_basis: partition must cover d^2 - 1 elements");
    std::vector<Matrix> pool = standard_hermitian_basis(d);
    HermitianBasis basis;
    basis.d = d;
    basis.g0 = pool[0];
    std::vector<std::size_t> order(d * d - 1);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
    if (permute) {
        auto perm = permute->permutation(order.size());
        std::vector<std::size_t> shuffled(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) shuffled[i] = order[perm[i]];
        order = shuffled;
    }
    std::size_t next = 0;
    for (std::size_t m : partition) {
        std::vector<Matrix> frame;
        for (std::size_t l = 0; l + 1 < m; ++l) frame.push_back(pool[order[next++]]);
        basis.frames.push_back(std::move(frame));
    }
    return basis;
}

// Realized measurement operators P_{k,l} = (a_k/d) I + tau_k H_{k,l}.
struct Geam {
    GeamSpec spec;
    std::vector<int> signs;
    std::vector<std::vector<HermitianMatrix>> ops;  // ops[k][l], M_k per frame
    double min_eigenvalue = 0.0;

    std::size_t dim() const { return spec.dim(); }
    std::size_t total_operators() const {
        std::size_t n = 0;
        for (const auto& fr : ops) n += fr.size();
        return n;
    }
};

inline Geam construct_geam(const GeamSpec& spec, const HermitianBasis& basis,
                           std::vector<int> signs = {}) {
    const std::size_t n = spec.frames();
    if (basis.d != spec.dim() || basis.frames.size() != n)
        throw std::invalid_argument("construct_geam: basis does not match spec shape");
    for (std::size_t k = 0; k < n; ++k)
        if (basis.frames[k].size() + 1 != spec.frame_size(k))
            throw std::invalid_argument("construct_geam: basis partition mismatch");
    if (signs.empty()) signs.assign(n, +1);
    if (signs.size() != n) throw std::invalid_argument("construct_geam: signs length != N");

    Geam g;
    g.spec = spec;
    g.signs = signs;
    const std::size_t d = spec.dim();
    const Matrix eye = Matrix::identity(d);
    double min_eig = 1e300;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = spec.frame_size(k);
        const double sm = std::sqrt(static_cast<double>(m));
        const double shift = spec.a(k) / static_cast<double>(d);
        const double tau = spec.tau(k, signs[k]);
        const Matrix gk = basis.frame_sum(k);
        std::vector<HermitianMatrix> frame;
        frame.reserve(m);
        for (std::size_t l = 0; l + 1 < m; ++l) {
            Matrix h = gk - basis.frames[k][l] * (sm * (sm + 1.0));
            frame.emplace_back(eye * shift + h * tau);
        }
        frame.emplace_back(eye * shift + gk * (tau * (sm + 1.0)));
        for (const HermitianMatrix& p : frame) {
            auto eig = hermitian_eig(p);
            min_eig = std::min(min_eig, eig.eigenvalues.back());
        }
        g.ops.push_back(std::move(frame));
    }
    g.min_eigenvalue = min_eig;
    return g;
}

// --- validation ---------------------------------------------------------------

struct ValidationCheck {
    std::string name;
    double max_deviation = 0.0;
    bool pass = false;
};

struct ValidationReport {
    double tolerance = 0.0;
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Checks the defining trace conditions of the constructed operators plus
// cardinality and positivity. Failures are reported, not thrown.
inline ValidationReport validate_geam(const Geam& g, double tolerance = 1e-10) {
    const GeamSpec& spec = g.spec;
    const std::size_t d = spec.dim();
    ValidationReport report;
    report.tolerance = tolerance;
    auto add = [&](const std::string& name, double dev) {
        report.checks.push_back({name, dev, dev <= tolerance});
    };

    double dev_sum = 0.0, dev_tr = 0.0, dev_tr2 = 0.0, dev_intra = 0.0, dev_inter = 0.0;
    for (std::size_t k = 0; k < spec.frames(); ++k) {
        Matrix sum(d, d);
        for (const auto& p : g.ops[k]) sum = sum + p.matrix();
        dev_sum = std::max(dev_sum, (sum - Matrix::identity(d) * spec.gamma(k)).max_abs());
        double ak = spec.a(k);
        for (std::size_t l = 0; l < g.ops[k].size(); ++l) {
            const Matrix& p = g.ops[k][l].matrix();
            dev_tr = std::max(dev_tr, std::abs(p.trace() - cplx{ak, 0.0}));
            double tr2 = (p * p).trace().real();
            dev_tr2 = std::max(dev_tr2, std::abs(tr2 - spec.b(k) * ak * ak));
            for (std::size_t l2 = l + 1; l2 < g.ops[k].size(); ++l2) {
                double cross = (p * g.ops[k][l2].matrix()).trace().real();
                dev_intra = std::max(dev_intra, std::abs(cross - spec.c(k) * ak * ak));
            }
        }
        for (std::size_t k2 = k + 1; k2 < spec.frames(); ++k2)
            for (const auto& p : g.ops[k])
                for (const auto& q : g.ops[k2]) {
                    double cross = (p.matrix() * q.matrix()).trace().real();
                    dev_inter = std::max(
                        dev_inter,
                        std::abs(cross - spec.a(k) * spec.a(k2) / static_cast<double>(d)));
                }
    }
    add("frame-sum", dev_sum);
    add("trace", dev_tr);
    add("purity", dev_tr2);
    add("intra-frame-cross", dev_intra);
    add("inter-frame-cross", dev_inter);
    std::size_t expected = d * d + spec.frames() - 1;
    add("cardinality",
        std::abs(static_cast<double>(g.total_operators()) - static_cast<double>(expected)));
    add("positivity", std::max(0.0, -g.min_eigenvalue));
    return report;
}

// Largest uniform S in [0, cap] keeping every P_{k,l} positive semidefinite
// (min eigenvalue >= -1e-12), by bisection. The min eigenvalue is concave
// piecewise-linear in tau_k, hence monotone along sqrt(S); spot-verified in
// the tests.
inline double max_feasible_s(const GeamSpec& shape, const HermitianBasis& basis,
                             const std::vector<int>& signs = {}) {
    auto feasible = [&](double s) {
        Geam g = construct_geam(with_s(shape, s), basis, signs);
        return g.min_eigenvalue >= -1e-12;
    };
    double cap = shape.s_cap();
    if (feasible(cap)) return cap;
    double lo = 0.0, hi = cap;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

// Scaled operators N P_{k,l} of the generalized symmetric measurement; each
// scaled frame sums to the identity. Requires uniform gamma_k = 1/N.
inline std::vector<std::vector<HermitianMatrix>> scale_to_symmetric(const Geam& g) {
    if (!g.spec.uniform_gamma())
        throw std::invalid_argument("scale_to_symmetric: gamma_k must equal 1/N");
    double n = static_cast<double>(g.spec.frames());
    std::vector<std::vector<HermitianMatrix>> scaled;
    for (const auto& frame : g.ops) {
        std::vector<HermitianMatrix> out;
        out.reserve(frame.size());
        for (const auto& p : frame) out.emplace_back(p.matrix() * n);
        scaled.push_back(std::move(out));
    }
    return scaled;
}

}  // namespace geamlab

// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "geamlab/entangle.hpp"
#include "geamlab/io.hpp"

using namespace geamlab;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %-28s %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

std::string max_str(double v) { return "max residual " + format_number(v); }

GeamSpec nm_for(std::size_t d) {
    // one (N, M)-POVM factorization of N(M-1) = d^2 - 1 per dimension
    if (d == 2) return preset_nm_povm(2, 3, 2, 0.9);
    if (d == 3) return preset_nm_povm(3, 4, 3, 0.9);
    return preset_nm_povm(4, 5, 4, 0.9);
}

struct GridPoint {
    GeamSpec spec;
    MonotoneFunction f;
    SkewContext ctx;
    Geam geam;
    HermitianBasis basis;
};

// The shared grid of criteria 1, 4, 5, 6: d x f x preset x 20 seeded states,
// with random sign vectors and permuted basis-frame assignment.
std::vector<GridPoint> build_grid() {
    std::vector<GridPoint> grid;
    std::uint64_t stream = 0;
    for (std::size_t d : {2, 3, 4}) {
        std::vector<GeamSpec> specs{preset_mub(d), preset_mum(d, 0.8), preset_sic(d),
                                    preset_gsic(d, 0.7), nm_for(d)};
        for (const std::string& fs : {"sld", "wy", "wyd:0.3", "gwyd:0.2,0.5"}) {
            MonotoneFunction f = parse_monotone(fs);
            for (const GeamSpec& spec : specs) {
                for (int i = 0; i < 20; ++i) {
                    Rng rng(42, stream);
                    Rng perm(42, stream + 0x100000000ull);
                    ++stream;
                    HermitianBasis basis = gell_mann_basis(d, spec.frame_sizes(), &perm);
                    std::vector<int> signs;
                    for (std::size_t k = 0; k < spec.frames(); ++k)
                        signs.push_back(rng.bits() % 2 ? 1 : -1);
                    std::size_t rank = 1 + rng.bits() % d;
                    grid.push_back({spec, f, SkewContext(sample_mixed_state(d, rank, rng), f),
                                    construct_geam(spec, basis, signs), basis});
                }
            }
        }
    }
    return grid;
}

// Midpoint of the first verdict flip of `verdict_at` on [lo, hi] with the given step.
double crossing(double lo, double hi, double step,
                const std::function<bool(double)>& entangled_at) {
    bool prev = entangled_at(lo);
    for (double p = lo + step; p <= hi + step / 2; p += step) {
        bool cur = entangled_at(std::min(p, hi));
        if (cur != prev) return p - step / 2;
        prev = cur;
    }
    return std::nan("");
}

}  // namespace

int main() {
    std::vector<GridPoint> grid = build_grid();
    std::vector<double> direct(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        direct[i] = average_coherence_geam(grid[i].ctx, grid[i].geam);
    });

    // 1: closed form of the average coherence over the full grid
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst,
                             std::abs(direct[i] - closed_form_coherence(grid[i].ctx, grid[i].spec)));
        report(1, "average-coherence closed form", worst <= 1e-9,
               max_str(worst) + " over " + std::to_string(grid.size()) + " tuples");
    }

    // 2: algebraic validation of every preset + d=2 closed forms. The trace
    // conditions must hold for every preset; positivity is constructed-basis
    // dependent and is asserted only where the d=2 closed forms guarantee it
    // (it is reported data elsewhere, and the identities hold regardless).
    {
        bool ok = true;
        std::string detail = "trace conditions at 1e-10";
        for (std::size_t d : {2, 3, 4}) {
            for (const GeamSpec& spec : {preset_mub(d), preset_mum(d, 0.8), preset_sic(d),
                                         preset_gsic(d, 0.7), nm_for(d)}) {
                Geam g = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
                ValidationReport r = validate_geam(g, 1e-10);
                for (const ValidationCheck& c : r.checks)
                    if (!c.pass && c.name != "positivity") {
                        ok = false;
                        detail = spec.preset() + " d=" + std::to_string(d) + " fails " + c.name +
                                 " (" + format_number(c.max_deviation) + ")";
                    }
            }
        }
        GeamSpec mub = preset_mub(2);
        Geam g2 = construct_geam(mub, gell_mann_basis(2, mub.frame_sizes()));
        const char paulis[3] = {'x', 'y', 'z'};
        for (std::size_t k = 0; k < 3; ++k) {
            double dev = std::max(
                (g2.ops[k][0].matrix() - (Matrix::identity(2) - pauli(paulis[k])) * (1.0 / 6.0))
                    .max_abs(),
                (g2.ops[k][1].matrix() - (Matrix::identity(2) + pauli(paulis[k])) * (1.0 / 6.0))
                    .max_abs());
            if (dev > 1e-14) {
                ok = false;
                detail = "d=2 mub operators deviate by " + format_number(dev);
            }
        }
        if (g2.min_eigenvalue < -1e-10) {
            ok = false;
            detail = "d=2 mub operators are not positive";
        }
        GeamSpec sic = preset_sic(2);
        Geam gs = construct_geam(sic, gell_mann_basis(2, sic.frame_sizes()));
        for (const auto& p : gs.ops[0]) {
            double second = std::abs(hermitian_eig(p).eigenvalues[1]);
            if (second > 1e-12) {
                ok = false;
                detail = "d=2 sic operator is not rank one";
            }
        }
        report(2, "measurement algebra", ok, detail);
    }

    // 3: parameter-table consistency S = d gamma^2 (d b - 1)/(M(M-1))
    {
        double worst = 0.0;
        auto relation = [](const GeamSpec& s, double b) {
            double dd = static_cast<double>(s.dim());
            double g = s.gamma(0), m = static_cast<double>(s.frame_size(0));
            return dd * g * g * (dd * b - 1.0) / (m * (m - 1.0));
        };
        for (std::size_t d = 2; d <= 5; ++d) {
            double dd = static_cast<double>(d);
            worst = std::max(worst, std::abs(preset_mub(d).s() - relation(preset_mub(d), 1.0)));
            for (double b = 1.0 / dd + 0.05; b <= 1.0; b += 0.1) {
                worst = std::max(worst, std::abs(preset_mum(d, b).s() - relation(preset_mum(d, b), b)));
                worst = std::max(worst,
                                 std::abs(preset_gsic(d, b).s() - relation(preset_gsic(d, b), b)));
            }
        }
        for (std::size_t d : {2, 3, 4})
            worst = std::max(worst, std::abs(nm_for(d).s() - relation(nm_for(d), 0.9)));
        // the tabulated sic row quotes b = 1/d, but the constructed operators
        // measure tr P^2 / (tr P)^2 = 1; the S column follows from b = 1
        bool sic_ok = true;
        for (std::size_t d : {2, 3, 4}) {
            GeamSpec sic = preset_sic(d);
            Geam g = construct_geam(sic, gell_mann_basis(d, sic.frame_sizes()));
            const Matrix& p = g.ops[0][0].matrix();
            double measured_b = (p * p).trace().real() / std::pow(p.trace().real(), 2);
            sic_ok = sic_ok && std::abs(measured_b - 1.0) <= 1e-10 &&
                     std::abs(sic.s() - relation(sic, measured_b)) <= 1e-12;
        }
        report(3, "parameter-table consistency", worst <= 1e-12 && sic_ok,
               max_str(worst) + "; sic row measures b = 1 (not 1/d), S column consistent with b = 1");
    }

    // 4: the two trade-offs on the grid
    {
        double worst = 0.0;
        std::vector<double> w(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            const GridPoint& gp = grid[i];
            double n = static_cast<double>(gp.spec.frames());
            double s = gp.spec.s();
            double dd = static_cast<double>(gp.ctx.dim());
            double r1 = std::abs(f_entropy(gp.ctx) + n / s * direct[i] - (dd - 1.0));
            double r2 = std::abs(quasientropy_sum(gp.ctx, gp.basis.all_elements()) +
                                 n / s * direct[i] - dd);
            w[i] = std::max(r1, r2);
        });
        for (double v : w) worst = std::max(worst, v);
        report(4, "coherence trade-offs", worst <= 1e-9, max_str(worst));
    }

    // 5: maximal coherence splits into the two canonical averages
    {
        double worst = 0.0;
        for (const GridPoint& gp : grid) {
            double q = quantum_uncertainty(gp.ctx);
            double dd = static_cast<double>(gp.ctx.dim());
            worst = std::max(worst,
                             std::abs(q / (dd + 1.0) + q / (dd * (dd + 1.0)) - max_coherence(gp.ctx)));
        }
        bool closed_ok = worst <= 1e-12;
        double worst_direct = 0.0;
        Rng rng(7);
        GeamSpec mub = preset_mub(2), sic = preset_sic(2);
        Geam gm = construct_geam(mub, gell_mann_basis(2, mub.frame_sizes()));
        Geam gs = construct_geam(sic, gell_mann_basis(2, sic.frame_sizes()));
        for (int i = 0; i < 50; ++i) {
            SkewContext ctx(sample_mixed_state(2, 1 + i % 2, rng),
                            i % 2 ? make_wy() : make_wyd(0.3));
            // bare projective measurements: symmetric scaling, N^2 = 9 for mub, 1 for sic
            worst_direct = std::max(worst_direct,
                                    std::abs(9.0 * average_coherence_geam(ctx, gm) +
                                             average_coherence_geam(ctx, gs) - max_coherence(ctx)));
        }
        report(5, "mub+sic decomposition", closed_ok && worst_direct <= 1e-9,
               "closed " + max_str(worst) + ", d=2 direct " + max_str(worst_direct));
    }

    // 6: symmetric-measurement scaling on the grid
    {
        std::vector<double> w(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            const GridPoint& gp = grid[i];
            double n = static_cast<double>(gp.spec.frames());
            SymmetricCoherence sym = symmetric_measurement_coherence(gp.ctx, gp.geam);
            w[i] = std::max(std::abs(sym.direct - n * n * direct[i]),
                            std::abs(sym.direct - sym.closed));
        });
        double worst = 0.0;
        for (double v : w) worst = std::max(worst, v);
        report(6, "symmetric-measurement scaling", worst <= 1e-9, max_str(worst));
    }

    // 7: Haar unitary average by Monte Carlo
    {
        bool ok = true;
        std::string detail;
        Rng rng(99);
        for (std::size_t d : {2, 3}) {
            GeamSpec spec = preset_mub(d);
            Geam g = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
            for (const auto& f : {make_sld(), make_wy()}) {
                SkewContext ctx(sample_mixed_state(d, d, rng), f);
                MonteCarloEstimate mc = unitary_average_mc(ctx, 20000, 1234 + d);
                double scale = spec.s() * (static_cast<double>(d) + 1.0) /
                               static_cast<double>(spec.frames());
                double resid = std::abs(scale * mc.mean - average_coherence_geam(ctx, g));
                bool pass = resid <= 4.0 * scale * mc.stderr_;
                ok = ok && pass;
                if (!pass)
                    detail = "d=" + std::to_string(d) + " f=" + f.name + " residual " +
                             format_number(resid) + " > 4 sigma " +
                             format_number(4.0 * scale * mc.stderr_);
            }
        }
        report(7, "Haar average Monte Carlo", ok,
               ok ? "all within 4 standard errors at 20000 samples" : detail);
    }

    // 8: isotropic closed form and critical parameter
    {
        double worst_rel = 0.0;
        for (std::size_t d : {2, 3}) {
            GeamSpec spec = preset_mub(d);
            Geam ga = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
            Geam gb = conjugate_geam(ga);
            for (double q = 0.1; q < 0.95; q += 0.1) {
                DetectionReport r =
                    criterion_F(build_reference("isotropic", d, q).state, ga, gb, make_sld());
                double closed = isotropic_reference(d, q, spec).f_closed;
                worst_rel = std::max(worst_rel, std::abs(r.value - closed) / closed);
            }
        }
        bool sweep_ok = true;
        std::string sweep_detail;
        for (std::size_t d : {2, 3}) {
            GeamSpec spec = preset_mub(d);
            Geam ga = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
            Geam gb = conjugate_geam(ga);
            double empirical = crossing(0.3, 0.7, 1e-3, [&](double q) {
                return criterion_F(build_reference("isotropic", d, q).state, ga, gb, make_sld())
                           .verdict == Verdict::Entangled;
            });
            double expected = isotropic_reference(d, 0.0, spec).q_star;
            if (!(std::abs(empirical - expected) <= 1e-3)) {
                sweep_ok = false;
                sweep_detail = " d=" + std::to_string(d) + " sweep gives " +
                               format_number(empirical) + " vs " + format_number(expected);
            }
        }
        report(8, "isotropic detection", worst_rel <= 1e-9 && sweep_ok,
               "max relative residual " + format_number(worst_rel) +
                   (sweep_ok ? "; sweeps recover the critical mixing parameter" : sweep_detail));
    }

    // 9: Werner closed form, critical parameter, two-qubit p-form
    {
        double worst = 0.0;
        bool sweep_ok = true;
        std::string detail;
        for (std::size_t d : {2, 3, 4}) {
            GeamSpec spec = preset_mub(d);
            Geam g = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
            for (double x = -1.0; x <= 1.0 + 1e-12; x += 0.125) {
                DetectionReport r = criterion_G(build_reference("werner", d, x).state, g, g);
                worst = std::max(worst,
                                 std::abs(r.value - werner_reference(d, x, spec).g_closed));
            }
            double lo = 2.0 / static_cast<double>(d) - 1.0 - 0.05;
            double empirical = crossing(lo, lo + 0.1, 1e-3, [&](double x) {
                return criterion_G(build_reference("werner", d, x).state, g, g).verdict ==
                       Verdict::Entangled;
            });
            double expected = 2.0 / static_cast<double>(d) - 1.0;
            if (!(std::abs(empirical - expected) <= 1e-3)) {
                sweep_ok = false;
                detail = " d=" + std::to_string(d) + " x sweep gives " + format_number(empirical);
            }
        }
        GeamSpec spec2 = preset_mub(2);
        Geam g2 = construct_geam(spec2, gell_mann_basis(2, spec2.frame_sizes()));
        double p_cross = crossing(0.28, 0.38, 1e-3, [&](double p) {
            return criterion_G(build_reference("werner-qubit", 2, p).state, g2, g2).verdict ==
                   Verdict::Entangled;
        });
        if (!(std::abs(p_cross - 1.0 / 3.0) <= 1e-3)) {
            sweep_ok = false;
            detail += " p sweep gives " + format_number(p_cross);
        }
        report(9, "Werner detection", worst <= 1e-10 && sweep_ok,
               max_str(worst) + (sweep_ok ? "; sweeps recover 2/d - 1 and p = 1/3" : detail));
    }

    // 10: no false positives on product states
    {
        bool ok = true;
        std::string detail = "400 product states, both criteria inconclusive";
        for (std::size_t d : {2, 3}) {
            GeamSpec spec = preset_mub(d);
            Geam g = construct_geam(spec, gell_mann_basis(d, spec.frame_sizes()));
            Rng rng(2024 + d);
            for (int i = 0; i < 200; ++i) {
                DensityMatrix ra = sample_mixed_state(d, 1 + rng.bits() % d, rng);
                DensityMatrix rb = sample_mixed_state(d, 1 + rng.bits() % d, rng);
                DensityMatrix joint(tensor_product(ra.matrix(), rb.matrix()));
                DetectionReport rf = criterion_F(joint, g, g, make_sld());
                DetectionReport rg = criterion_G(joint, g, g);
                if (rf.value > rf.threshold + 1e-9 || rg.value > rg.threshold + 1e-9) {
                    ok = false;
                    detail = "false positive at d=" + std::to_string(d);
                }
            }
        }
        report(10, "no false positives", ok, detail);
    }

    // 11: core numerics
    {
        bool ok = true;
        std::string detail = "dual-path, basis independence, extremal values, convexity, additivity";
        Rng rng(311);
        std::vector<MonotoneFunction> fams{make_sld(), make_wy(), make_wyd(0.3),
                                           make_gwyd(0.2, 0.5)};
        double worst_dual = 0.0;
        for (int rep = 0; rep < 1000; ++rep) {
            std::size_t d = 2 + rep % 3;
            DensityMatrix rho = sample_mixed_state(d, 1 + rng.bits() % d, rng);
            Matrix gm = sample_ginibre(d, d, rng);
            HermitianMatrix h((gm + gm.adjoint()) * 0.5);
            SkewContext ctx(rho, fams[rep % fams.size()]);
            worst_dual = std::max(worst_dual,
                                  std::abs(skew_information(ctx, h, SkewPath::Spectral) -
                                           skew_information(ctx, h, SkewPath::Commutator)));
        }
        if (worst_dual > 1e-10) {
            ok = false;
            detail = "dual-path disagreement " + format_number(worst_dual);
        }
        for (int rep = 0; rep < 10 && ok; ++rep) {
            std::size_t d = 2 + rep % 3;
            SkewContext ctx(sample_mixed_state(d, d, rng), fams[rep % fams.size()]);
            Matrix u = sample_haar_unitary(d, rng);
            double q = quantum_uncertainty(ctx);
            double qs = 0.0;
            for (const Matrix& x : standard_hermitian_basis(d))
                qs += skew_information(ctx, HermitianMatrix(u * x * u.adjoint()));
            if (std::abs(qs - q) > 1e-9) {
                ok = false;
                detail = "basis dependence " + format_number(std::abs(qs - q));
            }
        }
        for (std::size_t d : {2, 3, 4}) {
            for (const auto& f : fams) {
                SkewContext mixed(DensityMatrix(Matrix::identity(d) * (1.0 / d)), f);
                SkewContext pure(sample_pure_state(d, rng), f);
                if (quantum_uncertainty(mixed) > 1e-12 ||
                    std::abs(quantum_uncertainty(pure) - (static_cast<double>(d) - 1.0)) > 1e-9) {
                    ok = false;
                    detail = "extremal uncertainty values off at d=" + std::to_string(d);
                }
            }
        }
        for (int rep = 0; rep < 50 && ok; ++rep) {
            std::size_t d = 2 + rep % 3;
            DensityMatrix r1 = sample_mixed_state(d, d, rng);
            DensityMatrix r2 = sample_mixed_state(d, d, rng);
            double p = rng.uniform();
            Matrix gm = sample_ginibre(d, d, rng);
            HermitianMatrix h((gm + gm.adjoint()) * 0.5);
            const MonotoneFunction& f = fams[rep % fams.size()];
            DensityMatrix mix(r1.matrix() * p + r2.matrix() * (1.0 - p));
            double lhs = skew_information(SkewContext(mix, f), h);
            double rhs = p * skew_information(SkewContext(r1, f), h) +
                         (1.0 - p) * skew_information(SkewContext(r2, f), h);
            if (lhs > rhs + 1e-9) {
                ok = false;
                detail = "convexity violated by " + format_number(lhs - rhs);
            }
        }
        for (int rep = 0; rep < 20 && ok; ++rep) {
            DensityMatrix ra = sample_mixed_state(2, 2, rng);
            DensityMatrix rb = sample_mixed_state(3, 3, rng);
            Matrix ga = sample_ginibre(2, 2, rng), gb = sample_ginibre(3, 3, rng);
            HermitianMatrix ha((ga + ga.adjoint()) * 0.5), hb((gb + gb.adjoint()) * 0.5);
            const MonotoneFunction& f = fams[rep % fams.size()];
            Matrix joint_h = tensor_product(ha.matrix(), Matrix::identity(3)) +
                             tensor_product(Matrix::identity(2), hb.matrix());
            double lhs = skew_information(SkewContext(
                                              DensityMatrix(tensor_product(ra.matrix(), rb.matrix())), f),
                                          HermitianMatrix(joint_h));
            double rhs = skew_information(SkewContext(ra, f), ha) +
                         skew_information(SkewContext(rb, f), hb);
            if (std::abs(lhs - rhs) > 1e-9) {
                ok = false;
                detail = "additivity violated by " + format_number(std::abs(lhs - rhs));
            }
        }
        report(11, "core numerics", ok, detail);
    }

    if (failures == 0) {
        std::printf("ACCEPTANCE: all 11 criteria pass\n");
        return 0;
    }
    std::printf("ACCEPTANCE: %d criteria FAILED\n", failures);
    return 1;
}

// geamlab: construct conical 2-design equiangular measurements, verify the
// coherence identities, and run the two entanglement criteria over state
// families. Subcommands: verify, detect, sweep, geam-check.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geamlab/io.hpp"

namespace {

using namespace geamlab;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + s);
    return out;
}

// Preset lists need care: "mub,mum:0.8" splits on commas, but "gwyd:0.2,0.5"
// and "nm:3,2,0.9" carry commas inside their arguments. Split on commas that
// start a new known selector name instead.
std::vector<std::string> split_selectors(const std::string& s,
                                         const std::vector<std::string>& names) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos < s.size(); ++pos) {
        if (s[pos] != ',') continue;
        for (const std::string& n : names) {
            if (s.compare(pos + 1, n.size(), n) == 0) {
                std::size_t after = pos + 1 + n.size();
                if (after == s.size() || s[after] == ':' || s[after] == ',') {
                    out.push_back(s.substr(start, pos - start));
                    start = pos + 1;
                    break;
                }
            }
        }
    }
    out.push_back(s.substr(start));
    for (const std::string& item : out)
        if (item.empty()) throw std::invalid_argument("empty selector in list: " + s);
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

std::string reports_to_csv(const std::vector<json>& reports) {
    std::string csv = "identity,d,f,spec,lhs,rhs,residual,tolerance,pass,seed\n";
    for (const json& j : reports) {
        csv += j["identity"].get<std::string>() + ',' + std::to_string(j["d"].get<int>()) + ',' +
               j["f"].get<std::string>() + ',';
        csv += j["spec"].contains("preset") ? j["spec"]["preset"].get<std::string>() : "custom";
        csv += ',' + format_number(j["lhs"].get<double>()) + ',' +
               format_number(j["rhs"].get<double>()) + ',' +
               format_number(j["residual"].get<double>()) + ',' +
               format_number(j["tolerance"].get<double>()) + ',' +
               (j["pass"].get<bool>() ? "true" : "false") + ',' +
               std::to_string(j["seed"].get<std::uint64_t>()) + '\n';
    }
    return csv;
}

// --- verify ------------------------------------------------------------------

struct VerifyConfig {
    std::string d_list = "2";
    std::string f_list = "sld";
    std::string preset_list = "mub";
    int states = 5;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    std::size_t samples = 20000;
    bool no_mc = false;
    std::string out;
    std::string format = "json";
};

int cmd_verify(const VerifyConfig& cfg) {
    struct Item {
        GeamSpec spec;
        std::string f_string;
        std::size_t d;
        std::uint64_t stream;
    };
    std::vector<Item> items;
    std::uint64_t stream = 0;
    // Validate the whole grid up front so config errors exit before any work.
    for (const std::string& ds : split_list(cfg.d_list)) {
        std::size_t d = std::stoul(ds);
        if (d < 2 || d > 16) throw std::invalid_argument("verify: d must lie in [2, 16]");
        for (const std::string& ps :
             split_selectors(cfg.preset_list, {"mub", "mum", "sic", "gsic", "nm"})) {
            GeamSpec spec = parse_preset(ps, d);
            for (const std::string& fs : split_selectors(cfg.f_list, {"sld", "wy", "wyd", "gwyd"})) {
                parse_monotone(fs);
                for (int i = 0; i < cfg.states; ++i)
                    items.push_back({spec, fs, d, stream++});
            }
        }
    }
    if (cfg.states < 1) throw std::invalid_argument("verify: --states must be >= 1");

    std::vector<std::vector<IdentityReport>> results(items.size());
    std::vector<std::vector<int>> all_signs(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const Item& it = items[i];
        Rng rng(cfg.seed, it.stream);
        Rng perm(cfg.seed, it.stream + 0x100000000ull);
        HermitianBasis basis = gell_mann_basis(it.d, it.spec.frame_sizes(), &perm);
        std::vector<int> signs;
        for (std::size_t k = 0; k < it.spec.frames(); ++k)
            signs.push_back(rng.bits() % 2 ? 1 : -1);
        std::size_t rank = 1 + rng.bits() % it.d;
        SkewContext ctx(sample_mixed_state(it.d, rank, rng), parse_monotone(it.f_string));
        IdentitySuiteOptions opt;
        opt.tolerance = cfg.tolerance;
        opt.mc_samples = cfg.samples;
        // same stream-splitting rule as Rng, offset to a disjoint stream range
        opt.seed = cfg.seed + (it.stream + 0x200000000ull) * 0x9E3779B97F4A7C15ull;
        opt.run_monte_carlo = !cfg.no_mc;
        results[i] = identity_suite(ctx, construct_geam(it.spec, basis, signs), basis, opt);
        all_signs[i] = signs;
    });

    std::vector<json> flat;
    std::size_t failed = 0, total = 0, skipped = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // name -> {pass, fail}
    for (std::size_t i = 0; i < items.size(); ++i) {
        json spec_j = spec_to_json(items[i].spec, all_signs[i]);
        for (const IdentityReport& r : results[i]) {
            flat.push_back(report_to_json(r, spec_j));
            if (!r.applicable) {
                ++skipped;
                continue;
            }
            ++total;
            if (r.pass)
                ++tally[r.identity].first;
            else {
                ++tally[r.identity].second;
                ++failed;
            }
        }
    }
    write_output(cfg.out, cfg.format == "csv" ? reports_to_csv(flat) : json(flat).dump(2) + "\n");

    std::cerr << "verify: " << items.size() << " grid points, " << total << " checks, "
              << failed << " failed, " << skipped << " not applicable\n";
    for (const auto& [name, counts] : tally)
        std::cerr << "  " << name << ": " << counts.first << " pass, " << counts.second
                  << " fail\n";
    return failed == 0 ? 0 : 1;
}

// --- detect --------------------------------------------------------------------

struct DetectConfig {
    std::string family;
    std::string state_file;
    std::size_t d = 0;
    double q = -1.0, x = -2.0, p = -2.0;
    std::string criterion = "F";
    std::string f_string = "sld";
    std::string preset;
    bool scaled = false;
    std::string out;
};

DetectionReport run_detect_point(const DensityMatrix& rho, const Geam& ga,
                                 const std::string& criterion, const std::string& f_string,
                                 bool scaled) {
    if (criterion == "F") {
        // the two local measurements form a conjugate pair, as the isotropic
        // closed form assumes
        return criterion_F(rho, ga, conjugate_geam(ga), parse_monotone(f_string), scaled);
    }
    // criterion G uses the same measurement on both sides
    if (criterion == "G") return criterion_G(rho, ga, ga, scaled);
    throw std::invalid_argument("criterion must be F or G");
}

int cmd_detect(const DetectConfig& cfg) {
    if (cfg.d < 2) throw std::invalid_argument("detect: --d is required (>= 2)");
    if (cfg.preset.empty()) throw std::invalid_argument("detect: --preset is required");
    GeamSpec spec = parse_preset(cfg.preset, cfg.d);
    Geam ga = construct_geam(spec, gell_mann_basis(cfg.d, spec.frame_sizes()));

    std::string family = cfg.family;
    double param = 0.0;
    DensityMatrix rho = [&]() {
        if (!cfg.state_file.empty()) {
            family = "file:" + cfg.state_file;
            DensityMatrix loaded = load_state_file(cfg.state_file);
            if (loaded.dim() != cfg.d * cfg.d)
                throw dimension_error("detect: state file dimension is not d^2");
            return loaded;
        }
        if (cfg.family.empty())
            throw std::invalid_argument("detect: need --family or --state");
        if (cfg.family == "isotropic")
            param = cfg.q;
        else if (cfg.family == "werner")
            param = cfg.x;
        else if (cfg.family == "werner-qubit")
            param = cfg.p;
        return build_reference(cfg.family, cfg.d, param).state;
    }();

    DetectionReport r = run_detect_point(rho, ga, cfg.criterion, cfg.f_string, cfg.scaled);
    r.state_description = family;
    r.param = param;
    write_output(cfg.out, report_to_json(r, spec_to_json(spec)).dump(2) + "\n");
    std::cerr << "detect: " << r.criterion << " value " << format_number(r.value)
              << " threshold " << format_number(r.threshold) << " -> " << to_string(r.verdict)
              << "\n";
    return 0;
}

// --- sweep ----------------------------------------------------------------------

struct SweepConfig {
    std::string family = "isotropic";
    std::size_t d = 2;
    double min = 0.0, max = 1.0, step = 1e-3;
    std::string criterion = "F";
    std::string f_string = "sld";
    std::string preset = "mub";
    bool scaled = false;
    std::string out;
};

int cmd_sweep(const SweepConfig& cfg) {
    if (!(cfg.step > 0.0)) throw std::invalid_argument("sweep: --step must be positive");
    if (!(cfg.max > cfg.min)) throw std::invalid_argument("sweep: empty parameter range");
    GeamSpec spec = parse_preset(cfg.preset, cfg.d);
    Geam ga = construct_geam(spec, gell_mann_basis(cfg.d, spec.frame_sizes()));

    std::size_t npts = static_cast<std::size_t>((cfg.max - cfg.min) / cfg.step + 0.5) + 1;
    std::vector<DetectionReport> rows(npts);
    parallel_for(npts, [&](std::size_t i) {
        double param = cfg.min + static_cast<double>(i) * cfg.step;
        if (param > cfg.max) param = cfg.max;
        DensityMatrix rho = build_reference(cfg.family, cfg.d, param).state;
        rows[i] = run_detect_point(rho, ga, cfg.criterion, cfg.f_string, cfg.scaled);
        rows[i].param = param;
    });

    std::string csv = "param,value,threshold,verdict\n";
    for (const DetectionReport& r : rows)
        csv += format_number(r.param) + ',' + format_number(r.value) + ',' +
               format_number(r.threshold) + ',' + to_string(r.verdict) + '\n';

    // Empirical critical parameter: midpoint of the first adjacent verdict flip.
    bool found = false;
    double critical = 0.0;
    for (std::size_t i = 0; i + 1 < npts; ++i) {
        if (rows[i].verdict != rows[i + 1].verdict) {
            critical = 0.5 * (rows[i].param + rows[i + 1].param);
            found = true;
            break;
        }
    }
    csv += found ? "# critical," + format_number(critical) + "\n" : "# critical,none\n";
    write_output(cfg.out, csv);
    if (found)
        std::cerr << "sweep: verdict flips near " << cfg.family << " param "
                  << format_number(critical) << "\n";
    else
        std::cerr << "sweep: no verdict change in [" << cfg.min << ", " << cfg.max << "]\n";
    return 0;
}

// --- geam-check -------------------------------------------------------------------

struct CheckConfig {
    std::string preset;
    std::size_t d = 0;
    std::string signs_list;
    double tolerance = 1e-10;
    std::string out;
};

int cmd_geam_check(const CheckConfig& cfg) {
    if (cfg.d < 2) throw std::invalid_argument("geam-check: --d is required (>= 2)");
    if (cfg.preset.empty()) throw std::invalid_argument("geam-check: --preset is required");
    GeamSpec spec = parse_preset(cfg.preset, cfg.d);
    std::vector<int> signs;
    if (!cfg.signs_list.empty()) {
        for (const std::string& s : split_list(cfg.signs_list)) signs.push_back(std::stoi(s));
        if (signs.size() != spec.frames())
            throw std::invalid_argument("geam-check: need one sign per frame");
    }
    HermitianBasis basis = gell_mann_basis(cfg.d, spec.frame_sizes());
    Geam g = construct_geam(spec, basis, signs);
    ValidationReport report = validate_geam(g, cfg.tolerance);

    json j;
    j["spec"] = spec_to_json(spec, signs);
    j["tolerance"] = cfg.tolerance;
    j["min_eigenvalue"] = g.min_eigenvalue;
    j["max_feasible_S"] = max_feasible_s(spec, basis, signs);
    json checks = json::array();
    // positivity depends on the chosen Hermitian basis and is reported, not
    // required; validity means the trace conditions hold
    bool traces_pass = true, positive = true;
    for (const ValidationCheck& c : report.checks) {
        checks.push_back({{"name", c.name}, {"max_deviation", c.max_deviation}, {"pass", c.pass}});
        if (c.name == "positivity")
            positive = c.pass;
        else
            traces_pass = traces_pass && c.pass;
    }
    j["checks"] = checks;
    j["valid"] = traces_pass;
    j["positive"] = positive;
    write_output(cfg.out, j.dump(2) + "\n");
    std::cerr << "geam-check: " << cfg.preset << " d=" << cfg.d
              << (traces_pass ? " valid" : " INVALID") << (positive ? "" : ", not positive")
              << ", max feasible S " << format_number(j["max_feasible_S"].get<double>()) << "\n";
    return traces_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conical 2-design equiangular measurements: coherence identities and "
                 "entanglement criteria"};
    app.require_subcommand(1);

    VerifyConfig vc;
    CLI::App* verify = app.add_subcommand("verify", "run the identity suite over a grid");
    verify->add_option("--d", vc.d_list, "dimensions, comma separated")->capture_default_str();
    verify->add_option("--f", vc.f_list, "monotone functions (sld, wy, wyd:a, gwyd:a,b)")
        ->capture_default_str();
    verify->add_option("--preset", vc.preset_list,
                       "measurement presets (mub, mum:b, sic, gsic:b, nm:N,M[,b])")
        ->capture_default_str();
    verify->add_option("--states", vc.states, "random states per grid point")
        ->capture_default_str();
    verify->add_option("--seed", vc.seed, "rng seed")->capture_default_str();
    verify->add_option("--tolerance", vc.tolerance, "residual tolerance")->capture_default_str();
    verify->add_option("--samples", vc.samples, "Haar Monte-Carlo sample count")
        ->capture_default_str();
    verify->add_flag("--no-mc", vc.no_mc, "skip the Haar Monte-Carlo check");
    verify->add_option("--out", vc.out, "output path (default stdout)");
    verify->add_option("--format", vc.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    DetectConfig dc;
    CLI::App* detect = app.add_subcommand("detect", "entanglement criteria on one state");
    detect->add_option("--family", dc.family, "isotropic, werner, or werner-qubit");
    detect->add_option("--state", dc.state_file, "state file (JSON rows of [re,im] pairs)");
    detect->add_option("--d", dc.d, "local dimension");
    detect->add_option("--q", dc.q, "isotropic mixing parameter");
    detect->add_option("--x", dc.x, "werner parameter");
    detect->add_option("--p", dc.p, "two-qubit werner parameter");
    detect->add_option("--criterion", dc.criterion, "F or G")->capture_default_str();
    detect->add_option("--f", dc.f_string, "monotone function for criterion F")
        ->capture_default_str();
    detect->add_option("--preset", dc.preset, "measurement preset");
    detect->add_flag("--scaled", dc.scaled, "use the symmetric-measurement scaling");
    detect->add_option("--out", dc.out, "output path (default stdout)");

    SweepConfig sc;
    CLI::App* sweep = app.add_subcommand("sweep", "criterion value over a parameter range");
    sweep->add_option("--family", sc.family, "isotropic, werner, or werner-qubit")
        ->capture_default_str();
    sweep->add_option("--d", sc.d, "local dimension")->capture_default_str();
    sweep->add_option("--min", sc.min, "range start")->capture_default_str();
    sweep->add_option("--max", sc.max, "range end")->capture_default_str();
    sweep->add_option("--step", sc.step, "range step")->capture_default_str();
    sweep->add_option("--criterion", sc.criterion, "F or G")->capture_default_str();
    sweep->add_option("--f", sc.f_string, "monotone function for criterion F")
        ->capture_default_str();
    sweep->add_option("--preset", sc.preset, "measurement preset")->capture_default_str();
    sweep->add_flag("--scaled", sc.scaled, "use the symmetric-measurement scaling");
    sweep->add_option("--out", sc.out, "output path (default stdout)");

    CheckConfig cc;
    CLI::App* check = app.add_subcommand("geam-check", "validate a measurement preset");
    check->add_option("--preset", cc.preset, "measurement preset");
    check->add_option("--d", cc.d, "dimension");
    check->add_option("--signs", cc.signs_list, "per-frame signs, e.g. 1,-1,1");
    check->add_option("--tolerance", cc.tolerance, "validation tolerance")
        ->capture_default_str();
    check->add_option("--out", cc.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(vc);
        if (detect->parsed()) return cmd_detect(dc);
        if (sweep->parsed()) return cmd_sweep(sc);
        return cmd_geam_check(cc);
    } catch (const geamlab::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

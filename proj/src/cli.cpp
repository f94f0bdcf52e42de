#include "qwalk/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/report.hpp"

namespace qwalk {

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OutputOptions {
    std::string out = "-";
    std::string format = "csv";
    std::string plot;
};

struct WalkOptions {
    std::string kind;
    std::string disorder_case;
    std::string theta1 = "0";
    std::string theta2 = "0";
    std::string half_width = "1/4";
    double egamma = 1.1;
    int num_sites = 120;
    std::uint64_t seed = 0;
    int realization = 0;
};

struct Settings {
    OutputOptions output;
    WalkOptions walk;
    int num_k = 512;
    int num_realizations = 200;
    double circle_tol = default_circle_tol;
    double degeneracy_tol = default_degeneracy_tol;
    bool check_t = false;
    int threads = 0;
    std::string axis1 = "-1/2:1/2:41";
    std::string axis2 = "-1/2:1/2:41";
    std::string symmetry;
    std::string frame = "symmetric";
    bool symmetrize = false;
    bool vectors = false;
    bool verify_all = false;
    bool verify_bloch = false;
    bool verify_elemental = false;
    bool verify_symmetry = false;
};

double gamma_from(double egamma)
{
    if (!(egamma >= 1.0) || !std::isfinite(egamma))
        throw UsageError("--egamma must be a finite value >= 1 (the sign of gamma is fixed by --kind/--case)");
    return std::log(egamma);
}

void add_output(CLI::App* sub, OutputOptions& o, bool with_plot)
{
    sub->add_option("--out,-o", o.out, "Output file ('-' for stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (with_plot)
        sub->add_option("--plot", o.plot, "Write an SVG of the eigenvalues in the complex plane");
}

void add_angles(CLI::App* sub, WalkOptions& w)
{
    sub->add_option("--theta1,--mean-theta1", w.theta1, "Coin angle 1 (or its mean), multiple of pi");
    sub->add_option("--theta2,--mean-theta2", w.theta2, "Coin angle 2 (or its mean), multiple of pi");
    sub->add_option("--egamma", w.egamma, "Gain/loss factor e^gamma (>= 1)");
}

void add_lattice(CLI::App* sub, WalkOptions& w)
{
    sub->add_option("--n", w.num_sites, "Number of lattice sites")->check(CLI::PositiveNumber);
    sub->add_option("--seed", w.seed, "Master seed for disorder sampling");
    sub->add_option("--half-width", w.half_width, "Box half-width, multiple of pi");
}

RunConfig capture_config(const CLI::App* sub)
{
    RunConfig config;
    config.subcommand = sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty())
            continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help" || name == "out" || name == "plot")
            continue;
        if (opt->get_type_size() == 0) {
            if (opt->count() > 0)
                config.flags.push_back(name);
            continue;
        }
        if (opt->count() > 0)
            config.options.emplace_back(name, opt->results().front());
        else if (!opt->get_default_str().empty())
            config.options.emplace_back(name, opt->get_default_str());
    }
    return config;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw UsageError("cannot write '" + path + "': check that the directory exists and is writable");
    file << text;
    if (!file)
        throw UsageError("failed while writing '" + path + "'");
}

void emit(const Settings& s, const RunConfig& config, Payload payload, std::ostream& out)
{
    ReportEnvelope envelope{tool_version(), current_timestamp(), config, std::move(payload)};
    write_text(s.output.out, serialize(envelope, format_from_string(s.output.format)), out);
}

DisorderSpec disorder_spec(const WalkOptions& w)
{
    if (w.disorder_case.empty())
        throw UsageError("--case is required (a, b, c or d)");
    DisorderSpec spec;
    spec.disorder_case = disorder_case_from_string(w.disorder_case);
    spec.mean_theta1 = parse_pi_multiple(w.theta1);
    spec.theta2 = parse_pi_multiple(w.theta2);
    spec.half_width = parse_pi_multiple(w.half_width);
    if (spec.half_width < 0)
        throw UsageError("--half-width must be non-negative");
    gamma_from(w.egamma);
    spec.gamma_exp = w.egamma;
    spec.lattice = LatticeSpec(w.num_sites);
    spec.master_seed = w.seed;
    return spec;
}

// Operator selected by --kind (homogeneous) or --case (one disorder realization).
struct SelectedWalk {
    WalkOperator op;
    std::string label;
};

SelectedWalk select_walk(const WalkOptions& w, bool symmetrize)
{
    if (w.kind.empty() == w.disorder_case.empty())
        throw UsageError("give exactly one of --kind (homogeneous walk) or --case (disordered walk)");
    CoinField field;
    WalkKind kind;
    double gamma = gamma_from(w.egamma);
    std::string label;
    if (!w.kind.empty()) {
        kind = walk_kind_from_string(w.kind);
        field = CoinField::homogeneous(w.num_sites, parse_pi_multiple(w.theta1), parse_pi_multiple(w.theta2));
        label = to_string(kind) + " homogeneous";
    } else {
        const DisorderSpec spec = disorder_spec(w);
        kind = walk_kind(spec.disorder_case);
        field = sample_coin_field(spec, w.realization);
        label = "case " + to_string(spec.disorder_case) + " realization " + std::to_string(w.realization);
    }
    if (symmetrize) {
        field = symmetrize_reflection(field);
        label += " (reflection-symmetrized)";
    }
    const LatticeSpec lattice(w.num_sites);
    return {compose_walk(kind, field, gamma, lattice), label};
}

int cmd_dispersion(const Settings& s, const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (s.walk.kind.empty())
        throw UsageError("--kind is required (u1 or u2)");
    if (s.num_k < 2)
        throw UsageError("--num-k must be at least 2");
    const BandScan scan = band_scan(walk_kind_from_string(s.walk.kind), parse_pi_multiple(s.walk.theta1),
                                    parse_pi_multiple(s.walk.theta2), gamma_from(s.walk.egamma), s.num_k);
    err << "max |Im eps| = " << format_double(scan.max_abs_imag()) << "\n";
    if (!s.output.plot.empty()) {
        std::vector<Complex> lambdas;
        for (const auto& p : scan.points) {
            lambdas.push_back(std::exp(Complex{0, -1} * p.eps_plus));
            lambdas.push_back(std::exp(Complex{0, -1} * p.eps_minus));
        }
        write_text(s.output.plot, spectrum_svg(lambdas, to_string(scan.kind) + " Bloch eigenvalues"), out);
    }
    emit(s, config, scan, out);
    return exit_success;
}

int cmd_spectrum(const Settings& s, const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const auto walk = select_walk(s.walk, false);
    const Spectrum spectrum = eigendecompose(walk.op);
    SpectrumSummary summary{walk.label, walk.op.provenance->kind, s.walk.num_sites, spectrum.eigenvalues,
                            classify_reality(spectrum, s.circle_tol)};
    err << walk.label << ": complex_fraction = " << format_double(summary.reality.complex_fraction)
        << ", max ||lambda|-1| = " << format_double(summary.reality.max_modulus_deviation) << "\n";
    if (!s.output.plot.empty())
        write_text(s.output.plot, spectrum_svg(summary.eigenvalues, walk.label), out);
    emit(s, config, std::move(summary), out);
    return exit_success;
}

int cmd_ensemble(const Settings& s, const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (s.num_realizations < 1)
        throw UsageError("--r must be at least 1");
    const DisorderSpec spec = disorder_spec(s.walk);
    SpectralOptions options;
    options.circle_tol = s.circle_tol;
    options.degeneracy_tol = s.degeneracy_tol;
    EnsembleReport report = run_ensemble(spec, s.num_realizations, s.check_t, options);
    err << "case " << to_string(spec.disorder_case) << ": any_complex = " << (report.any_complex ? "true" : "false")
        << ", mean_complex_fraction = " << format_double(report.mean_complex_fraction)
        << ", failures = " << report.failures.size() << "\n";
    for (const auto& f : report.failures)
        err << "  realization " << f.realization_index << " (seed " << f.seed_used << "): " << f.message << "\n";
    const bool failed = !report.failures.empty();
    emit(s, config, std::move(report), out);
    return failed ? exit_numerical : exit_success;
}

int cmd_phase_map(const Settings& s, const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (s.num_realizations < 1)
        throw UsageError("--r must be at least 1");
    WalkOptions w = s.walk;
    if (w.disorder_case.empty())
        throw UsageError("--case is required (a, c or d)");
    const DisorderSpec defaults = disorder_spec(w);
    SpectralOptions options;
    options.circle_tol = s.circle_tol;
    PhaseMapGrid grid = phase_map(defaults.disorder_case, parse_axis(s.axis1), parse_axis(s.axis2),
                                  s.num_realizations, defaults, options);
    int real_cells = 0;
    for (const auto& r : grid.presence)
        for (bool p : r)
            real_cells += p ? 0 : 1;
    err << "phase map case " << to_string(grid.disorder_case) << ": " << real_cells << " of "
        << grid.axis1.size() * grid.axis2.size() << " cells entirely real\n";
    emit(s, config, std::move(grid), out);
    return exit_success;
}

int cmd_check_symmetry(const Settings& s, std::ostream& out, std::ostream& err)
{
    const auto walk = select_walk(s.walk, s.symmetrize);
    const WalkKind kind = walk.op.provenance->kind;
    const std::string sym_name = s.symmetry.empty() ? (kind == WalkKind::u1_pt ? "pt" : "t") : s.symmetry;
    const auto action = build_symmetry(symmetry_kind_from_string(sym_name), walk.op.lattice);
    const TimeFrame frame = s.frame == "as-built" ? TimeFrame::as_built : TimeFrame::symmetric;

    nlohmann::json doc = {{"operator", walk.label},
                          {"symmetry", sym_name},
                          {"frame", s.frame},
                          {"relation_residual", check_antiunitary_relation(walk.op, action, frame)}};
    if (s.vectors) {
        Spectrum spectrum = eigendecompose(walk.op);
        if (frame == TimeFrame::symmetric)
            spectrum = to_symmetry_frame(spectrum, walk.op.provenance->field, walk.op.lattice);
        const auto report = check_eigenvector_symmetry(spectrum, action, s.degeneracy_tol);
        doc["eigenvector_max_residual"] = report.max_residual();
        doc["degenerate_groups"] = report.degenerate_groups.size();
        doc["undefined_overlap"] = report.undefined_overlap.size();
        doc["complex_fraction"] = classify_reality(spectrum, s.circle_tol).complex_fraction;
    }
    std::string text;
    if (s.output.format == "json") {
        text = doc.dump(1) + "\n";
    } else {
        text = "quantity,value\n";
        for (const auto& [key, value] : doc.items())
            text += key + "," + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
    write_text(s.output.out, text, out);
    (void)err;
    return exit_success;
}

struct Gate {
    std::string name;
    double value;
    double tolerance;
    bool below;  // pass when value < tolerance, else when value > tolerance
    bool passed() const { return below ? value < tolerance : value > tolerance; }
};

int cmd_verify(const Settings& s, std::ostream& out)
{
    const bool all = s.verify_all || !(s.verify_bloch || s.verify_elemental || s.verify_symmetry);
    std::vector<Gate> gates;
    const double g11 = std::log(1.1);

    if (all || s.verify_bloch) {
        struct Case {
            WalkKind kind;
            double t1, t2, gamma;
        };
        const Case cases[] = {{WalkKind::u1_pt, pi / 3, -pi / 12, g11},
                              {WalkKind::u2_trs, pi / 3, -pi / 12, g11},
                              {WalkKind::u2_trs, pi / 4, pi / 20, g11},
                              {WalkKind::u1_pt, pi / 3, -pi / 12, std::log(2.2)}};
        for (const auto& c : cases)
            for (int n : {8, 120}) {
                const auto check = verify_bloch_vs_lattice(c.kind, c.t1, c.t2, c.gamma, n, 1e-8);
                gates.push_back({"bloch-vs-lattice " + to_string(c.kind) + " N=" + std::to_string(n)
                                     + " e^g=" + format_double(std::exp(c.gamma)),
                                 check.max_mismatch, 1e-8, true});
            }
        for (auto kind : {WalkKind::u1_pt, WalkKind::u2_trs}) {
            const auto check = verify_bloch_vs_lattice(kind, 0.3, -1.1, 0.0, 8, 1e-10);
            gates.push_back({"bloch-vs-lattice unitary " + to_string(kind) + " N=8", check.max_mismatch, 1e-10, true});
        }
    }
    if (all || s.verify_elemental) {
        const auto report = verify_elemental_relations(1e-14);
        for (const auto& r : report.relations)
            gates.push_back({"elemental " + r.name, r.max_residual, 1e-14, true});
    }
    if (all || s.verify_symmetry) {
        const LatticeSpec lattice(24);
        const auto pt = build_symmetry(SymmetryKind::parity_time, lattice);
        const auto t = build_symmetry(SymmetryKind::time_reversal, lattice);
        const auto u1 = compose_walk(WalkKind::u1_pt, CoinField::homogeneous(24, pi / 3, -pi / 12), g11, lattice);
        gates.push_back({"PT relation, homogeneous U1", check_antiunitary_relation(u1, pt), 1e-10, true});
        gates.push_back({"T relation broken, homogeneous U1", check_antiunitary_relation(u1, t), 0.01, false});
        DisorderSpec spec;
        spec.disorder_case = DisorderCase::D;
        spec.mean_theta1 = pi / 4;
        spec.theta2 = pi / 20;
        spec.lattice = lattice;
        spec.master_seed = s.walk.seed;
        const auto field = sample_coin_field(spec, 0);
        const auto u2 = compose_walk(WalkKind::u2_trs, field, g11, lattice);
        gates.push_back({"T relation, disordered U2", check_antiunitary_relation(u2, t), 1e-10, true});
        const auto u1s = compose_walk(WalkKind::u1_pt, symmetrize_reflection(field), g11, lattice);
        gates.push_back({"PT relation, reflection-symmetric disordered U1", check_antiunitary_relation(u1s, pt),
                         1e-10, true});
    }

    bool ok = true;
    std::string text;
    for (const auto& g : gates) {
        ok = ok && g.passed();
        text += std::string(g.passed() ? "PASS " : "FAIL ") + g.name + ": " + format_double(g.value)
                + (g.below ? " < " : " > ") + format_double(g.tolerance) + "\n";
    }
    write_text(s.output.out, text, out);
    return ok ? exit_success : exit_verification;
}

void configure_threads(int requested)
{
    if (requested > 0) {
        omp_set_num_threads(requested);
        return;
    }
    if (const char* env = std::getenv(threads_env_var); env && *env) {
        const int n = std::atoi(env);
        if (n > 0)
            omp_set_num_threads(n);
    }
}

}  // namespace

double parse_pi_multiple(const std::string& text)
{
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v))
            throw UsageError("invalid angle '" + text + "': expected a multiple of pi such as 1/3, -1/12 or 0.25");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string::npos)
        return number(text) * pi;
    const double num = number(text.substr(0, slash));
    const double den = number(text.substr(slash + 1));
    if (den == 0)
        throw UsageError("invalid angle '" + text + "': zero denominator");
    return num / den * pi;
}

std::vector<double> parse_axis(const std::string& text)
{
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos)
        throw UsageError("invalid axis '" + text + "': expected lo:hi:count, e.g. -1/2:1/2:41");
    const double lo = parse_pi_multiple(text.substr(0, first));
    const double hi = parse_pi_multiple(text.substr(first + 1, second - first - 1));
    int count = 0;
    try {
        count = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        count = 0;
    }
    if (count < 1)
        throw UsageError("invalid axis '" + text + "': count must be a positive integer");
    std::vector<double> axis(count);
    for (int i = 0; i < count; ++i)
        axis[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return axis;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral laboratory for non-unitary two-step quantum walks", "qwalk"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());
    Settings s;

    auto* dispersion = app.add_subcommand("dispersion", "Closed-form quasi-energy bands over a k-grid");
    dispersion->add_option("--kind", s.walk.kind, "u1 (PT-symmetric) or u2 (time-reversal symmetric)")
        ->check(CLI::IsMember({"u1", "u2"}));
    add_angles(dispersion, s.walk);
    dispersion->add_option("--num-k", s.num_k, "Number of momenta in (-pi, pi]");
    add_output(dispersion, s.output, true);

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of one lattice operator");
    spectrum->add_option("--kind", s.walk.kind, "Homogeneous walk: u1 or u2")->check(CLI::IsMember({"u1", "u2"}));
    spectrum->add_option("--case", s.walk.disorder_case, "Disordered walk: a, b, c or d")
        ->check(CLI::IsMember({"a", "b", "c", "d", "A", "B", "C", "D"}));
    add_angles(spectrum, s.walk);
    add_lattice(spectrum, s.walk);
    spectrum->add_option("--realization", s.walk.realization, "Disorder realization index")
        ->check(CLI::NonNegativeNumber);
    spectrum->add_option("--tol", s.circle_tol, "Unit-circle tolerance on ||lambda| - 1|")->check(CLI::PositiveNumber);
    add_output(spectrum, s.output, true);

    auto* ensemble = app.add_subcommand("ensemble", "Disorder ensemble statistics for cases a-d");
    ensemble->add_option("--case", s.walk.disorder_case, "a, b, c or d")
        ->check(CLI::IsMember({"a", "b", "c", "d", "A", "B", "C", "D"}));
    add_angles(ensemble, s.walk);
    add_lattice(ensemble, s.walk);
    ensemble->add_option("--r", s.num_realizations, "Number of realizations");
    ensemble->add_option("--tol", s.circle_tol, "Unit-circle tolerance")->check(CLI::PositiveNumber);
    ensemble->add_option("--degeneracy-tol", s.degeneracy_tol, "Eigenvalue clustering tolerance")
        ->check(CLI::PositiveNumber);
    ensemble->add_flag("--check-t", s.check_t, "Check T-symmetry of eigenvectors (cases c, d)");
    ensemble->add_option("--threads", s.threads, "OpenMP threads (default: QWALK_NUM_THREADS or runtime)");
    add_output(ensemble, s.output, false);

    auto* phase = app.add_subcommand("phase-map", "Presence/ratio of complex quasi-energies over a grid of means");
    phase->add_option("--case", s.walk.disorder_case, "a, c or d")
        ->check(CLI::IsMember({"a", "b", "c", "d", "A", "B", "C", "D"}));
    phase->add_option("--axis1", s.axis1, "Mean theta1 grid lo:hi:count (multiples of pi)");
    phase->add_option("--axis2", s.axis2, "theta2 (or its mean) grid lo:hi:count");
    phase->add_option("--egamma", s.walk.egamma, "Gain/loss factor e^gamma (>= 1)");
    add_lattice(phase, s.walk);
    phase->add_option("--r", s.num_realizations, "Realizations per cell");
    phase->add_option("--tol", s.circle_tol, "Unit-circle tolerance")->check(CLI::PositiveNumber);
    phase->add_option("--threads", s.threads, "OpenMP threads");
    add_output(phase, s.output, false);

    auto* check = app.add_subcommand("check-symmetry", "Operator and eigenvector symmetry relations");
    check->add_option("--kind", s.walk.kind, "Homogeneous walk: u1 or u2")->check(CLI::IsMember({"u1", "u2"}));
    check->add_option("--case", s.walk.disorder_case, "Disordered walk: a, b, c or d")
        ->check(CLI::IsMember({"a", "b", "c", "d", "A", "B", "C", "D"}));
    add_angles(check, s.walk);
    add_lattice(check, s.walk);
    check->add_option("--realization", s.walk.realization, "Disorder realization index")
        ->check(CLI::NonNegativeNumber);
    check->add_option("--symmetry", s.symmetry, "p, t or pt (default: pt for u1, t for u2)")
        ->check(CLI::IsMember({"p", "t", "pt"}));
    check->add_option("--frame", s.frame, "symmetric or as-built")->check(CLI::IsMember({"symmetric", "as-built"}));
    check->add_flag("--symmetrize", s.symmetrize, "Enforce theta(n) = theta(-n) on the sampled field");
    check->add_flag("--vectors", s.vectors, "Also check the eigenvectors");
    check->add_option("--tol", s.circle_tol, "Unit-circle tolerance")->check(CLI::PositiveNumber);
    add_output(check, s.output, false);

    auto* verify = app.add_subcommand("verify", "Run the built-in residual gates");
    verify->add_flag("--all", s.verify_all, "All gates (default)");
    verify->add_flag("--bloch", s.verify_bloch, "Bloch dispersion vs lattice spectrum");
    verify->add_flag("--elemental", s.verify_elemental, "Coin-space elemental symmetry relations");
    verify->add_flag("--symmetry", s.verify_symmetry, "Operator-level symmetry relations");
    verify->add_option("--seed", s.walk.seed, "Seed of the disordered operator used in the symmetry gates");
    verify->add_option("--out,-o", s.output.out, "Output file ('-' for stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty())
            reversed.pop_back();
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "qwalk: " << e.what() << " (run 'qwalk --help' for usage)\n";
        return exit_usage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const RunConfig config = capture_config(sub);
    configure_threads(s.threads);

    try {
        const std::string name = sub->get_name();
        if (name == "dispersion")
            return cmd_dispersion(s, config, out, err);
        if (name == "spectrum")
            return cmd_spectrum(s, config, out, err);
        if (name == "ensemble")
            return cmd_ensemble(s, config, out, err);
        if (name == "phase-map")
            return cmd_phase_map(s, config, out, err);
        if (name == "check-symmetry")
            return cmd_check_symmetry(s, out, err);
        return cmd_verify(s, out);
    } catch (const SolverError& e) {
        err << "qwalk: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const SingularityError& e) {
        err << "qwalk: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const SingularSpectrumError& e) {
        err << "qwalk: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "qwalk: " << e.what() << "\n";
        return exit_usage;
    }
}

int run_cli(int argc, char** argv)
{
    return run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace qwalk

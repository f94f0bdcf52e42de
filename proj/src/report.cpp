#include "qwalk/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <sstream>

#include "json.hpp"

#ifndef QWALK_VERSION
#define QWALK_VERSION "0.0.0"
#endif

namespace qwalk {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

json to_json(Complex c)
{
    return json::array({c.real(), c.imag()});
}

Complex complex_from(const json& j)
{
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

// NaN is written as null.
double double_from(const json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<double> doubles_from(const json& j)
{
    std::vector<double> out;
    for (const auto& x : j)
        out.push_back(double_from(x));
    return out;
}

json to_json(const std::vector<Complex>& values)
{
    json a = json::array();
    for (Complex c : values)
        a.push_back(to_json(c));
    return a;
}

std::vector<Complex> complexes_from(const json& j)
{
    std::vector<Complex> out;
    for (const auto& x : j)
        out.push_back(complex_from(x));
    return out;
}

json to_json(const RealityReport& r)
{
    return {{"on_circle", r.on_circle},
            {"max_modulus_deviation", r.max_modulus_deviation},
            {"num_complex", r.num_complex},
            {"complex_fraction", r.complex_fraction},
            {"tolerance_used", r.tolerance_used}};
}

RealityReport reality_from(const json& j)
{
    RealityReport r;
    r.on_circle = j.at("on_circle").get<std::vector<bool>>();
    r.max_modulus_deviation = j.at("max_modulus_deviation").get<double>();
    r.num_complex = j.at("num_complex").get<int>();
    r.complex_fraction = j.at("complex_fraction").get<double>();
    r.tolerance_used = j.at("tolerance_used").get<double>();
    return r;
}

json to_json(const EigenvectorSymmetryReport& r)
{
    json groups = json::array();
    for (const auto& g : r.degenerate_groups)
        groups.push_back({{"indices", g.indices}, {"subspace_residual", g.subspace_residual}});
    return {{"deltas", r.deltas},
            {"residuals", r.residuals},
            {"degenerate_groups", groups},
            {"undefined_overlap", r.undefined_overlap}};
}

EigenvectorSymmetryReport eigenvector_report_from(const json& j)
{
    EigenvectorSymmetryReport r;
    r.deltas = doubles_from(j.at("deltas"));
    r.residuals = doubles_from(j.at("residuals"));
    for (const auto& g : j.at("degenerate_groups"))
        r.degenerate_groups.push_back(
            {g.at("indices").get<std::vector<int>>(), g.at("subspace_residual").get<double>()});
    r.undefined_overlap = j.at("undefined_overlap").get<std::vector<int>>();
    return r;
}

json to_json(const DisorderSpec& s)
{
    return {{"case", to_string(s.disorder_case)},
            {"mean_theta1", s.mean_theta1},
            {"theta2", s.theta2},
            {"half_width", s.half_width},
            {"gamma_exp", s.gamma_exp},
            {"num_sites", s.lattice.num_sites()},
            {"master_seed", s.master_seed}};
}

DisorderSpec disorder_spec_from(const json& j)
{
    DisorderSpec s;
    s.disorder_case = disorder_case_from_string(j.at("case").get<std::string>());
    s.mean_theta1 = j.at("mean_theta1").get<double>();
    s.theta2 = j.at("theta2").get<double>();
    s.half_width = j.at("half_width").get<double>();
    s.gamma_exp = j.at("gamma_exp").get<double>();
    s.lattice = LatticeSpec(j.at("num_sites").get<int>());
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    return s;
}

json to_json(const SpectralOptions& o)
{
    return {{"circle_tol", o.circle_tol}, {"solver_tol", o.solver_tol}, {"degeneracy_tol", o.degeneracy_tol}};
}

SpectralOptions options_from(const json& j)
{
    return {j.at("circle_tol").get<double>(), j.at("solver_tol").get<double>(),
            j.at("degeneracy_tol").get<double>()};
}

json payload_json(const BandScan& s)
{
    json points = json::array();
    for (const auto& p : s.points)
        points.push_back({{"k", p.k},
                          {"eps_plus", to_json(p.eps_plus)},
                          {"eps_minus", to_json(p.eps_minus)},
                          {"cos_eps", to_json(p.cos_eps)}});
    return {{"kind", to_string(s.kind)},
            {"theta1", s.theta1},
            {"theta2", s.theta2},
            {"gamma", s.gamma},
            {"points", points}};
}

json payload_json(const SpectrumSummary& s)
{
    return {{"label", s.label},
            {"kind", to_string(s.kind)},
            {"num_sites", s.num_sites},
            {"eigenvalues", to_json(s.eigenvalues)},
            {"reality", to_json(s.reality)}};
}

json payload_json(const EnsembleReport& r)
{
    json realizations = json::array();
    for (const auto& x : r.per_realization) {
        json item = {{"index", x.realization_index}, {"seed", x.seed_used}, {"reality", to_json(x.reality)}};
        if (x.eigenvector_symmetry)
            item["eigenvector_symmetry"] = to_json(*x.eigenvector_symmetry);
        if (!x.eigenvalues.empty())
            item["eigenvalues"] = to_json(x.eigenvalues);
        realizations.push_back(std::move(item));
    }
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"index", f.realization_index}, {"seed", f.seed_used}, {"message", f.message}});
    return {{"spec", to_json(r.spec)},
            {"options", to_json(r.options)},
            {"num_realizations", r.num_realizations},
            {"any_complex", r.any_complex},
            {"mean_complex_fraction", r.mean_complex_fraction},
            {"realizations", realizations},
            {"failures", failures}};
}

json payload_json(const PhaseMapGrid& g)
{
    return {{"case", to_string(g.disorder_case)},
            {"axis1", g.axis1},
            {"axis2", g.axis2},
            {"presence", g.presence},
            {"ratio", g.ratio},
            {"num_realizations", g.num_realizations},
            {"defaults", to_json(g.defaults)}};
}

BandScan band_scan_from(const json& j)
{
    BandScan s;
    s.kind = walk_kind_from_string(j.at("kind").get<std::string>());
    s.theta1 = j.at("theta1").get<double>();
    s.theta2 = j.at("theta2").get<double>();
    s.gamma = j.at("gamma").get<double>();
    for (const auto& p : j.at("points"))
        s.points.push_back({p.at("k").get<double>(), complex_from(p.at("eps_plus")),
                            complex_from(p.at("eps_minus")), complex_from(p.at("cos_eps"))});
    return s;
}

SpectrumSummary spectrum_from(const json& j)
{
    SpectrumSummary s;
    s.label = j.at("label").get<std::string>();
    s.kind = walk_kind_from_string(j.at("kind").get<std::string>());
    s.num_sites = j.at("num_sites").get<int>();
    s.eigenvalues = complexes_from(j.at("eigenvalues"));
    s.reality = reality_from(j.at("reality"));
    return s;
}

EnsembleReport ensemble_from(const json& j)
{
    EnsembleReport r;
    r.spec = disorder_spec_from(j.at("spec"));
    r.options = options_from(j.at("options"));
    r.num_realizations = j.at("num_realizations").get<int>();
    r.any_complex = j.at("any_complex").get<bool>();
    r.mean_complex_fraction = j.at("mean_complex_fraction").get<double>();
    for (const auto& x : j.at("realizations")) {
        RealizationResult res;
        res.realization_index = x.at("index").get<int>();
        res.seed_used = x.at("seed").get<std::uint64_t>();
        res.reality = reality_from(x.at("reality"));
        if (x.contains("eigenvector_symmetry"))
            res.eigenvector_symmetry = eigenvector_report_from(x.at("eigenvector_symmetry"));
        if (x.contains("eigenvalues"))
            res.eigenvalues = complexes_from(x.at("eigenvalues"));
        r.per_realization.push_back(std::move(res));
    }
    for (const auto& f : j.at("failures"))
        r.failures.push_back(
            {f.at("index").get<int>(), f.at("seed").get<std::uint64_t>(), f.at("message").get<std::string>()});
    return r;
}

PhaseMapGrid phase_map_from(const json& j)
{
    PhaseMapGrid g;
    g.disorder_case = disorder_case_from_string(j.at("case").get<std::string>());
    g.axis1 = j.at("axis1").get<std::vector<double>>();
    g.axis2 = j.at("axis2").get<std::vector<double>>();
    g.presence = j.at("presence").get<std::vector<std::vector<bool>>>();
    g.ratio = j.at("ratio").get<std::vector<std::vector<double>>>();
    g.num_realizations = j.at("num_realizations").get<int>();
    g.defaults = disorder_spec_from(j.at("defaults"));
    return g;
}

std::string payload_type(const Payload& p)
{
    return std::visit(overloaded{[](const BandScan&) { return "band_scan"; },
                                 [](const SpectrumSummary&) { return "spectrum"; },
                                 [](const EnsembleReport&) { return "ensemble"; },
                                 [](const PhaseMapGrid&) { return "phase_map"; }},
                      p);
}

json config_json(const RunConfig& c)
{
    json options = json::array();
    for (const auto& [name, value] : c.options)
        options.push_back(json::array({name, value}));
    return {{"subcommand", c.subcommand}, {"options", options}, {"flags", c.flags}, {"command", c.command_line()}};
}

RunConfig config_from(const json& j)
{
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& o : j.at("options"))
        c.options.emplace_back(o.at(0).get<std::string>(), o.at(1).get<std::string>());
    c.flags = j.at("flags").get<std::vector<std::string>>();
    return c;
}

std::string row(std::initializer_list<std::string> cells)
{
    std::string out;
    for (const auto& c : cells) {
        if (!out.empty())
            out += ',';
        out += c;
    }
    return out + '\n';
}

std::string csv_body(const BandScan& s)
{
    std::string out = row({"k", "re_eps_plus", "im_eps_plus", "re_eps_minus", "im_eps_minus", "re_lambda_plus",
                           "im_lambda_plus", "re_lambda_minus", "im_lambda_minus"});
    const Complex minus_i{0.0, -1.0};
    for (const auto& p : s.points) {
        const Complex lp = std::exp(minus_i * p.eps_plus), lm = std::exp(minus_i * p.eps_minus);
        out += row({format_double(p.k), format_double(p.eps_plus.real()), format_double(p.eps_plus.imag()),
                    format_double(p.eps_minus.real()), format_double(p.eps_minus.imag()), format_double(lp.real()),
                    format_double(lp.imag()), format_double(lm.real()), format_double(lm.imag())});
    }
    return out;
}

std::string csv_body(const SpectrumSummary& s)
{
    std::string out = row({"index", "re_lambda", "im_lambda", "abs_lambda", "re_eps", "im_eps", "on_circle"});
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
        const Complex l = s.eigenvalues[j];
        const Complex eps = quasi_energy(l).epsilon;
        const bool on = j < s.reality.on_circle.size() && s.reality.on_circle[j];
        out += row({std::to_string(j), format_double(l.real()), format_double(l.imag()), format_double(std::abs(l)),
                    format_double(eps.real()), format_double(eps.imag()), on ? "1" : "0"});
    }
    return out;
}

std::string csv_body(const EnsembleReport& r)
{
    std::string out = "# any_complex: " + std::string(r.any_complex ? "true" : "false") + "\n";
    out += "# mean_complex_fraction: " + format_double(r.mean_complex_fraction) + "\n";
    out += "# failures: " + std::to_string(r.failures.size()) + "\n";
    out += row({"realization", "seed", "num_complex", "complex_fraction", "max_modulus_deviation", "max_t_residual"});
    for (const auto& x : r.per_realization)
        out += row({std::to_string(x.realization_index), std::to_string(x.seed_used),
                    std::to_string(x.reality.num_complex), format_double(x.reality.complex_fraction),
                    format_double(x.reality.max_modulus_deviation),
                    x.eigenvector_symmetry ? format_double(x.eigenvector_symmetry->max_residual()) : ""});
    return out;
}

std::string csv_body(const PhaseMapGrid& g)
{
    std::string out = row({"i", "j", "axis1", "axis2", "presence", "ratio"});
    for (std::size_t i = 0; i < g.axis1.size(); ++i)
        for (std::size_t j = 0; j < g.axis2.size(); ++j)
            out += row({std::to_string(i), std::to_string(j), format_double(g.axis1[i]), format_double(g.axis2[j]),
                        g.presence[i][j] ? "1" : "0", format_double(g.ratio[i][j])});
    return out;
}

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string svg_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace

std::string tool_version()
{
    return QWALK_VERSION;
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string RunConfig::command_line() const
{
    std::string out = "qwalk " + subcommand;
    for (const auto& [name, value] : options)
        out += " --" + name + "=" + value;
    for (const auto& f : flags)
        out += " --" + f;
    return out;
}

Format format_from_string(const std::string& name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "json")
        return Format::json;
    throw std::invalid_argument("unsupported format '" + name + "' (expected csv or json)");
}

std::string current_timestamp()
{
    std::time_t t;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch)
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string serialize(const ReportEnvelope& report, Format format)
{
    if (format == Format::json) {
        json doc = {{"tool", "qwalk"},
                    {"version", report.tool_version},
                    {"timestamp", report.timestamp},
                    {"config", config_json(report.config)},
                    {"payload_type", payload_type(report.payload)},
                    {"payload", std::visit([](const auto& p) { return payload_json(p); }, report.payload)}};
        return doc.dump(1) + "\n";
    }
    std::string out = "# qwalk " + report.tool_version + "\n";
    out += "# command: " + report.config.command_line() + "\n";
    out += std::visit([](const auto& p) { return csv_body(p); }, report.payload);
    return out;
}

ReportEnvelope parse_json(const std::string& text)
{
    const json doc = json::parse(text);
    ReportEnvelope r;
    r.tool_version = doc.at("version").get<std::string>();
    r.timestamp = doc.at("timestamp").get<std::string>();
    r.config = config_from(doc.at("config"));
    const auto type = doc.at("payload_type").get<std::string>();
    const json& p = doc.at("payload");
    if (type == "band_scan")
        r.payload = band_scan_from(p);
    else if (type == "spectrum")
        r.payload = spectrum_from(p);
    else if (type == "ensemble")
        r.payload = ensemble_from(p);
    else if (type == "phase_map")
        r.payload = phase_map_from(p);
    else
        throw std::invalid_argument("unknown payload type '" + type + "'");
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (line.back() == ',')
            cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string spectrum_svg(const std::vector<Complex>& eigenvalues, const std::string& title)
{
    double extent = 1.25;
    for (Complex l : eigenvalues)
        if (std::isfinite(std::abs(l)))
            extent = std::max(extent, 1.1 * std::max(std::abs(l.real()), std::abs(l.imag())));

    constexpr double size = 480.0, margin = 40.0;
    const double scale = (size - 2 * margin) / (2 * extent);
    const double cx = size / 2, cy = size / 2;
    auto px = [&](double x) { return svg_number(cx + scale * x); };
    auto py = [&](double y) { return svg_number(cy - scale * y); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n";
    svg << "<line x1=\"" << px(-extent) << "\" y1=\"" << py(0) << "\" x2=\"" << px(extent) << "\" y2=\"" << py(0)
        << "\" stroke=\"#888\" stroke-width=\"0.8\"/>\n";
    svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(-extent) << "\" x2=\"" << px(0) << "\" y2=\"" << py(extent)
        << "\" stroke=\"#888\" stroke-width=\"0.8\"/>\n";
    svg << "<circle id=\"unit-circle\" cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << svg_number(scale)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << size - margin << "\" y=\"" << svg_number(cy - 6)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">Re &#955;</text>\n";
    svg << "<text x=\"" << svg_number(cx + 6) << "\" y=\"" << margin
        << "\" font-family=\"sans-serif\" font-size=\"12\">Im &#955;</text>\n";
    svg << "<g fill=\"#c0392b\">\n";
    for (Complex l : eigenvalues)
        svg << "<circle cx=\"" << px(l.real()) << "\" cy=\"" << py(l.imag()) << "\" r=\"2.5\"/>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace qwalk

#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qwalk/dispersion.hpp"
#include "qwalk/disorder.hpp"

namespace qwalk {

std::string tool_version();

/// Resolved options of one CLI invocation, in declaration order.
struct RunConfig {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> options;
    std::vector<std::string> flags;

    /// Command line that regenerates the output.
    std::string command_line() const;
};

/// Eigenvalues of a single operator (homogeneous or one disorder realization).
struct SpectrumSummary {
    std::string label;
    WalkKind kind = WalkKind::u1_pt;
    int num_sites = 0;
    std::vector<Complex> eigenvalues;
    RealityReport reality;
};

using Payload = std::variant<BandScan, SpectrumSummary, EnsembleReport, PhaseMapGrid>;

struct ReportEnvelope {
    std::string tool_version;
    std::string timestamp;
    RunConfig config;
    Payload payload;
};

enum class Format { csv, json };

Format format_from_string(const std::string& name);

/// UTC ISO-8601; SOURCE_DATE_EPOCH wins over the wall clock when set.
std::string current_timestamp();

/// Delimited text: '#' provenance lines, header row, one row per record,
/// LF endings, %.17g numbers. Structured record: JSON document.
std::string serialize(const ReportEnvelope& report, Format format);

ReportEnvelope parse_json(const std::string& text);

/// Rows of a delimited-text document, comment lines skipped; first row is the header.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Static SVG of eigenvalues in the complex plane with the unit circle dashed.
std::string spectrum_svg(const std::vector<Complex>& eigenvalues, const std::string& title);

std::string format_double(double x);

}  // namespace qwalk

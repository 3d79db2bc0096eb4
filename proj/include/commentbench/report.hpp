#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "commentbench/analysis.hpp"

namespace commentbench {

// ---- CSV (RFC 4180) -------------------------------------------------------

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

/// Shortest round-trippable decimal form ("%.17g" trimmed).
std::string format_number(double value);

class CsvWriter {
  public:
    /// Throws DataError when the file cannot be opened.
    explicit CsvWriter(const std::filesystem::path& path);
    void row(const std::vector<std::string>& fields);

  private:
    std::ofstream out_;
};

void write_text(const std::filesystem::path& path, std::string_view content);

// ---- SVG 1.1 --------------------------------------------------------------

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

std::string line_plot_svg(const std::vector<Series>& series, const PlotOptions& options);

/// Offset-row hexagons drawn over a square count grid (see hexbin()).
std::string hexbin_svg(const std::vector<HexCell>& cells, std::size_t bins, const PlotOptions& options);

/// One violin per group with mean (solid) and quartile (dashed) lines.
std::string violin_svg(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                       const PlotOptions& options);

// ---- run manifests ----------------------------------------------------------

struct InputDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    nlohmann::json flags = nlohmann::json::object();
    nlohmann::json seeds = nlohmann::json::object();
    std::vector<InputDigest> inputs;
    std::vector<std::string> outputs;
    std::string tool_version;
    std::string timestamp; // ISO 8601 UTC

    nlohmann::json to_json() const;
};

std::string sha256_file(const std::filesystem::path& path);

/// Adds a digest entry for `path`.
void add_input(RunManifest& manifest, const std::filesystem::path& path);

std::string utc_timestamp();

std::string tool_version();

} // namespace commentbench

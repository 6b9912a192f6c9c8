#pragma once

#include "korenblum/carleson.hpp"
#include "korenblum/cyclicity.hpp"
#include "korenblum/feasibility.hpp"
#include "korenblum/majorant.hpp"
#include "korenblum/poisson.hpp"
#include "korenblum/premeasure.hpp"
#include "korenblum/singular.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace korenblum::cli {

using nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

using Row = std::vector<std::string>;

/// `# schema_version`, `# config`, extra `#` lines, header, rows.
std::string csv_text(const ordered_json& config, const std::vector<std::string>& comments, const Row& header,
                     const std::vector<Row>& rows);
void write_file(const std::string& path, const std::string& text);

/// %.17g.
std::string num(double x);
std::string big(const BigInt& x);

ordered_json to_json(const AdmissibilityReport& r);
ordered_json to_json(const GrowthClass& g);
ordered_json to_json(const NormEstimate& n);
ordered_json to_json(const SingularPartResult& r);
ordered_json to_json(const NonpositivityReport& r);
ordered_json to_json(const FeasibilityReport& r);
ordered_json to_json(const ProbeReport& r);
ordered_json to_json(const EntropySeries& s);
ordered_json to_json(const OmegaBoundReport& r);
ordered_json to_json(const VerdictReport& r);
ordered_json to_json(const SweepReport& s);

}  // namespace korenblum::cli

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uncvol/causality.hpp"
#include "uncvol/diagnostics.hpp"
#include "uncvol/egarch.hpp"
#include "uncvol/series.hpp"
#include "uncvol/stationarity.hpp"

namespace uncvol {

using json = nlohmann::ordered_json;

struct ColumnRef {
    std::string file;
    std::string date_column = "date";
    std::string column;
};

struct PipelineOptions {
    double scale = 1200.0;           // annualization factor for log differences
    bool extra_difference = false;   // first-difference all variables after transform
    bool difference_uncertainty = false;  // h series enter causality in differences
    int pretest_ar_order = 12;
    int adf_max_lags = 12;
    std::vector<int> causality_lags = {4, 8, 12};
    Criterion criterion = Criterion::aic;
    bool robust_se = false;
};

struct CountryConfig {
    std::string name;
    std::string regime;  // "currency_board" or "inflation_targeting"
    std::map<std::string, ColumnRef> data;  // cpi, ipi, interest_rate, oil, eu_ipi
    MeanSpec inflation_spec;
    MeanSpec output_spec;
};

struct RunConfig {
    std::string output_dir = "out";
    PipelineOptions options;
    std::vector<CountryConfig> countries;

    static RunConfig from_json(const json& j, const std::string& base_dir = "");
    static RunConfig from_file(const std::string& path);
};

struct PretestRow {
    std::string variable;
    UnitRootResult adf_level, pp_level, adf_diff, pp_diff;
};

struct ResidualDiagRow {
    std::string variable;  // "inflation" / "output"
    TestStat q12, q1_sq, q12_sq;
};

struct CountryReport {
    std::string name;
    std::string regime;
    SummaryStats pi_stats, y_stats;
    std::vector<PretestRow> pretests;
    std::vector<ResidualDiagRow> residual_diags;  // AR(p) pre-test residuals
    std::optional<EgarchFit> inflation_fit;
    std::optional<EgarchFit> output_fit;
    std::vector<CausalityResult> causality;
    std::string error;  // hard failure; other fields may be partial
    std::vector<std::string> notes;
};

struct RegimeGroupStats {
    std::string regime;
    int n_countries = 0;
    double mean_pi_std = 0.0;  // average inflation std-dev within the group
    double mean_y_std = 0.0;
};

struct RunReport {
    std::vector<CountryReport> countries;
    std::vector<RegimeGroupStats> regime_groups;
};

/// Full per-country workflow: transform, pre-tests, joint AR-EGARCH fits,
/// uncertainty extraction, causality battery. Countries run concurrently;
/// a hard per-country failure is recorded without aborting the run.
RunReport run_pipeline(const RunConfig& config);

json report_to_json(const RunReport& report);
RunReport report_from_json(const json& j);

/// Writes table1.md..table5.md, results.json and run.log into out_dir,
/// atomically (temp file then rename). `formats` may add "csv" copies.
void emit_tables(const RunReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats = {"md", "json"});

// --- cell formatting (shared by tables and tests) ---

/// Fixed decimals, trailing zeros trimmed: (0.615, 3) -> "0.615", (0.62, 3) -> "0.62".
std::string format_value(double v, int decimals);

/// Coefficient cell: "0.615 a" (star separated by a space), bare value when
/// insignificant.
std::string format_coefficient(double v, char star);

/// Granger cell: "29.41a (+)"; sign shown when significant at 10%; optimal
/// lag wrapped in underscores: "_29.41a (+)_".
std::string format_granger_cell(double f, char star, int sign, bool optimal);

}  // namespace uncvol

// Command-line front end for the uncertainty-volatility pipeline.
//
//   uncvol run      --config cfg.json [--out DIR] [--format md,json,csv]
//   uncvol fit      --config cfg.json --country NAME [--equation inflation|output]
//   uncvol test     --data FILE --column COL [--kind adf|pp|ljung_box|arch_lm|jb]
//   uncvol test     --kind granger --data FILE --column COL --data2 FILE2 --column2 COL2
//   uncvol simulate --out FILE [--seed N] [--t N] [model parameter flags]
//   uncvol report   --results results.json --out DIR [--format ...]
//
// Exit status is 0 on success; on failure a one-line JSON error summary is
// written to stderr and the status is non-zero.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uncvol/causality.hpp"
#include "uncvol/csv.hpp"
#include "uncvol/diagnostics.hpp"
#include "uncvol/egarch.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/pipeline.hpp"
#include "uncvol/simulate.hpp"
#include "uncvol/stationarity.hpp"

using namespace uncvol;

namespace {

std::vector<std::string> parse_formats(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    for (const auto& f : out)
        if (f != "md" && f != "json" && f != "csv")
            throw DomainError("unknown format '" + f + "' (expected md, json or csv)");
    return out;
}

void emit_json(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw LoadError("cannot write '" + out_path + "'");
    out << j.dump(2) << "\n";
}

json fit_to_summary(const EgarchFit& f) {
    json coeffs = json::array();
    auto add = [&](const Coefficient& c) {
        coeffs.push_back({{"label", c.label},
                          {"value", c.value},
                          {"std_error", c.std_error},
                          {"z", c.z_stat},
                          {"cell", format_coefficient(c.value, c.star)}});
    };
    for (const auto& c : f.mean_coefficients) add(c);
    for (const auto& c : f.variance_coefficients) add(c);
    return {{"coefficients", coeffs},
            {"log_likelihood", f.log_likelihood},
            {"r_squared", f.r_squared},
            {"f_statistic", f.f_statistic},
            {"converged", f.converged},
            {"variance_stationary", f.variance_stationary},
            {"n_obs", f.n_obs}};
}

int cmd_run(const std::string& config, const std::string& out, const std::string& formats) {
    RunConfig cfg = RunConfig::from_file(config);
    if (!out.empty()) cfg.output_dir = out;
    const RunReport report = run_pipeline(cfg);
    emit_tables(report, cfg.output_dir, parse_formats(formats));
    int failed = 0;
    for (const auto& c : report.countries) {
        if (c.error.empty()) continue;
        ++failed;
        std::cerr << json{{"country", c.name}, {"error", c.error}}.dump() << "\n";
    }
    std::cout << "wrote " << cfg.output_dir << " (" << report.countries.size() << " countries, "
              << failed << " failed)\n";
    return failed == 0 ? 0 : 1;
}

int cmd_fit(const std::string& config, const std::string& country, const std::string& equation,
            const std::string& out) {
    RunConfig cfg = RunConfig::from_file(config);
    for (auto it = cfg.countries.begin(); it != cfg.countries.end();)
        it = it->name == country ? std::next(it) : cfg.countries.erase(it);
    if (cfg.countries.empty()) throw LoadError("no country named '" + country + "' in config");
    const RunReport report = run_pipeline(cfg);
    const CountryReport& c = report.countries.front();
    if (!c.error.empty()) throw LoadError(c.error);
    const auto& fit = equation == "output" ? c.output_fit : c.inflation_fit;
    if (!fit) throw LoadError("no " + equation + " fit available");
    emit_json(fit_to_summary(*fit), out);
    return 0;
}

json teststat_summary(const TestStat& t, const std::string& name) {
    return {{"test", name},
            {"statistic", t.statistic},
            {"p_value", t.p_value},
            {"degenerate", t.degenerate}};
}

json unitroot_summary(const UnitRootResult& r, const std::string& name) {
    return {{"test", name},
            {"statistic", r.statistic},
            {"lags_or_bandwidth", r.lags_or_bandwidth},
            {"cv5", r.cv5},
            {"reject5", r.reject5}};
}

int cmd_test(const std::string& kind, const std::string& data, const std::string& column,
             const std::string& date_column, const std::string& data2, const std::string& column2,
             int lags, const std::string& out) {
    const Series s = load_csv(data, date_column, column, column);
    json result;
    if (kind == "adf") {
        result = unitroot_summary(adf_test(s, DetSpec::constant, lags), "adf");
    } else if (kind == "pp") {
        result = unitroot_summary(pp_test(s, DetSpec::constant), "pp");
    } else if (kind == "ljung_box") {
        result = teststat_summary(ljung_box(s.values(), lags), "ljung_box");
    } else if (kind == "arch_lm") {
        result = teststat_summary(arch_lm(s.values(), lags), "arch_lm");
    } else if (kind == "jb") {
        const SummaryStats st = summary_stats(s);
        result = {{"test", "jarque_bera"},
                  {"statistic", st.jb_stat},
                  {"p_value", st.jb_p},
                  {"degenerate", st.degenerate}};
    } else if (kind == "granger") {
        if (data2.empty() || column2.empty())
            throw DomainError("granger requires --data2 and --column2");
        const Series z = load_csv(data2, date_column, column2, column2);
        const GrangerOutcome g = granger_test(s, z, lags);
        result = {{"test", "granger"},
                  {"caused", s.name()},
                  {"causing", z.name()},
                  {"lag", lags},
                  {"f_stat", g.f_stat},
                  {"p_value", g.p_value},
                  {"sign", g.sign},
                  {"n_obs", g.n_obs}};
    } else {
        throw DomainError("unknown test kind '" + kind + "'");
    }
    emit_json(result, out);
    return 0;
}

int cmd_simulate(const std::string& out, std::uint64_t seed, int t, int burn_in, double intercept,
                 double a1, double alpha0, double alpha1, double beta, double gamma) {
    DgpSpec d;
    d.mean_spec.own_lags = {1};
    d.mean_coefficients = {intercept, a1};
    d.variance_params = {.alpha0 = alpha0, .alpha1 = alpha1, .beta = beta, .gamma = gamma};
    d.T = t;
    d.burn_in = burn_in;
    d.seed = seed;
    const Series s = simulate_ar_egarch(d, "sim");
    std::ostringstream os;
    os << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        os << s.start().plus_months(static_cast<int>(i)).str() << ","
           << format_value(s[i], 12) << "\n";
    if (out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out);
        if (!f) throw LoadError("cannot write '" + out + "'");
        f << os.str();
    }
    return 0;
}

int cmd_report(const std::string& results, const std::string& out, const std::string& formats) {
    std::ifstream in(results);
    if (!in) throw LoadError("cannot open '" + results + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw LoadError("'" + results + "': " + e.what());
    }
    emit_tables(report_from_json(j), out, parse_formats(formats));
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AR-EGARCH uncertainty and causality pipeline"};
    app.require_subcommand(1);

    std::string config, out, formats = "md,json";
    std::uint64_t seed = 0;
    app.add_option("--config", config, "Path to the JSON run configuration")->envname("UNCVOL_CONFIG");
    app.add_option("--out", out, "Output directory or file");
    app.add_option("--seed", seed, "RNG seed (simulate)");
    app.add_option("--format", formats, "Comma-separated output formats: md,json,csv");

    auto* run = app.add_subcommand("run", "Run the full pipeline and emit tables");
    run->fallthrough();

    auto* fit = app.add_subcommand("fit", "Fit a single country equation");
    fit->fallthrough();
    std::string country, equation = "inflation";
    fit->add_option("--country", country, "Country name from the config")->required();
    fit->add_option("--equation", equation, "inflation or output")
        ->check(CLI::IsMember({"inflation", "output"}));

    auto* test = app.add_subcommand("test", "Run one diagnostic or causality test on CSV data");
    test->fallthrough();
    std::string kind = "adf", data, column, date_column = "date", data2, column2;
    int lags = 12;
    test->add_option("--kind", kind, "adf, pp, ljung_box, arch_lm, jb or granger");
    test->add_option("--data", data, "CSV file with the (caused) series")->required();
    test->add_option("--column", column, "Value column name")->required();
    test->add_option("--date-column", date_column, "Date column name");
    test->add_option("--data2", data2, "CSV file with the causing series (granger)");
    test->add_option("--column2", column2, "Causing value column (granger)");
    test->add_option("--lags", lags, "Lag order / bandwidth for the chosen test");

    auto* simulate = app.add_subcommand("simulate", "Generate an AR(1)-EGARCH(1,1) sample as CSV");
    simulate->fallthrough();
    int t = 500, burn_in = 200;
    double intercept = 0.0, a1 = 0.4, alpha0 = -0.5, alpha1 = 0.8, beta = 0.3, gamma = 0.4;
    simulate->add_option("--t", t, "Sample length");
    simulate->add_option("--burn-in", burn_in, "Discarded warm-up observations");
    simulate->add_option("--intercept", intercept, "Mean intercept");
    simulate->add_option("--a1", a1, "AR(1) coefficient");
    simulate->add_option("--alpha0", alpha0, "Log-variance intercept");
    simulate->add_option("--alpha1", alpha1, "Log-variance persistence");
    simulate->add_option("--beta", beta, "Magnitude-effect coefficient");
    simulate->add_option("--gamma", gamma, "Asymmetry coefficient");

    auto* report = app.add_subcommand("report", "Re-render tables from a results.json");
    report->fallthrough();
    std::string results;
    report->add_option("--results", results, "Path to results.json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (config.empty()) throw LoadError("run requires --config");
            return cmd_run(config, out, formats);
        }
        if (fit->parsed()) {
            if (config.empty()) throw LoadError("fit requires --config");
            return cmd_fit(config, country, equation, out);
        }
        if (test->parsed())
            return cmd_test(kind, data, column, date_column, data2, column2, lags, out);
        if (simulate->parsed())
            return cmd_simulate(out, seed, t, burn_in, intercept, a1, alpha0, alpha1, beta, gamma);
        if (report->parsed()) {
            if (out.empty()) throw LoadError("report requires --out");
            return cmd_report(results, out, formats);
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}

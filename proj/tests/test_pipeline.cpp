#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uncvol/csv.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/pipeline.hpp"
#include "uncvol/simulate.hpp"

using namespace uncvol;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("uncvol_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

// Integrates a simulated growth-rate path into a positive level series and
// writes it as a CSV starting at `start`.
void write_level_csv(const fs::path& p, const std::string& column, const Series& growth,
                     double scale) {
    std::ostringstream os;
    os << "date," << column << "\n";
    double level = 100.0;
    YearMonth ym = growth.start().plus_months(-1);
    os << ym.str() << "," << level << "\n";
    for (std::size_t t = 0; t < growth.size(); ++t) {
        level *= std::exp(growth[t] / scale);
        os << growth.start().plus_months(static_cast<int>(t)).str() << "," << level << "\n";
    }
    write_file(p, os.str());
}

Series growth_series(std::uint64_t seed, int T, const std::string& name) {
    DgpSpec d;
    d.mean_spec.own_lags = {1};
    d.mean_coefficients = {0.5, 0.3};
    d.variance_params = {.alpha0 = -0.2, .alpha1 = 0.6, .beta = 0.25, .gamma = 0.1};
    d.T = T;
    d.seed = seed;
    d.start = {1998, 2};
    return simulate_ar_egarch(d, name);
}

}  // namespace

TEST_CASE("csv loader") {
    const fs::path dir = scratch_dir("csv");
    SUBCASE("well-formed file round-trips") {
        write_file(dir / "ok.csv", "date,cpi\n2001-11,100\n2001-12,101.5\n2002-01,103\n");
        const Series s = load_csv((dir / "ok.csv").string(), "date", "cpi", "cpi");
        CHECK(s.name() == "cpi");
        CHECK(s.start() == YearMonth{2001, 11});
        REQUIRE(s.size() == 3);
        CHECK(s[1] == doctest::Approx(101.5).epsilon(1e-15));
        CHECK(s.at({2002, 1}) == doctest::Approx(103.0).epsilon(1e-15));
    }
    SUBCASE("calendar gap is rejected") {
        write_file(dir / "gap.csv", "date,x\n2001-01,1\n2001-03,2\n");
        CHECK_THROWS_AS(load_csv((dir / "gap.csv").string(), "date", "x"), LoadError);
    }
    SUBCASE("duplicate month is rejected") {
        write_file(dir / "dup.csv", "date,x\n2001-01,1\n2001-01,2\n");
        CHECK_THROWS_AS(load_csv((dir / "dup.csv").string(), "date", "x"), LoadError);
    }
    SUBCASE("unknown column and missing file are load errors") {
        write_file(dir / "ok.csv", "date,cpi\n2001-11,100\n");
        CHECK_THROWS_AS(load_csv((dir / "ok.csv").string(), "date", "nope"), LoadError);
        CHECK_THROWS_AS(load_csv((dir / "missing.csv").string(), "date", "x"), LoadError);
    }
    SUBCASE("unparseable value names the row") {
        write_file(dir / "bad.csv", "date,x\n2001-01,1\n2001-02,oops\n");
        try {
            load_csv((dir / "bad.csv").string(), "date", "x");
            FAIL("expected LoadError");
        } catch (const LoadError& e) {
            CHECK(std::string(e.what()).find("3") != std::string::npos);  // header is row 1
        }
    }
}

TEST_CASE("config parsing") {
    json j;
    j["output_dir"] = "results";
    j["options"] = {{"scale", 100.0},
                    {"extra_difference", true},
                    {"causality_lags", {2, 6}},
                    {"criterion", "sic"}};
    j["countries"] = json::array(
        {{{"name", "Testland"},
          {"regime", "currency_board"},
          {"data",
           {{"cpi", {{"file", "cpi.csv"}, {"column", "cpi"}}},
            {"ipi", {{"file", "ipi.csv"}, {"column", "ipi"}, {"date_column", "month"}}}}},
          {"inflation_spec", {{"own_lags", {1, 2}}, {"cross_lags", {1}}}}}});

    const RunConfig cfg = RunConfig::from_json(j, "/base");
    CHECK(cfg.output_dir == "results");
    CHECK(cfg.options.scale == 100.0);
    CHECK(cfg.options.extra_difference);
    CHECK(cfg.options.causality_lags == std::vector<int>{2, 6});
    CHECK(cfg.options.criterion == Criterion::sic);
    REQUIRE(cfg.countries.size() == 1);
    const CountryConfig& cc = cfg.countries[0];
    CHECK(cc.name == "Testland");
    CHECK(cc.regime == "currency_board");
    CHECK(cc.data.at("cpi").file == "/base/cpi.csv");
    CHECK(cc.data.at("ipi").date_column == "month");
    CHECK(cc.inflation_spec.own_lags == std::vector<int>{1, 2});
    CHECK(cc.inflation_spec.cross_lags == std::vector<int>{1});

    SUBCASE("an empty lag grid is rejected") {
        j["options"]["causality_lags"] = json::array();
        CHECK_THROWS_AS(RunConfig::from_json(j), LoadError);
    }
}

namespace {

// One synthetic country with every input series generated from the simulator,
// written to disk as level CSVs.
RunConfig synthetic_config(const fs::path& dir, int T) {
    const double scale = 1200.0;
    write_level_csv(dir / "cpi.csv", "cpi", growth_series(301, T, "g"), scale);
    write_level_csv(dir / "ipi.csv", "ipi", growth_series(302, T, "g"), scale);
    write_level_csv(dir / "oil.csv", "oil", growth_series(303, T, "g"), scale);
    write_level_csv(dir / "eu.csv", "eu_ipi", growth_series(304, T, "g"), scale);
    {
        // interest rate: a level series that gets first-differenced downstream
        const Series g = growth_series(305, T, "g");
        std::ostringstream os;
        os << "date,rate\n";
        double level = 5.0;
        for (std::size_t t = 0; t < g.size(); ++t) {
            level += 0.01 * g[t];
            os << g.start().plus_months(static_cast<int>(t)).str() << "," << level << "\n";
        }
        write_file(dir / "rate.csv", os.str());
    }

    json j;
    j["output_dir"] = (dir / "out").string();
    j["options"] = {{"pretest_ar_order", 6}, {"adf_max_lags", 6}, {"causality_lags", {2, 4}}};
    json data = {{"cpi", {{"file", "cpi.csv"}, {"column", "cpi"}}},
                 {"ipi", {{"file", "ipi.csv"}, {"column", "ipi"}}},
                 {"oil", {{"file", "oil.csv"}, {"column", "oil"}}},
                 {"eu_ipi", {{"file", "eu.csv"}, {"column", "eu_ipi"}}},
                 {"interest_rate", {{"file", "rate.csv"}, {"column", "rate"}}}};
    j["countries"] = json::array({{{"name", "Synthia"},
                                   {"regime", "currency_board"},
                                   {"data", data},
                                   {"inflation_spec", {{"own_lags", {1}}, {"cross_lags", {1}}}},
                                   {"output_spec", {{"own_lags", {1}}, {"cross_lags", {1}}}}}});
    return RunConfig::from_json(j, dir.string());
}

}  // namespace

TEST_CASE("end-to-end pipeline on a synthetic country") {
    const fs::path dir = scratch_dir("e2e");
    const RunConfig cfg = synthetic_config(dir, 360);
    const RunReport report = run_pipeline(cfg);

    REQUIRE(report.countries.size() == 1);
    const CountryReport& c = report.countries[0];
    INFO("country error: ", c.error);
    REQUIRE(c.error.empty());
    CHECK(c.name == "Synthia");
    CHECK_FALSE(c.pi_stats.degenerate);
    REQUIRE(c.pretests.size() == 2);
    CHECK(c.pretests[0].variable == "pi");
    CHECK(c.pretests[1].variable == "y");
    // the transformed series are stationary by construction
    CHECK(c.pretests[0].adf_level.reject5);
    CHECK(c.pretests[0].pp_level.reject5);
    REQUIRE(c.residual_diags.size() == 2);
    CHECK(c.residual_diags[0].variable == "inflation");
    REQUIRE(c.inflation_fit.has_value());
    REQUIRE(c.output_fit.has_value());
    REQUIRE(c.causality.size() == 6);

    if (c.inflation_fit->converged && c.output_fit->converged) {
        CHECK(c.notes.empty());
        for (const auto& r : c.causality) {
            INFO("pair ", r.caused, " <- ", r.causing, ": ", r.error);
            CHECK(r.error.empty());
            CHECK(r.per_lag.size() == 2);
        }
    }

    REQUIRE(report.regime_groups.size() == 1);
    CHECK(report.regime_groups[0].regime == "currency_board");
    CHECK(report.regime_groups[0].n_countries == 1);
    CHECK(report.regime_groups[0].mean_pi_std == doctest::Approx(c.pi_stats.std_dev));

    SUBCASE("json serialization round-trips byte-for-byte") {
        const json j1 = report_to_json(report);
        const std::string d1 = j1.dump(2);
        const RunReport back = report_from_json(json::parse(d1));
        const std::string d2 = report_to_json(back).dump(2);
        CHECK(d1 == d2);
    }

    SUBCASE("emit_tables writes the full output set atomically named") {
        const fs::path out = dir / "out";
        emit_tables(report, out.string(), {"md", "json", "csv"});
        for (const char* f : {"table1.md", "table2.md", "table3.md", "table4.md", "table5.md",
                              "results.json", "run.log", "table1.csv", "table5.csv"})
            CHECK(fs::exists(out / f));
        // no stray temp files left behind
        for (const auto& entry : fs::directory_iterator(out))
            CHECK(entry.path().extension() != ".tmp");

        // results.json content equals the in-memory serialization
        std::ifstream in(out / "results.json");
        json parsed;
        in >> parsed;
        CHECK(parsed == report_to_json(report));
    }

    SUBCASE("a second run is deterministic") {
        const RunReport again = run_pipeline(cfg);
        CHECK(report_to_json(report).dump() == report_to_json(again).dump());
    }
}

TEST_CASE("pipeline records per-country failure without aborting the run") {
    const fs::path dir = scratch_dir("fail");
    RunConfig cfg = synthetic_config(dir, 360);
    CountryConfig broken = cfg.countries[0];
    broken.name = "Brokistan";
    broken.data["cpi"].file = (dir / "missing.csv").string();
    cfg.countries.insert(cfg.countries.begin(), broken);
    const RunReport report = run_pipeline(cfg);
    REQUIRE(report.countries.size() == 2);
    CHECK(report.countries[0].name == "Brokistan");
    CHECK_FALSE(report.countries[0].error.empty());
    CHECK(report.countries[1].error.empty());
    // the failed country is excluded from the regime comparison
    REQUIRE(report.regime_groups.size() == 1);
    CHECK(report.regime_groups[0].n_countries == 1);
}

TEST_CASE("empty country list still yields a valid, emittable report") {
    RunConfig cfg;
    const RunReport report = run_pipeline(cfg);
    CHECK(report.countries.empty());
    const fs::path dir = scratch_dir("empty");
    emit_tables(report, (dir / "out").string());
    CHECK(fs::exists(dir / "out" / "results.json"));
    CHECK(fs::exists(dir / "out" / "run.log"));
}

TEST_CASE("cell formatting fixtures") {
    CHECK(format_value(0.615, 3) == "0.615");
    CHECK(format_value(0.62, 3) == "0.62");
    CHECK(format_value(29.41, 2) == "29.41");
    CHECK(format_value(-0.0079, 4) == "-0.0079");
    CHECK(format_value(5.0, 2) == "5");
    CHECK(format_value(-0.0001, 2) == "0");

    CHECK(format_coefficient(0.615, 'a') == "0.615 a");
    CHECK(format_coefficient(0.303, ' ') == "0.303");
    CHECK(format_coefficient(-0.0079, 'b') == "-0.008 b");

    CHECK(format_granger_cell(29.41, 'a', 1, false) == "29.41a (+)");
    CHECK(format_granger_cell(29.41, 'a', 1, true) == "_29.41a (+)_");
    CHECK(format_granger_cell(3.12, 'b', -1, false) == "3.12b (-)");
    // sign is suppressed when insignificant at the 10% level
    CHECK(format_granger_cell(1.07, ' ', 1, false) == "1.07");
}

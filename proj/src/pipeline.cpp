#include "uncvol/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>

#include "uncvol/csv.hpp"
#include "uncvol/errors.hpp"

namespace uncvol {

namespace {

MeanSpec spec_from_json(const json& j) {
    MeanSpec s;
    if (j.contains("own_lags")) s.own_lags = j["own_lags"].get<std::vector<int>>();
    if (j.contains("cross_lags")) s.cross_lags = j["cross_lags"].get<std::vector<int>>();
    if (j.contains("intercept")) s.include_intercept = j["intercept"].get<bool>();
    if (j.contains("exogenous"))
        for (const auto& e : j["exogenous"])
            s.exogenous.push_back({e["series"].get<std::string>(), e.value("lag", 1),
                                   e["coeff"].get<std::string>()});
    return s;
}

json spec_to_json(const MeanSpec& s) {
    json j;
    j["own_lags"] = s.own_lags;
    j["cross_lags"] = s.cross_lags;
    j["intercept"] = s.include_intercept;
    json exo = json::array();
    for (const auto& e : s.exogenous)
        exo.push_back({{"series", e.series_label}, {"lag", e.lag}, {"coeff", e.coeff_label}});
    j["exogenous"] = exo;
    return j;
}

ColumnRef column_from_json(const json& j, const std::string& base_dir) {
    ColumnRef c;
    c.file = j["file"].get<std::string>();
    if (!base_dir.empty() && !std::filesystem::path(c.file).is_absolute())
        c.file = (std::filesystem::path(base_dir) / c.file).string();
    c.date_column = j.value("date_column", std::string("date"));
    c.column = j["column"].get<std::string>();
    return c;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
    RunConfig cfg;
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (j.contains("options")) {
        const auto& o = j["options"];
        cfg.options.scale = o.value("scale", 1200.0);
        cfg.options.extra_difference = o.value("extra_difference", false);
        cfg.options.difference_uncertainty = o.value("difference_uncertainty", false);
        cfg.options.pretest_ar_order = o.value("pretest_ar_order", 12);
        cfg.options.adf_max_lags = o.value("adf_max_lags", 12);
        if (o.contains("causality_lags"))
            cfg.options.causality_lags = o["causality_lags"].get<std::vector<int>>();
        cfg.options.criterion =
            o.value("criterion", std::string("aic")) == "sic" ? Criterion::sic : Criterion::aic;
        cfg.options.robust_se = o.value("robust_se", false);
    }
    if (cfg.options.causality_lags.empty()) throw LoadError("config: empty causality lag grid");
    for (const auto& cj : j.value("countries", json::array())) {
        CountryConfig cc;
        cc.name = cj["name"].get<std::string>();
        cc.regime = cj.value("regime", std::string("inflation_targeting"));
        for (const auto& [key, val] : cj["data"].items())
            cc.data[key] = column_from_json(val, base_dir);
        if (cj.contains("inflation_spec")) cc.inflation_spec = spec_from_json(cj["inflation_spec"]);
        if (cj.contains("output_spec")) cc.output_spec = spec_from_json(cj["output_spec"]);
        cfg.countries.push_back(std::move(cc));
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw LoadError("config '" + path + "': " + e.what());
    }
    return from_json(j, std::filesystem::path(path).parent_path().string());
}

namespace {

Series load_named(const CountryConfig& cc, const std::string& key, const std::string& name) {
    auto it = cc.data.find(key);
    if (it == cc.data.end())
        throw LoadError("country '" + cc.name + "': no data entry '" + key + "'");
    return load_csv(it->second.file, it->second.date_column, it->second.column, name);
}

Series maybe_diff(Series s, bool apply) {
    if (!apply) return s;
    std::string name = s.name();
    return first_difference(s).renamed(std::move(name));
}

CountryReport run_country(const CountryConfig& cc, const PipelineOptions& opt) {
    CountryReport rep;
    rep.name = cc.name;
    rep.regime = cc.regime;
    try {
        const bool xd = opt.extra_difference;
        Series pi = maybe_diff(annualized_log_diff(load_named(cc, "cpi", "cpi"), opt.scale)
                                   .renamed("pi"), xd);
        Series y = maybe_diff(annualized_log_diff(load_named(cc, "ipi", "ipi"), opt.scale)
                                  .renamed("y"), xd);
        // Exogenous: interest enters as a change, oil and EU output as growth
        // rates, mirroring the endogenous transform.
        Series i_rate = maybe_diff(
            first_difference(load_named(cc, "interest_rate", "interest_rate")).renamed("i"), xd);
        Series oil = maybe_diff(
            annualized_log_diff(load_named(cc, "oil", "oil_price"), opt.scale).renamed("oil"), xd);
        Series y_eu = maybe_diff(
            annualized_log_diff(load_named(cc, "eu_ipi", "eu_ipi"), opt.scale).renamed("y_eu"), xd);

        rep.pi_stats = summary_stats(pi);
        rep.y_stats = summary_stats(y);

        for (const Series* s : {&pi, &y}) {
            PretestRow row;
            row.variable = s->name();
            row.adf_level = adf_test(*s, DetSpec::constant, opt.adf_max_lags);
            row.pp_level = pp_test(*s, DetSpec::constant);
            const Series d = first_difference(*s);
            row.adf_diff = adf_test(d, DetSpec::constant, opt.adf_max_lags);
            row.pp_diff = pp_test(d, DetSpec::constant);
            rep.pretests.push_back(row);
        }

        // AR(p) residual diagnostics on raw residuals (pre-EGARCH stage).
        for (const Series* s : {&pi, &y}) {
            const OlsFit ar = fit_ar(*s, opt.pretest_ar_order);
            ResidualDiagRow row;
            row.variable = s->name() == "pi" ? "inflation" : "output";
            row.q12 = ljung_box(ar.residuals, 12);
            row.q1_sq = squared_residual_q(ar.residuals, 1);
            row.q12_sq = squared_residual_q(ar.residuals, 12);
            rep.residual_diags.push_back(row);
        }

        EgarchOptions eopts;
        eopts.robust_se = opt.robust_se;
        rep.inflation_fit = fit_inflation_model(pi, y, i_rate, oil, cc.inflation_spec, eopts);
        rep.output_fit = fit_output_model(y, pi, y_eu, cc.output_spec, eopts);

        std::vector<Series> set{pi, y};
        if (rep.inflation_fit->converged) {
            set.push_back(maybe_diff(extract_uncertainty(*rep.inflation_fit, "h_pi"),
                                     opt.difference_uncertainty));
        } else {
            rep.notes.push_back("inflation fit did not converge; h_pi unavailable");
        }
        if (rep.output_fit->converged) {
            set.push_back(maybe_diff(extract_uncertainty(*rep.output_fit, "h_y"),
                                     opt.difference_uncertainty));
        } else {
            rep.notes.push_back("output fit did not converge; h_y unavailable");
        }

        const std::vector<CausalityPair> pairs{{"h_pi", "pi"}, {"h_y", "pi"}, {"h_y", "h_pi"},
                                               {"h_pi", "y"},  {"h_pi", "h_y"}, {"y", "h_y"}};
        rep.causality = causality_battery(set, pairs, opt.causality_lags, opt.criterion);
    } catch (const std::exception& e) {
        rep.error = e.what();
    }
    return rep;
}

double group_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

RunReport run_pipeline(const RunConfig& config) {
    RunReport report;
    std::vector<std::future<CountryReport>> futures;
    futures.reserve(config.countries.size());
    for (const auto& cc : config.countries)
        futures.push_back(std::async(std::launch::async,
                                     [&cc, &config] { return run_country(cc, config.options); }));
    for (auto& f : futures) report.countries.push_back(f.get());

    // Regime comparison block: average within-group dispersion.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& c : report.countries) {
        if (!c.error.empty()) continue;
        groups[c.regime].first.push_back(c.pi_stats.std_dev);
        groups[c.regime].second.push_back(c.y_stats.std_dev);
    }
    for (const auto& [regime, v] : groups) {
        RegimeGroupStats g;
        g.regime = regime;
        g.n_countries = static_cast<int>(v.first.size());
        g.mean_pi_std = group_mean(v.first);
        g.mean_y_std = group_mean(v.second);
        report.regime_groups.push_back(g);
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

json series_to_json(const Series& s) {
    return {{"name", s.name()}, {"start", s.start().str()}, {"values", s.values()}};
}

Series series_from_json(const json& j) {
    return Series(j["name"].get<std::string>(), YearMonth::parse(j["start"].get<std::string>()),
                  j["values"].get<std::vector<double>>());
}

json teststat_to_json(const TestStat& t) {
    return {{"statistic", t.statistic},
            {"distribution", t.distribution == RefDist::chi_square ? "chi_square"
                             : t.distribution == RefDist::f_dist   ? "f"
                                                                   : "dickey_fuller"},
            {"dof1", t.dof1},
            {"dof2", t.dof2},
            {"p_value", t.p_value},
            {"degenerate", t.degenerate}};
}

TestStat teststat_from_json(const json& j) {
    TestStat t;
    t.statistic = j["statistic"].get<double>();
    const auto d = j["distribution"].get<std::string>();
    t.distribution = d == "chi_square" ? RefDist::chi_square
                     : d == "f"        ? RefDist::f_dist
                                       : RefDist::dickey_fuller;
    t.dof1 = j["dof1"].get<int>();
    t.dof2 = j["dof2"].get<int>();
    t.p_value = j["p_value"].get<double>();
    t.degenerate = j["degenerate"].get<bool>();
    t.sig1 = t.p_value < 0.01;
    t.sig5 = t.p_value < 0.05;
    t.sig10 = t.p_value < 0.10;
    return t;
}

json unitroot_to_json(const UnitRootResult& r) {
    return {{"statistic", r.statistic},
            {"lags_or_bandwidth", r.lags_or_bandwidth},
            {"spec", r.spec == DetSpec::none       ? "none"
                     : r.spec == DetSpec::constant ? "constant"
                                                   : "constant_trend"},
            {"cv1", r.cv1},
            {"cv5", r.cv5},
            {"cv10", r.cv10},
            {"reject1", r.reject1},
            {"reject5", r.reject5},
            {"reject10", r.reject10},
            {"effective_obs", r.effective_obs}};
}

UnitRootResult unitroot_from_json(const json& j) {
    UnitRootResult r;
    r.statistic = j["statistic"].get<double>();
    r.lags_or_bandwidth = j["lags_or_bandwidth"].get<int>();
    const auto s = j["spec"].get<std::string>();
    r.spec = s == "none"       ? DetSpec::none
             : s == "constant" ? DetSpec::constant
                               : DetSpec::constant_trend;
    r.cv1 = j["cv1"].get<double>();
    r.cv5 = j["cv5"].get<double>();
    r.cv10 = j["cv10"].get<double>();
    r.reject1 = j["reject1"].get<bool>();
    r.reject5 = j["reject5"].get<bool>();
    r.reject10 = j["reject10"].get<bool>();
    r.effective_obs = j["effective_obs"].get<int>();
    return r;
}

json coeff_to_json(const Coefficient& c) {
    return {{"label", c.label},
            {"value", c.value},
            {"std_error", c.std_error},
            {"z", c.z_stat},
            {"star", std::string(1, c.star)}};
}

Coefficient coeff_from_json(const json& j) {
    Coefficient c;
    c.label = j["label"].get<std::string>();
    c.value = j["value"].get<double>();
    c.std_error = j["std_error"].get<double>();
    c.z_stat = j["z"].get<double>();
    const auto s = j["star"].get<std::string>();
    c.star = s.empty() ? ' ' : s[0];
    return c;
}

json fit_to_json(const EgarchFit& f) {
    json mc = json::array();
    for (const auto& c : f.mean_coefficients) mc.push_back(coeff_to_json(c));
    json vc = json::array();
    for (const auto& c : f.variance_coefficients) vc.push_back(coeff_to_json(c));
    return {{"mean_coefficients", mc},
            {"variance_coefficients", vc},
            {"h_path", series_to_json(f.h_path)},
            {"std_residuals", series_to_json(f.std_residuals)},
            {"log_likelihood", f.log_likelihood},
            {"r_squared", f.r_squared},
            {"f_statistic", f.f_statistic},
            {"q12", teststat_to_json(f.q12)},
            {"q1_sq", teststat_to_json(f.q1_sq)},
            {"q12_sq", teststat_to_json(f.q12_sq)},
            {"converged", f.converged},
            {"se_reliable", f.se_reliable},
            {"variance_stationary", f.variance_stationary},
            {"n_obs", f.n_obs}};
}

EgarchFit fit_from_json(const json& j) {
    EgarchFit f{.h_path = series_from_json(j["h_path"]),
                .std_residuals = series_from_json(j["std_residuals"])};
    for (const auto& c : j["mean_coefficients"]) f.mean_coefficients.push_back(coeff_from_json(c));
    for (const auto& c : j["variance_coefficients"])
        f.variance_coefficients.push_back(coeff_from_json(c));
    if (f.variance_coefficients.size() == 4) {
        f.variance_params.alpha0 = f.variance_coefficients[0].value;
        f.variance_params.alpha1 = f.variance_coefficients[1].value;
        f.variance_params.beta = f.variance_coefficients[2].value;
        f.variance_params.gamma = f.variance_coefficients[3].value;
    }
    f.log_likelihood = j["log_likelihood"].get<double>();
    f.r_squared = j["r_squared"].get<double>();
    f.f_statistic = j["f_statistic"].get<double>();
    f.q12 = teststat_from_json(j["q12"]);
    f.q1_sq = teststat_from_json(j["q1_sq"]);
    f.q12_sq = teststat_from_json(j["q12_sq"]);
    f.converged = j["converged"].get<bool>();
    f.se_reliable = j["se_reliable"].get<bool>();
    f.variance_stationary = j["variance_stationary"].get<bool>();
    f.n_obs = j["n_obs"].get<int>();
    return f;
}

json causality_to_json(const CausalityResult& r) {
    json per_lag = json::array();
    for (const auto& l : r.per_lag)
        per_lag.push_back({{"lag", l.lag},
                           {"f_stat", l.f_stat},
                           {"p_value", l.p_value},
                           {"sign", l.sign},
                           {"is_optimal", l.is_optimal}});
    return {{"caused", r.caused}, {"causing", r.causing}, {"per_lag", per_lag}, {"error", r.error}};
}

CausalityResult causality_from_json(const json& j) {
    CausalityResult r;
    r.caused = j["caused"].get<std::string>();
    r.causing = j["causing"].get<std::string>();
    r.error = j["error"].get<std::string>();
    for (const auto& l : j["per_lag"]) {
        LagResult lr;
        lr.lag = l["lag"].get<int>();
        lr.f_stat = l["f_stat"].get<double>();
        lr.p_value = l["p_value"].get<double>();
        lr.sign = l["sign"].get<int>();
        lr.is_optimal = l["is_optimal"].get<bool>();
        lr.sig1 = lr.p_value < 0.01;
        lr.sig5 = lr.p_value < 0.05;
        lr.sig10 = lr.p_value < 0.10;
        r.per_lag.push_back(lr);
    }
    return r;
}

json stats_to_json(const SummaryStats& s) {
    return {{"mean", s.mean},     {"std_dev", s.std_dev},   {"skewness", s.skewness},
            {"kurtosis", s.kurtosis}, {"jb_stat", s.jb_stat}, {"jb_p", s.jb_p},
            {"degenerate", s.degenerate}};
}

SummaryStats stats_from_json(const json& j) {
    SummaryStats s;
    s.mean = j["mean"].get<double>();
    s.std_dev = j["std_dev"].get<double>();
    s.skewness = j["skewness"].get<double>();
    s.kurtosis = j["kurtosis"].get<double>();
    s.jb_stat = j["jb_stat"].get<double>();
    s.jb_p = j["jb_p"].get<double>();
    s.degenerate = j["degenerate"].get<bool>();
    return s;
}

}  // namespace

json report_to_json(const RunReport& report) {
    json countries = json::array();
    for (const auto& c : report.countries) {
        json cj;
        cj["name"] = c.name;
        cj["regime"] = c.regime;
        cj["error"] = c.error;
        cj["notes"] = c.notes;
        if (c.error.empty()) {
            cj["inflation_stats"] = stats_to_json(c.pi_stats);
            cj["output_stats"] = stats_to_json(c.y_stats);
            json pre = json::array();
            for (const auto& p : c.pretests)
                pre.push_back({{"variable", p.variable},
                               {"adf_level", unitroot_to_json(p.adf_level)},
                               {"pp_level", unitroot_to_json(p.pp_level)},
                               {"adf_diff", unitroot_to_json(p.adf_diff)},
                               {"pp_diff", unitroot_to_json(p.pp_diff)}});
            cj["pretests"] = pre;
            json diags = json::array();
            for (const auto& d : c.residual_diags)
                diags.push_back({{"variable", d.variable},
                                 {"q12", teststat_to_json(d.q12)},
                                 {"q1_sq", teststat_to_json(d.q1_sq)},
                                 {"q12_sq", teststat_to_json(d.q12_sq)}});
            cj["residual_diagnostics"] = diags;
            if (c.inflation_fit) cj["inflation_fit"] = fit_to_json(*c.inflation_fit);
            if (c.output_fit) cj["output_fit"] = fit_to_json(*c.output_fit);
            json caus = json::array();
            for (const auto& r : c.causality) caus.push_back(causality_to_json(r));
            cj["causality"] = caus;
        }
        countries.push_back(std::move(cj));
    }
    json groups = json::array();
    for (const auto& g : report.regime_groups)
        groups.push_back({{"regime", g.regime},
                          {"n_countries", g.n_countries},
                          {"mean_inflation_std", g.mean_pi_std},
                          {"mean_output_std", g.mean_y_std}});
    return {{"countries", countries}, {"regime_groups", groups}};
}

RunReport report_from_json(const json& j) {
    RunReport report;
    for (const auto& cj : j["countries"]) {
        CountryReport c;
        c.name = cj["name"].get<std::string>();
        c.regime = cj["regime"].get<std::string>();
        c.error = cj["error"].get<std::string>();
        c.notes = cj["notes"].get<std::vector<std::string>>();
        if (c.error.empty()) {
            c.pi_stats = stats_from_json(cj["inflation_stats"]);
            c.y_stats = stats_from_json(cj["output_stats"]);
            for (const auto& p : cj["pretests"]) {
                PretestRow row;
                row.variable = p["variable"].get<std::string>();
                row.adf_level = unitroot_from_json(p["adf_level"]);
                row.pp_level = unitroot_from_json(p["pp_level"]);
                row.adf_diff = unitroot_from_json(p["adf_diff"]);
                row.pp_diff = unitroot_from_json(p["pp_diff"]);
                c.pretests.push_back(row);
            }
            for (const auto& d : cj["residual_diagnostics"]) {
                ResidualDiagRow row;
                row.variable = d["variable"].get<std::string>();
                row.q12 = teststat_from_json(d["q12"]);
                row.q1_sq = teststat_from_json(d["q1_sq"]);
                row.q12_sq = teststat_from_json(d["q12_sq"]);
                c.residual_diags.push_back(row);
            }
            if (cj.contains("inflation_fit")) c.inflation_fit = fit_from_json(cj["inflation_fit"]);
            if (cj.contains("output_fit")) c.output_fit = fit_from_json(cj["output_fit"]);
            for (const auto& r : cj["causality"]) c.causality.push_back(causality_from_json(r));
        }
        report.countries.push_back(std::move(c));
    }
    for (const auto& g : j["regime_groups"]) {
        RegimeGroupStats gs;
        gs.regime = g["regime"].get<std::string>();
        gs.n_countries = g["n_countries"].get<int>();
        gs.mean_pi_std = g["mean_inflation_std"].get<double>();
        gs.mean_y_std = g["mean_output_std"].get<double>();
        report.regime_groups.push_back(gs);
    }
    return report;
}

}  // namespace uncvol

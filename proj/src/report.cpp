#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "uncvol/errors.hpp"
#include "uncvol/pipeline.hpp"

namespace uncvol {

std::string format_value(double v, int decimals) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string format_coefficient(double v, char star) {
    std::string s = format_value(v, 3);
    if (star != ' ' && star != '\0') s += std::string(" ") + star;
    return s;
}

std::string format_granger_cell(double f, char star, int sign, bool optimal) {
    std::string s = format_value(f, 2);
    const bool significant = star != ' ' && star != '\0';
    if (significant) s += star;
    if (significant && sign != 0) s += sign > 0 ? " (+)" : " (-)";
    if (optimal) s = "_" + s + "_";
    return s;
}

namespace {

struct Table {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    std::string to_markdown() const {
        std::string out = "# " + title + "\n\n|";
        for (const auto& h : header) out += " " + h + " |";
        out += "\n|";
        for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
        out += "\n";
        for (const auto& r : rows) {
            out += "|";
            for (const auto& c : r) out += " " + (c.empty() ? std::string(" ") : c) + " |";
            out += "\n";
        }
        if (!notes.empty()) {
            out += "\n";
            for (const auto& n : notes) out += "Notes: " + n + "\n";
        }
        return out;
    }

    std::string to_csv() const {
        auto esc = [](const std::string& s) {
            if (s.find(',') == std::string::npos) return s;
            return "\"" + s + "\"";
        };
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i)
            out += (i ? "," : "") + esc(header[i]);
        out += "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + esc(r[i]);
            out += "\n";
        }
        return out;
    }
};

char teststat_star(const TestStat& t) {
    if (t.degenerate) return ' ';
    return significance_star(t.p_value);
}

std::string stat_cell(const TestStat& t) {
    if (t.degenerate) return "degenerate";
    return format_coefficient(t.statistic, teststat_star(t));
}

const std::string kSignificanceNote =
    "a, b and c show 1%, 5% and 10% level of significance, respectively.";

Table build_table1(const RunReport& rep) {
    Table t;
    t.title = "Table 1: Data Description";
    t.header = {"Country", "Inflation Mean", "Inflation Std. Dev.", "Inflation JB",
                "Output Mean",  "Output Std. Dev.",  "Output JB"};
    for (const auto& c : rep.countries) {
        if (!c.error.empty()) {
            t.rows.push_back({c.name, "error: " + c.error, "", "", "", "", ""});
            continue;
        }
        auto jb_cell = [](const SummaryStats& s) {
            if (s.degenerate) return std::string("degenerate");
            return format_coefficient(s.jb_stat, significance_star(s.jb_p));
        };
        t.rows.push_back({c.name, format_value(c.pi_stats.mean, 2),
                          format_value(c.pi_stats.std_dev, 2), jb_cell(c.pi_stats),
                          format_value(c.y_stats.mean, 2), format_value(c.y_stats.std_dev, 2),
                          jb_cell(c.y_stats)});
    }
    for (const auto& g : rep.regime_groups)
        t.rows.push_back({"[" + g.regime + " avg]", "", format_value(g.mean_pi_std, 2), "", "",
                          format_value(g.mean_y_std, 2), ""});
    t.notes.push_back("JB is the Jarque-Bera normality statistic. " + kSignificanceNote);
    return t;
}

Table build_table2(const RunReport& rep) {
    Table t;
    t.title = "Table 2: Preliminary tests on the residuals";
    t.header = {"Variable", "Statistic"};
    for (const auto& c : rep.countries) t.header.push_back(c.name);
    const std::vector<std::pair<std::string, int>> rows = {
        {"inflation", 0}, {"inflation", 1}, {"inflation", 2},
        {"output", 0},    {"output", 1},    {"output", 2}};
    const std::vector<std::string> stat_names = {"Q12", "Q1^2", "Q12^2"};
    for (const auto& [var, k] : rows) {
        std::vector<std::string> row = {var, stat_names[static_cast<std::size_t>(k)]};
        for (const auto& c : rep.countries) {
            std::string cell;
            for (const auto& d : c.residual_diags) {
                if (d.variable != var) continue;
                const TestStat& s = k == 0 ? d.q12 : k == 1 ? d.q1_sq : d.q12_sq;
                cell = stat_cell(s);
            }
            row.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }
    t.notes.push_back(
        "Q12 is the 12th-order Ljung-Box test; Q1^2 and Q12^2 use squared residuals. " +
        kSignificanceNote);
    return t;
}

Table build_fit_table(const RunReport& rep, bool inflation) {
    Table t;
    t.title = inflation ? "Table 3: AR(p)-EGARCH(1,1) estimates, inflation"
                        : "Table 4: AR(p)-EGARCH(1,1) estimates, output growth";
    t.header = {"Coefficient"};
    for (const auto& c : rep.countries) t.header.push_back(c.name);

    auto fit_of = [&](const CountryReport& c) -> const EgarchFit* {
        const auto& f = inflation ? c.inflation_fit : c.output_fit;
        return f ? &*f : nullptr;
    };

    // Row set: union of mean-coefficient labels in first-seen order, then the
    // variance block and fit statistics.
    std::vector<std::string> labels;
    for (const auto& c : rep.countries) {
        if (const EgarchFit* f = fit_of(c))
            for (const auto& coef : f->mean_coefficients)
                if (std::find(labels.begin(), labels.end(), coef.label) == labels.end())
                    labels.push_back(coef.label);
    }
    for (const auto& l : {"alpha0", "alpha1", "beta", "gamma"}) labels.push_back(l);

    for (const auto& label : labels) {
        std::vector<std::string> row = {label};
        for (const auto& c : rep.countries) {
            std::string cell;
            if (const EgarchFit* f = fit_of(c)) {
                for (const auto& coef : f->mean_coefficients)
                    if (coef.label == label) cell = format_coefficient(coef.value, coef.star);
                for (const auto& coef : f->variance_coefficients)
                    if (coef.label == label) cell = format_coefficient(coef.value, coef.star);
            }
            row.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }

    const std::vector<std::string> stat_rows = {"R^2",  "F-Statistics", "Log Likelihood",
                                                "Q12",  "Q1^2",         "Q12^2",
                                                "Converged"};
    for (const auto& name : stat_rows) {
        std::vector<std::string> row = {name};
        for (const auto& c : rep.countries) {
            std::string cell;
            if (const EgarchFit* f = fit_of(c)) {
                if (name == "R^2") cell = format_value(f->r_squared, 2);
                else if (name == "F-Statistics") cell = format_value(f->f_statistic, 2);
                else if (name == "Log Likelihood") cell = format_value(f->log_likelihood, 2);
                else if (name == "Q12") cell = stat_cell(f->q12);
                else if (name == "Q1^2") cell = stat_cell(f->q1_sq);
                else if (name == "Q12^2") cell = stat_cell(f->q12_sq);
                else cell = f->converged ? "yes" : "no";
            }
            row.push_back(cell);
        }
        t.rows.push_back(std::move(row));
    }
    t.notes.push_back(kSignificanceNote);
    return t;
}

std::string panel_title(const std::string& caused, const std::string& causing) {
    auto pretty = [](const std::string& s) {
        if (s == "pi") return std::string("inflation");
        if (s == "y") return std::string("output growth");
        if (s == "h_pi") return std::string("inflation uncertainty");
        if (s == "h_y") return std::string("output growth uncertainty");
        return s;
    };
    return "H0: " + pretty(causing) + " does not Granger-cause " + pretty(caused);
}

Table build_table5(const RunReport& rep) {
    Table t;
    t.title = "Table 5: Bivariate Granger-causality tests";
    t.header = {"Lags"};
    for (const auto& c : rep.countries) t.header.push_back(c.name);

    // Panels follow the pair list of the first country with results.
    std::vector<CausalityPair> panels;
    for (const auto& c : rep.countries)
        for (const auto& r : c.causality)
            if (std::find_if(panels.begin(), panels.end(), [&](const CausalityPair& p) {
                    return p.caused == r.caused && p.causing == r.causing;
                }) == panels.end())
                panels.push_back({r.caused, r.causing});

    for (const auto& panel : panels) {
        std::vector<std::string> title_row = {panel_title(panel.caused, panel.causing)};
        title_row.resize(t.header.size());
        t.rows.push_back(title_row);

        std::set<int> lags;
        for (const auto& c : rep.countries)
            for (const auto& r : c.causality)
                if (r.caused == panel.caused && r.causing == panel.causing)
                    for (const auto& l : r.per_lag) lags.insert(l.lag);

        for (int lag : lags) {
            std::vector<std::string> row = {std::to_string(lag) + " lags"};
            for (const auto& c : rep.countries) {
                std::string cell;
                for (const auto& r : c.causality) {
                    if (r.caused != panel.caused || r.causing != panel.causing) continue;
                    if (!r.error.empty()) {
                        cell = "error";
                        continue;
                    }
                    for (const auto& l : r.per_lag)
                        if (l.lag == lag)
                            cell = format_granger_cell(
                                l.f_stat, l.sig1 ? 'a' : l.sig5 ? 'b' : l.sig10 ? 'c' : ' ',
                                l.sign, l.is_optimal);
                }
                row.push_back(cell);
            }
            t.rows.push_back(std::move(row));
        }
    }
    t.notes.push_back(
        "Figures are F-statistics. A (+) (-) indicates that the sum of the lagged coefficients "
        "of the causing variable is positive (negative). " + kSignificanceNote +
        " _Underscored_ cells mark the optimal lag length by the configured criterion.");
    return t;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw LoadError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw LoadError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void emit_tables(const RunReport& report, const std::string& out_dir,
                 const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw LoadError("output directory '" + out_dir + "' is not writable");

    const std::vector<Table> tables = {build_table1(report), build_table2(report),
                                       build_fit_table(report, true),
                                       build_fit_table(report, false), build_table5(report)};
    const bool want_md = std::find(formats.begin(), formats.end(), "md") != formats.end();
    const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    const bool want_json = std::find(formats.begin(), formats.end(), "json") != formats.end();

    // Render everything before touching the output directory, so an
    // unwritable target cannot leave partial tables behind.
    std::vector<std::pair<std::string, std::string>> files;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const std::string base = "table" + std::to_string(i + 1);
        if (want_md) files.emplace_back(base + ".md", tables[i].to_markdown());
        if (want_csv) files.emplace_back(base + ".csv", tables[i].to_csv());
    }
    if (want_json) files.emplace_back("results.json", report_to_json(report).dump(2) + "\n");

    std::string log;
    for (const auto& c : report.countries) {
        log += "country " + c.name + ": " + (c.error.empty() ? "ok" : "FAILED: " + c.error) + "\n";
        for (const auto& n : c.notes) log += "  note: " + n + "\n";
    }
    log += "tables written: " + std::to_string(files.size()) + " files\n";
    files.emplace_back("run.log", log);

    for (const auto& [name, content] : files) atomic_write(fs::path(out_dir) / name, content);
}

}  // namespace uncvol

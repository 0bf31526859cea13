#include "uncvol/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "uncvol/errors.hpp"

namespace uncvol {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim whitespace and CR
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

Series load_csv(const std::string& path, const std::string& date_column,
                const std::string& value_column, const std::string& series_name) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw LoadError("'" + path + "' is empty");
    const auto header = split_csv_line(line);
    int date_idx = -1, value_idx = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == date_column) date_idx = static_cast<int>(j);
        if (header[j] == value_column) value_idx = static_cast<int>(j);
    }
    if (date_idx < 0) throw LoadError("'" + path + "': no column '" + date_column + "'");
    if (value_idx < 0) throw LoadError("'" + path + "': no column '" + value_column + "'");

    std::vector<double> values;
    YearMonth start{};
    YearMonth expected{};
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) <= std::max(date_idx, value_idx))
            throw LoadError("'" + path + "' row " + std::to_string(row) + ": too few fields");

        YearMonth ym;
        try {
            ym = YearMonth::parse(fields[static_cast<std::size_t>(date_idx)]);
        } catch (const DomainError& e) {
            throw LoadError("'" + path + "' row " + std::to_string(row) + ": " + e.what());
        }
        if (values.empty()) {
            start = ym;
        } else if (ym == expected.plus_months(-1)) {
            throw LoadError("'" + path + "' row " + std::to_string(row) + ": duplicate month " +
                            ym.str());
        } else if (ym != expected) {
            throw LoadError("'" + path + "' row " + std::to_string(row) + ": gap before " +
                            ym.str() + " (expected " + expected.str() + ")");
        }
        expected = ym.plus_months(1);

        const std::string& vs = fields[static_cast<std::size_t>(value_idx)];
        double v = 0.0;
        const auto [p, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), v);
        if (ec != std::errc{} || p != vs.data() + vs.size())
            throw LoadError("'" + path + "' row " + std::to_string(row) + ": unparseable value '" +
                            vs + "'");
        values.push_back(v);
    }
    if (values.empty()) throw LoadError("'" + path + "' has no data rows");
    return Series(series_name.empty() ? value_column : series_name, start, std::move(values));
}

}  // namespace uncvol

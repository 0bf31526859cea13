#include "uncvol/series.hpp"

#include <cmath>
#include <cstdio>

#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"

namespace uncvol {

YearMonth YearMonth::plus_months(int n) const {
    int m0 = (year * 12 + (month - 1)) + n;
    int y = m0 / 12;
    int m = m0 % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    return {y, m + 1};
}

int YearMonth::months_since(const YearMonth& other) const {
    return (year * 12 + month) - (other.year * 12 + other.month);
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::parse(const std::string& s) {
    int y = 0, m = 0;
    char trail = 0;
    if (std::sscanf(s.c_str(), "%d-%d%c", &y, &m, &trail) != 2 || m < 1 || m > 12 || s.size() != 7)
        throw DomainError("cannot parse year-month '" + s + "' (expected YYYY-MM)");
    return {y, m};
}

Series::Series(std::string name, YearMonth start, std::vector<double> values)
    : name_(std::move(name)), start_(start), values_(std::move(values)) {
    if (values_.empty()) throw SizeError("series '" + name_ + "' must have length >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw DomainError("series '" + name_ + "' has a non-finite value at " +
                              start_.plus_months(static_cast<int>(i)).str());
}

bool Series::covers(const YearMonth& ym) const {
    int off = ym.months_since(start_);
    return off >= 0 && off < static_cast<int>(values_.size());
}

double Series::at(const YearMonth& ym) const {
    if (!covers(ym))
        throw DomainError("series '" + name_ + "' does not cover " + ym.str());
    return values_[static_cast<std::size_t>(ym.months_since(start_))];
}

Series annualized_log_diff(const Series& raw, double scale) {
    if (raw.size() < 2) throw SizeError("annualized_log_diff needs length >= 2");
    if (scale <= 0.0) throw DomainError("scale must be positive");
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i] <= 0.0)
            throw DomainError("non-positive value in '" + raw.name() + "' at " +
                              raw.start().plus_months(static_cast<int>(i)).str());
    std::vector<double> out(raw.size() - 1);
    for (std::size_t t = 1; t < raw.size(); ++t)
        out[t - 1] = std::log(raw[t] / raw[t - 1]) * scale;
    return Series(raw.name() + "_growth", raw.start().plus_months(1), std::move(out));
}

Series first_difference(const Series& s) {
    if (s.size() < 2) throw SizeError("first_difference needs length >= 2");
    std::vector<double> out(s.size() - 1);
    for (std::size_t t = 1; t < s.size(); ++t) out[t - 1] = s[t] - s[t - 1];
    return Series("d_" + s.name(), s.start().plus_months(1), std::move(out));
}

SummaryStats summary_stats(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) throw SizeError("summary_stats needs length >= 4 (kurtosis)");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double nn = static_cast<double>(n);
    m2 /= nn;
    m3 /= nn;
    m4 /= nn;

    SummaryStats st;
    st.mean = mean;
    st.std_dev = std::sqrt(m2 * nn / (nn - 1.0));
    if (m2 <= 0.0) {
        st.degenerate = true;
        st.kurtosis = 0.0;
        return st;
    }
    st.skewness = m3 / std::pow(m2, 1.5);
    st.kurtosis = m4 / (m2 * m2);
    st.jb_stat = nn / 6.0 *
                 (st.skewness * st.skewness + 0.25 * (st.kurtosis - 3.0) * (st.kurtosis - 3.0));
    st.jb_p = 1.0 - chi_square_cdf(st.jb_stat, 2);
    return st;
}

SummaryStats summary_stats(const Series& s) { return summary_stats(s.span()); }

}  // namespace uncvol

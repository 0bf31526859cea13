#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace uncvol {

/// A calendar month. The only sampling frequency in this library is monthly.
struct YearMonth {
    int year = 2000;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    YearMonth plus_months(int n) const;
    /// Signed number of months from `other` to `*this`.
    int months_since(const YearMonth& other) const;

    std::string str() const;                    // "YYYY-MM"
    static YearMonth parse(const std::string&); // throws DomainError
};

/// A named, monthly-stamped numeric sequence. Immutable after construction;
/// gaps are impossible by construction (index i is start + i months).
class Series {
public:
    Series(std::string name, YearMonth start, std::vector<double> values);

    const std::string& name() const { return name_; }
    YearMonth start() const { return start_; }
    YearMonth end() const { return start_.plus_months(static_cast<int>(values_.size()) - 1); }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    /// Value at a calendar month; throws DomainError if outside the sample.
    double at(const YearMonth& ym) const;
    bool covers(const YearMonth& ym) const;

    Series renamed(std::string new_name) const { return Series(std::move(new_name), start_, values_); }

private:
    std::string name_;
    YearMonth start_;
    std::vector<double> values_;
};

/// log(x_t / x_{t-1}) * scale; the inflation / output-growth transform
/// (scale 1200 annualizes monthly log differences in percent).
Series annualized_log_diff(const Series& raw, double scale = 1200.0);

Series first_difference(const Series& s);

struct SummaryStats {
    double mean = 0.0;
    double std_dev = 0.0;   // sample, n-1 denominator
    double skewness = 0.0;  // moment-based
    double kurtosis = 0.0;  // moment-based, non-excess
    double jb_stat = 0.0;
    double jb_p = 1.0;
    bool degenerate = false;  // zero variance, JB undefined
};

SummaryStats summary_stats(std::span<const double> x);
SummaryStats summary_stats(const Series& s);

}  // namespace uncvol

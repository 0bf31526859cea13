#pragma once

#include <string>
#include <vector>

#include "uncvol/regression.hpp"
#include "uncvol/series.hpp"

namespace uncvol {

struct GrangerOutcome {
    double f_stat = 0.0;
    double p_value = 1.0;
    int sign = 0;  // sign of the sum of the causing-variable coefficients
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    int n_obs = 0;
};

/// F-test of excluding lags 1..lag of `causing` from an AR(lag) model of
/// `caused` (intercept included in both models). Series are aligned on their
/// common calendar sample.
GrangerOutcome granger_test(const Series& caused, const Series& causing, int lag);

struct LagResult {
    int lag = 0;
    double f_stat = 0.0;
    double p_value = 1.0;
    bool sig1 = false;
    bool sig5 = false;
    bool sig10 = false;
    int sign = 0;
    bool is_optimal = false;  // chosen by the battery's criterion
};

struct CausalityResult {
    std::string caused;
    std::string causing;
    std::vector<LagResult> per_lag;
    std::string error;  // non-empty when the pair failed
};

struct CausalityPair {
    std::string caused;
    std::string causing;
};

/// Runs granger_test for every pair at every lag. The optimal-lag flag marks
/// the lag whose unrestricted model minimizes the criterion, with all
/// candidates evaluated on the common sample implied by the largest lag.
/// Per-pair failures are recorded in `error` without aborting the battery.
std::vector<CausalityResult> causality_battery(const std::vector<Series>& series_set,
                                               const std::vector<CausalityPair>& pairs,
                                               const std::vector<int>& lag_lengths,
                                               Criterion optimal_criterion = Criterion::aic);

}  // namespace uncvol

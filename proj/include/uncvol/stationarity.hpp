#pragma once

#include "uncvol/series.hpp"

namespace uncvol {

enum class DetSpec { none, constant, constant_trend };

struct UnitRootResult {
    double statistic = 0.0;
    int lags_or_bandwidth = 0;
    DetSpec spec = DetSpec::constant;
    double cv1 = 0.0;  // left-tail critical values, interpolated in T
    double cv5 = 0.0;
    double cv10 = 0.0;
    bool reject1 = false;
    bool reject5 = false;
    bool reject10 = false;
    int effective_obs = 0;
};

/// Augmented Dickey-Fuller t-test. Lag order is chosen in [0, max_lags] by
/// AIC on a common sample, then the statistic comes from a refit at the
/// chosen lag on the full available sample.
UnitRootResult adf_test(const Series& s, DetSpec spec = DetSpec::constant, int max_lags = 12);

/// Phillips-Perron Z_t test with Bartlett-kernel long-run variance.
/// bandwidth < 0 selects the Newey-West default floor(4 (T/100)^{2/9}).
UnitRootResult pp_test(const Series& s, DetSpec spec = DetSpec::constant, int bandwidth = -1);

}  // namespace uncvol

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "uncvol/egarch.hpp"
#include "uncvol/series.hpp"

namespace uncvol {

/// Standard normals from mersenne-twister 64 uniforms through the inverse
/// CDF, so replications are bit-reproducible for a fixed seed.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
    double next();
    /// Derives an independent stream for replication `index` of `base_seed`.
    static NormalSampler for_replication(std::uint64_t base_seed, std::uint64_t index);

private:
    std::mt19937_64 rng_;
};

struct DgpSpec {
    MeanSpec mean_spec;                     // structure of the mean equation
    std::vector<double> mean_coefficients;  // aligned with build order:
                                            // intercept, own lags, cross lags, exogenous
    EgarchParams variance_params;
    int T = 500;
    int burn_in = 200;
    std::uint64_t seed = 0;
    YearMonth start = {2000, 1};

    void validate() const;  // T >= 50, burn_in >= 0, coefficient count
};

/// Simulates one AR-X-EGARCH(1,1) equation. Exogenous drivers, when the spec
/// names any, are supplied as raw paths of length burn_in + T + max_lag.
Series simulate_ar_egarch(const DgpSpec& spec, const std::string& name = "sim",
                          const std::map<std::string, std::vector<double>>& exo_paths = {});

/// Two equations advanced on a shared clock; each uses the other's lags via
/// its cross_lags mask. Innovations come from per-equation streams derived
/// from each spec's seed.
std::pair<Series, Series> simulate_bivariate_system(const DgpSpec& spec_a, const DgpSpec& spec_b,
                                                    const std::string& name_a = "sim_a",
                                                    const std::string& name_b = "sim_b");

}  // namespace uncvol

#pragma once

#include <cstdint>
#include <vector>

#include "ideaflow/series.hpp"

namespace ideaflow {

struct RegressionFit {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> residuals;  // y - alpha - beta * x, elementwise
};

struct BccConfig {
  double theta_local = 0.7;    // posterior threshold for c'_k = 1
  double theta_global = 5.0;   // log-evidence-ratio threshold
  double rho_stay = 0.99;      // Markov self-transition probability
  double variance_floor = 1e-6;
};

struct RegimeTrace {
  std::vector<double> posterior;   // P(cointegrated at k)
  std::vector<std::uint8_t> c_prime;
  double phi = 0.0;                // AR(1) coefficient, |phi| < 1
  double sigma2_c = 0.0;           // cointegrated innovation variance
  double sigma2_n = 0.0;           // unit-root innovation variance
  double log_evidence = 0.0;       // switching model
  double log_evidence_null = 0.0;  // all-non-cointegrated model
};

struct CointegrationResult {
  std::vector<std::uint8_t> c_prime;
  bool global_pass = false;
};

// Ordinary least squares of y on x over the full aligned series.
RegressionFit fit_regression(const TimeSeries& x_aligned,
                             const TimeSeries& y_aligned);

// Two-regime hidden Markov chain over the residuals: the cointegrated regime
// emits eps_k ~ N(phi * eps_{k-1}, sigma2_c) with |phi| < 1, the
// non-cointegrated regime emits eps_k ~ N(eps_{k-1}, sigma2_n) (unit root).
// Exact forward-backward posteriors; c'_k = 1 iff posterior >= theta_local.
RegimeTrace regime_posterior(const RegressionFit& fit, const BccConfig& cfg);

// Full local-cointegration check. A degenerate regressor yields
// (all-zero c', false) rather than an error.
CointegrationResult detect_cointegration(const TimeSeries& x_aligned,
                                         const TimeSeries& y_aligned,
                                         const BccConfig& cfg);

}  // namespace ideaflow

#include "ideaflow/bcc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ideaflow/error.hpp"

namespace ideaflow {

namespace {

constexpr double kRegressorFloor = 1e-12;
constexpr double kLog2Pi = 1.8378770664093453;

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

}  // namespace

RegressionFit fit_regression(const TimeSeries& x_aligned,
                             const TimeSeries& y_aligned) {
  if (x_aligned.size() != y_aligned.size())
    throw DimensionError("fit_regression requires equal lengths");
  const std::size_t n = x_aligned.size();
  if (n < 8) throw InvalidInputError("fit_regression needs at least 8 points");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(x_aligned[k]) || !std::isfinite(y_aligned[k]))
      throw InvalidInputError("non-finite value in aligned series");

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x_aligned[k];
    my += y_aligned[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = x_aligned[k] - mx;
    sxx += dx * dx;
    sxy += dx * (y_aligned[k] - my);
  }
  if (sxx / static_cast<double>(n) < kRegressorFloor)
    throw DegenerateRegressorError("regressor has no variance");

  RegressionFit fit;
  fit.beta = sxy / sxx;
  fit.alpha = my - fit.beta * mx;
  fit.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    fit.residuals[k] = y_aligned[k] - fit.alpha - fit.beta * x_aligned[k];
  return fit;
}

RegimeTrace regime_posterior(const RegressionFit& fit, const BccConfig& cfg) {
  const auto& eps = fit.residuals;
  const std::size_t t = eps.size();
  if (t < 8) throw InvalidInputError("regime_posterior needs >= 8 residuals");
  if (cfg.theta_local <= 0.0 || cfg.theta_local >= 1.0 ||
      cfg.rho_stay <= 0.0 || cfg.rho_stay >= 1.0 || cfg.variance_floor <= 0.0)
    throw ConfigError("bcc thresholds out of range");

  RegimeTrace trace;

  // AR(1) coefficient by conditional least squares on the lagged residuals.
  // The clamp keeps the cointegrated regime genuinely mean-reverting: letting
  // phi chase a unit root makes the two regimes indistinguishable and the
  // evidence ratio uninformative on non-cointegrated pairs.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < t; ++k) {
    num += eps[k] * eps[k - 1];
    den += eps[k - 1] * eps[k - 1];
  }
  trace.phi = den > 0.0 ? std::clamp(num / den, -0.9, 0.9) : 0.0;

  double ss_c = 0.0, ss_n = 0.0;
  for (std::size_t k = 1; k < t; ++k) {
    const double ic = eps[k] - trace.phi * eps[k - 1];
    const double in = eps[k] - eps[k - 1];
    ss_c += ic * ic;
    ss_n += in * in;
  }
  const double m = static_cast<double>(t - 1);
  // The unit-root floor sits a factor above the stationary floor so that
  // residuals degenerate at the floor scale resolve to the cointegrated
  // regime (a perfect fit is maximally mean-reverting).
  trace.sigma2_c = std::max(ss_c / m, cfg.variance_floor);
  trace.sigma2_n = std::max(ss_n / m, 4.0 * cfg.variance_floor);

  // Log emissions; the first residual carries no conditional information, so
  // both states emit it with likelihood 1.
  std::vector<double> log_ec(t, 0.0), log_en(t, 0.0);
  for (std::size_t k = 1; k < t; ++k) {
    log_ec[k] = log_normal_pdf(eps[k], trace.phi * eps[k - 1], trace.sigma2_c);
    log_en[k] = log_normal_pdf(eps[k], eps[k - 1], trace.sigma2_n);
  }

  // Scaled forward-backward with per-step emission shifting; exact marginals
  // without underflow.
  const double rho = cfg.rho_stay;
  std::vector<double> fwd_c(t), fwd_n(t), scale_log(t, 0.0);
  fwd_c[0] = 0.5;
  fwd_n[0] = 0.5;
  double log_evidence = 0.0;
  for (std::size_t k = 1; k < t; ++k) {
    const double shift = std::max(log_ec[k], log_en[k]);
    const double ec = std::exp(log_ec[k] - shift);
    const double en = std::exp(log_en[k] - shift);
    const double ac = (fwd_c[k - 1] * rho + fwd_n[k - 1] * (1.0 - rho)) * ec;
    const double an = (fwd_c[k - 1] * (1.0 - rho) + fwd_n[k - 1] * rho) * en;
    const double norm = ac + an;
    fwd_c[k] = ac / norm;
    fwd_n[k] = an / norm;
    scale_log[k] = shift + std::log(norm);
    log_evidence += scale_log[k];
  }
  trace.log_evidence = log_evidence;

  std::vector<double> bwd_c(t), bwd_n(t);
  bwd_c[t - 1] = 1.0;
  bwd_n[t - 1] = 1.0;
  for (std::size_t k = t - 1; k-- > 0;) {
    const double shift = std::max(log_ec[k + 1], log_en[k + 1]);
    const double ec = std::exp(log_ec[k + 1] - shift);
    const double en = std::exp(log_en[k + 1] - shift);
    const double scale = std::exp(scale_log[k + 1] - shift);
    bwd_c[k] = (rho * ec * bwd_c[k + 1] + (1.0 - rho) * en * bwd_n[k + 1]) / scale;
    bwd_n[k] = ((1.0 - rho) * ec * bwd_c[k + 1] + rho * en * bwd_n[k + 1]) / scale;
  }

  trace.posterior.resize(t);
  trace.c_prime.resize(t);
  for (std::size_t k = 0; k < t; ++k) {
    const double pc = fwd_c[k] * bwd_c[k];
    const double pn = fwd_n[k] * bwd_n[k];
    trace.posterior[k] = pc / (pc + pn);
    trace.c_prime[k] = trace.posterior[k] >= cfg.theta_local ? 1 : 0;
  }

  double log_null = 0.0;
  for (std::size_t k = 1; k < t; ++k) log_null += log_en[k];
  trace.log_evidence_null = log_null;
  return trace;
}

CointegrationResult detect_cointegration(const TimeSeries& x_aligned,
                                         const TimeSeries& y_aligned,
                                         const BccConfig& cfg) {
  CointegrationResult result;
  result.c_prime.assign(x_aligned.size(), 0);
  RegressionFit fit;
  try {
    fit = fit_regression(x_aligned, y_aligned);
  } catch (const DegenerateRegressorError&) {
    return result;
  }
  const RegimeTrace trace = regime_posterior(fit, cfg);
  result.global_pass =
      trace.log_evidence - trace.log_evidence_null >= cfg.theta_global;
  if (result.global_pass) result.c_prime = trace.c_prime;
  return result;
}

}  // namespace ideaflow

#include "cbo/surrogate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbo {

namespace {

// Scale-type draws are clamped to keep the chain away from floating-point
// degeneracy; the window is wide enough not to bite at working magnitudes.
constexpr double kScaleFloor = 1e-12;
constexpr double kScaleCeiling = 1e12;

double inverse_gamma_draw(std::mt19937_64& rng, double shape, double scale) {
  std::gamma_distribution<double> gamma(shape, 1.0 / scale);
  const double g = std::max(gamma(rng), 1e-300);
  return std::clamp(1.0 / g, kScaleFloor, kScaleCeiling);
}

}  // namespace

int feature_dimension(int n) { return 1 + n + n * (n - 1) / 2; }

int pair_feature_index(int i, int j, int n) {
  return 1 + n + i * (2 * n - i - 1) / 2 + (j - i - 1);
}

Eigen::VectorXd feature_map(const BinaryVector& x) {
  const int n = x.dimension();
  Eigen::VectorXd phi(feature_dimension(n));
  phi(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    phi(1 + i) = static_cast<double>(x.bit(i));
  }
  int k = 1 + n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      phi(k++) = static_cast<double>(x.bit(i) & x.bit(j));
    }
  }
  return phi;
}

std::vector<PairTerm> AlphaSample::pair_terms() const {
  const int n = static_cast<int>(linear.size());
  std::vector<PairTerm> terms;
  terms.reserve(static_cast<std::size_t>(pairwise.size()));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      terms.push_back({i, j, pairwise(k++)});
    }
  }
  return terms;
}

AlphaSample unpack_alpha(const Eigen::VectorXd& coefficients, int n) {
  if (coefficients.size() != feature_dimension(n)) {
    throw std::invalid_argument("unpack_alpha: coefficient length does not match dimension");
  }
  AlphaSample out;
  out.alpha0 = coefficients(0);
  out.linear = coefficients.segment(1, n);
  out.pairwise = coefficients.segment(1 + n, n * (n - 1) / 2);
  return out;
}

QuadraticPbf from_alpha(const AlphaSample& alpha, double l1_penalty) {
  const std::vector<PairTerm> terms = alpha.pair_terms();
  return from_alpha(alpha.alpha0, alpha.linear, terms, l1_penalty);
}

GibbsState::GibbsState(const std::vector<std::pair<BinaryVector, double>>& data,
                       std::uint64_t seed, const SurrogateOptions& options)
    : options_(options), rng_(seed) {
  if (data.empty()) {
    throw std::invalid_argument("GibbsState: data must be non-empty");
  }
  if (options.intercept_prior_variance <= 0.0) {
    throw std::invalid_argument("GibbsState: intercept prior variance must be positive");
  }
  input_dimension_ = data.front().first.dimension();
  const int p = feature_dimension(input_dimension_);
  const int count = static_cast<int>(data.size());

  features_.resize(count, p);
  targets_.resize(count);
  for (int r = 0; r < count; ++r) {
    const auto& [x, y] = data[static_cast<std::size_t>(r)];
    if (x.dimension() != input_dimension_) {
      throw std::invalid_argument("GibbsState: inputs must share one dimension");
    }
    if (!std::isfinite(y)) {
      throw std::invalid_argument("GibbsState: targets must be finite");
    }
    features_.row(r) = feature_map(x).transpose();
    targets_(r) = y;
  }
  gram_ = features_.transpose() * features_;
  phi_t_y_ = features_.transpose() * targets_;
  column_sq_norms_ = features_.colwise().squaredNorm();

  coefficients_ = Eigen::VectorXd::Zero(p);
  lambda_sq_ = Eigen::VectorXd::Ones(p);
  nu_ = Eigen::VectorXd::Ones(p);
}

Eigen::VectorXd GibbsState::local_scales() const { return lambda_sq_.cwiseSqrt(); }

double GibbsState::global_scale() const { return std::sqrt(tau_sq_); }

double GibbsState::prior_precision(int k) const {
  if (k == 0) return 1.0 / options_.intercept_prior_variance;
  return 1.0 / (sigma2_ * tau_sq_ * lambda_sq_(k));
}

void GibbsState::advance_one_sweep() {
  if (feature_count() <= options_.joint_draw_max_dim) {
    draw_coefficients_joint();
  } else {
    draw_coefficients_coordinatewise();
  }
  draw_noise_variance();
  draw_scales();
}

void GibbsState::draw_coefficients_joint() {
  const int p = feature_count();
  Eigen::MatrixXd precision = gram_ / sigma2_;
  for (int k = 0; k < p; ++k) {
    precision(k, k) += prior_precision(k);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  double jitter = 1e-10;
  while (llt.info() != Eigen::Success) {
    precision.diagonal().array() += jitter;
    jitter *= 10.0;
    llt.compute(precision);
  }

  const Eigen::VectorXd mean = llt.solve(phi_t_y_ / sigma2_);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  Eigen::VectorXd z(p);
  for (int k = 0; k < p; ++k) {
    z(k) = unit_normal(rng_);
  }
  // cov = precision^{-1} = L^{-T} L^{-1}, so mean + L^{-T} z has the right law.
  coefficients_ = mean + llt.matrixU().solve(z);
}

void GibbsState::draw_coefficients_coordinatewise() {
  const int p = feature_count();
  Eigen::VectorXd residual = targets_ - features_ * coefficients_;
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  for (int k = 0; k < p; ++k) {
    const auto column = features_.col(k);
    const double old_value = coefficients_(k);
    const double precision = column_sq_norms_(k) / sigma2_ + prior_precision(k);
    const double cross = column.dot(residual) + column_sq_norms_(k) * old_value;
    const double mean = cross / (sigma2_ * precision);
    const double new_value = mean + unit_normal(rng_) / std::sqrt(precision);
    residual += column * (old_value - new_value);
    coefficients_(k) = new_value;
  }
}

void GibbsState::draw_noise_variance() {
  const int p = feature_count();
  const double rss = (targets_ - features_ * coefficients_).squaredNorm();
  double scaled_sq = 0.0;
  for (int k = 1; k < p; ++k) {
    scaled_sq += coefficients_(k) * coefficients_(k) / (tau_sq_ * lambda_sq_(k));
  }
  const double shape = 0.5 * static_cast<double>(targets_.size() + p - 1);
  sigma2_ = inverse_gamma_draw(rng_, shape, 0.5 * (rss + scaled_sq));
}

void GibbsState::draw_scales() {
  const int p = feature_count();
  double shrunk_sq_sum = 0.0;
  for (int k = 1; k < p; ++k) {
    const double alpha_sq = coefficients_(k) * coefficients_(k);
    lambda_sq_(k) = inverse_gamma_draw(rng_, 1.0, 1.0 / nu_(k) + alpha_sq / (2.0 * sigma2_ * tau_sq_));
    nu_(k) = inverse_gamma_draw(rng_, 1.0, 1.0 + 1.0 / lambda_sq_(k));
    shrunk_sq_sum += alpha_sq / lambda_sq_(k);
  }
  tau_sq_ = inverse_gamma_draw(rng_, 0.5 * static_cast<double>(p), 1.0 / xi_ + shrunk_sq_sum / (2.0 * sigma2_));
  xi_ = inverse_gamma_draw(rng_, 1.0, 1.0 + 1.0 / tau_sq_);
}

GibbsState gibbs_fit(const std::vector<std::pair<BinaryVector, double>>& data, int burn_in,
                     std::uint64_t seed, const SurrogateOptions& options) {
  if (burn_in < 0) {
    throw std::invalid_argument("gibbs_fit: burn_in must be non-negative");
  }
  GibbsState state(data, seed, options);
  for (int sweep = 0; sweep < burn_in; ++sweep) {
    state.advance_one_sweep();
  }
  return state;
}

AlphaSample thompson_draw(GibbsState& state) {
  state.advance_one_sweep();
  return unpack_alpha(state.coefficients(), state.input_dimension());
}

}  // namespace cbo

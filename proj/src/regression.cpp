#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "summer/error.hpp"
#include "summer/evaluation.hpp"

namespace summer {

namespace {

struct LogisticTerm {
  double value;       // g(t)
  double derivative;  // dg/dt
};

LogisticTerm logistic_term(LogisticForm form, double t) {
  if (form == LogisticForm::kStandard) {
    const double s = 1.0 / (1.0 + std::exp(t));
    return {0.5 - s, s * (1.0 - s)};
  }
  const double p = 1.0 / (2.0 + std::exp(t));
  return {1.0 - p, p * (1.0 - 2.0 * p)};
}

double evaluate(LogisticForm form, const std::array<double, 5>& b, double q) {
  return b[0] * logistic_term(form, b[1] * (q - b[2])).value + b[3] * q + b[4];
}

double sum_squared_residuals(LogisticForm form, const std::array<double, 5>& b,
                             std::span<const double> x, std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - evaluate(form, b, x[i]);
    sse += r * r;
  }
  return sse;
}

RegressionModel levenberg_marquardt(std::span<const double> objective,
                                    std::span<const double> subjective,
                                    const RegressionOptions& options,
                                    const std::array<double, 5>& start) {
  const std::size_t n = objective.size();
  const LogisticForm form = options.form;
  RegressionModel model;
  model.form = form;
  model.beta = start;

  double scale = 0.0;
  for (double y : subjective) scale += y * y;
  const double sse_floor = 1e-30 * (1.0 + scale);

  Eigen::MatrixXd jac(n, 5);
  Eigen::VectorXd resid(n);
  double sse = sum_squared_residuals(form, model.beta, objective, subjective);
  double lambda = 1e-3;

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    model.iterations = iter + 1;
    if (sse <= sse_floor) {
      model.converged = true;
      break;
    }
    const auto& b = model.beta;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = objective[i];
      const LogisticTerm g = logistic_term(form, b[1] * (q - b[2]));
      jac(i, 0) = g.value;
      jac(i, 1) = b[0] * g.derivative * (q - b[2]);
      jac(i, 2) = -b[0] * g.derivative * b[1];
      jac(i, 3) = q;
      jac(i, 4) = 1.0;
      resid(i) = subjective[i] - (b[0] * g.value + b[3] * q + b[4]);
    }
    const Eigen::Matrix<double, 5, 5> jtj = jac.transpose() * jac;
    const Eigen::Matrix<double, 5, 1> jtr = jac.transpose() * resid;
    // Marquardt scaling with a floor so directions that currently carry no
    // curvature (b2, b3 while b1 == 0) still get a regularized step.
    const double diag_floor = 1e-9 * std::max(1.0, jtj.diagonal().maxCoeff());

    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix<double, 5, 5> damped = jtj;
      for (int k = 0; k < 5; ++k) damped(k, k) += lambda * std::max(jtj(k, k), diag_floor);
      const Eigen::Matrix<double, 5, 1> step = damped.ldlt().solve(jtr);
      std::array<double, 5> trial = model.beta;
      for (int k = 0; k < 5; ++k) trial[static_cast<std::size_t>(k)] += step(k);
      const double trial_sse = sum_squared_residuals(form, trial, objective, subjective);
      if (std::isfinite(trial_sse) && step.allFinite() && trial_sse < sse) {
        const double relative_change = (sse - trial_sse) / std::max(sse, sse_floor);
        model.beta = trial;
        sse = trial_sse;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        if (relative_change < options.relative_tolerance) model.converged = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e16) {
          // No damped step lowers the residual: a stationary point.
          model.converged = true;
          break;
        }
      }
    }
    if (model.converged) break;
  }
  model.residual_rmse = std::sqrt(sse / static_cast<double>(n));
  return model;
}

}  // namespace

double RegressionModel::apply(double objective) const { return evaluate(form, beta, objective); }

std::vector<double> RegressionModel::apply(std::span<const double> objective) const {
  std::vector<double> out(objective.size());
  for (std::size_t i = 0; i < objective.size(); ++i) out[i] = apply(objective[i]);
  return out;
}

RegressionModel fit_regression(std::span<const double> objective,
                               std::span<const double> subjective,
                               const RegressionOptions& options) {
  if (objective.size() != subjective.size()) {
    throw ParameterError("regression inputs differ in length (" +
                         std::to_string(objective.size()) + " vs " +
                         std::to_string(subjective.size()) + ")");
  }
  if (objective.size() < 6) {
    throw ParameterError("regression needs at least 6 points, got " +
                         std::to_string(objective.size()));
  }
  for (std::size_t i = 0; i < objective.size(); ++i) {
    if (!std::isfinite(objective[i]) || !std::isfinite(subjective[i])) {
      throw ParameterError("regression input " + std::to_string(i) + " is not finite");
    }
  }

  RegressionModel primary = levenberg_marquardt(objective, subjective, options, options.initial);

  // Second start at the affine least-squares fit (b1 == 0). A shallow
  // logistic is nearly collinear with the linear term, and the primary start
  // can stall in that valley on almost-linear data.
  Eigen::MatrixXd design(objective.size(), 2);
  Eigen::VectorXd target(objective.size());
  for (std::size_t i = 0; i < objective.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = objective[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    target(static_cast<Eigen::Index>(i)) = subjective[i];
  }
  const Eigen::Vector2d affine = design.colPivHouseholderQr().solve(target);
  if (!affine.allFinite()) return primary;
  std::array<double, 5> affine_start = options.initial;
  affine_start[0] = 0.0;
  affine_start[3] = affine(0);
  affine_start[4] = affine(1);
  RegressionModel secondary = levenberg_marquardt(objective, subjective, options, affine_start);
  return secondary.residual_rmse < primary.residual_rmse ? secondary : primary;
}

}  // namespace summer

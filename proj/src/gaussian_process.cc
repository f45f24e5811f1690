/*
 * Copyright 2026 The pragmatune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gaussian_process.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "pragmatune/error.h"

namespace pragmatune::detail {
namespace {

constexpr double kInterpolationTolerance = 1e-7;

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = (x.row(i) - x.row(j)).squaredNorm();
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return d2;
}

struct Candidate {
  double length_scale;
  double jitter;
  double signal_variance;
  double lml;
  bool interpolates;  // training residual jitter * |alpha| is negligible
  Eigen::LLT<Eigen::MatrixXd> chol;
  Eigen::VectorXd alpha;
};

// Correlation matrix factorization with escalating diagonal jitter.
std::optional<Candidate> try_length_scale(const Eigen::MatrixXd& d2,
                                          const Eigen::VectorXd& yc,
                                          double length_scale) {
  const Eigen::Index n = d2.rows();
  const Eigen::MatrixXd corr =
      (-d2.array() / (2.0 * length_scale * length_scale)).exp().matrix();
  for (double jitter = GaussianProcess::kJitterStart;
       jitter <= GaussianProcess::kJitterMax * (1.0 + 1e-9); jitter *= 10.0) {
    Eigen::MatrixXd k = corr;
    k.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> chol(k);
    if (chol.info() != Eigen::Success) continue;
    const auto diag = chol.matrixLLT().diagonal();
    if ((diag.array() <= 0.0).any() || !diag.allFinite()) continue;

    Eigen::VectorXd alpha = chol.solve(yc);
    const double quad = yc.dot(alpha);
    const double nd = static_cast<double>(n);
    const double signal_variance = std::max(quad / nd, 0.0);
    double lml;
    if (signal_variance <= std::numeric_limits<double>::min()) {
      // Constant targets: every length scale fits perfectly.
      lml = std::numeric_limits<double>::infinity();
    } else {
      const double log_det = 2.0 * diag.array().log().sum();
      lml = -0.5 * nd * std::log(signal_variance) - 0.5 * log_det -
            0.5 * nd - 0.5 * nd * std::log(2.0 * std::numbers::pi);
    }
    const double scale = std::max(1.0, yc.lpNorm<Eigen::Infinity>());
    const bool interpolates =
        jitter * alpha.lpNorm<Eigen::Infinity>() <= kInterpolationTolerance * scale;
    return Candidate{length_scale, jitter, signal_variance, lml, interpolates,
                     std::move(chol), std::move(alpha)};
  }
  return std::nullopt;
}

}  // namespace

GaussianProcess::GaussianProcess(const TrainingSet& data) {
  const auto n = static_cast<Eigen::Index>(data.x.size());
  const auto d = static_cast<Eigen::Index>(data.x.front().size());
  x_.resize(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      x_(i, j) = data.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    y(i) = data.y[static_cast<std::size_t>(i)];
  }
  mean_ = y.mean();
  const Eigen::VectorXd yc = y.array() - mean_;
  const Eigen::MatrixXd d2 = squared_distances(x_);

  std::optional<Candidate> best;
  const double step = std::log(kGridMax / kGridMin) / (kGridPoints - 1);
  for (int g = 0; g < kGridPoints; ++g) {
    const double length_scale = kGridMin * std::exp(step * g);
    auto c = try_length_scale(d2, yc, length_scale);
    if (!c) continue;
    // Interpolating fits first, then likelihood.
    if (!best || c->interpolates > best->interpolates ||
        (c->interpolates == best->interpolates && c->lml > best->lml)) {
      best = std::move(c);
    }
  }
  if (!best) {
    throw Error(Errc::kSingularKernel,
                "kernel matrix not positive definite at jitter " +
                    std::to_string(kJitterMax));
  }
  hyper_ = {best->length_scale, best->signal_variance, best->jitter,
            best->lml};
  chol_ = std::move(best->chol);
  alpha_ = std::move(best->alpha);
}

Prediction GaussianProcess::predict(std::span<const double> x) const {
  const Eigen::Index n = x_.rows();
  const Eigen::Map<const Eigen::RowVectorXd> point(
      x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd r(n);
  const double inv = 1.0 / (2.0 * hyper_.length_scale * hyper_.length_scale);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = std::exp(-(x_.row(i) - point).squaredNorm() * inv);
  }
  const double mean = mean_ + r.dot(alpha_);
  const Eigen::VectorXd v = chol_.matrixL().solve(r);
  const double var = hyper_.signal_variance * std::max(0.0, 1.0 - v.squaredNorm());
  return {mean, std::sqrt(var)};
}

}  // namespace pragmatune::detail

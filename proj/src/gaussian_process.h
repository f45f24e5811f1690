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

#ifndef PRAGMATUNE_SRC_GAUSSIAN_PROCESS_H_
#define PRAGMATUNE_SRC_GAUSSIAN_PROCESS_H_

#include <Eigen/Dense>

#include "pragmatune/surrogate.h"

namespace pragmatune::detail {

// Zero-noise GP regressor with a constant mean (the target average) and an
// isotropic squared-exponential kernel
//   k(a, b) = s2 * exp(-|a - b|^2 / (2 l^2)).
// The length scale l is the best of a fixed log grid by log marginal
// likelihood; s2 is the closed-form maximizer for each l.
class GaussianProcess final : public Regressor {
 public:
  static constexpr int kGridPoints = 16;
  static constexpr double kGridMin = 1e-2;
  static constexpr double kGridMax = 1e2;
  static constexpr double kJitterStart = 1e-8;
  static constexpr double kJitterMax = 1e-2;

  GaussianProcess(const TrainingSet& data);

  Prediction predict(std::span<const double> x) const override;
  const GpHyperparameters& hyperparameters() const { return hyper_; }

 private:
  Eigen::MatrixXd x_;
  double mean_ = 0.0;
  GpHyperparameters hyper_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
};

}  // namespace pragmatune::detail

#endif  // PRAGMATUNE_SRC_GAUSSIAN_PROCESS_H_

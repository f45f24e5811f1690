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

#ifndef PRAGMATUNE_SURROGATE_H_
#define PRAGMATUNE_SURROGATE_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pragmatune/space.h"

namespace pragmatune {

enum class SurrogateKind {
  kRandomForest,
  kExtraTrees,
  kGradientBoosting,
  kGaussianProcess,
};

std::string_view surrogate_kind_name(SurrogateKind kind);

struct TrainingSet {
  std::vector<FeatureVector> x;
  std::vector<double> y;
};

struct Prediction {
  double mean = 0.0;
  double sigma = 0.0;
};

struct SurrogateOptions {
  // Random forest / extra trees.
  int num_trees = 100;
  int min_leaf = 2;
  // Gradient boosting, one ensemble per quantile.
  int boosting_stages = 100;
  double learning_rate = 0.1;
  int boosting_max_depth = 3;
  double lower_quantile = 0.16;
  double upper_quantile = 0.84;
  // Gaussian process.
  std::size_t gp_max_points = 1000;
};

// Squared-exponential kernel hyperparameters selected by the GP fit.
struct GpHyperparameters {
  double length_scale = 1.0;
  double signal_variance = 1.0;
  double jitter = 1e-8;
  double log_marginal_likelihood = 0.0;
};

namespace detail {
class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual Prediction predict(std::span<const double> x) const = 0;
  // `flat` holds `out.size()` row-major feature vectors.
  virtual void predict_rows(std::span<const double> flat,
                            std::span<Prediction> out) const;
};
}  // namespace detail

// Immutable fitted model; copies share state and predict() is safe to call
// concurrently.
class SurrogateModel {
 public:
  SurrogateKind kind() const { return kind_; }
  std::size_t feature_length() const { return feature_length_; }

  // Throws kFeatureLengthMismatch.
  std::vector<Prediction> predict(std::span<const FeatureVector> x) const;
  Prediction predict_one(std::span<const double> x) const;

  std::optional<GpHyperparameters> gp_hyperparameters() const {
    return gp_;
  }

 private:
  friend SurrogateModel fit(SurrogateKind, const TrainingSet&, std::uint64_t,
                            const SurrogateOptions&);

  SurrogateKind kind_ = SurrogateKind::kRandomForest;
  std::size_t feature_length_ = 0;
  std::shared_ptr<const detail::Regressor> impl_;
  std::optional<GpHyperparameters> gp_;
};

// Deterministic for a fixed (kind, data, seed). Throws kEmptyTrainingSet,
// kInvalidArgument (ragged or non-finite data), kTrainingSetTooLarge (GP
// above gp_max_points) and kSingularKernel.
SurrogateModel fit(SurrogateKind kind, const TrainingSet& data,
                   std::uint64_t seed, const SurrogateOptions& options = {});

}  // namespace pragmatune

#endif  // PRAGMATUNE_SURROGATE_H_

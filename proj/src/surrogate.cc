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

#include "pragmatune/surrogate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gaussian_process.h"
#include "pragmatune/error.h"
#include "regression_tree.h"

namespace pragmatune {
namespace detail {
namespace {

std::size_t sqrt_features(std::size_t d) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));
}

// Bagged (random forest) or fully randomized (extra trees) ensemble. Sigma is
// the spread of the per-tree predictions.
class TreeEnsemble final : public Regressor {
 public:
  TreeEnsemble(const TrainingSet& data, bool extra_trees, std::uint64_t seed,
               const SurrogateOptions& options) {
    const DenseMatrix x(data.x);
    const std::size_t n = x.rows();
    TreeParams params;
    params.rule = extra_trees ? SplitRule::kRandom : SplitRule::kBest;
    params.max_features = sqrt_features(x.cols());
    params.min_leaf = static_cast<std::size_t>(std::max(options.min_leaf, 1));

    Rng master(seed);
    trees_.reserve(static_cast<std::size_t>(options.num_trees));
    for (int t = 0; t < options.num_trees; ++t) {
      Rng rng(master.next_u64());
      std::vector<std::uint32_t> weights(n, extra_trees ? 1 : 0);
      if (!extra_trees) {
        for (std::size_t i = 0; i < n; ++i) ++weights[rng.uniform_index(n)];
      }
      trees_.push_back(RegressionTree::grow(x, data.y, weights, params, rng));
    }
  }

  void predict_rows(std::span<const double> flat,
                    std::span<Prediction> out) const override {
    const std::size_t n = out.size();
    const std::size_t d = n ? flat.size() / n : 0;
    std::vector<double> sum(n, 0.0);
    std::vector<double> sum_sq(n, 0.0);
    for (const RegressionTree& tree : trees_) {
      tree.accumulate(flat.data(), n, d, 1.0, sum.data(), sum_sq.data());
    }
    const double m = static_cast<double>(trees_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = sum[i] / m;
      out[i] = {mean, std::sqrt(std::max(0.0, sum_sq[i] / m - mean * mean))};
    }
  }

  Prediction predict(std::span<const double> x) const override {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const RegressionTree& tree : trees_) {
      const double v = tree.predict(x.data());
      sum += v;
      sum_sq += v * v;
    }
    const double m = static_cast<double>(trees_.size());
    const double mean = sum / m;
    const double var = std::max(0.0, sum_sq / m - mean * mean);
    return {mean, std::sqrt(var)};
  }

 private:
  std::vector<RegressionTree> trees_;
};

// Lower quantile of a non-empty sample: the first order statistic whose
// cumulative share reaches alpha.
double quantile_of(std::vector<double> values, double alpha) {
  std::sort(values.begin(), values.end());
  const double pos = std::ceil(alpha * static_cast<double>(values.size()));
  const auto idx = static_cast<std::size_t>(std::max(pos, 1.0)) - 1;
  return values[std::min(idx, values.size() - 1)];
}

// Gradient boosting under the pinball loss for one quantile level. Trees fit
// the negative gradient, then each leaf is reset to the residual quantile of
// the rows it holds.
class QuantileBoosting {
 public:
  QuantileBoosting(const DenseMatrix& x, std::span<const double> y,
                   double alpha, Rng& rng, const SurrogateOptions& options)
      : learning_rate_(options.learning_rate) {
    const std::size_t n = x.rows();
    init_ = quantile_of({y.begin(), y.end()}, alpha);
    std::vector<double> f(n, init_);
    std::vector<double> gradient(n);
    TreeParams params;
    params.rule = SplitRule::kBest;
    params.max_features = x.cols();
    params.min_leaf = 1;
    params.max_depth = options.boosting_max_depth;

    const std::vector<std::uint32_t> all(n, 1);
    for (int stage = 0; stage < options.boosting_stages; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        gradient[i] = y[i] > f[i] ? alpha : alpha - 1.0;
      }
      RegressionTree tree = RegressionTree::grow(x, gradient, all, params, rng);

      std::vector<std::vector<double>> residuals(tree.num_nodes());
      std::vector<std::size_t> leaf(n);
      for (std::size_t i = 0; i < n; ++i) {
        leaf[i] = tree.leaf_of(x.row(i));
        residuals[leaf[i]].push_back(y[i] - f[i]);
      }
      for (std::size_t node = 0; node < residuals.size(); ++node) {
        if (!residuals[node].empty()) {
          tree.set_leaf_value(node, quantile_of(residuals[node], alpha));
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        f[i] += learning_rate_ * tree.predict(x.row(i));
      }
      trees_.push_back(std::move(tree));
    }
  }

  std::vector<double> predict_rows(std::span<const double> flat,
                                   std::size_t n) const {
    const std::size_t d = n ? flat.size() / n : 0;
    std::vector<double> v(n, init_);
    for (const RegressionTree& tree : trees_) {
      tree.accumulate(flat.data(), n, d, learning_rate_, v.data());
    }
    return v;
  }

  double predict(const double* x) const {
    double v = init_;
    for (const RegressionTree& tree : trees_) {
      v += learning_rate_ * tree.predict(x);
    }
    return v;
  }

 private:
  double learning_rate_;
  double init_ = 0.0;
  std::vector<RegressionTree> trees_;
};

// Median model for the mean, half the 16%-84% spread for sigma. Outputs are
// clamped to the training target range.
class GradientBoostedQuantiles final : public Regressor {
 public:
  GradientBoostedQuantiles(const TrainingSet& data, std::uint64_t seed,
                           const SurrogateOptions& options) {
    const DenseMatrix x(data.x);
    auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
    y_min_ = *lo;
    y_max_ = *hi;
    Rng rng(seed);
    lower_.emplace(x, data.y, options.lower_quantile, rng, options);
    median_.emplace(x, data.y, 0.5, rng, options);
    upper_.emplace(x, data.y, options.upper_quantile, rng, options);
  }

  Prediction predict(std::span<const double> x) const override {
    auto clamp = [&](double v) { return std::clamp(v, y_min_, y_max_); };
    const double lower = clamp(lower_->predict(x.data()));
    const double median = clamp(median_->predict(x.data()));
    const double upper = clamp(upper_->predict(x.data()));
    return {median, std::max(0.0, 0.5 * (upper - lower))};
  }

  void predict_rows(std::span<const double> flat,
                    std::span<Prediction> out) const override {
    auto clamp = [&](double v) { return std::clamp(v, y_min_, y_max_); };
    const auto lower = lower_->predict_rows(flat, out.size());
    const auto median = median_->predict_rows(flat, out.size());
    const auto upper = upper_->predict_rows(flat, out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = {clamp(median[i]),
                std::max(0.0, 0.5 * (clamp(upper[i]) - clamp(lower[i])))};
    }
  }

 private:
  double y_min_ = 0.0;
  double y_max_ = 0.0;
  std::optional<QuantileBoosting> lower_;
  std::optional<QuantileBoosting> median_;
  std::optional<QuantileBoosting> upper_;
};

}  // namespace

void Regressor::predict_rows(std::span<const double> flat,
                             std::span<Prediction> out) const {
  const std::size_t d = out.empty() ? 0 : flat.size() / out.size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = predict(flat.subspan(i * d, d));
  }
}

}  // namespace detail

std::string_view surrogate_kind_name(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::kRandomForest: return "RF";
    case SurrogateKind::kExtraTrees: return "ET";
    case SurrogateKind::kGradientBoosting: return "GBRT";
    case SurrogateKind::kGaussianProcess: return "GP";
  }
  return "?";
}

std::vector<Prediction> SurrogateModel::predict(
    std::span<const FeatureVector> x) const {
  std::vector<double> flat;
  flat.reserve(x.size() * feature_length_);
  for (const FeatureVector& row : x) {
    if (row.size() != feature_length_) {
      throw Error(Errc::kFeatureLengthMismatch,
                  "expected " + std::to_string(feature_length_) +
                      " features, got " + std::to_string(row.size()));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  std::vector<Prediction> out(x.size());
  impl_->predict_rows(flat, out);
  return out;
}

Prediction SurrogateModel::predict_one(std::span<const double> x) const {
  if (x.size() != feature_length_) {
    throw Error(Errc::kFeatureLengthMismatch,
                "expected " + std::to_string(feature_length_) +
                    " features, got " + std::to_string(x.size()));
  }
  return impl_->predict(x);
}

SurrogateModel fit(SurrogateKind kind, const TrainingSet& data,
                   std::uint64_t seed, const SurrogateOptions& options) {
  if (data.x.empty() || data.y.empty()) {
    throw Error(Errc::kEmptyTrainingSet, "no training rows");
  }
  if (data.x.size() != data.y.size()) {
    throw Error(Errc::kInvalidArgument, "feature and target counts differ");
  }
  const std::size_t d = data.x.front().size();
  for (const FeatureVector& row : data.x) {
    if (row.size() != d) {
      throw Error(Errc::kFeatureLengthMismatch, "ragged training features");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error(Errc::kInvalidArgument, "non-finite feature value");
      }
    }
  }
  for (double v : data.y) {
    if (!std::isfinite(v)) {
      throw Error(Errc::kInvalidArgument, "non-finite target value");
    }
  }

  SurrogateModel model;
  model.kind_ = kind;
  model.feature_length_ = d;
  switch (kind) {
    case SurrogateKind::kRandomForest:
      model.impl_ =
          std::make_shared<detail::TreeEnsemble>(data, false, seed, options);
      break;
    case SurrogateKind::kExtraTrees:
      model.impl_ =
          std::make_shared<detail::TreeEnsemble>(data, true, seed, options);
      break;
    case SurrogateKind::kGradientBoosting:
      model.impl_ = std::make_shared<detail::GradientBoostedQuantiles>(
          data, seed, options);
      break;
    case SurrogateKind::kGaussianProcess: {
      if (data.x.size() > options.gp_max_points) {
        throw Error(Errc::kTrainingSetTooLarge,
                    std::to_string(data.x.size()) + " rows exceed the GP cap of " +
                        std::to_string(options.gp_max_points));
      }
      auto gp = std::make_shared<detail::GaussianProcess>(data);
      model.gp_ = gp->hyperparameters();
      model.impl_ = std::move(gp);
      break;
    }
  }
  return model;
}

}  // namespace pragmatune

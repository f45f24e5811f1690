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

#ifndef PRAGMATUNE_SRC_REGRESSION_TREE_H_
#define PRAGMATUNE_SRC_REGRESSION_TREE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pragmatune/rng.h"
#include "pragmatune/space.h"

namespace pragmatune::detail {

// Row-major copy of a training set's features, with the rows presorted by
// each column.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::span<const FeatureVector> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  // Row indices in ascending order of column j (stable).
  const std::vector<std::uint32_t>& order(std::size_t j) const {
    return order_[j];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<std::vector<std::uint32_t>> order_;
};

enum class SplitRule {
  kBest,    // best threshold over the sorted feature values
  kRandom,  // one uniform threshold per candidate feature (extra trees)
};

struct TreeParams {
  SplitRule rule = SplitRule::kBest;
  // Non-constant features examined per split.
  std::size_t max_features = 1;
  std::size_t min_leaf = 1;
  // Negative means unlimited.
  int max_depth = -1;
};

class RegressionTree {
 public:
  // `weights[i]` is how many times row i is drawn (0 leaves it out; bootstrap
  // samples repeat rows).
  static RegressionTree grow(const DenseMatrix& x, std::span<const double> y,
                             std::span<const std::uint32_t> weights,
                             const TreeParams& params, Rng& rng);

  double predict(const double* x) const { return values_[leaf_of(x)]; }
  std::size_t leaf_of(const double* x) const {
    std::size_t i = 0;
    for (int k = 0; k < depth_; ++k) {
      const Node& node = nodes_[i];
      i = node.left + (x[node.feature] > node.threshold ? 1 : 0);
    }
    return i;
  }
  // Adds scale * prediction to out[i] for each of the n rows of `flat`
  // (row stride d).
  void accumulate(const double* flat, std::size_t n, std::size_t d,
                  double scale, double* out, double* out_sq = nullptr) const;
  void set_leaf_value(std::size_t node, double value) { values_[node] = value; }
  std::size_t num_nodes() const { return nodes_.size(); }

 private:
  // The right child of an inner node is always left + 1. A leaf points at
  // itself with an infinite threshold, so every walk can take exactly
  // depth_ steps.
  struct Node {
    double threshold = std::numeric_limits<double>::infinity();
    std::uint32_t feature = 0;
    std::uint32_t left = 0;
  };
  std::vector<Node> nodes_;
  std::vector<double> values_;
  int depth_ = 0;
};

}  // namespace pragmatune::detail

#endif  // PRAGMATUNE_SRC_REGRESSION_TREE_H_

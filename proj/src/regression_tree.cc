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

#include "regression_tree.h"

#include <algorithm>
#include <numeric>
#include <utility>

namespace pragmatune::detail {

DenseMatrix::DenseMatrix(std::span<const FeatureVector> rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const FeatureVector& r : rows) {
    data_.insert(data_.end(), r.begin(), r.end());
  }
  order_.resize(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    order_[j].resize(rows_);
    std::iota(order_[j].begin(), order_[j].end(), std::uint32_t{0});
    std::stable_sort(order_[j].begin(), order_[j].end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return at(a, j) < at(b, j);
                     });
  }
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  // sum_l^2/n_l + sum_r^2/n_r; larger means lower squared error.
  double score = -1.0;
};

struct Frame {
  std::size_t node;
  std::size_t begin;
  std::size_t end;
  int depth;
};

}  // namespace

RegressionTree RegressionTree::grow(const DenseMatrix& x,
                                    std::span<const double> y,
                                    std::span<const std::uint32_t> weights,
                                    const TreeParams& params, Rng& rng) {
  RegressionTree tree;
  const std::size_t d = x.cols();
  const double min_leaf =
      static_cast<double>(std::max<std::size_t>(params.min_leaf, 1));
  std::vector<std::size_t> features(d);
  std::iota(features.begin(), features.end(), std::size_t{0});

  // order[f] lists the drawn rows sorted by feature f; every node owns the
  // same range [begin, end) of each list. Random splits need no sorting and
  // keep a single list.
  const bool sorted = params.rule == SplitRule::kBest;
  std::vector<std::vector<std::uint32_t>> order(sorted ? d : std::min<std::size_t>(d, 1));
  for (std::size_t f = 0; f < order.size(); ++f) {
    for (std::uint32_t r : x.order(f)) {
      if (weights[r] > 0) order[f].push_back(r);
    }
  }
  const std::size_t total = d ? order[0].size() : 0;
  std::vector<char> goes_left(x.rows(), 0);
  std::vector<std::uint32_t> scratch(total);

  tree.nodes_.emplace_back();
  tree.values_.push_back(0.0);
  if (total == 0) return tree;
  std::vector<Frame> stack{{0, 0, total, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();

    double n = 0.0;
    double sum = 0.0;
    double lo_y = y[order[0][f.begin]];
    double hi_y = lo_y;
    for (std::size_t i = f.begin; i < f.end; ++i) {
      const std::uint32_t r = order[0][i];
      const double v = y[r];
      n += weights[r];
      sum += weights[r] * v;
      lo_y = std::min(lo_y, v);
      hi_y = std::max(hi_y, v);
    }
    tree.values_[f.node] = sum / n;
    if (n < 2 * min_leaf || lo_y == hi_y ||
        (params.max_depth >= 0 && f.depth >= params.max_depth)) {
      continue;
    }

    Split best;
    std::size_t visited = 0;
    rng.shuffle(std::span<std::size_t>(features));
    for (std::size_t feature : features) {
      if (visited >= params.max_features) break;
      if (!sorted) {
        const auto& rows = order[0];
        double lo = x.at(rows[f.begin], feature);
        double hi = lo;
        for (std::size_t i = f.begin + 1; i < f.end; ++i) {
          lo = std::min(lo, x.at(rows[i], feature));
          hi = std::max(hi, x.at(rows[i], feature));
        }
        if (lo == hi) continue;  // constant features do not count
        ++visited;
        const double t = rng.uniform(lo, hi);
        double sl = 0.0;
        double nl = 0.0;
        for (std::size_t i = f.begin; i < f.end; ++i) {
          if (x.at(rows[i], feature) <= t) {
            sl += weights[rows[i]] * y[rows[i]];
            nl += weights[rows[i]];
          }
        }
        const double nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double sr = sum - sl;
        const double score = sl * sl / nl + sr * sr / nr;
        if (score > best.score) {
          best = {static_cast<int>(feature), t, score};
        }
        continue;
      }

      const auto& ord = order[feature];
      if (x.at(ord[f.begin], feature) == x.at(ord[f.end - 1], feature)) continue;
      ++visited;
      double sl = 0.0;
      double nl = 0.0;
      for (std::size_t i = f.begin; i + 1 < f.end; ++i) {
        sl += weights[ord[i]] * y[ord[i]];
        nl += weights[ord[i]];
        const double nr = n - nl;
        if (nl < min_leaf) continue;
        if (nr < min_leaf) break;
        const double a = x.at(ord[i], feature);
        const double b = x.at(ord[i + 1], feature);
        if (a == b) continue;
        const double sr = sum - sl;
        const double score = sl * sl / nl + sr * sr / nr;
        if (score > best.score) {
          double t = 0.5 * (a + b);
          if (t >= b) t = a;
          best = {static_cast<int>(feature), t, score};
        }
      }
    }
    if (best.feature < 0) continue;

    const auto split_feature = static_cast<std::size_t>(best.feature);
    std::size_t split = f.begin;
    for (std::size_t i = f.begin; i < f.end; ++i) {
      const std::uint32_t r = order[0][i];
      goes_left[r] = x.at(r, split_feature) <= best.threshold;
      split += goes_left[r];
    }
    for (auto& ord : order) {
      std::size_t l = f.begin;
      std::size_t r = 0;
      for (std::size_t i = f.begin; i < f.end; ++i) {
        if (goes_left[ord[i]]) {
          ord[l++] = ord[i];
        } else {
          scratch[r++] = ord[i];
        }
      }
      std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(r),
                ord.begin() + static_cast<std::ptrdiff_t>(l));
    }

    const std::size_t left = tree.nodes_.size();
    tree.nodes_.resize(left + 2);
    tree.values_.resize(left + 2, 0.0);
    tree.nodes_[left].left = static_cast<std::uint32_t>(left);
    tree.nodes_[left + 1].left = static_cast<std::uint32_t>(left + 1);
    Node& node = tree.nodes_[f.node];
    node.feature = static_cast<std::uint32_t>(best.feature);
    node.threshold = best.threshold;
    node.left = static_cast<std::uint32_t>(left);
    tree.depth_ = std::max(tree.depth_, f.depth + 1);
    stack.push_back({left + 1, split, f.end, f.depth + 1});
    stack.push_back({left, f.begin, split, f.depth + 1});
  }
  return tree;
}

void RegressionTree::accumulate(const double* flat, std::size_t n,
                                std::size_t d, double scale, double* out,
                                double* out_sq) const {
  // Walks a block of rows in lockstep so the loads of different rows overlap.
  constexpr std::size_t kBlock = 16;
  std::uint32_t at[kBlock];
  for (std::size_t base = 0; base < n; base += kBlock) {
    const std::size_t m = std::min(kBlock, n - base);
    const double* rows = flat + base * d;
    for (std::size_t r = 0; r < m; ++r) at[r] = 0;
    for (int k = 0; k < depth_; ++k) {
      for (std::size_t r = 0; r < m; ++r) {
        const Node& node = nodes_[at[r]];
        at[r] = node.left + (rows[r * d + node.feature] > node.threshold);
      }
      if (k % 4 == 3) {
        bool all_leaves = true;
        for (std::size_t r = 0; r < m; ++r) {
          all_leaves &= nodes_[at[r]].left == at[r];
        }
        if (all_leaves) break;
      }
    }
    for (std::size_t r = 0; r < m; ++r) {
      const double v = values_[at[r]];
      out[base + r] += scale * v;
      if (out_sq) out_sq[base + r] += v * v;
    }
  }
}

}  // namespace pragmatune::detail

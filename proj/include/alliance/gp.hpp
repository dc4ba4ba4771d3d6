// Copyright 2026 The Fare Alliance Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "alliance/common.hpp"

namespace alliance {

struct GpHyper {
  double lengthscale = 0.2;
  double signal_variance = 1.0;
  double jitter = 1e-8;
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact GP regression with a squared-exponential kernel on standardized
// targets. Points are expected in the unit cube.
class GaussianProcess {
 public:
  explicit GaussianProcess(GpHyper h = {}) : hyper_(h), jitter_(h.jitter) {}

  std::size_t size() const { return X_.size(); }
  const GpHyper& hyper() const { return hyper_; }
  double jitter() const { return jitter_; }
  double value_mean() const { return mean_; }
  double value_scale() const { return scale_; }
  const std::vector<std::vector<double>>& points() const { return X_; }
  const std::vector<double>& values() const { return y_; }

  double kernel(const std::vector<double>& a, const std::vector<double>& b) const {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      d2 += d * d;
    }
    return hyper_.signal_variance *
           std::exp(-0.5 * d2 / (hyper_.lengthscale * hyper_.lengthscale));
  }

  void fit(std::vector<std::vector<double>> X, std::vector<double> y) {
    if (X.empty() || X.size() != y.size()) {
      throw std::invalid_argument("GP fit needs matching, nonempty data");
    }
    X_ = std::move(X);
    y_ = std::move(y);
    jitter_ = hyper_.jitter;
    factor_all();
    update_weights();
  }

  void add(const std::vector<double>& x, double value) {
    if (X_.empty()) {
      fit({x}, {value});
      return;
    }
    const Eigen::Index n = static_cast<Eigen::Index>(X_.size());
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel(X_[i], x);
    ensure_capacity(n + 1);
    Eigen::VectorXd l = L_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(k);
    const double d2 = hyper_.signal_variance + jitter_ - l.squaredNorm();
    X_.push_back(x);
    y_.push_back(value);
    if (!(d2 > 0.0)) {
      factor_all();
    } else {
      L_.block(n, 0, 1, n) = l.transpose();
      L_(n, n) = std::sqrt(d2);
    }
    update_weights();
  }

  // Posterior on the standardized scale.
  GpPrediction predict_standardized(const std::vector<double>& x) const {
    const Eigen::Index n = static_cast<Eigen::Index>(X_.size());
    if (n == 0) return {0.0, hyper_.signal_variance};
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k(i) = kernel(X_[i], x);
    const Eigen::VectorXd v =
        L_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solve(k);
    GpPrediction p;
    p.mean = k.dot(weights_);
    p.variance = std::max(0.0, hyper_.signal_variance - v.squaredNorm());
    return p;
  }

  GpPrediction predict(const std::vector<double>& x) const {
    GpPrediction p = predict_standardized(x);
    return {mean_ + scale_ * p.mean, scale_ * scale_ * p.variance};
  }

  // Standardized mean and standard deviation for a batch of points.
  void predict_batch(const std::vector<std::vector<double>>& C,
                     Eigen::VectorXd& mean, Eigen::VectorXd& sd) const {
    const Eigen::Index n = static_cast<Eigen::Index>(X_.size());
    const Eigen::Index m = static_cast<Eigen::Index>(C.size());
    Eigen::MatrixXd K(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) K(i, j) = kernel(X_[i], C[j]);
    }
    mean = K.transpose() * weights_;
    L_.topLeftCorner(n, n).triangularView<Eigen::Lower>().solveInPlace(K);
    sd.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      sd(j) = std::sqrt(std::max(0.0, hyper_.signal_variance - K.col(j).squaredNorm()));
    }
  }

 private:
  void ensure_capacity(Eigen::Index n) {
    if (L_.rows() >= n) return;
    Eigen::Index cap = std::max<Eigen::Index>(16, L_.rows());
    while (cap < n) cap *= 2;
    Eigen::MatrixXd bigger = Eigen::MatrixXd::Zero(cap, cap);
    const Eigen::Index old = std::min<Eigen::Index>(L_.rows(), n);
    bigger.topLeftCorner(old, old) = L_.topLeftCorner(old, old);
    L_.swap(bigger);
  }

  void factor_all() {
    const Eigen::Index n = static_cast<Eigen::Index>(X_.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = kernel(X_[i], X_[j]);
    }
    for (int attempt = 0; attempt <= 3; ++attempt) {
      Eigen::MatrixXd A = K;
      A.diagonal().array() += jitter_;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() == Eigen::Success) {
        ensure_capacity(n);
        L_.topLeftCorner(n, n) = llt.matrixL();
        return;
      }
      if (attempt < 3) jitter_ *= 10.0;
    }
    throw SingularKernel("kernel matrix is not positive definite after jitter escalation");
  }

  void update_weights() {
    const Eigen::Index n = static_cast<Eigen::Index>(X_.size());
    double mean = 0.0;
    for (double v : y_) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y_) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    mean_ = mean;
    scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
    if (!(scale_ > 1e-300)) scale_ = 1.0;
    Eigen::VectorXd ys(n);
    for (Eigen::Index i = 0; i < n; ++i) ys(i) = (y_[i] - mean_) / scale_;
    auto Lv = L_.topLeftCorner(n, n).triangularView<Eigen::Lower>();
    weights_ = Lv.solve(ys);
    Lv.transpose().solveInPlace(weights_);
  }

  GpHyper hyper_;
  double jitter_;
  std::vector<std::vector<double>> X_;
  std::vector<double> y_;
  Eigen::MatrixXd L_;
  Eigen::VectorXd weights_;
  double mean_ = 0.0;
  double scale_ = 1.0;
};

inline GaussianProcess gp_fit(std::vector<std::vector<double>> X,
                              std::vector<double> y, GpHyper h = {}) {
  GaussianProcess gp(h);
  gp.fit(std::move(X), std::move(y));
  return gp;
}

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

inline std::vector<std::vector<double>> halton_points(std::size_t dims,
                                                      std::uint64_t start,
                                                      std::size_t count) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
                                         31, 37, 41, 43, 47, 53};
  if (dims > std::size(kPrimes)) throw std::invalid_argument("too many dimensions");
  std::vector<std::vector<double>> pts(count, std::vector<double>(dims));
  for (std::size_t q = 0; q < count; ++q) {
    for (std::size_t d = 0; d < dims; ++d) {
      pts[q][d] = radical_inverse(start + q + 1, kPrimes[d]);
    }
  }
  return pts;
}

struct UcbOptions {
  double kappa = 2.0;
  std::size_t candidate_count = 1024;
  std::size_t perturbations = 64;
  double perturbation_scale = 0.05;
};

// Maximizes mean + kappa * sd over a Halton pool plus Gaussian perturbations
// of the incumbent (the best observed point). Ties keep the earliest candidate.
inline std::vector<double> ucb_suggest(const GaussianProcess& gp,
                                       const UcbOptions& opt,
                                       std::mt19937_64& rng) {
  if (gp.size() == 0) throw std::invalid_argument("GP has no observations");
  const std::size_t dims = gp.points().front().size();
  const std::uint64_t start = rng() % (std::uint64_t{1} << 30);
  std::vector<std::vector<double>> cand = halton_points(dims, start, opt.candidate_count);
  const auto& ys = gp.values();
  const std::size_t inc = static_cast<std::size_t>(
      std::max_element(ys.begin(), ys.end()) - ys.begin());
  std::normal_distribution<double> noise(0.0, opt.perturbation_scale);
  for (std::size_t q = 0; q < opt.perturbations; ++q) {
    std::vector<double> p = gp.points()[inc];
    for (double& v : p) v = std::clamp(v + noise(rng), 0.0, 1.0);
    cand.push_back(std::move(p));
  }
  Eigen::VectorXd mean, sd;
  gp.predict_batch(cand, mean, sd);
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < cand.size(); ++q) {
    const double score = mean(static_cast<Eigen::Index>(q)) +
                         opt.kappa * sd(static_cast<Eigen::Index>(q));
    if (score > best_score) {
      best_score = score;
      best = q;
    }
  }
  return cand[best];
}

struct BoOptions {
  GpHyper hyper;
  UcbOptions ucb;
  std::uint64_t seed = 0;
};

struct BoHistoryEntry {
  std::size_t iteration = 0;
  std::vector<double> point;
  double value = 0.0;
  double best = 0.0;
};

// Sequential GP-UCB over the unit cube. The first suggestion is a uniform
// draw; later ones maximize the acquisition function.
class BayesOptimizer {
 public:
  BayesOptimizer(std::size_t dims, BoOptions opt)
      : dims_(dims), opt_(opt), gp_(opt.hyper), rng_(opt.seed) {}

  std::vector<double> suggest() {
    if (gp_.size() == 0) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<double> x(dims_);
      for (double& v : x) v = u(rng_);
      return x;
    }
    return ucb_suggest(gp_, opt_.ucb, rng_);
  }

  void observe(const std::vector<double>& x, double value) {
    gp_.add(x, value);
    if (history_.empty() || value > history_.back().best) {
      best_point_ = x;
      best_ = value;
    }
    history_.push_back({history_.size(), x, value, best_});
  }

  const std::vector<BoHistoryEntry>& history() const { return history_; }
  const std::vector<double>& best_point() const { return best_point_; }
  double best_value() const { return best_; }
  const GaussianProcess& gp() const { return gp_; }

 private:
  std::size_t dims_;
  BoOptions opt_;
  GaussianProcess gp_;
  std::mt19937_64 rng_;
  std::vector<BoHistoryEntry> history_;
  std::vector<double> best_point_;
  double best_ = -std::numeric_limits<double>::infinity();
};

struct BoResult {
  std::vector<double> best_point;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<BoHistoryEntry> history;
};

// Maximizes f over the unit cube until `stop()` returns true (checked before
// each evaluation) or max_evals evaluations have been made.
inline BoResult bo_maximize(const std::function<double(const std::vector<double>&)>& f,
                            std::size_t dims, const BoOptions& opt,
                            std::size_t max_evals,
                            const std::function<bool()>& stop = {}) {
  BayesOptimizer bo(dims, opt);
  for (std::size_t e = 0; e < max_evals; ++e) {
    if (stop && stop()) break;
    const std::vector<double> x = bo.suggest();
    bo.observe(x, f(x));
  }
  return {bo.best_point(), bo.best_value(), bo.history()};
}

}  // namespace alliance

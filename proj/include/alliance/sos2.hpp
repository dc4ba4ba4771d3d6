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

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "alliance/model.hpp"
#include "alliance/second_stage.hpp"

namespace alliance {

struct SearchDirection {
  enum class Kind { SingleAxis, OperatorPlane };
  Kind kind = Kind::SingleAxis;
  FareAxis axis = FareAxis::TransitBase;
  OperatorKind op = OperatorKind::Transit;

  static SearchDirection single(FareAxis a) {
    return {Kind::SingleAxis, a, OperatorKind::Transit};
  }
  static SearchDirection plane(OperatorKind k) {
    return {Kind::OperatorPlane, base_axis(k), k};
  }
  std::string label() const {
    if (kind == Kind::SingleAxis) return std::string(to_string(axis));
    return "plane_" + std::string(to_string(op));
  }
  bool operator==(const SearchDirection&) const = default;
};

// The sampled line: points are (x, b + m x) in the (spanning, other) plane,
// or just the spanning axis for single-axis directions.
struct LineSpec {
  FareAxis spanning = FareAxis::TransitBase;
  FareAxis other = FareAxis::TransitBase;
  bool slanted = false;
  double slope = 0.0;
  double intercept = 0.0;
};

struct Anchor {
  FareVector fares;
  double position = 0.0;
  bool current = false;
  std::shared_ptr<const SecondStageSolution> solution;
};

struct AnchorSet {
  SearchDirection direction;
  LineSpec line;
  std::vector<Anchor> anchors;
  std::size_t current_index = 0;
};

struct SlopeRange {
  double min = 0.0;
  double max = 0.0;
};

// Slopes of lines through (x, y) that reach both ends of [x_min, x_max]
// without leaving [y_min, y_max].
inline SlopeRange slope_range(double x, double x_min, double x_max, double y,
                              double y_min, double y_max) {
  if (x == x_min) {
    return {(y_min - y) / (x_max - x), (y_max - y) / (x_max - x)};
  }
  if (x == x_max) {
    return {(y_max - y) / (x_min - x), (y_min - y) / (x_min - x)};
  }
  return {std::max((y_max - y) / (x_min - x), (y_min - y) / (x_max - x)),
          std::min((y_min - y) / (x_min - x), (y_max - y) / (x_max - x))};
}

inline AnchorSet generate_anchors(const FareVector& current,
                                  const SearchDirection& dir, int D,
                                  const FareBounds& bounds,
                                  std::mt19937_64& rng) {
  if (D < 2) throw std::invalid_argument("at least two anchors are required");
  AnchorSet set;
  set.direction = dir;
  LineSpec& line = set.line;
  if (dir.kind == SearchDirection::Kind::OperatorPlane) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    line.slanted = true;
    if (unit(rng) < 0.5) {
      line.spanning = base_axis(dir.op);
      line.other = markup_axis(dir.op);
    } else {
      line.spanning = markup_axis(dir.op);
      line.other = base_axis(dir.op);
    }
  } else {
    line.spanning = dir.axis;
    line.other = dir.axis;
  }
  const double x = current[line.spanning];
  const double x_min = axis_lower(bounds, line.spanning);
  const double x_max = axis_upper(bounds, line.spanning);
  if (!(x_max > x_min)) {
    throw DegenerateRange(std::string(to_string(line.spanning)) +
                          " has an empty range");
  }
  double y_min = 0.0, y_max = 0.0;
  if (line.slanted) {
    const double y = current[line.other];
    y_min = axis_lower(bounds, line.other);
    y_max = axis_upper(bounds, line.other);
    const SlopeRange range = slope_range(x, x_min, x_max, y, y_min, y_max);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    line.slope = range.min + pick(rng) * (range.max - range.min);
    line.intercept = y - line.slope * x;
  }

  const double span = x_max - x_min;
  const double tol = 1e-12 * std::max(1.0, span);
  bool inserted = false;
  for (int i = 0; i < D; ++i) {
    const double pos = i == D - 1 ? x_max : x_min + span * i / (D - 1);
    if (!inserted && std::fabs(pos - x) <= tol) {
      set.current_index = set.anchors.size();
      set.anchors.push_back({current, x, true, nullptr});
      inserted = true;
      continue;
    }
    if (!inserted && x < pos) {
      set.current_index = set.anchors.size();
      set.anchors.push_back({current, x, true, nullptr});
      inserted = true;
    }
    Anchor a;
    a.fares = current;
    a.fares[line.spanning] = pos;
    if (line.slanted) {
      a.fares[line.other] =
          std::clamp(line.intercept + line.slope * pos, y_min, y_max);
    }
    a.position = pos;
    set.anchors.push_back(a);
  }
  if (!inserted) {
    set.current_index = set.anchors.size();
    set.anchors.push_back({current, x, true, nullptr});
  }
  return set;
}

struct Sos2Result {
  FareVector fares;
  double predicted = 0.0;
  std::size_t segment = 0;
  double t = 0.0;
};

// Curvature of the interpolated revenue on one segment:
// Q = mu_rev * sum_i N_i sum_r (p_r' - p_r)(s_ir' - s_ir).
inline double segment_curvature(const Model& m, const SecondStageSolution& a,
                                const SecondStageSolution& b,
                                const ObjectiveWeights& w) {
  if (w.rev == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < m.types().size(); ++i) {
    const Model::TypeData& t = m.types()[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < t.routes.size(); ++j) {
      const int r = t.routes[j];
      acc += (b.prices.price[r] - a.prices.price[r]) *
             (b.shares.share[i][j] - a.shares.share[i][j]);
    }
    q += t.count * acc;
  }
  return w.rev * q;
}

// Surrogate value at weight t on a segment with end values wa, wb.
inline double segment_surrogate(double wa, double wb, double q, double t) {
  return (1.0 - t) * wa + t * wb - t * (1.0 - t) * q;
}

// Maximizes the SOS2-interpolated welfare over the anchor set. Each segment is
// a quadratic in the convex weight t, maximized in closed form.
inline Sos2Result sos2_optimize(const AnchorSet& set, const Model& m,
                                const ObjectiveWeights& w) {
  const auto& an = set.anchors;
  if (an.empty()) throw std::invalid_argument("empty anchor set");
  Sos2Result best;
  best.fares = an[0].fares;
  best.predicted = an[0].solution->welfare.total;
  if (an.size() == 1) return best;
  for (std::size_t d = 0; d + 1 < an.size(); ++d) {
    const SecondStageSolution& a = *an[d].solution;
    const SecondStageSolution& b = *an[d + 1].solution;
    const double wa = a.welfare.total;
    const double wb = b.welfare.total;
    const double q = segment_curvature(m, a, b, w);
    double cand[3] = {0.0, -1.0, 1.0};
    if (q < 0.0) {
      const double ts = -((wb - wa) - q) / (2.0 * q);
      if (ts > 0.0 && ts < 1.0) cand[1] = ts;
    }
    for (double t : cand) {
      if (t < 0.0) continue;
      const double v = t == 0.0 ? wa : t == 1.0 ? wb : segment_surrogate(wa, wb, q, t);
      if (v > best.predicted) {
        best.predicted = v;
        best.segment = d;
        best.t = t;
        if (t == 0.0) {
          best.fares = an[d].fares;
        } else if (t == 1.0) {
          best.fares = an[d + 1].fares;
        } else {
          for (int k = 0; k < kFareDims; ++k) {
            best.fares.values[k] = (1.0 - t) * an[d].fares.values[k] +
                                   t * an[d + 1].fares.values[k];
          }
        }
      }
    }
  }
  return best;
}

}  // namespace alliance

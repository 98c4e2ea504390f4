#include "dimlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dimlab {

GridSubset::GridSubset(Rat d, std::vector<std::uint64_t> c) : delta(std::move(d)), cells(std::move(c)) {
  validate();
}

void GridSubset::validate() const {
  if (delta <= 0) throw std::invalid_argument("GridSubset: delta must be positive");
  for (std::size_t i = 0; i + 1 < cells.size(); ++i)
    if (cells[i] >= cells[i + 1]) throw std::invalid_argument("GridSubset: cells must be sorted and distinct");
  if (!cells.empty() && Rat(cells.back()) * delta > 1)
    throw std::invalid_argument("GridSubset: cell outside [0,1]");
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> GridSubset::runs() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j + 1 < cells.size() && cells[j + 1] == cells[j] + 1) ++j;
    out.emplace_back(cells[i], cells[j]);
    i = j + 1;
  }
  return out;
}

double cover_cost(const IntervalCover& cover, double d) {
  if (d <= 0) throw std::invalid_argument("cover_cost: d must be positive");
  double total = 0;
  for (const auto& [l, r] : cover.intervals) {
    if (l > r) throw std::invalid_argument("cover_cost: reversed interval");
    total += std::pow(to_double(Rat(r - l)), d);
  }
  return total;
}

OptimalCover optimal_cover(const GridSubset& cells, double d) {
  if (d <= 0) throw std::invalid_argument("optimal_cover: d must be positive");
  OptimalCover result;
  auto rs = cells.runs();
  std::size_t r = rs.size();
  if (r == 0) return result;

  // span endpoints clamped to [0,1] (the last cell may stick past 1)
  auto span_end = [&](std::size_t t) {
    Rat e = Rat(rs[t].second + 1) * cells.delta;
    return e > 1 ? Rat(1) : e;
  };
  auto span_len = [&](std::size_t s, std::size_t t) {
    return to_double(span_end(t) - Rat(rs[s].first) * cells.delta);
  };
  std::vector<double> dp(r + 1, 0.0);
  std::vector<std::size_t> from(r + 1, 0);
  for (std::size_t t = 1; t <= r; ++t) {
    double best = 0;
    std::size_t arg = 0;
    bool first = true;
    for (std::size_t s = 0; s < t; ++s) {
      double c = dp[s] + std::pow(span_len(s, t - 1), d);
      if (first || c < best) {
        best = c;
        arg = s;
        first = false;
      }
    }
    dp[t] = best;
    from[t] = arg;
  }
  result.cost = dp[r];
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t t = r; t > 0; t = from[t]) groups.emplace_back(from[t], t - 1);
  std::reverse(groups.begin(), groups.end());
  for (auto [s, t] : groups) result.cover.intervals.emplace_back(Rat(rs[s].first) * cells.delta, span_end(t));
  return result;
}

std::uint64_t box_count(const GridSubset& cells, const Rat& scale) {
  if (scale < cells.delta) throw std::invalid_argument("box_count: scale below subset resolution");
  // half-open cells and boxes: a span [a, b) hits boxes floor(a/scale) .. ceil(b/scale)-1
  std::uint64_t count = 0;
  Int prev_last = -1;
  bool have_prev = false;
  for (auto [s, t] : cells.runs()) {
    Rat a = Rat(s) * cells.delta, b = Rat(t + 1) * cells.delta;
    if (a >= 1) continue;
    if (b > 1) b = 1;
    Int first = floor_rat(a / scale);
    Int last = ceil_rat(b / scale) - 1;
    if (have_prev && first <= prev_last) first = prev_last + 1;
    if (last >= first) {
      count += (last - first + 1).convert_to<std::uint64_t>();
      prev_last = last;
      have_prev = true;
    }
  }
  return count;
}

DimensionEstimate estimate_dimension(const GridSubset& cells, const std::vector<Rat>& scales) {
  if (scales.size() < 3) throw std::invalid_argument("estimate_dimension: need at least 3 scales");
  DimensionEstimate est;
  std::vector<Rat> sorted = scales;
  std::sort(sorted.begin(), sorted.end(), std::greater<Rat>());  // coarse to fine
  for (const Rat& s : sorted) {
    est.scales.push_back(to_double(s));
    est.counts.push_back(box_count(cells, s));
  }
  for (std::size_t i = 0; i + 1 < est.counts.size(); ++i)
    if (est.counts[i] > est.counts[i + 1])
      throw std::invalid_argument("estimate_dimension: counts not monotone; use nested scales");
  for (std::uint64_t c : est.counts)
    if (c == 0) throw std::invalid_argument("estimate_dimension: empty subset");

  // least squares of log N against log(1/scale)
  std::size_t m = est.scales.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log(1.0 / est.scales[i]);
    ys[i] = std::log(static_cast<double>(est.counts[i]));
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double n = static_cast<double>(m);
  double denom = n * sxx - sx * sx;
  est.slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - est.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double e = ys[i] - (est.slope * xs[i] + intercept);
    ss += e * e;
  }
  est.residual = std::sqrt(ss / n);
  return est;
}

}  // namespace dimlab

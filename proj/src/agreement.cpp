#include "dimlab/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace dimlab {

namespace {

constexpr double kPairSlack = 1e-12;

// float-mode pairwise comparator, shared by the restriction check and the
// extension's in-class recheck so the two sides of the criterion agree
bool pair_ok(double dv, double dx, double alpha, double K) {
  double bound = K * std::pow(dx, alpha);
  return std::fabs(dv) <= bound + kPairSlack * (1.0 + bound);
}

struct CompatMatrix {
  std::size_t n = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;

  bool get(std::size_t i, std::size_t j) const { return (bits[i * words + j / 64] >> (j % 64)) & 1; }
  void set(std::size_t i, std::size_t j) { bits[i * words + j / 64] |= std::uint64_t{1} << (j % 64); }
  const std::uint64_t* row(std::size_t i) const { return &bits[i * words]; }
};

CompatMatrix build_matrix(const SampledFunction& f, double alpha, double K) {
  CompatMatrix m;
  m.n = f.n;
  m.words = (f.n + 63) / 64;
  m.bits.assign(m.n * m.words, 0);
  for (std::size_t i = 0; i < f.n; ++i) {
    m.set(i, i);
    for (std::size_t j = i + 1; j < f.n; ++j)
      if (pair_ok(f.values[j] - f.values[i], f.x(j) - f.x(i), alpha, K)) {
        m.set(i, j);
        m.set(j, i);
      }
  }
  return m;
}

// Tomita-style branch and bound with greedy colouring bound.
struct CliqueSolver {
  const CompatMatrix& adj;
  std::vector<std::size_t> best;

  explicit CliqueSolver(const CompatMatrix& a) : adj(a) {}

  void run() {
    std::vector<std::size_t> all(adj.n);
    for (std::size_t i = 0; i < adj.n; ++i) all[i] = i;
    std::vector<std::size_t> current;
    expand(current, all);
  }

  void expand(std::vector<std::size_t>& current, std::vector<std::size_t>& candidates) {
    if (candidates.empty()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    // greedy colouring upper bound; process high colours first
    std::vector<unsigned> colour(candidates.size(), 0);
    unsigned classes = 0;
    {
      std::vector<std::vector<std::size_t>> groups;
      for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        std::size_t v = candidates[idx];
        unsigned c = 0;
        for (; c < groups.size(); ++c) {
          bool clash = false;
          for (std::size_t u : groups[c])
            if (adj.get(u, v)) {
              clash = true;
              break;
            }
          if (!clash) break;
        }
        if (c == groups.size()) groups.emplace_back();
        groups[c].push_back(v);
        colour[idx] = c + 1;
        classes = std::max(classes, c + 1);
      }
    }
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return colour[a] < colour[b]; });
    for (std::size_t pos = order.size(); pos-- > 0;) {
      std::size_t idx = order[pos];
      std::size_t v = candidates[idx];
      if (current.size() + colour[idx] <= best.size()) return;
      std::vector<std::size_t> next;
      for (std::size_t pos2 = 0; pos2 < pos; ++pos2) {
        std::size_t u = candidates[order[pos2]];
        if (adj.get(u, v)) next.push_back(u);
      }
      current.push_back(v);
      expand(current, next);
      current.pop_back();
    }
  }
};

bool compatible_with_all(const SampledFunction& f, double alpha, double K, const std::vector<std::size_t>& s,
                         std::size_t v) {
  for (std::size_t u : s)
    if (u != v && !pair_ok(f.values[v] - f.values[u], std::fabs(f.x(v) - f.x(u)), alpha, K)) return false;
  return true;
}

}  // namespace

bool holder_compatible(const SampledFunction& f, const std::vector<std::size_t>& subset, const Rat& alpha,
                       const Rat& K) {
  double a = to_double(alpha), kk = to_double(K);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= f.n) throw std::invalid_argument("holder_compatible: index outside grid");
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      if (!pair_ok(f.values[subset[j]] - f.values[subset[i]], std::fabs(f.x(subset[j]) - f.x(subset[i])), a, kk))
        return false;
  }
  return true;
}

PiecewiseFunction extend_holder(const SampledFunction& f, const std::vector<std::size_t>& subset,
                                const Rat& alpha, const Rat& K, std::size_t refine) {
  if (subset.empty()) throw std::invalid_argument("extend_holder: empty subset");
  if (!holder_compatible(f, subset, alpha, K))
    throw std::invalid_argument("extend_holder: subset violates the pairwise criterion");
  double a = to_double(alpha), kk = to_double(K);
  std::size_t gn = (f.n - 1) * refine + 1;
  std::vector<Rat> xs(gn);
  std::vector<Rat> ys(gn);
  for (std::size_t j = 0; j < gn; ++j) {
    double x = static_cast<double>(j) / static_cast<double>(gn - 1);
    double env = std::numeric_limits<double>::infinity();
    for (std::size_t s : subset) env = std::min(env, f.values[s] + kk * std::pow(std::fabs(x - f.x(s)), a));
    xs[j] = Rat(j, gn - 1);
    ys[j] = rat_from_double(env);
  }
  for (std::size_t s : subset) ys[s * refine] = rat_from_double(f.values[s]);  // pin exact agreement
  return PiecewiseFunction::interpolate(xs, ys);
}

GridSubset point_cells(std::size_t grid_n, const std::vector<std::size_t>& points) {
  std::vector<std::uint64_t> cells;
  cells.reserve(points.size());
  for (std::size_t p : points) cells.push_back(std::min<std::size_t>(p, grid_n - 2));
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return GridSubset(Rat(1, grid_n - 1), std::move(cells));
}

std::vector<Rat> dyadic_scales(std::size_t grid_n) {
  // doublings of the grid resolution, so every scale is nested and >= delta
  Rat delta(1, grid_n - 1);
  std::vector<Rat> scales;
  for (Rat s = delta; s < 1; s *= 2) scales.push_back(s);
  if (scales.size() < 3) throw std::invalid_argument("dyadic_scales: grid too coarse for an estimate");
  return scales;
}

namespace {

DimensionEstimate witness_dimension(std::size_t grid_n, const std::vector<std::size_t>& points) {
  if (grid_n < 6) return DimensionEstimate{};  // too coarse for a 3-scale fit
  return estimate_dimension(point_cells(grid_n, points), dyadic_scales(grid_n));
}

}  // namespace

SubsetWitness max_holder_subset(const SampledFunction& f, const Rat& alpha, const Rat& K, std::size_t budget) {
  f.validate();
  double a = to_double(alpha), kk = to_double(K);
  SubsetWitness w;
  w.cls = WitnessClass::Holder;
  w.alpha = alpha;
  w.K = K;
  w.grid_n = f.n;

  std::vector<std::size_t> chosen;
  if (f.n <= budget) {
    CompatMatrix adj = build_matrix(f, a, kk);
    CliqueSolver solver(adj);
    solver.run();
    chosen = solver.best;
    std::sort(chosen.begin(), chosen.end());
    w.exact = true;
  } else {
    // greedy by descending compatibility degree, then local repair passes
    CompatMatrix adj = build_matrix(f, a, kk);
    std::vector<std::size_t> deg(f.n, 0), order(f.n);
    for (std::size_t i = 0; i < f.n; ++i) {
      for (std::size_t w2 = 0; w2 < adj.words; ++w2) deg[i] += __builtin_popcountll(adj.row(i)[w2]);
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return deg[x] > deg[y]; });
    for (std::size_t v : order)
      if (compatible_with_all(f, a, kk, chosen, v)) chosen.push_back(v);
    for (int pass = 0; pass < 2; ++pass) {
      bool improved = false;
      for (std::size_t v = 0; v < f.n; ++v) {
        if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
        std::vector<std::size_t> conflicts;
        for (std::size_t u : chosen)
          if (!adj.get(u, v)) conflicts.push_back(u);
        if (conflicts.empty()) {
          chosen.push_back(v);
          improved = true;
        } else if (conflicts.size() == 1) {
          // swap only if the replacement later admits an extra vertex
          std::vector<std::size_t> trial = chosen;
          trial.erase(std::remove(trial.begin(), trial.end(), conflicts[0]), trial.end());
          trial.push_back(v);
          for (std::size_t z : order)
            if (std::find(trial.begin(), trial.end(), z) == trial.end() &&
                compatible_with_all(f, a, kk, trial, z))
              trial.push_back(z);
          if (trial.size() > chosen.size()) {
            chosen = trial;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
    std::sort(chosen.begin(), chosen.end());
    w.exact = false;
  }
  w.points = chosen;
  w.extension = extend_holder(f, chosen, alpha, K);
  w.dimension = witness_dimension(f.n, chosen);
  return w;
}

double restricted_variation(const SampledFunction& f, const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw std::invalid_argument("restricted_variation: empty subset");
  double var = 0;
  for (std::size_t i = 0; i + 1 < subset.size(); ++i)
    var += std::fabs(f.values[subset[i + 1]] - f.values[subset[i]]);
  return var;
}

SubsetWitness max_bv_subset(const SampledFunction& f, const Rat& V) {
  f.validate();
  if (V < 0) throw std::invalid_argument("max_bv_subset: V must be nonnegative");
  double v = to_double(V);
  const double tol = 1e-12 * (1.0 + v);
  SubsetWitness w;
  w.cls = WitnessClass::BV;
  w.V = V;
  w.grid_n = f.n;
  w.exact = true;

  std::size_t n = f.n;
  std::vector<std::size_t> chosen;
  if (total_variation(f) <= v + tol) {
    chosen.resize(n);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
  } else {
    // dp[i]: per kept-count c, the least accumulated variation of a subset
    // of size c+1 ending at i; rolling layers plus parent links
    std::vector<double> prev(n, 0.0), cur(n);
    std::vector<std::vector<std::uint32_t>> parent;
    std::vector<std::size_t> best_end_per_layer;
    best_end_per_layer.push_back(0);  // size 1 always feasible
    std::size_t layers = 0;
    while (true) {
      bool feasible = false;
      std::size_t arg = 0;
      parent.emplace_back(n, std::uint32_t(-1));
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t from = std::uint32_t(-1);
        for (std::size_t j = layers; j < i; ++j) {  // need layers+1 points before i
          if (prev[j] == std::numeric_limits<double>::infinity()) continue;
          double c = prev[j] + std::fabs(f.values[i] - f.values[j]);
          if (c < best) {
            best = c;
            from = static_cast<std::uint32_t>(j);
          }
        }
        cur[i] = best;
        parent.back()[i] = from;
        if (best <= v + tol && !feasible) {
          feasible = true;
          arg = i;
        } else if (best <= v + tol && best < cur[arg]) {
          arg = i;
        }
      }
      if (!feasible) break;
      best_end_per_layer.push_back(arg);
      prev.swap(cur);
      ++layers;
      if (layers + 1 == n) break;
    }
    std::size_t size = layers + 1;
    chosen.resize(size);
    std::size_t at = best_end_per_layer[layers];
    for (std::size_t c = layers; c > 0; --c) {
      chosen[c] = at;
      at = parent[c - 1][at];
    }
    chosen[0] = at;
  }

  w.points = chosen;
  // witness extension: interpolant through the kept points, clamped constant
  // outside; its variation equals the restricted variation exactly
  std::vector<Rat> xs, ys;
  for (std::size_t p : chosen) {
    xs.push_back(Rat(p, n - 1));
    ys.push_back(rat_from_double(f.values[p]));
  }
  w.extension = PiecewiseFunction::interpolate(xs, ys);
  w.dimension = witness_dimension(f.n, chosen);
  return w;
}

namespace {

// longest nondecreasing subsequence via patience piles; cmp flips for the
// nonincreasing direction
std::vector<std::size_t> longest_monotone(const std::vector<double>& v, bool nonincreasing) {
  std::size_t n = v.size();
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = nonincreasing ? -v[i] : v[i];
  std::vector<std::size_t> tails;              // index of the smallest tail per length
  std::vector<std::size_t> parent(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    // first pile whose tail exceeds key[i] (strictly), keeps runs nondecreasing
    std::size_t lo = 0, hi = tails.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (key[tails[mid]] <= key[i])
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo > 0) parent[i] = tails[lo - 1];
    if (lo == tails.size())
      tails.push_back(i);
    else
      tails[lo] = i;
  }
  std::vector<std::size_t> out;
  for (std::size_t at = tails.empty() ? SIZE_MAX : tails.back(); at != SIZE_MAX; at = parent[at])
    out.push_back(at);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

SubsetWitness max_monotone_subset(const SampledFunction& f) {
  f.validate();
  SubsetWitness w;
  w.cls = WitnessClass::Monotone;
  w.grid_n = f.n;
  w.exact = true;
  std::vector<std::size_t> up = longest_monotone(f.values, false);
  std::vector<std::size_t> down = longest_monotone(f.values, true);
  w.points = up.size() >= down.size() ? up : down;

  // monotone step extension: constant from each kept point to the next
  PiecewiseFunction g;
  std::size_t count = w.points.size();
  for (std::size_t t = 0; t < count; ++t) {
    Rat lo = t == 0 ? Rat(0) : Rat(w.points[t], f.n - 1);
    Rat hi = t + 1 == count ? Rat(1) : Rat(w.points[t + 1], f.n - 1);
    if (lo == hi) continue;
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.own_lo = true;
    p.own_hi = t + 1 == count;
    p.kind = PieceKind::Constant;
    p.a = rat_from_double(f.values[w.points[t]]);
    g.pieces.push_back(std::move(p));
  }
  g.pieces.back().own_hi = true;  // the last piece may end at a kept point equal to 1
  g.validate();
  w.extension = g;
  w.dimension = witness_dimension(f.n, w.points);
  return w;
}

std::vector<std::string> check_witness(const SubsetWitness& witness, const SampledFunction& f,
                                       double tolerance) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };
  if (witness.grid_n != f.n) complain("witness grid size differs from the function");
  if (witness.points.empty()) complain("empty subset");
  for (std::size_t i = 0; i + 1 < witness.points.size(); ++i)
    if (witness.points[i] >= witness.points[i + 1]) complain("subset indices not strictly increasing");
  if (!witness.points.empty() && witness.points.back() >= f.n) complain("subset index outside grid");
  if (!problems.empty()) return problems;

  for (std::size_t p : witness.points) {
    double got = witness.extension.evaluate(f.x(p));
    if (std::fabs(got - f.values[p]) > tolerance)
      complain("extension disagrees with f at grid point " + std::to_string(p));
  }
  switch (witness.cls) {
    case WitnessClass::Holder: {
      double a = to_double(witness.alpha), kk = to_double(witness.K);
      std::vector<Rat> bp = witness.extension.breakpoints();
      std::vector<double> xs(bp.size()), vs(bp.size());
      for (std::size_t i = 0; i < bp.size(); ++i) {
        xs[i] = to_double(bp[i]);
        vs[i] = to_double(witness.extension.evaluate(bp[i]));
      }
      // full pairwise on modest node counts, strided spot-check above
      std::size_t stride = bp.size() > 2500 ? bp.size() / 2500 + 1 : 1;
      bool bad = false;
      for (std::size_t i = 0; i < bp.size() && !bad; i += stride)
        for (std::size_t j = i + 1; j < bp.size(); j += stride)
          if (!pair_ok(vs[j] - vs[i], xs[j] - xs[i], a, kk)) {
            complain("extension violates the Holder inequality between two breakpoints");
            bad = true;
            break;
          }
      break;
    }
    case WitnessClass::BV: {
      if (to_double(total_variation(witness.extension)) > to_double(witness.V) + tolerance)
        complain("extension variation exceeds the budget");
      break;
    }
    case WitnessClass::Monotone: {
      bool up = true, down = true;
      const auto& pieces = witness.extension.pieces;
      for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (pieces[i].a < pieces[i + 1].a) down = false;
        if (pieces[i].a > pieces[i + 1].a) up = false;
      }
      if (!up && !down) complain("extension is not monotone");
      break;
    }
  }
  return problems;
}

std::vector<ProbeRow> threshold_probe(const ProbeConfig& config) {
  if (config.params.empty()) throw std::invalid_argument("threshold_probe: no parameters");
  struct Task {
    std::size_t pi;
    unsigned trial;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < config.params.size(); ++pi)
    for (unsigned t = 0; t < config.trials; ++t) tasks.push_back({pi, t});
  std::vector<ProbeRow> rows(tasks.size());

  auto work = [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const Rat& param = config.params[task.pi];
    ProbeRow row;
    row.cls = config.cls == WitnessClass::Holder ? "holder" : "bv";
    row.param = rat_to_string(param);
    row.trial = task.trial;
    row.n = config.n;
    std::uint64_t seed = config.seed;
    seed = seed * 0x100000001b3ULL + task.pi * 1009 + task.trial + 1;
    try {
      GeneratorSpec spec = parse_generator_spec(config.family, seed, config.n);
      SampledFunction f = generate(spec);
      SubsetWitness w = config.cls == WitnessClass::Holder
                            ? max_holder_subset(f, param, config.K, config.budget)
                            : max_bv_subset(f, param);
      row.subset_size = w.points.size();
      row.box_dim = w.dimension.slope;
      row.residual = w.dimension.residual;
      row.mode = w.exact ? "exact" : "heuristic";
    } catch (const std::exception&) {
      row.mode = "failed";
    }
    rows[idx] = row;
  };

  unsigned jobs = std::max(1u, config.jobs);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t per = (tasks.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      std::size_t lo = j * per, hi = std::min(tasks.size(), lo + per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return rows;  // already in (param, trial) order
}

std::vector<std::pair<std::string, double>> probe_medians(const std::vector<ProbeRow>& rows) {
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::string> order;
  std::vector<std::vector<double>> buckets;
  for (const ProbeRow& r : rows) {
    if (r.mode == "failed") continue;
    std::size_t at = order.size();
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == r.param) at = i;
    if (at == order.size()) {
      order.push_back(r.param);
      buckets.emplace_back();
    }
    buckets[at].push_back(r.box_dim);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<double>& b = buckets[i];
    std::sort(b.begin(), b.end());
    double median = b.empty() ? 0.0 : (b.size() % 2 ? b[b.size() / 2] : 0.5 * (b[b.size() / 2 - 1] + b[b.size() / 2]));
    out.emplace_back(order[i], median);
  }
  return out;
}

}  // namespace dimlab

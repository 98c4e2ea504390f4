#include "dimlab/function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dimlab {

SampledFunction::SampledFunction(std::size_t n_, std::vector<double> v) : n(n_), values(std::move(v)) {
  validate();
}

void SampledFunction::validate() const {
  if (n < 2) throw std::invalid_argument("SampledFunction: need at least 2 samples");
  if (values.size() != n) throw std::invalid_argument("SampledFunction: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("SampledFunction: non-finite value");
}

void PiecewiseFunction::validate() const {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseFunction: empty");
  if (pieces.front().lo != 0 || pieces.back().hi != 1)
    throw std::invalid_argument("PiecewiseFunction: must tile [0,1]");
  if (!pieces.front().own_lo) throw std::invalid_argument("PiecewiseFunction: 0 unowned");
  if (!pieces.back().own_hi) throw std::invalid_argument("PiecewiseFunction: 1 unowned");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (p.lo > p.hi) throw std::invalid_argument("PiecewiseFunction: reversed piece");
    if (p.degenerate() && !(p.own_lo && p.own_hi))
      throw std::invalid_argument("PiecewiseFunction: degenerate piece must own its point");
    if (i + 1 < pieces.size()) {
      const Piece& q = pieces[i + 1];
      if (p.hi != q.lo) throw std::invalid_argument("PiecewiseFunction: gap or overlap between pieces");
      if (p.own_hi == q.own_lo)
        throw std::invalid_argument("PiecewiseFunction: breakpoint must have exactly one owner");
    }
  }
}

Rat PiecewiseFunction::evaluate(const Rat& x) const {
  if (x < 0 || x > 1) throw std::domain_error("evaluate: x outside [0,1]");
  // binary search for the first piece with hi >= x, then resolve ownership
  std::size_t lo = 0, hi = pieces.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (pieces[mid].hi < x)
      lo = mid + 1;
    else
      hi = mid;
  }
  for (std::size_t i = lo; i < pieces.size() && pieces[i].lo <= x; ++i) {
    const Piece& p = pieces[i];
    bool owns = (x > p.lo && x < p.hi) || (x == p.lo && p.own_lo) || (x == p.hi && p.own_hi);
    if (owns) return p.value_at(x);
  }
  throw std::logic_error("evaluate: no owning piece (invalid function)");
}

bool PiecewiseFunction::is_continuous() const {
  // continuous iff at every breakpoint the owned value matches both one-sided limits
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const Rat& x = pieces[i].hi;
    Rat left = pieces[i].degenerate() ? pieces[i].a : pieces[i].value_at(x);
    Rat right = pieces[i + 1].degenerate() ? pieces[i + 1].a : pieces[i + 1].value_at(x);
    if (left != right) return false;
  }
  return true;
}

SampledFunction PiecewiseFunction::sample(std::size_t n) const {
  if (n < 2) throw std::invalid_argument("sample: need n >= 2");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = to_double(evaluate(Rat(static_cast<long>(i), static_cast<long>(n - 1))));
  return SampledFunction(n, std::move(v));
}

std::vector<Rat> PiecewiseFunction::breakpoints() const {
  std::vector<Rat> bp;
  bp.push_back(pieces.front().lo);
  for (const Piece& p : pieces)
    if (p.hi != bp.back()) bp.push_back(p.hi);
  return bp;
}

PiecewiseFunction PiecewiseFunction::constant(const Rat& c) {
  PiecewiseFunction f;
  f.pieces.push_back(Piece{Rat(0), Rat(1), true, true, PieceKind::Constant, c, Rat(0)});
  return f;
}

PiecewiseFunction PiecewiseFunction::linear(const Rat& slope, const Rat& intercept) {
  PiecewiseFunction f;
  f.pieces.push_back(Piece{Rat(0), Rat(1), true, true, PieceKind::Linear, slope, intercept});
  return f;
}

PiecewiseFunction PiecewiseFunction::interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
  if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("interpolate: bad node lists");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i] >= xs[i + 1]) throw std::invalid_argument("interpolate: nodes must increase");
  if (xs.front() < 0 || xs.back() > 1) throw std::invalid_argument("interpolate: nodes outside [0,1]");

  PiecewiseFunction f;
  auto push = [&](const Rat& lo, const Rat& hi, PieceKind k, const Rat& a, const Rat& b) {
    if (lo == hi) return;
    f.pieces.push_back(Piece{lo, hi, true, false, k, a, b});
  };
  push(Rat(0), xs.front(), PieceKind::Constant, ys.front(), Rat(0));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    Rat slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    Rat intercept = ys[i] - slope * xs[i];
    push(xs[i], xs[i + 1], PieceKind::Linear, slope, intercept);
  }
  push(xs.back(), Rat(1), PieceKind::Constant, ys.back(), Rat(0));
  f.pieces.front().own_lo = true;
  f.pieces.back().own_hi = true;
  f.validate();
  return f;
}

PiecewiseFunction scale(const PiecewiseFunction& f, const Rat& c) {
  PiecewiseFunction g = f;
  for (Piece& p : g.pieces) {
    p.a *= c;
    p.b *= c;
  }
  return g;
}

PiecewiseFunction add_constant(const PiecewiseFunction& f, const Rat& c) {
  PiecewiseFunction g = f;
  for (Piece& p : g.pieces) {
    if (p.kind == PieceKind::Constant)
      p.a += c;
    else
      p.b += c;
  }
  return g;
}

std::vector<Rat> merged_breakpoints(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  std::vector<Rat> a = f.breakpoints(), b = g.breakpoints(), out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Formula (as affine coefficients) valid on the open interval (lo, hi),
// taken from the unique non-degenerate piece covering it.
void open_formula(const PiecewiseFunction& f, const Rat& lo, const Rat& hi, Rat& a, Rat& b) {
  for (const Piece& p : f.pieces) {
    if (p.degenerate()) continue;
    if (p.lo <= lo && hi <= p.hi) {
      if (p.kind == PieceKind::Constant) {
        a = 0;
        b = p.a;
      } else {
        a = p.a;
        b = p.b;
      }
      return;
    }
  }
  throw std::logic_error("open_formula: no covering piece");
}

}  // namespace

std::vector<RefinedCell> refine_pair(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  std::vector<Rat> ladder = merged_breakpoints(f, g);
  std::vector<RefinedCell> cells;
  cells.reserve(ladder.size());
  // walk with two piece cursors to stay linear in the ladder size
  std::size_t fi = 0, gi = 0;
  for (std::size_t t = 0; t + 1 < ladder.size(); ++t) {
    const Rat& lo = ladder[t];
    const Rat& hi = ladder[t + 1];
    RefinedCell c;
    c.lo = lo;
    c.hi = hi;
    auto advance = [&](const PiecewiseFunction& h, std::size_t& idx, Rat& a, Rat& b) {
      while (idx < h.pieces.size() && (h.pieces[idx].degenerate() || h.pieces[idx].hi <= lo)) ++idx;
      const Piece& p = h.pieces[idx];
      if (!(p.lo <= lo && hi <= p.hi)) {
        open_formula(h, lo, hi, a, b);  // fallback, should not happen
        return;
      }
      if (p.kind == PieceKind::Constant) {
        a = 0;
        b = p.a;
      } else {
        a = p.a;
        b = p.b;
      }
    };
    advance(f, fi, c.fa, c.fb);
    advance(g, gi, c.ga, c.gb);
    cells.push_back(std::move(c));
  }
  return cells;
}

Rat sup_distance(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  Rat best(0);
  auto bump = [&](const Rat& v) {
    Rat av = v < 0 ? Rat(-v) : v;
    if (av > best) best = av;
  };
  for (const RefinedCell& c : refine_pair(f, g)) {
    // difference is affine on the open cell: the sup over it equals the
    // larger endpoint limit
    Rat da = c.fa - c.ga, db = c.fb - c.gb;
    bump(da * c.lo + db);
    bump(da * c.hi + db);
  }
  for (const Rat& x : merged_breakpoints(f, g)) bump(f.evaluate(x) - g.evaluate(x));
  return best;
}

double sup_distance(const SampledFunction& f, const SampledFunction& g) {
  if (f.n != g.n) throw std::invalid_argument("sup_distance: grid mismatch");
  double best = 0;
  for (std::size_t i = 0; i < f.n; ++i) best = std::max(best, std::fabs(f.values[i] - g.values[i]));
  return best;
}

Rat total_variation(const PiecewiseFunction& f) {
  Rat var(0);
  auto absr = [](const Rat& v) { return v < 0 ? Rat(-v) : v; };
  // oscillation inside each non-degenerate piece
  std::vector<const Piece*> nd;
  nd.reserve(f.pieces.size());
  for (const Piece& p : f.pieces) {
    if (p.degenerate()) continue;
    if (p.kind == PieceKind::Linear) var += absr(p.a) * (p.hi - p.lo);
    nd.push_back(&p);
  }
  // jumps: owned value against the one-sided limits at every breakpoint
  {
    Rat owned = f.evaluate(Rat(0));
    var += absr(nd.front()->value_at(Rat(0)) - owned);
  }
  for (std::size_t i = 0; i < nd.size(); ++i) {
    const Rat& x = nd[i]->hi;
    Rat owned = f.evaluate(x);
    var += absr(owned - nd[i]->value_at(x));
    if (i + 1 < nd.size()) var += absr(nd[i + 1]->value_at(x) - owned);
  }
  return var;
}

double total_variation(const SampledFunction& f) {
  double var = 0;
  for (std::size_t i = 0; i + 1 < f.n; ++i) var += std::fabs(f.values[i + 1] - f.values[i]);
  return var;
}

PiecewiseFunction add(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  std::vector<Rat> ladder = merged_breakpoints(f, g);
  PiecewiseFunction out;
  std::vector<RefinedCell> cells = refine_pair(f, g);
  for (std::size_t t = 0; t < cells.size(); ++t) {
    const RefinedCell& c = cells[t];
    Rat a = c.fa + c.ga, b = c.fb + c.gb;
    Piece p;
    p.lo = c.lo;
    p.hi = c.hi;
    if (a == 0) {
      p.kind = PieceKind::Constant;
      p.a = b;
    } else {
      p.kind = PieceKind::Linear;
      p.a = a;
      p.b = b;
    }
    p.own_lo = false;
    p.own_hi = false;
    out.pieces.push_back(std::move(p));
  }
  // give every ladder point to a piece whose formula reproduces the true sum,
  // inserting degenerate point pieces where neither neighbour matches
  std::vector<Piece> with_points;
  for (std::size_t t = 0; t < ladder.size(); ++t) {
    const Rat& x = ladder[t];
    Rat v = f.evaluate(x) + g.evaluate(x);
    Piece* left = (t > 0) ? &out.pieces[t - 1] : nullptr;
    Piece* right = (t < out.pieces.size()) ? &out.pieces[t] : nullptr;
    if (right && right->value_at(x) == v)
      right->own_lo = true;
    else if (left && left->value_at(x) == v)
      left->own_hi = true;
    else {
      Piece pt;
      pt.lo = pt.hi = x;
      pt.own_lo = pt.own_hi = true;
      pt.kind = PieceKind::Constant;
      pt.a = v;
      with_points.push_back(std::move(pt));
    }
  }
  if (!with_points.empty()) {
    for (Piece& pt : with_points) out.pieces.push_back(std::move(pt));
    std::sort(out.pieces.begin(), out.pieces.end(),
              [](const Piece& l, const Piece& r) { return l.lo < r.lo || (l.lo == r.lo && l.hi < r.hi); });
  }
  out.validate();
  return out;
}

}  // namespace dimlab

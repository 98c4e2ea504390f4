#include "dimlab/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dimlab {

namespace {

std::string rs(const Rat& r) { return rat_to_string(r); }
Rat rp(const json& j) { return parse_rat(j.get<std::string>()); }

// shortest round-tripping decimal form
std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json power_to_json(const Power& p) {
  return json{{"coeff", rs(p.coeff)}, {"base", rs(p.base)}, {"exp_num", p.en}, {"exp_den", p.ed}};
}

Power power_from_json(const json& j) {
  Power p;
  p.coeff = rp(j.at("coeff"));
  p.base = rp(j.at("base"));
  p.en = j.at("exp_num").get<long>();
  p.ed = j.at("exp_den").get<unsigned long>();
  return p;
}

}  // namespace

json to_json(const SampledFunction& f) {
  json grid = json::array(), values = json::array();
  for (std::size_t i = 0; i < f.n; ++i) {
    grid.push_back(f.x(i));
    values.push_back(f.values[i]);
  }
  return json{{"grid", grid}, {"values", values}};
}

SampledFunction sampled_from_json(const json& j) {
  std::vector<double> values = j.at("values").get<std::vector<double>>();
  std::vector<double> grid = j.at("grid").get<std::vector<double>>();
  if (grid.size() != values.size()) throw std::invalid_argument("sampled function: grid/values length mismatch");
  std::size_t count = values.size();
  SampledFunction f(count, std::move(values));
  for (std::size_t i = 0; i < f.n; ++i)
    if (std::abs(grid[i] - f.x(i)) > 1e-12) throw std::invalid_argument("sampled function: grid not uniform on [0,1]");
  return f;
}

json to_json(const PiecewiseFunction& f) {
  json pieces = json::array();
  for (const Piece& p : f.pieces) {
    json jp{{"lo", rs(p.lo)},
            {"hi", rs(p.hi)},
            {"own_lo", p.own_lo},
            {"own_hi", p.own_hi},
            {"kind", p.kind == PieceKind::Constant ? "const" : "linear"},
            {"a", rs(p.a)}};
    if (p.kind == PieceKind::Linear) jp["b"] = rs(p.b);
    pieces.push_back(std::move(jp));
  }
  return json{{"pieces", pieces}};
}

PiecewiseFunction piecewise_from_json(const json& j) {
  PiecewiseFunction f;
  for (const json& jp : j.at("pieces")) {
    Piece p;
    p.lo = rp(jp.at("lo"));
    p.hi = rp(jp.at("hi"));
    p.own_lo = jp.at("own_lo").get<bool>();
    p.own_hi = jp.at("own_hi").get<bool>();
    std::string kind = jp.at("kind").get<std::string>();
    p.kind = kind == "const" ? PieceKind::Constant : PieceKind::Linear;
    p.a = rp(jp.at("a"));
    if (p.kind == PieceKind::Linear) p.b = rp(jp.at("b"));
    f.pieces.push_back(std::move(p));
  }
  f.validate();
  return f;
}

json to_json(const GridSubset& cells) {
  return json{{"delta", rs(cells.delta)}, {"cells", cells.cells}};
}

GridSubset grid_subset_from_json(const json& j) {
  return GridSubset(rp(j.at("delta")), j.at("cells").get<std::vector<std::uint64_t>>());
}

json to_json(const IntervalCover& cover) {
  json intervals = json::array();
  for (const auto& [l, r] : cover.intervals) intervals.push_back(json{{"left", rs(l)}, {"right", rs(r)}});
  return json{{"intervals", intervals}};
}

json to_json(const DimensionEstimate& est) {
  return json{{"estimator", "box-counting"},
              {"note", "box dimension upper-bounds Hausdorff dimension; finite-resolution proxy"},
              {"scales", est.scales},
              {"counts", est.counts},
              {"slope", est.slope},
              {"residual", est.residual}};
}

DimensionEstimate dimension_from_json(const json& j) {
  DimensionEstimate est;
  est.scales = j.at("scales").get<std::vector<double>>();
  est.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  est.slope = j.at("slope").get<double>();
  est.residual = j.at("residual").get<double>();
  return est;
}

json to_json(const GeneratorSpec& spec) {
  json j{{"family", spec.family_name()}, {"seed", spec.seed}, {"n", spec.n}};
  switch (spec.family) {
    case Family::Constant:
      j["c"] = rs(spec.c);
      break;
    case Family::Linear:
      j["slope"] = rs(spec.slope);
      j["intercept"] = rs(spec.intercept);
      break;
    case Family::Weierstrass:
      j["a"] = rs(spec.w_a);
      j["b"] = spec.w_b;
      j["terms"] = spec.terms;
      break;
    case Family::Takagi:
      j["terms"] = spec.terms;
      break;
    case Family::MidpointDisplacement:
      j["hurst"] = spec.hurst;
      j["depth"] = spec.depth;
      break;
    case Family::FaberSchauder:
      j["decay"] = spec.decay;
      j["depth"] = spec.depth;
      break;
  }
  return j;
}

GeneratorSpec generator_spec_from_json(const json& j) {
  GeneratorSpec spec;
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.n = j.at("n").get<std::size_t>();
  std::string fam = j.at("family").get<std::string>();
  if (fam == "constant") {
    spec.family = Family::Constant;
    spec.c = rp(j.at("c"));
  } else if (fam == "linear") {
    spec.family = Family::Linear;
    spec.slope = rp(j.at("slope"));
    spec.intercept = rp(j.at("intercept"));
  } else if (fam == "weierstrass") {
    spec.family = Family::Weierstrass;
    spec.w_a = rp(j.at("a"));
    spec.w_b = j.at("b").get<unsigned>();
    spec.terms = j.at("terms").get<unsigned>();
  } else if (fam == "takagi") {
    spec.family = Family::Takagi;
    spec.terms = j.at("terms").get<unsigned>();
  } else if (fam == "midpoint") {
    spec.family = Family::MidpointDisplacement;
    spec.hurst = j.at("hurst").get<double>();
    spec.depth = j.at("depth").get<unsigned>();
  } else if (fam == "faber") {
    spec.family = Family::FaberSchauder;
    spec.decay = j.at("decay").get<double>();
    spec.depth = j.at("depth").get<unsigned>();
  } else {
    throw std::invalid_argument("unknown generator family in JSON: " + fam);
  }
  spec.validate();
  return spec;
}

json to_json(const LedgerEntry& e) {
  json j{{"id", e.id},
         {"rel", e.rel == Relation::LT ? "<" : "<="},
         {"lhs_approx", e.lhs_approx},
         {"rhs_approx", e.rhs_approx},
         {"verdict", e.verdict},
         {"exact", e.exact},
         {"note", e.note}};
  switch (e.kind) {
    case EntryKind::PowerCmp:
      j["kind"] = "power";
      j["lhs"] = power_to_json(e.lhs);
      j["rhs"] = power_to_json(e.rhs);
      break;
    case EntryKind::Sum:
      j["kind"] = "sum";
      j["terms"] = e.terms;
      j["rhs"] = power_to_json(e.rhs);
      break;
    case EntryKind::Value:
      j["kind"] = "value";
      j["lhs"] = power_to_json(e.lhs);
      break;
  }
  return j;
}

LedgerEntry ledger_entry_from_json(const json& j) {
  LedgerEntry e;
  e.id = j.at("id").get<std::string>();
  std::string kind = j.at("kind").get<std::string>();
  e.rel = j.at("rel").get<std::string>() == "<" ? Relation::LT : Relation::LE;
  e.lhs_approx = j.at("lhs_approx").get<double>();
  e.rhs_approx = j.at("rhs_approx").get<double>();
  e.verdict = j.at("verdict").get<bool>();
  e.exact = j.at("exact").get<bool>();
  e.note = j.at("note").get<std::string>();
  if (kind == "power") {
    e.kind = EntryKind::PowerCmp;
    e.lhs = power_from_json(j.at("lhs"));
    e.rhs = power_from_json(j.at("rhs"));
  } else if (kind == "sum") {
    e.kind = EntryKind::Sum;
    e.terms = j.at("terms").get<std::vector<std::string>>();
    e.rhs = power_from_json(j.at("rhs"));
  } else if (kind == "value") {
    e.kind = EntryKind::Value;
    e.lhs = power_from_json(j.at("lhs"));
    e.rhs = e.lhs;
  } else {
    throw std::invalid_argument("unknown ledger entry kind: " + kind);
  }
  return e;
}

json to_json(const ConstructionCertificate& cert) {
  json j;
  j["kind"] = cert.mode == CertMode::Holder ? "holder" : "bv";
  j["exact"] = cert.exact;
  if (cert.mode == CertMode::Holder) {
    j["params"] = json{{"alpha", rs(cert.holder.alpha)},
                       {"N", cert.holder.N},
                       {"M", cert.holder.M},
                       {"r0", rs(cert.holder.r0)},
                       {"K", rs(cert.holder.K)}};
  } else {
    j["params"] = json{{"N", cert.bv.N}, {"M", cert.bv.M}, {"r0", rs(cert.bv.r0)}, {"V", rs(cert.bv.V)}};
  }
  j["f0"] = to_json(cert.f0);
  j["plan"] = json{{"m", cert.plan.m},
                   {"k", cert.plan.k},
                   {"r0", rs(cert.plan.r0)},
                   {"jump", rs(cert.plan.jump)},
                   {"r1", rs(cert.plan.r1)}};
  j["system"] = json{{"mk", cert.system.mk}, {"half_width", rs(cert.system.half_width)}};
  j["capacity_exponent"] = rs(cert.capacity_exponent());
  j["fbar"] = to_json(cert.fbar);
  j["f1"] = to_json(cert.f1);
  json ledger = json::array();
  for (const LedgerEntry& e : cert.ledger) ledger.push_back(to_json(e));
  j["ledger"] = ledger;
  return j;
}

ConstructionCertificate certificate_from_json(const json& j) {
  ConstructionCertificate cert;
  std::string kind = j.at("kind").get<std::string>();
  cert.mode = kind == "holder" ? CertMode::Holder : CertMode::BV;
  cert.exact = j.at("exact").get<bool>();
  const json& params = j.at("params");
  if (cert.mode == CertMode::Holder) {
    cert.holder.alpha = rp(params.at("alpha"));
    cert.holder.N = params.at("N").get<unsigned>();
    cert.holder.M = params.at("M").get<unsigned>();
    cert.holder.r0 = rp(params.at("r0"));
    cert.holder.K = rp(params.at("K"));
  } else {
    cert.bv.N = params.at("N").get<unsigned>();
    cert.bv.M = params.at("M").get<unsigned>();
    cert.bv.r0 = rp(params.at("r0"));
    cert.bv.V = rp(params.at("V"));
  }
  cert.f0 = generator_spec_from_json(j.at("f0"));
  const json& plan = j.at("plan");
  cert.plan.m = plan.at("m").get<unsigned long long>();
  cert.plan.k = plan.at("k").get<unsigned long long>();
  cert.plan.r0 = rp(plan.at("r0"));
  cert.plan.jump = rp(plan.at("jump"));
  cert.plan.r1 = rp(plan.at("r1"));
  cert.system.mk = j.at("system").at("mk").get<unsigned long long>();
  cert.system.half_width = rp(j.at("system").at("half_width"));
  cert.fbar = piecewise_from_json(j.at("fbar"));
  cert.f1 = piecewise_from_json(j.at("f1"));
  for (const json& je : j.at("ledger")) cert.ledger.push_back(ledger_entry_from_json(je));
  return cert;
}

json to_json(const SubsetWitness& w) {
  json j;
  switch (w.cls) {
    case WitnessClass::Holder:
      j["class"] = "holder";
      j["alpha"] = rs(w.alpha);
      j["K"] = rs(w.K);
      break;
    case WitnessClass::BV:
      j["class"] = "bv";
      j["V"] = rs(w.V);
      break;
    case WitnessClass::Monotone:
      j["class"] = "monotone";
      break;
  }
  j["grid_n"] = w.grid_n;
  j["points"] = w.points;
  j["subset_size"] = w.points.size();
  j["mode"] = w.exact ? "exact" : "heuristic";
  j["extension"] = to_json(w.extension);
  j["dimension"] = to_json(w.dimension);
  return j;
}

SubsetWitness witness_from_json(const json& j) {
  SubsetWitness w;
  std::string cls = j.at("class").get<std::string>();
  if (cls == "holder") {
    w.cls = WitnessClass::Holder;
    w.alpha = rp(j.at("alpha"));
    w.K = rp(j.at("K"));
  } else if (cls == "bv") {
    w.cls = WitnessClass::BV;
    w.V = rp(j.at("V"));
  } else if (cls == "monotone") {
    w.cls = WitnessClass::Monotone;
  } else {
    throw std::invalid_argument("unknown witness class: " + cls);
  }
  w.grid_n = j.at("grid_n").get<std::size_t>();
  w.points = j.at("points").get<std::vector<std::size_t>>();
  w.exact = j.at("mode").get<std::string>() == "exact";
  w.extension = piecewise_from_json(j.at("extension"));
  w.dimension = dimension_from_json(j.at("dimension"));
  return w;
}

// ---- files ----

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) { return json::parse(read_text(path)); }

void write_function_csv(const std::string& path, const SampledFunction& f) {
  std::ostringstream ss;
  ss << "x,y\n";
  for (std::size_t i = 0; i < f.n; ++i) ss << fmt_double(f.x(i)) << "," << fmt_double(f.values[i]) << "\n";
  write_text(path, ss.str());
}

SampledFunction read_function_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV: " + path);
  if (line != "x,y" && line != "x,y\r") throw std::invalid_argument("missing x,y header: " + path);
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad CSV row: " + line);
    xs.push_back(std::stod(line.substr(0, comma)));
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  std::size_t count = ys.size();
  SampledFunction f(count, std::move(ys));
  for (std::size_t i = 0; i < f.n; ++i)
    if (std::abs(xs[i] - f.x(i)) > 1e-9) throw std::invalid_argument("CSV grid not uniform on [0,1]");
  return f;
}

std::string audit_csv(const std::vector<AuditRow>& rows) {
  std::ostringstream ss;
  ss << "adversary_id,probe_id,block,l_i,cover_cost\n";
  for (const AuditRow& r : rows)
    ss << r.adversary_id << "," << r.probe_id << "," << r.block << "," << r.l_i << ","
       << fmt_double(r.cover_cost) << "\n";
  return ss.str();
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream ss;
  ss << "class,param,trial,n,subset_size,box_dim,residual,mode\n";
  for (const ProbeRow& r : rows)
    ss << r.cls << "," << r.param << "," << r.trial << "," << r.n << "," << r.subset_size << ","
       << fmt_double(r.box_dim) << "," << fmt_double(r.residual) << "," << r.mode << "\n";
  return ss.str();
}

std::string counts_csv(const DimensionEstimate& est) {
  std::ostringstream ss;
  ss << "scale,count\n";
  for (std::size_t i = 0; i < est.scales.size(); ++i)
    ss << fmt_double(est.scales[i]) << "," << est.counts[i] << "\n";
  return ss.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const std::vector<std::string>& args, const std::vector<std::string>& inputs,
                    std::uint64_t seed, bool empirical) {
  json j;
  j["command"] = command;
  j["args"] = args;
  j["seed"] = seed;
  j["version"] = "0.1.0";
  j["mode"] = empirical ? "EMPIRICAL" : "exact";
  json in = json::object();
  for (const std::string& path : inputs) in[path] = fnv1a_hex(read_text(path));
  j["inputs"] = in;
  write_json(out_path + ".manifest.json", j);
}

}  // namespace dimlab

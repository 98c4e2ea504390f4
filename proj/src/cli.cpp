#include "dimlab/cli.hpp"

#include "dimlab/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace dimlab {

namespace {

unsigned default_jobs() {
  if (const char* env = std::getenv("DIMLAB_JOBS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

/// "2^-4..2^-12" or a comma list of rationals ("1/16,1/32").
std::vector<Rat> parse_scales(const std::string& text) {
  auto parse_one = [](const std::string& tok) -> Rat {
    auto caret = tok.find("^");
    if (caret != std::string::npos) {
      Rat base = parse_rat(tok.substr(0, caret));
      long e = std::stol(tok.substr(caret + 1));
      return pow_rat(base, e);
    }
    return parse_rat(tok);
  };
  auto dots = text.find("..");
  std::vector<Rat> scales;
  if (dots != std::string::npos) {
    std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    auto ca = a.find("^"), cb = b.find("^");
    if (ca == std::string::npos || cb == std::string::npos || a.substr(0, ca) != b.substr(0, cb))
      throw std::invalid_argument("scale range must share a base, e.g. 2^-4..2^-12");
    Rat base = parse_rat(a.substr(0, ca));
    long e1 = std::stol(a.substr(ca + 1)), e2 = std::stol(b.substr(cb + 1));
    if (e1 > e2) std::swap(e1, e2);
    for (long e = e1; e <= e2; ++e) scales.push_back(pow_rat(base, e));
    return scales;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) scales.push_back(parse_one(tok));
  return scales;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_rat(tok));
  if (out.empty()) throw std::invalid_argument("empty parameter list");
  return out;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"dimlab: staircase certificates and agreement-set searches for functions on [0,1]"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  unsigned jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker count for audit/probe");
  bool float_mode = false;
  app.add_flag("--float", float_mode, "disable exact arithmetic guarantees; outputs are labelled EMPIRICAL");

  // generate
  auto* gen = app.add_subcommand("generate", "sample a generator family to CSV/JSON");
  std::string gen_family = "constant:0", gen_out;
  std::uint64_t gen_seed = 1;
  std::size_t gen_n = 257;
  gen->add_option("--family", gen_family, "family:params, e.g. midpoint:0.5,8");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--n", gen_n, "grid size, a power of two plus one");
  gen->add_option("--out", gen_out, "output path (.csv or .json)")->required();

  // construct
  auto* con = app.add_subcommand("construct", "build a staircase certificate");
  std::string con_mode = "holder", con_alpha = "1/2", con_r0 = "1", con_K = "1", con_V = "1";
  std::string con_f0 = "constant:0", con_out;
  unsigned con_N = 2, con_M = 1;
  unsigned long long con_m = 0, con_k = 0, con_mlimit = 2000000;
  con->add_option("--mode", con_mode, "holder | bv")->check(CLI::IsMember({"holder", "bv"}));
  con->add_option("--alpha", con_alpha, "Holder exponent p/q in (0,1)");
  con->add_option("--N", con_N, "capacity exponent index");
  con->add_option("--M", con_M, "capacity budget denominator: target 1/M");
  con->add_option("--r0", con_r0, "ball radius around the center");
  con->add_option("--K", con_K, "Holder class constant");
  con->add_option("--V", con_V, "variation budget of the adversary class");
  con->add_option("--f0", con_f0, "center function family:params");
  con->add_option("--m", con_m, "force block count (skips the solver)");
  con->add_option("--k", con_k, "force steps per block (holder mode with --m)");
  con->add_option("--m-limit", con_mlimit, "solver search cap");
  con->add_option("--out", con_out, "certificate path")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "recheck a certificate from its primary data");
  std::string ver_cert;
  ver->add_option("cert", ver_cert, "certificate JSON")->required();

  // audit
  auto* aud = app.add_subcommand("audit", "run an adversary battery against ball probes");
  std::string aud_cert, aud_out;
  std::size_t aud_battery = 200, aud_probes = 0;
  std::uint64_t aud_seed = 1;
  aud->add_option("cert", aud_cert, "certificate JSON")->required();
  aud->add_option("--battery", aud_battery, "target battery size");
  aud->add_option("--probes", aud_probes, "extra random probes beyond f1, f1 +- r1");
  aud->add_option("--seed", aud_seed, "battery/probe seed");
  aud->add_option("--out", aud_out, "audit CSV path")->required();

  // search
  auto* sea = app.add_subcommand("search", "largest agreement subset of a sampled function");
  std::string sea_class = "holder", sea_in, sea_out, sea_alpha = "1/2", sea_K = "1", sea_V = "1";
  std::size_t sea_budget = 20;
  sea->add_option("--class", sea_class, "holder | bv | monotone")
      ->check(CLI::IsMember({"holder", "bv", "monotone"}));
  sea->add_option("--input", sea_in, "function CSV (x,y)")->required();
  sea->add_option("--alpha", sea_alpha, "Holder exponent");
  sea->add_option("--K", sea_K, "Holder constant");
  sea->add_option("--V", sea_V, "variation budget");
  sea->add_option("--budget", sea_budget, "exact-search size cap");
  sea->add_option("--out", sea_out, "witness JSON path")->required();

  // dimension
  auto* dim = app.add_subcommand("dimension", "box-dimension estimate of a cell set");
  std::string dim_in, dim_scales = "2^-2..2^-8", dim_out, dim_csv;
  dim->add_option("--input", dim_in, "GridSubset JSON")->required();
  dim->add_option("--scales", dim_scales, "range 2^-4..2^-12 or comma list");
  dim->add_option("--out", dim_out, "estimate JSON path (default: stdout)");
  dim->add_option("--csv", dim_csv, "plot-ready scale,count CSV path");

  // probe
  auto* pro = app.add_subcommand("probe", "threshold sweep over generated functions");
  std::string pro_class = "holder", pro_params = "1/4,1/2,3/4", pro_family = "midpoint:0.5,8", pro_out,
              pro_K = "1";
  unsigned pro_trials = 3;
  std::uint64_t pro_seed = 1;
  std::size_t pro_n = 257, pro_budget = 20;
  pro->add_option("--class", pro_class, "holder | bv")->check(CLI::IsMember({"holder", "bv"}));
  pro->add_option("--params", pro_params, "alpha list (holder) or V list (bv)");
  pro->add_option("--K", pro_K, "Holder constant");
  pro->add_option("--trials", pro_trials, "trials per parameter");
  pro->add_option("--seed", pro_seed, "base seed");
  pro->add_option("--family", pro_family, "generator family:params");
  pro->add_option("--n", pro_n, "grid size");
  pro->add_option("--budget", pro_budget, "exact-search size cap");
  pro->add_option("--out", pro_out, "report CSV path")->required();

  std::vector<const char*> argv;
  argv.push_back("dimlab");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto manifest_inputs = [&](const std::vector<std::string>& ins) { return ins; };

  if (gen->parsed()) {
    GeneratorSpec spec = parse_generator_spec(gen_family, gen_seed, gen_n);
    SampledFunction f = generate(spec);
    if (gen_out.size() > 5 && gen_out.substr(gen_out.size() - 5) == ".json")
      write_json(gen_out, to_json(f));
    else
      write_function_csv(gen_out, f);
    write_manifest(gen_out, "generate", args, {}, gen_seed, float_mode);
    std::cerr << "generated " << spec.family_name() << " n=" << gen_n << " -> " << gen_out << "\n";
    return 0;
  }

  if (con->parsed()) {
    GeneratorSpec f0 = parse_generator_spec(con_f0, 1, 257);
    ConstructionCertificate cert;
    if (con_mode == "holder") {
      HolderParams hp;
      hp.alpha = parse_rat(con_alpha);
      hp.N = con_N;
      hp.M = con_M;
      hp.r0 = parse_rat(con_r0);
      hp.K = parse_rat(con_K);
      cert = con_m ? build_holder_certificate_with_plan(hp, f0, con_m, con_k ? con_k : 1)
                   : build_holder_certificate(hp, f0, con_mlimit);
    } else {
      BVParams bp;
      bp.N = con_N;
      bp.M = con_M;
      bp.r0 = parse_rat(con_r0);
      bp.V = parse_rat(con_V);
      cert = con_m ? build_bv_certificate_with_plan(bp, f0, con_m) : build_bv_certificate(bp, f0, con_mlimit);
    }
    write_json(con_out, to_json(cert));
    write_manifest(con_out, "construct", args, {}, 0, float_mode || !cert.exact);
    std::cerr << "certificate (m=" << cert.plan.m << ", k=" << cert.plan.k
              << ") accepted=" << (cert.accepted() ? "yes" : "no") << " -> " << con_out << "\n";
    return cert.accepted() ? 0 : 1;
  }

  if (ver->parsed()) {
    ConstructionCertificate cert = certificate_from_json(read_json(ver_cert));
    std::vector<std::string> problems = verify_certificate(cert);
    for (const std::string& p : problems) std::cerr << "verify: " << p << "\n";
    std::cerr << (problems.empty() ? "certificate verified" : "certificate REJECTED") << "\n";
    return problems.empty() ? 0 : 1;
  }

  if (aud->parsed()) {
    ConstructionCertificate cert = certificate_from_json(read_json(aud_cert));
    std::vector<std::string> problems = verify_certificate(cert);
    if (!problems.empty()) {
      for (const std::string& p : problems) std::cerr << "audit: certificate invalid: " << p << "\n";
      return 1;
    }
    std::vector<Adversary> battery = cert.mode == CertMode::Holder
                                         ? holder_battery(cert, aud_battery, aud_seed)
                                         : bv_battery(cert, aud_battery, aud_seed);
    std::vector<Probe> probes = standard_probes(cert);
    for (Probe& p : random_probes(cert, aud_probes, aud_seed + 17)) probes.push_back(std::move(p));
    AuditReport report = empirical_agreement_audit(cert, battery, probes, jobs);
    write_text(aud_out, audit_csv(report.rows));
    write_manifest(aud_out, "audit", args, manifest_inputs({aud_cert}), aud_seed, float_mode || !cert.exact);
    std::cerr << "audited " << battery.size() << " adversaries x " << probes.size() << " probes; max l_i "
              << report.max_block_meets << ", max cover cost " << report.max_cover_cost
              << (report.bounds_respected ? " (bounds hold)" : " (BOUNDS VIOLATED)") << "\n";
    return report.bounds_respected ? 0 : 1;
  }

  if (sea->parsed()) {
    SampledFunction f = read_function_csv(sea_in);
    SubsetWitness w;
    if (sea_class == "holder")
      w = max_holder_subset(f, parse_rat(sea_alpha), parse_rat(sea_K), sea_budget);
    else if (sea_class == "bv")
      w = max_bv_subset(f, parse_rat(sea_V));
    else
      w = max_monotone_subset(f);
    write_json(sea_out, to_json(w));
    write_manifest(sea_out, "search", args, manifest_inputs({sea_in}), 0, true);
    std::cerr << "subset size " << w.points.size() << " of " << f.n << " (" << (w.exact ? "exact" : "heuristic")
              << "), box_dim " << w.dimension.slope << " -> " << sea_out << "\n";
    return 0;
  }

  if (dim->parsed()) {
    GridSubset cells = grid_subset_from_json(read_json(dim_in));
    DimensionEstimate est = estimate_dimension(cells, parse_scales(dim_scales));
    json j = to_json(est);
    if (dim_out.empty())
      std::cout << j.dump(2) << "\n";
    else {
      write_json(dim_out, j);
      write_manifest(dim_out, "dimension", args, manifest_inputs({dim_in}), 0, float_mode);
    }
    if (!dim_csv.empty()) write_text(dim_csv, counts_csv(est));
    std::cerr << "box_dim " << est.slope << " residual " << est.residual << "\n";
    return 0;
  }

  if (pro->parsed()) {
    ProbeConfig config;
    config.cls = pro_class == "holder" ? WitnessClass::Holder : WitnessClass::BV;
    config.params = parse_rat_list(pro_params);
    config.K = parse_rat(pro_K);
    config.trials = pro_trials;
    config.seed = pro_seed;
    config.family = pro_family;
    config.n = pro_n;
    config.budget = pro_budget;
    config.jobs = jobs;
    std::vector<ProbeRow> rows = threshold_probe(config);
    write_text(pro_out, probe_csv(rows));
    json summary;
    summary["note"] = "box-dimension medians of search witnesses; exploratory, generator is a proxy family";
    summary["reference"] = config.cls == WitnessClass::Holder ? "1 - alpha" : "1/2";
    json med = json::array();
    for (auto& [param, value] : probe_medians(rows)) {
      med.push_back(json{{"param", param}, {"median_box_dim", value}});
      double ref = config.cls == WitnessClass::Holder ? 1.0 - to_double(parse_rat(param)) : 0.5;
      std::cerr << "param " << param << ": median box_dim " << value << " (reference " << ref << ")\n";
    }
    summary["medians"] = med;
    write_json(pro_out + ".summary.json", summary);
    write_manifest(pro_out, "probe", args, {}, pro_seed, true);
    return 0;
  }

  return 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  try {
    return run(args);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::domain_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args);
}

}  // namespace dimlab

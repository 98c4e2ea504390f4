#include "dimlab/cli.hpp"

#include "dimlab/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>

using namespace dimlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("dimlab_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int counter() {
    static int c = 0;
    return c++;
  }
};

}  // namespace

TEST_CASE("generate writes CSV with header and a manifest") {
  TempDir tmp;
  std::string out = tmp.file("f.csv");
  CHECK(cli_main({"generate", "--family", "takagi:6", "--seed", "3", "--n", "129", "--out", out}) == 0);
  SampledFunction f = read_function_csv(out);
  CHECK(f.n == 129);
  json manifest = read_json(out + ".manifest.json");
  CHECK(manifest.at("command") == "generate");
  CHECK(manifest.at("mode") == "exact");
}

TEST_CASE("generate CSV round-trips byte-for-byte on reload") {
  TempDir tmp;
  std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
  std::vector<std::string> args{"generate", "--family", "midpoint:0.5,8", "--seed", "11", "--n", "257"};
  auto run = [&](const std::string& out) {
    auto full = args;
    full.push_back("--out");
    full.push_back(out);
    return cli_main(full);
  };
  CHECK(run(a) == 0);
  CHECK(run(b) == 0);
  CHECK(read_text(a) == read_text(b));
  // JSON form re-parses to the same values
  std::string j = tmp.file("f.json");
  CHECK(run(j) == 0);
  SampledFunction via_json = sampled_from_json(read_json(j));
  SampledFunction via_csv = read_function_csv(a);
  CHECK(via_json.values == via_csv.values);
}

TEST_CASE("construct, verify, audit pipeline") {
  TempDir tmp;
  std::string cert_path = tmp.file("cert.json");
  CHECK(cli_main({"construct", "--mode", "holder", "--alpha", "1/2", "--N", "2", "--M", "1", "--r0", "20",
                  "--out", cert_path}) == 0);
  CHECK(cli_main({"verify", cert_path}) == 0);

  std::string audit_path = tmp.file("audit.csv");
  CHECK(cli_main({"audit", cert_path, "--battery", "24", "--seed", "5", "--out", audit_path}) == 0);
  std::string csv = read_text(audit_path);
  CHECK(csv.rfind("adversary_id,probe_id,block,l_i,cover_cost\n", 0) == 0);
  CHECK(csv.size() > 60);  // non-empty body

  // round-trip: certificate JSON re-parses to an equal certificate
  json j = read_json(cert_path);
  ConstructionCertificate cert = certificate_from_json(j);
  CHECK(to_json(cert) == j);
}

TEST_CASE("verify exits nonzero on a tampered certificate") {
  TempDir tmp;
  std::string cert_path = tmp.file("cert.json");
  REQUIRE(cli_main({"construct", "--mode", "bv", "--N", "1", "--M", "1", "--r0", "10", "--out", cert_path}) ==
          0);
  json j = read_json(cert_path);
  // edit one ledger lhs
  for (auto& e : j.at("ledger"))
    if (e.at("id") == "bv") e.at("lhs").at("coeff") = "3/2";
  write_json(cert_path, j);
  CHECK(cli_main({"verify", cert_path}) == 1);
}

TEST_CASE("usage errors exit with 2") {
  TempDir tmp;
  CHECK(cli_main({"construct", "--mode", "holder", "--alpha", "3/2", "--out", tmp.file("x.json")}) == 2);
  CHECK(cli_main({"nonsense"}) == 2);
  CHECK(cli_main({"generate", "--family", "unknown:1", "--out", tmp.file("y.csv")}) == 2);
  CHECK(cli_main({"generate", "--family", "takagi:4", "--n", "100", "--out", tmp.file("z.csv")}) == 2);
}

TEST_CASE("search produces a witness that re-checks from disk") {
  TempDir tmp;
  std::string fpath = tmp.file("f.csv"), wpath = tmp.file("w.json");
  REQUIRE(cli_main({"generate", "--family", "midpoint:0.5,6", "--seed", "9", "--n", "65", "--out", fpath}) ==
          0);
  CHECK(cli_main({"search", "--class", "bv", "--input", fpath, "--V", "1/2", "--out", wpath}) == 0);
  SubsetWitness w = witness_from_json(read_json(wpath));
  SampledFunction f = read_function_csv(fpath);
  CHECK(check_witness(w, f).empty());
  CHECK(cli_main({"search", "--class", "monotone", "--input", fpath, "--out", wpath}) == 0);
  CHECK(check_witness(witness_from_json(read_json(wpath)), f).empty());
  CHECK(cli_main({"search", "--class", "holder", "--alpha", "1/2", "--K", "1", "--input", fpath, "--out",
                  wpath}) == 0);
  CHECK(check_witness(witness_from_json(read_json(wpath)), f).empty());
}

TEST_CASE("dimension subcommand reads cells and writes counts") {
  TempDir tmp;
  std::string cells_path = tmp.file("cells.json"), out = tmp.file("est.json"), csv = tmp.file("counts.csv");
  std::vector<std::uint64_t> all(256);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  write_json(cells_path, to_json(GridSubset(Rat(1, 256), all)));
  CHECK(cli_main({"dimension", "--input", cells_path, "--scales", "2^-2..2^-8", "--out", out, "--csv", csv}) ==
        0);
  DimensionEstimate est = dimension_from_json(read_json(out));
  CHECK(est.slope == doctest::Approx(1.0).epsilon(0.02));
  std::string counts = read_text(csv);
  CHECK(counts.rfind("scale,count\n", 0) == 0);
}

TEST_CASE("probe runs are byte-reproducible") {
  TempDir tmp;
  std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
  std::vector<std::string> base{"probe",   "--class", "holder", "--params", "1/4,3/4", "--trials", "2",
                                "--seed",  "3",       "--family", "midpoint:0.5,6", "--n", "65"};
  auto run = [&](const std::string& out, unsigned jobs) {
    auto args = base;
    args.push_back("--jobs");
    args.push_back(std::to_string(jobs));
    args.push_back("--out");
    args.push_back(out);
    return cli_main(args);
  };
  CHECK(run(a, 1) == 0);
  CHECK(run(b, 2) == 0);
  CHECK(read_text(a) == read_text(b));
  json summary = read_json(a + ".summary.json");
  CHECK(summary.at("medians").size() == 2);
}

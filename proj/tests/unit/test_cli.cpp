#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "vmvcli/commands.hpp"
#include "vmvcli/config.hpp"
#include "vmvcli/csv.hpp"
#include "vmvcli/manifest.hpp"

using namespace vmvcli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vmv_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int status;
  std::string out, err;
};

Result invoke(Invocation inv) {
  std::ostringstream out, err;
  const int status = run(inv, out, err);
  return {status, out.str(), err.str()};
}

Invocation make(const std::string& cmd, const fs::path& dir, std::vector<std::string> sets = {}) {
  Invocation inv;
  inv.command = cmd;
  inv.out_dir = dir;
  inv.sets = std::move(sets);
  return inv;
}

}  // namespace

TEST_CASE("config parsing, defaults and echo") {
  auto cfg = Config::parse(
      "[model]\nkind = \"mean_field_ou\"\na = 1.5\n\n[study]\nlevels = [3, 4, 5]\nNs = 8, 32\nseed = 42\n");
  CHECK(cfg.text("model", "kind") == "mean_field_ou");
  CHECK(cfg.number("model", "a") == 1.5);
  CHECK(cfg.number("model", "sigma0", 0.25) == 0.25);
  CHECK(cfg.integers("study", "levels") == std::vector<long>{3, 4, 5});
  CHECK(cfg.integers("study", "Ns") == std::vector<long>{8, 32});
  CHECK(cfg.seed("study", "seed", 1) == 42);
  CHECK_NOTHROW(cfg.check_unused());

  // the echo carries the default and parses back to the same values
  auto again = Config::parse(cfg.echo());
  CHECK(again.text("model", "kind") == "mean_field_ou");
  CHECK(again.number("model", "a") == 1.5);
  CHECK(again.number("model", "sigma0") == 0.25);
  CHECK(again.integers("study", "levels") == std::vector<long>{3, 4, 5});
  CHECK(again.integers("study", "Ns") == std::vector<long>{8, 32});
  CHECK(again.seed("study", "seed", std::nullopt) == 42);
  CHECK(again.echo() == cfg.echo());

  auto bad = Config::parse("[model]\na = fast\nkind = \"other\"\n");
  CHECK_THROWS_AS(bad.number("model", "a"), SchemaError);
  CHECK_THROWS_AS(bad.text("model", "kind", std::nullopt, {"mean_field_ou", "separable"}), SchemaError);
  CHECK_THROWS_AS(bad.number("model", "sigma0"), SchemaError);
  auto extra = Config::parse("[model]\nkind = \"x\"\nunused = 1\n");
  extra.text("model", "kind");
  CHECK_THROWS_AS(extra.check_unused(), SchemaError);
  CHECK_THROWS_AS(Config::parse("[model\nkind = 1\n"), SchemaError);
}

TEST_CASE("CSV round trip is exact") {
  const auto dir = scratch("csv");
  std::mt19937_64 gen(3);
  std::normal_distribution<double> z(0.0, 1e3);
  CsvTable t{{"a", "b", "c"}, {}};
  for (int i = 0; i < 500; ++i) t.rows.push_back({z(gen), std::ldexp(z(gen), -60), 1.0 / 3.0 * i});
  t.rows.push_back({0.1, -0.0, 5e-324});
  write_csv(dir / "t.csv", t);
  const auto back = read_csv(dir / "t.csv");
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);
  CHECK(format_number(0.1) == "0.1");
  write_file(dir / "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_csv(dir / "ragged.csv"), IoError);
}

TEST_CASE("sha256 digests") {
  const auto dir = scratch("sha");
  write_file(dir / "abc.txt", "abc");
  CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  write_file(dir / "empty.txt", "");
  CHECK(sha256_file(dir / "empty.txt") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("resolvent command") {
  const auto dir = scratch("resolvent");
  const auto r = invoke(make("resolvent", dir, {"kernel.kind=\"constant\"", "kernel.c=1", "resolvent.level=10"}));
  REQUIRE(r.status == 0);
  CHECK(r.err.empty());
  const auto t = read_csv(dir / "resolvent.csv");
  CHECK(t.header == std::vector<std::string>{"t", "s", "R"});
  double best = 1e9, value = 0.0;
  for (const auto& row : t.rows) {
    const double d = std::hypot(row[0] - 1.0, row[1]);
    if (d < best) {
      best = d;
      value = row[2];
    }
  }
  CHECK(std::abs(value - std::exp(1.0)) < 1e-4);
  const auto side = read_file(dir / "resolvent_report.txt");
  CHECK(side.find("terms_used:") != std::string::npos);
  CHECK(side.find("identity_residual_left:") != std::string::npos);

  // manifest digests match the files on disk
  const auto man = read_file(dir / "manifest.txt");
  CHECK(man.find("resolvent.csv sha256=" + sha256_file(dir / "resolvent.csv")) != std::string::npos);
  CHECK(man.find("resolvent_report.txt sha256=" + sha256_file(dir / "resolvent_report.txt")) != std::string::npos);
  CHECK(man.find("max_terms = 200") != std::string::npos);
}

TEST_CASE("chaos-rate command") {
  const auto dir = scratch("rate");
  auto r = invoke(make("chaos-rate", dir, {"rate.p=2", "rate.d=1", "rate.q=4.5"}));
  REQUIRE(r.status == 0);
  CHECK(r.out.find("case: p>d/2") != std::string::npos);
  CHECK(r.out.find("concentration,N^-0.5,") != std::string::npos);
  r = invoke(make("chaos-rate", dir, {"rate.p=2", "rate.d=4", "rate.q=5"}));
  CHECK(r.out.find("case: p=d/2") != std::string::npos);
  CHECK(r.out.find("N^-0.5*log(1+N)") != std::string::npos);
  CHECK(r.out.find("as_printed,N^-0.5*log(1+N),N^0.6,-0.6,true,true") != std::string::npos);
  r = invoke(make("chaos-rate", dir, {"rate.p=2", "rate.d=1", "rate.q=4"}));
  CHECK(r.status != 0);
  CHECK(r.err.rfind("error: invalid-argument: ", 0) == 0);
}

TEST_CASE("wasserstein command") {
  const auto dir = scratch("w2");
  write_file(dir / "a.csv", "x,y\n0,0\n1,2\n3,1\n");
  write_file(dir / "b.csv", "x,y\n1,0\n1,2\n3,1\n");
  Invocation inv = make("wasserstein", dir);
  inv.positional = {(dir / "a.csv").string(), (dir / "a.csv").string()};
  auto r = invoke(inv);
  REQUIRE(r.status == 0);
  CHECK(r.out == "0\n");
  inv.positional = {(dir / "a.csv").string(), (dir / "b.csv").string()};
  r = invoke(inv);
  CHECK(std::stod(r.out) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  inv.positional = {(dir / "a.csv").string(), (dir / "missing.csv").string()};
  r = invoke(inv);
  CHECK(r.status != 0);
  CHECK(r.err.rfind("error: io: ", 0) == 0);
}

TEST_CASE("simulate command: seeds, threads, schema errors") {
  const auto dir = scratch("simulate");
  write_file(dir / "sim.ini",
             "[model]\nkind = \"mean_field_ou\"\na = 1\nsigma0 = 1\n\n[x0]\nkind = \"gaussian\"\nmean = 1\n"
             "stddev = 0.5\n\n[simulate]\nlevel = 5\nparticles = 16\nseed = 7\n");
  Invocation inv = make("simulate", dir / "one");
  inv.config = dir / "sim.ini";
  inv.threads = 1;
  REQUIRE(invoke(inv).status == 0);
  inv.out_dir = dir / "four";
  inv.threads = 4;
  REQUIRE(invoke(inv).status == 0);
  const auto t = read_csv(dir / "one" / "trajectories.csv");
  CHECK(t.header == std::vector<std::string>{"t", "particle", "x_1"});
  CHECK(t.rows.size() == 33 * 16);
  CHECK(sha256_file(dir / "one" / "trajectories.csv") == sha256_file(dir / "four" / "trajectories.csv"));
  CHECK(read_file(dir / "one" / "manifest.txt").find("master_seed: 7") != std::string::npos);

  inv.out_dir = dir / "seeded";
  inv.seed = 8;
  REQUIRE(invoke(inv).status == 0);
  const auto man = read_file(dir / "seeded" / "manifest.txt");
  CHECK(man.find("master_seed: 8") != std::string::npos);
  CHECK(man.find("seed = 8") != std::string::npos);
  CHECK(sha256_file(dir / "seeded" / "trajectories.csv") != sha256_file(dir / "one" / "trajectories.csv"));

  inv.seed.reset();
  inv.sets = {"simulate.particles=many"};
  auto r = invoke(inv);
  CHECK(r.status != 0);
  CHECK(r.err == "error: schema: simulate: simulate.particles: expected an integer, got 'many'\n");
  inv.sets = {"model.kind=\"heston\""};
  r = invoke(inv);
  CHECK(r.err.rfind("error: schema: ", 0) == 0);
  inv.sets = {};
  inv.command = "no-such-command";
  r = invoke(inv);
  CHECK(r.err.rfind("error: usage: ", 0) == 0);
}

TEST_CASE("study commands") {
  const auto dir = scratch("study");
  auto r = invoke(make("converge-time", dir / "time",
                       {"model.kind=\"mean_field_ou\"", "x0.value=1", "study.levels=[2,3,4]", "study.n_fine=6",
                        "study.particles=16", "study.replications=2"}));
  REQUIRE(r.status == 0);
  auto t = read_csv(dir / "time" / "report.csv");
  CHECK(t.header == std::vector<std::string>{"size", "error", "stderr"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == 0.25);
  CHECK(t.rows[2][1] < t.rows[0][1]);
  const auto man = read_file(dir / "time" / "manifest.txt");
  CHECK(man.find("replication_seeds:") != std::string::npos);
  CHECK(man.find("coupling: one Brownian store per replication") != std::string::npos);

  r = invoke(make("converge-chaos", dir / "chaos",
                  {"model.kind=\"mean_field_ou\"", "study.Ns=[4,16]", "study.n_ref=4", "study.replications=2"}));
  REQUIRE(r.status == 0);
  t = read_csv(dir / "chaos" / "report.csv");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == 16.0);

  r = invoke(make("converge-chaos", dir / "bad",
                  {"model.kind=\"separable\"", "kernel_b.kind=\"constant\"", "kernel_s.kind=\"constant\"",
                   "study.Ns=[4,16]", "study.n_ref=4"}));
  CHECK(r.status != 0);
  CHECK(r.err.rfind("error: invalid-argument: ", 0) == 0);
}

TEST_CASE("kernel-probe command") {
  const auto dir = scratch("probe");
  const auto r = invoke(make("kernel-probe", dir, {"kernel.kind=\"power\"", "kernel.alpha=0.25"}));
  REQUIRE(r.status == 0);
  const auto t = read_csv(dir / "probe.csv");
  CHECK(t.rows.size() == 7);
  const auto pos = r.out.find("exponent: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 10)) == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("binary exit status") {
  const auto dir = scratch("binary");
  const std::string bin = VMV_CLI_PATH;
  const std::string ok = bin + " chaos-rate --set rate.p=2 --set rate.d=1 --set rate.q=3 > " +
                         (dir / "ok.txt").string() + " 2>&1";
  CHECK(std::system(ok.c_str()) == 0);
  const std::string bad = bin + " chaos-rate --set rate.p=2 > " + (dir / "bad.txt").string() + " 2>&1";
  CHECK(std::system(bad.c_str()) != 0);
  CHECK(read_file(dir / "bad.txt").rfind("error: schema: ", 0) == 0);
  const std::string env = "VMV_OUT_DIR=" + (dir / "env").string() + " " + bin +
                          " resolvent --set kernel.kind=\\\"constant\\\" --set resolvent.level=3 > /dev/null";
  CHECK(std::system(env.c_str()) == 0);
  CHECK(fs::exists(dir / "env" / "resolvent.csv"));
}

#include "vmvcli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "vmv/errors.hpp"
#include "vmv/experiments.hpp"
#include "vmv/measure.hpp"
#include "vmv/parallel.hpp"
#include "vmv/resolvent.hpp"
#include "vmv/scheme.hpp"
#include "vmvcli/builders.hpp"
#include "vmvcli/config.hpp"
#include "vmvcli/csv.hpp"
#include "vmvcli/manifest.hpp"

#ifndef VMV_VERSION
#define VMV_VERSION "unknown"
#endif

namespace vmvcli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  const Invocation& inv;
  Config cfg;
  std::filesystem::path out_dir;
  std::ostream& out;
  RunManifest manifest;
};

std::filesystem::path resolve_out_dir(const Invocation& inv) {
  if (inv.out_dir) return *inv.out_dir;
  if (const char* env = std::getenv("VMV_OUT_DIR"); env && *env) return env;
  return ".";
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::uint64_t read_seed(Context& c, const std::string& section) {
  if (c.inv.seed) c.cfg.set(section, "seed", std::to_string(*c.inv.seed));
  const std::uint64_t s = c.cfg.seed(section, "seed", 1);
  c.manifest.master_seed = s;
  return s;
}

std::size_t positive(long v, const std::string& field) {
  if (v < 1) throw SchemaError(field, "a positive integer", std::to_string(v));
  return static_cast<std::size_t>(v);
}

int level_of(long v, const std::string& field) {
  if (v < 0 || v > 24) throw SchemaError(field, "a level in [0, 24]", std::to_string(v));
  return static_cast<int>(v);
}

void report_study(Context& c, const vmv::StudyReport& rep) {
  CsvTable t{{"size", "error", "stderr"}, {}};
  for (const auto& r : rep.rows) t.rows.push_back({r.size, r.error, r.stderr_});
  write_csv(c.out_dir / "report.csv", t);
  c.manifest.outputs.push_back("report.csv");
  c.manifest.details = rep.manifest;
  for (const auto& r : rep.rows)
    c.out << format_number(r.size) << "  " << format_number(r.error) << " +- " << format_number(r.stderr_) << '\n';
  if (rep.exact_scheme) c.out << "exact scheme: all errors are zero, no rate fitted\n";
  if (rep.fitted_slope) c.out << "fitted slope: " << format_number(*rep.fitted_slope) << '\n';
  if (rep.theory_slope) c.out << "theory slope: " << format_number(*rep.theory_slope) << '\n';
  for (auto i : rep.excluded_rows) c.out << "row " << i << " excluded from the fit (nonpositive error)\n";
  for (const auto& [r, step] : rep.blown_up) c.out << "replication " << r << " blew up at step " << step << '\n';
}

void cmd_simulate(Context& c) {
  const vmv::Model model = model_from(c.cfg);
  const std::uint64_t seed = read_seed(c, "simulate");
  const int n = level_of(c.cfg.integer("simulate", "level"), "simulate.level");
  const std::size_t N = positive(c.cfg.integer("simulate", "particles"), "simulate.particles");
  const int n_max = level_of(c.cfg.integer("simulate", "n_max", n), "simulate.n_max");
  const bool table = c.cfg.boolean("simulate", "use_kernel_table", true);
  c.cfg.check_unused();
  const vmv::BrownianStore store(seed, N, model.m, n_max);
  const vmv::Ensemble e = vmv::euler_simulate(model, n, N, store, vmv::SimOptions{table});
  CsvTable t;
  t.header = {"t", "particle"};
  for (std::size_t c2 = 0; c2 < model.d; ++c2) t.header.push_back("x_" + std::to_string(c2 + 1));
  for (std::size_t k = 0; k <= e.steps(); ++k)
    for (std::size_t i = 0; i < N; ++i) {
      std::vector<double> row{e.time(k), static_cast<double>(i)};
      for (double x : e.state(i, k)) row.push_back(x);
      t.rows.push_back(std::move(row));
    }
  write_csv(c.out_dir / "trajectories.csv", t);
  c.manifest.outputs.push_back("trajectories.csv");
  c.manifest.details = {{"model", model.name}, {"level", std::to_string(n)}, {"particles", std::to_string(N)}};
  const auto& last = e.measures.back();
  c.out << "simulated " << N << " particles on 2^" << n << " steps; mean at t=1: " << format_number(last.mean()[0])
        << '\n';
}

void cmd_converge_time(Context& c) {
  vmv::StudyConfig s;
  s.model = model_from(c.cfg);
  s.seed = read_seed(c, "study");
  s.p = c.cfg.number("study", "p", 2.0);
  for (long v : c.cfg.integers("study", "levels")) s.levels.push_back(level_of(v, "study.levels"));
  s.n_fine = level_of(c.cfg.integer("study", "n_fine", 10), "study.n_fine");
  s.particles = positive(c.cfg.integer("study", "particles", 256), "study.particles");
  s.replications = static_cast<int>(positive(c.cfg.integer("study", "replications", 1), "study.replications"));
  c.cfg.text("study", "reference", "finest_level", {"finest_level"});
  c.cfg.check_unused();
  report_study(c, vmv::strong_rate_study(s));
}

void cmd_converge_chaos(Context& c) {
  vmv::StudyConfig s;
  s.model = model_from(c.cfg);
  s.seed = read_seed(c, "study");
  s.p = c.cfg.number("study", "p", 2.0);
  for (long v : c.cfg.integers("study", "Ns")) s.Ns.push_back(positive(v, "study.Ns"));
  const std::string ref = c.cfg.text("study", "reference", "ou_oracle", {"ou_oracle", "large_n"});
  s.reference = ref == "ou_oracle" ? vmv::Reference::ou_oracle : vmv::Reference::large_n;
  s.n_ref = level_of(c.cfg.integer("study", "n_ref", 7), "study.n_ref");
  if (s.reference == vmv::Reference::large_n)
    s.n_ref_particles = positive(c.cfg.integer("study", "n_ref_particles", 4096), "study.n_ref_particles");
  if (c.cfg.has("study", "q")) s.q = c.cfg.number("study", "q");
  s.replications = static_cast<int>(positive(c.cfg.integer("study", "replications", 1), "study.replications"));
  c.cfg.check_unused();
  report_study(c, vmv::chaos_study(s));
}

std::string term(double exponent, bool log_modified) {
  std::string t = "N^" + format_number(-exponent);
  return log_modified ? t + "*log(1+N)" : t;
}

void cmd_chaos_rate(Context& c) {
  const double p = c.cfg.number("rate", "p");
  const long d = c.cfg.integer("rate", "d");
  const double q = c.cfg.number("rate", "q");
  c.cfg.check_unused();
  if (d < 1 || d > 1000000) throw SchemaError("rate.d", "a positive integer", std::to_string(d));
  const auto conc = vmv::chaos_rate_exponent(p, static_cast<int>(d), q, vmv::ExponentVariant::concentration);
  const auto lit = vmv::chaos_rate_exponent(p, static_cast<int>(d), q, vmv::ExponentVariant::as_printed);
  const double half = 0.5 * static_cast<double>(d);
  c.out << "case: " << (p > half ? "p>d/2" : p == half ? "p=d/2" : "p<d/2") << '\n';
  c.out << "variant,first_term,second_term,bound_exponent,log_modified,non_decaying\n";
  for (const auto* r : {&conc, &lit})
    c.out << (r == &conc ? "concentration" : "as_printed") << ',' << term(r->first, r->log_modified) << ','
          << term(r->second, false) << ',' << format_number(r->bound) << ',' << (r->log_modified ? "true" : "false")
          << ',' << (r->non_decaying ? "true" : "false") << '\n';
}

void cmd_resolvent(Context& c) {
  const vmv::Kernel k = kernel_from(c.cfg, "kernel");
  const int n = level_of(c.cfg.integer("resolvent", "level", 10), "resolvent.level");
  const double tol = c.cfg.number("resolvent", "tol", 1e-12);
  const std::size_t max_terms = positive(c.cfg.integer("resolvent", "max_terms", 200), "resolvent.max_terms");
  c.cfg.check_unused();
  const auto grid = vmv::TriGrid::dyadic(n);
  const auto r = vmv::resolvent_sum(k, grid, tol, max_terms);
  const auto res = vmv::verify_resolvent_identity(k, r);
  CsvTable t{{"t", "s", "R"}, {}};
  for (std::size_t i = 1; i <= grid.cells(); ++i)
    for (std::size_t j = 0; j < i; ++j) t.rows.push_back({grid.node(i), grid.node(j), r.values(i, j)});
  write_csv(c.out_dir / "resolvent.csv", t);
  std::ofstream side(c.out_dir / "resolvent_report.txt");
  if (!side) throw IoError("cannot write resolvent_report.txt");
  side << "kernel: " << k.name() << '\n';
  side << "terms_used: " << r.terms_used << '\n';
  side << "converged: " << (r.converged ? "true" : "false") << '\n';
  side << "tail_norm: " << format_number(r.tail_norm) << '\n';
  side << "term_norms:";
  for (double v : r.term_norms) side << ' ' << format_number(v);
  side << '\n';
  side << "identity_residual_left: " << format_number(res.left) << '\n';
  side << "identity_residual_right: " << format_number(res.right) << '\n';
  side.close();
  c.manifest.outputs = {"resolvent.csv", "resolvent_report.txt"};
  c.manifest.details = {{"kernel", k.name()}, {"level", std::to_string(n)}};
  c.out << "terms used: " << r.terms_used << ", tail norm " << format_number(r.tail_norm) << '\n';
  c.out << "R(1, 0) = " << format_number(r.values(grid.cells(), 0)) << '\n';
  c.out << "identity residuals: " << format_number(res.left) << ' ' << format_number(res.right) << '\n';
}

void cmd_kernel_probe(Context& c) {
  const vmv::Kernel k = kernel_from(c.cfg, "kernel");
  const std::string mode =
      c.cfg.text("probe", "mode", "l2_tail", {"l1_shift", "l2_shift", "l2_tail", "integrability"});
  vmv::ProbeReport rep;
  CsvTable t;
  if (mode == "integrability") {
    const double beta = c.cfg.number("probe", "beta");
    std::vector<double> def;
    for (int i = 1; i <= 8; ++i) def.push_back(i / 8.0);
    const auto times = c.cfg.numbers("probe", "times", def);
    const double tol = c.cfg.number("probe", "tol", 1e-10);
    c.cfg.check_unused();
    rep = vmv::integrability_probe(k, beta, times, tol);
    t.header = {"t", "integral"};
  } else {
    const double base = c.cfg.number("probe", "base_t", 0.5);
    std::vector<double> def;
    for (int e = 4; e <= 10; ++e) def.push_back(std::ldexp(1.0, -e));
    const auto lags = c.cfg.numbers("probe", "lags", def);
    const double tol = c.cfg.number("probe", "tol", 1e-12);
    c.cfg.check_unused();
    rep = vmv::hoelder_probe(k, *vmv::parse_probe_mode(mode), base, lags, tol);
    t.header = {"lag", "modulus"};
  }
  for (const auto& [x, y] : rep.samples) t.rows.push_back({x, y});
  write_csv(c.out_dir / "probe.csv", t);
  c.manifest.outputs.push_back("probe.csv");
  c.manifest.details = {{"kernel", k.name()}, {"mode", mode}};
  if (mode == "integrability") {
    c.out << "sup integral: " << format_number(rep.constant_estimate) << '\n';
  } else if (rep.identifiable) {
    c.out << "exponent: " << format_number(rep.exponent_estimate) << '\n';
    c.out << "constant: " << format_number(rep.constant_estimate) << '\n';
    c.out << "r_squared: " << format_number(rep.r_squared) << '\n';
  } else {
    c.out << "modulus vanishes at every lag; no exponent\n";
  }
}

vmv::EmpiricalMeasure read_points(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.rows.empty()) throw IoError(path.string() + ": no points");
  std::vector<double> flat;
  for (const auto& r : t.rows) flat.insert(flat.end(), r.begin(), r.end());
  return vmv::EmpiricalMeasure(t.rows.front().size(), std::move(flat));
}

void cmd_wasserstein(Context& c) {
  std::filesystem::path a, b;
  if (c.inv.positional.size() == 2) {
    a = c.inv.positional[0];
    b = c.inv.positional[1];
  } else if (c.inv.positional.empty()) {
    a = c.cfg.text("wasserstein", "a");
    b = c.cfg.text("wasserstein", "b");
    if (c.inv.config) {
      const auto base = c.inv.config->parent_path();
      if (a.is_relative()) a = base / a;
      if (b.is_relative()) b = base / b;
    }
  } else {
    throw UsageError("wasserstein takes two point files");
  }
  c.cfg.check_unused();
  const auto mu = read_points(a);
  const auto nu = read_points(b);
  if (mu.dim() != nu.dim()) throw IoError("point files differ in dimension");
  if (mu.size() != nu.size()) throw IoError("point files differ in number of points");
  c.out << format_number(vmv::w2(mu, nu)) << '\n';
}

using Handler = std::function<void(Context&)>;

struct Entry {
  Handler fn;
  bool writes_files;
};

const std::map<std::string, Entry>& handlers() {
  static const std::map<std::string, Entry> h{
      {"simulate", {cmd_simulate, true}},         {"converge-time", {cmd_converge_time, true}},
      {"converge-chaos", {cmd_converge_chaos, true}}, {"chaos-rate", {cmd_chaos_rate, false}},
      {"resolvent", {cmd_resolvent, true}},       {"kernel-probe", {cmd_kernel_probe, true}},
      {"wasserstein", {cmd_wasserstein, false}},
  };
  return h;
}

void apply_sets(Config& cfg, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    const auto dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw UsageError("--set expects section.key=value, got '" + s + "'");
    cfg.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate",  "converge-time", "converge-chaos", "chaos-rate",
                                              "resolvent", "kernel-probe",  "wasserstein"};
  return names;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  std::string category;
  std::string message;
  try {
    const auto it = handlers().find(inv.command);
    if (it == handlers().end()) throw UsageError("unknown command '" + inv.command + "'");
    Context c{inv, inv.config ? Config::load(*inv.config) : Config{}, resolve_out_dir(inv), out, {}};
    apply_sets(c.cfg, inv.sets);
    if (inv.threads > 0) vmv::set_thread_count(inv.threads);
    c.manifest.command = inv.command;
    c.manifest.version = VMV_VERSION;
    c.manifest.threads = vmv::thread_count();
    if (it->second.writes_files) prepare_out_dir(c.out_dir);
    it->second.fn(c);
    if (it->second.writes_files) {
      c.manifest.config_echo = c.cfg.echo();
      c.manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_manifest(c.out_dir, c.manifest);
      out << "wrote";
      for (const auto& f : c.manifest.outputs) out << ' ' << (c.out_dir / f).string();
      out << ' ' << (c.out_dir / "manifest.txt").string() << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    category = "usage";
    message = e.what();
  } catch (const SchemaError& e) {
    category = "schema";
    message = e.what();
  } catch (const IoError& e) {
    category = "io";
    message = e.what();
  } catch (const vmv::BlowUpError& e) {
    category = "blow-up";
    message = e.what();
  } catch (const vmv::DivergenceError& e) {
    category = "divergence";
    message = e.what();
  } catch (const vmv::NumericalError& e) {
    category = "numerical";
    message = e.what();
  } catch (const std::invalid_argument& e) {
    category = "invalid-argument";
    message = e.what();
  } catch (const std::exception& e) {
    category = "internal";
    message = e.what();
  }
  for (char& ch : message)
    if (ch == '\n') ch = ' ';
  err << "error: " << category << ": " << inv.command << ": " << message << '\n';
  return 1;
}

}  // namespace vmvcli

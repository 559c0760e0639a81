#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldg/ldg.hpp"

namespace fs = std::filesystem;
using namespace ldg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitInstability = 3;
constexpr int kExitCheckFailed = 4;

struct CommandLine {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

RunConfig load_config(const CommandLine& cl, const std::vector<std::pair<std::string, std::string>>& defaults) {
  RunConfig c = cl.config_path.empty() ? RunConfig{} : RunConfig::load(cl.config_path);
  for (const auto& o : cl.overrides) c.apply_override(o);
  if (!cl.out_dir.empty()) c.set("out_dir", cl.out_dir);
  c = c.with_defaults(defaults);
  c.validate();
  return c;
}

fs::path output_dir(const RunConfig& c) {
  const fs::path dir = c.has("out_dir") ? fs::path(c.text("out_dir")) : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

Json energy_json(const EnergyBreakdown& e) {
  Json j = Json::object();
  j["elastic"] = e.elastic;
  j["bulk"] = e.bulk;
  j["total"] = e.total;
  j["err_est"] = e.quadrature_error_estimate;
  return j;
}

Json check_json(const std::string& name, double value, double tolerance, bool pass) {
  Json j = Json::object();
  j["name"] = name;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  return j;
}

RadialProfile profile_for(const RunConfig& c, const ReducedParams& rp) {
  const long n = c.integer("N");
  if (n < 200) throw ConfigError("N must be at least 200");
  return solve_profile(rp.t, rp.R_t, static_cast<std::size_t>(n));
}

int cmd_profile(const CommandLine& cl) {
  const RunConfig c = load_config(cl, {{"N", "2000"}});
  const ReducedParams rp = c.reduced_params();
  const RadialProfile p = profile_for(c, rp);
  const ProfileBounds b = profile_bounds(p);
  const fs::path dir = output_dir(c);

  Json checks = Json::array();
  checks.push_back(check_json("ode_residual", b.residual, 1e-8, b.residual < 1e-8));
  checks.push_back(check_json("monotone_min_increment", b.min_increment, -1e-12, b.min_increment >= -1e-12));
  checks.push_back(check_json("min_h", b.min_h, 0.0, b.min_h >= 0.0));
  checks.push_back(check_json("max_h", b.max_h, 1.0, b.max_h <= 1.0));
  checks.push_back(check_json("lower_envelope_margin", b.envelope_margin, 0.0, b.envelope_margin >= 0.0));
  checks.push_back(check_json("core_bound_margin", b.core_margin, 0.0, b.core_margin >= 0.0));
  checks.push_back(check_json("curvature_at_origin", b.d2h0, 0.0, b.d2h0 > 0.0));
  bool pass = b.pass();
  if (p.R >= 20.0) {
    const double d = decay_check(p);
    checks.push_back(check_json("far_field_decay", d, 10.0, d <= 10.0));
    pass = pass && d <= 10.0;
  }

  Json report = Json::object();
  report["config"] = c.to_json();
  report["t"] = rp.t;
  report["R"] = p.R;
  report["h_plus"] = rp.h_plus;
  report["N"] = p.size();
  report["h_R"] = p.h.back();
  report["d2h0"] = p.d2h0;
  report["checks"] = checks;
  report["all_pass"] = pass;
  write_text_file((dir / "profile.csv").string(), profile_csv(p));
  write_text_file((dir / "bounds_report.json").string(), dump_json(report));
  std::fprintf(stderr, "profile: N=%zu residual=%.3e bounds %s\n", p.size(), b.residual, pass ? "pass" : "FAIL");
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const CommandLine& cl) {
  const RunConfig c = load_config(cl, {{"N", "2000"}, {"order", "12"}, {"count", "100"}, {"seed", "1"}});
  const ReducedParams rp = c.reduced_params();
  IdentitySuiteOptions opt;
  const long order = c.integer("order");
  if (order < 6) throw ConfigError("sphere quadrature order must be at least 6");
  opt.order = static_cast<std::size_t>(order);
  opt.count = static_cast<int>(c.integer("count"));
  const long seed = c.integer("seed");
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  opt.seed = static_cast<std::uint64_t>(seed);
  const RadialProfile p = profile_for(c, rp);
  const std::vector<IdentityCheck> checks = identity_suite(p, rp, opt);
  const fs::path dir = output_dir(c);

  bool pass = true;
  Json arr = Json::array();
  for (const auto& k : checks) {
    Json j = Json::object();
    j["identity_name"] = k.name;
    j["value"] = k.value;
    j["tolerance"] = k.tolerance;
    j["pass"] = k.pass;
    arr.push_back(j);
    pass = pass && k.pass;
    std::fprintf(stderr, "%-40s %.3e (tol %.0e) %s\n", k.name.c_str(), k.value, k.tolerance, k.pass ? "pass" : "FAIL");
  }
  Json report = Json::object();
  report["config"] = c.to_json();
  report["identities"] = arr;
  report["all_pass"] = pass;
  write_text_file((dir / "verify.json").string(), dump_json(report));
  return pass ? kExitOk : kExitCheckFailed;
}

BallField lattice_field(const std::string& kind, int n, const RadialProfile& p, const ReducedParams& rp,
                        const PerturbationShape& shape) {
  if (kind == "hedgehog") return sample_hedgehog(n, p);
  if (kind == "perturbed_hedgehog") return sample_perturbed_hedgehog(n, p, shape);
  if (kind == "harmonic_map") return sample_harmonic_map(n, rp.R_t, rp.t);
  if (kind == "frozen_boundary") return sample_frozen_boundary(n, rp.R_t, rp.t);
  throw ConfigError("unknown field '" + kind + "' (hedgehog, perturbed_hedgehog, harmonic_map, frozen_boundary)");
}

PerturbationShape shape_of(const RunConfig& c) {
  PerturbationShape s;
  s.sigma = c.real("sigma");
  s.amplitude = c.real("amplitude");
  if (!(s.sigma > 0.0)) throw ConfigError("sigma must be positive");
  return s;
}

int cmd_energy(const CommandLine& cl) {
  const RunConfig c = load_config(cl, {{"N", "2000"},
                                       {"field", "hedgehog"},
                                       {"grid_n", "65"},
                                       {"radii", "50"},
                                       {"sigma", "10"},
                                       {"amplitude", "1"}});
  const ReducedParams rp = c.reduced_params();
  const std::string kind = c.text("field");
  const long n = c.integer("grid_n");
  if (n < 16 || n > 1025) throw ConfigError("grid_n must lie in [16, 1025]");
  const long N = c.integer("N");
  if (N < 200) throw ConfigError("N must be at least 200");
  const double R = rp.R_t;
  const bool radial = kind == "hedgehog" || kind == "harmonic_map";
  const RadialProfile p = kind == "harmonic_map" ? constant_profile(1.0, rp.t, R, static_cast<std::size_t>(N))
                                                 : profile_for(c, rp);
  const fs::path dir = output_dir(c);
  const double reference = 12.0 * kPi * R;

  Json report = Json::object();
  report["config"] = c.to_json();
  report["field"] = kind;
  report["R"] = R;
  report["t"] = rp.t;
  report["grid_n"] = n;
  report["reference_12piR"] = reference;
  if (radial) {
    const EnergyBreakdown e = radial_energy(p, rp);
    Json j = energy_json(e);
    j["ratio_to_reference"] = e.total / reference;
    report["radial"] = j;
    const long count = c.integer("radii");
    if (count < 2) throw ConfigError("radii must be at least 2");
    std::vector<double> radii;
    const double r0 = std::min(0.5, 0.5 * R);
    for (long k = 0; k < count; ++k) radii.push_back(r0 + (R - r0) * static_cast<double>(k) / static_cast<double>(count - 1));
    const auto scan = monotonicity_scan(p, rp, radii);
    std::string csv = "r,E_over_r\n";
    for (const auto& s : scan) csv += format_double(s.r) + "," + format_double(s.E_over_r) + "\n";
    write_text_file((dir / "monotonicity.csv").string(), csv);
    const double inc = min_increment(scan);
    Json m = Json::object();
    m["min_increment"] = inc;
    m["nondecreasing"] = inc >= -1e-10;
    report["monotonicity"] = m;
    if (inc < -1e-10) std::fprintf(stderr, "warning: E(r)/r decreases somewhere (min increment %.3e)\n", inc);
  }
  const BallField f = lattice_field(kind, static_cast<int>(n), p, rp, shape_of(c));
  const EnergyBreakdown e = field_energy(f, rp);
  Json j = energy_json(e);
  j["ratio_to_reference"] = e.total / reference;
  report["lattice"] = j;
  write_text_file((dir / "energy.json").string(), dump_json(report));
  std::fprintf(stderr, "energy: lattice total %.10g (12 pi R = %.10g)\n", e.total, reference);
  return kExitOk;
}

RelaxConfig relax_config_of(const RunConfig& c, const ReducedParams& rp) {
  RelaxConfig r;
  r.t = rp.t;
  r.R = rp.R_t;
  r.grid_n = static_cast<int>(c.integer("grid_n"));
  r.dt_factor = c.real("dt_factor");
  r.max_steps = c.integer("max_steps");
  r.tol = c.real("tol");
  r.init = relax_init_from_string(c.text("init"));
  r.threads = static_cast<int>(c.integer("threads"));
  r.checkpoint_every = c.integer("checkpoint_every");
  if (r.checkpoint_every < 0) throw ConfigError("checkpoint_every must be nonnegative");
  r.validate();
  return r;
}

const std::vector<std::pair<std::string, std::string>> kRelaxDefaults{
    {"N", "2000"},     {"grid_n", "65"},          {"dt_factor", "0.14285714285714285"},
    {"max_steps", "100000"}, {"tol", "1e-08"},    {"init", "hedgehog"},
    {"threads", "1"},  {"checkpoint_every", "0"}, {"sigma", "10"},
    {"amplitude", "1"}};

Json relax_json(const RelaxResult& r) {
  Json j = Json::object();
  j["steps"] = r.steps;
  j["converged"] = r.converged;
  j["dt"] = r.dt;
  j["final_update"] = r.final_update;
  j["final_residual"] = r.final_residual;
  j["initial_flow_energy"] = r.initial_flow_energy;
  j["final_flow_energy"] = r.final_flow_energy;
  j["max_norm"] = r.max_norm;
  j["energy"] = energy_json(r.energy);
  j["energy_over_R"] = r.energy.total / r.field.R;
  j["max_biaxiality_core"] = max_biaxiality(r.field, 5.0);
  return j;
}

CheckpointHook checkpoint_writer(const fs::path& dir, double dt) {
  return [dir, dt](const BallField& f, long step, double energy) {
    Json meta = field_sidecar(f);
    meta["step"] = step;
    meta["flow_energy"] = energy;
    meta["dt"] = dt;
    write_text_file((dir / "checkpoint.csv").string(), field_csv(f));
    write_text_file((dir / "checkpoint.json").string(), dump_json(meta));
  };
}

int cmd_relax(const CommandLine& cl) {
  RunConfig c = load_config(cl, kRelaxDefaults);
  const ReducedParams rp = c.reduced_params();
  const RelaxConfig rc = relax_config_of(c, rp);
  const fs::path dir = output_dir(c);

  BallField start;
  long first_step = 0;
  double dt = 0.0;
  if (c.has("resume")) {
    const fs::path meta_path = c.text("resume");
    const Json meta = Json::parse(read_text_file(meta_path.string()));
    fs::path csv_path = meta_path;
    csv_path.replace_extension(".csv");
    start = read_field(read_text_file(csv_path.string()), meta);
    first_step = meta.at("step").get<long>();
    dt = meta.at("dt").get<double>();
    if (start.n != rc.grid_n || start.R != rc.R) throw ConfigError("checkpoint does not match grid_n or R");
  } else {
    const RadialProfile p = profile_for(c, rp);
    start = rc.init == RelaxInit::perturbed_hedgehog ? sample_perturbed_hedgehog(rc.grid_n, p, shape_of(c))
                                                     : relax_initial_field(rc, p);
  }
  if (!(dt > 0.0)) dt = relax_time_step(rc, rp, start.dx, detail::max_node_norm(start));
  const RelaxResult r = relax_field(rc, rp, std::move(start), first_step, checkpoint_writer(dir, dt), dt);

  Json report = Json::object();
  report["config"] = c.to_json();
  report["result"] = relax_json(r);
  report["reference_12piR"] = 12.0 * kPi * rc.R;
  write_text_file((dir / "relax.json").string(), dump_json(report));
  write_text_file((dir / "field.csv").string(), field_csv(r.field));
  write_text_file((dir / "field.json").string(), dump_json(field_sidecar(r.field)));
  std::fprintf(stderr, "relax: %ld steps, converged=%d, energy %.10g\n", r.steps, r.converged ? 1 : 0, r.energy.total);
  return kExitOk;
}

int cmd_compare(const CommandLine& cl) {
  RunConfig c = load_config(cl, kRelaxDefaults);
  c.set("init", "perturbed_hedgehog");
  const ReducedParams rp = c.reduced_params();
  const RelaxConfig rc = relax_config_of(c, rp);
  const PerturbationShape shape = shape_of(c);
  const RadialProfile p = profile_for(c, rp);
  const fs::path dir = output_dir(c);

  const EnergyComparison cmp = energy_compare_hedgehog_vs_perturbation(p, rp, rc.grid_n, shape);
  const BallField hedgehog = sample_hedgehog(rc.grid_n, p);
  const RelaxResult r = relax_field(rc, rp, sample_perturbed_hedgehog(rc.grid_n, p, shape));

  Json report = Json::object();
  report["config"] = c.to_json();
  report["E_H"] = cmp.hedgehog.total;
  report["E_Hb"] = cmp.perturbed.total;
  report["E_relaxed"] = r.energy.total;
  report["delta"] = cmp.delta;
  report["err_est"] = cmp.delta_err;
  report["E_H_err_est"] = cmp.hedgehog.quadrature_error_estimate;
  report["E_Hb_err_est"] = cmp.perturbed.quadrature_error_estimate;
  report["E_relaxed_err_est"] = r.energy.quadrature_error_estimate;
  report["reference_12piR"] = 12.0 * kPi * rc.R;
  report["grid_n"] = rc.grid_n;
  report["max_biaxiality_core_hedgehog"] = max_biaxiality(hedgehog, 5.0);
  report["relax"] = relax_json(r);
  write_text_file((dir / "compare.json").string(), dump_json(report));
  std::fprintf(stderr, "compare: delta %.6e +- %.1e, E_relaxed %.10g\n", cmp.delta, cmp.delta_err, r.energy.total);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landau-de Gennes hedgehog laboratory"};
  app.require_subcommand(1);
  CommandLine cl;
  const auto add_common = [&cl](CLI::App* sub) {
    sub->add_option("-c,--config", cl.config_path, "key = value configuration file");
    sub->add_option("-s,--set", cl.overrides, "override a configuration entry (key=value)");
    sub->add_option("-o,--out", cl.out_dir, "output directory (overrides out_dir)");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const CommandLine&);
  };
  const Entry entries[] = {
      {"profile", "solve the hedgehog profile and check its bounds", cmd_profile},
      {"verify", "run the integral identity checks", cmd_verify},
      {"energy", "energy of a radial or lattice field", cmd_energy},
      {"relax", "gradient-flow relaxation on the ball", cmd_relax},
      {"compare", "hedgehog versus biaxial perturbation and its relaxation", cmd_compare},
  };
  std::vector<std::pair<CLI::App*, int (*)(const CommandLine&)>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    subs.emplace_back(sub, e.run);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) return run(cl);
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s (last residual %.3e)\n", e.what(), e.last_residual());
    return kExitSolver;
  } catch (const InstabilityError& e) {
    std::fprintf(stderr, "instability: %s\n", e.what());
    return kExitInstability;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "instability: %s\n", e.what());
    return kExitInstability;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: malformed JSON: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

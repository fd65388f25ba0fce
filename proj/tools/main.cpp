// confgeo command-line tool: transport distances, geodesics, samplers and
// verification suites over point-configuration files.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confgeo/confgeo.hpp"
#include "confgeo/verify.hpp"

namespace {

using namespace confgeo;

json make_manifest(const std::string& command, const json& params, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs, std::uint64_t seed) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = seed;
  m["params"] = params;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  return m;
}

void emit(const json& result, const std::string& out_path, const json& manifest) {
  if (out_path.empty()) {
    std::printf("%s\n", result.dump(2).c_str());
  } else {
    write_text_file(out_path, result.dump(2) + "\n");
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
}

void emit_text(const std::string& text, const std::string& out_path, const json& manifest) {
  if (out_path.empty()) {
    std::printf("%s", text.c_str());
  } else {
    write_text_file(out_path, text);
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
}

std::string matching_csv(const TransportResult& res) {
  std::string text = "kind,gamma_index,omega_index,distance\n";
  char buf[128];
  if (res.distance.is_finite())
    std::snprintf(buf, sizeof(buf), "distance,,,%.17g\n", res.distance.value());
  else
    std::snprintf(buf, sizeof(buf), "distance,,,inf\n");
  text += buf;
  if (res.matching) {
    for (const auto& [gi, oi] : res.matching->pairs) {
      std::snprintf(buf, sizeof(buf), "pair,%d,%d,\n", gi, oi);
      text += buf;
    }
    for (const auto& [gi, target] : res.matching->exits) {
      std::snprintf(buf, sizeof(buf), "exit,%d,,\n", gi);
      text += buf;
    }
  }
  return text;
}

int run(int argc, char** argv) {
  CLI::App app{"confgeo: computable metric geometry of finite point configurations"};
  app.require_subcommand(1);
  // global flags may appear after the subcommand arguments
  app.fallthrough();

  std::string out_path, format = "json";
  std::uint64_t seed = 1;
  int expect_dim = 0;
  app.add_option("--out", out_path, "write the result to this file (with a .manifest.json)")
      ->capture_default_str();
  app.add_option("--format", format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "random seed for sampled commands")->capture_default_str();
  app.add_option("--dim", expect_dim, "require input configurations to have this dimension");

  // dist
  auto* dist_cmd = app.add_subcommand("dist", "transport distance between two configuration files");
  std::string file_a, file_b;
  dist_cmd->add_option("a", file_a, "first configuration (.json or .csv)")->required();
  dist_cmd->add_option("b", file_b, "second configuration")->required();

  // localdist
  auto* local_cmd = app.add_subcommand("localdist", "localized distance around a ball");
  std::string lfile_a, lfile_b;
  std::vector<double> center{0.0};
  double radius = 1.0;
  local_cmd->add_option("a", lfile_a, "configuration gamma")->required();
  local_cmd->add_option("b", lfile_b, "configuration omega")->required();
  local_cmd->add_option("--center", center, "ball center coordinates")->delimiter(',');
  local_cmd->add_option("--radius", radius, "ball radius")->required();

  // geodesic
  auto* geo_cmd = app.add_subcommand("geodesic", "displacement interpolation at given times");
  std::string gfile_a, gfile_b;
  std::vector<double> times{0.0, 0.5, 1.0};
  geo_cmd->add_option("a", gfile_a)->required();
  geo_cmd->add_option("b", gfile_b)->required();
  geo_cmd->add_option("--times", times, "interpolation times in [0,1]")->delimiter(',');

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "dyadic curve energy of the geodesic between two files");
  std::string efile_a, efile_b;
  int depth = 8;
  energy_cmd->add_option("a", efile_a)->required();
  energy_cmd->add_option("b", efile_b)->required();
  energy_cmd->add_option("--depth", depth, "dyadic refinement depth")->capture_default_str();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "run a sampler described by a spec file");
  std::string spec_path;
  sample_cmd->add_option("spec", spec_path, "sampler spec (.json)")->required();

  // ergodic
  auto* ergodic_cmd = app.add_subcommand("ergodic", "spatial ergodic averages of a bump observable");
  std::string cfg_path;
  double half_width = 0, grid_step = 0.25, f_radius = 2.0, f_amp = 1.0;
  std::vector<double> sizes{2.0, 5.0};
  ergodic_cmd->add_option("config", cfg_path, "sampled configuration file")->required();
  ergodic_cmd->add_option("--half-width", half_width, "half-width of the sampled box")->required();
  ergodic_cmd->add_option("--sizes", sizes, "box half-widths n for the averages")->delimiter(',');
  ergodic_cmd->add_option("--grid-step", grid_step, "quadrature grid step")->capture_default_str();
  ergodic_cmd->add_option("--f-radius", f_radius, "bump radius of the observable")->capture_default_str();
  ergodic_cmd->add_option("--f-amp", f_amp, "bump amplitude of the observable")->capture_default_str();

  // intrinsic
  auto* intr_cmd = app.add_subcommand("intrinsic", "clipped localized-distance family and its gap");
  std::string ifile_a, ifile_b;
  std::vector<double> radii{1.0, 2.0, 4.0}, base;
  double clip = 1.0;
  intr_cmd->add_option("a", ifile_a)->required();
  intr_cmd->add_option("b", ifile_b)->required();
  intr_cmd->add_option("--radii", radii, "increasing ball radii")->delimiter(',');
  intr_cmd->add_option("--clip", clip, "clip constant c")->required();
  intr_cmd->add_option("--base", base, "ball base point (default: origin)")->delimiter(',');

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify_cmd->add_option("suite", suite, "one of: metric, energy, gradient, gibbs-poisson, ergodic, all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto read_checked = [&](const std::string& path) {
    Configuration g = read_configuration(path);
    if (expect_dim > 0 && g.dim != expect_dim)
      throw std::invalid_argument("confgeo: " + path + " has dimension " + std::to_string(g.dim) +
                                  ", expected " + std::to_string(expect_dim));
    return g;
  };

  if (*dist_cmd) {
    const Configuration a = read_checked(file_a);
    const Configuration b = read_checked(file_b);
    const TransportResult res = transport_distance(a, b);
    const json manifest = make_manifest("dist", {{"format", format}}, {file_a, file_b}, {out_path}, seed);
    if (format == "csv")
      emit_text(matching_csv(res), out_path, manifest);
    else
      emit(transport_result_to_json(res), out_path, manifest);
    return 0;
  }

  if (*local_cmd) {
    const Configuration a = read_checked(lfile_a);
    const Configuration b = read_checked(lfile_b);
    if (static_cast<int>(center.size()) != a.dim) center = zeros(a.dim);
    const TransportResult res = localized_distance(a, b, Ball{center, radius});
    const json manifest = make_manifest(
        "localdist", {{"center", center}, {"radius", radius}, {"format", format}}, {lfile_a, lfile_b},
        {out_path}, seed);
    if (format == "csv")
      emit_text(matching_csv(res), out_path, manifest);
    else
      emit(transport_result_to_json(res), out_path, manifest);
    return 0;
  }

  if (*geo_cmd) {
    const Configuration a = read_checked(gfile_a);
    const Configuration b = read_checked(gfile_b);
    const TransportResult res = a.dim == 1 && a.size() == b.size()
                                    ? TransportResult{transport_distance_value(a, b),
                                                      monotone_matching_1d(a, b)}
                                    : transport_distance(a, b);
    if (res.distance.is_infinite()) {
      std::fprintf(stderr, "confgeo: configurations lie in different fibers (infinite distance)\n");
      return 2;
    }
    json out = json::array();
    for (double t : times) {
      json item = configuration_to_json(interpolate(a, b, *res.matching, t));
      item["t"] = t;
      out.push_back(std::move(item));
    }
    emit(out, out_path,
         make_manifest("geodesic", {{"times", times}}, {gfile_a, gfile_b}, {out_path}, seed));
    return 0;
  }

  if (*energy_cmd) {
    const Configuration a = read_checked(efile_a);
    const Configuration b = read_checked(efile_b);
    const TransportResult res = transport_distance(a, b);
    if (res.distance.is_infinite()) {
      std::fprintf(stderr, "confgeo: configurations lie in different fibers (infinite distance)\n");
      return 2;
    }
    json out;
    out["distance"] = res.distance.value();
    out["half_squared_distance"] = 0.5 * res.distance.value() * res.distance.value();
    json energies = json::array();
    const ConfigurationPath path = interpolation_path(a, b, *res.matching);
    double prev = 0;
    bool have_prev = false;
    for (int k = 2; k <= depth; k += 2) {
      const double e = curve_energy(path, 0.0, 1.0, k).value();
      json row{{"depth", k}, {"energy", e}};
      if (have_prev) row["increment"] = e - prev;
      prev = e;
      have_prev = true;
      energies.push_back(std::move(row));
    }
    out["dyadic_energies"] = energies;
    emit(out, out_path, make_manifest("energy", {{"depth", depth}}, {efile_a, efile_b}, {out_path}, seed));
    return 0;
  }

  if (*sample_cmd) {
    const json spec_json = json::parse(read_text_file(spec_path));
    SamplerJob job = sampler_job_from_json(spec_json);
    if (app.count("--seed") > 0) job.seed = seed;
    std::string lines;
    if (job.sampler == "gibbs") {
      const GibbsChain chain = gibbs_mcmc(job.spec, job.steps, job.burn_in, job.thin, job.seed);
      for (const Configuration& s : chain.samples) lines += configuration_to_json(s).dump() + "\n";
    } else if (job.sampler == "poisson") {
      std::mt19937_64 rng(job.seed);
      for (int k = 0; k < job.draws; ++k)
        lines += configuration_to_json(sample_poisson(job.spec.activity, job.spec.window, rng)).dump() + "\n";
    } else if (job.sampler == "mixed-poisson") {
      std::mt19937_64 rng(job.seed);
      for (int k = 0; k < job.draws; ++k)
        lines += configuration_to_json(sample_mixed_poisson(job.mixture, job.spec.window, rng)).dump() + "\n";
    } else {
      throw std::invalid_argument("confgeo: unknown sampler \"" + job.sampler + "\"");
    }
    emit_text(lines, out_path,
              make_manifest("sample", spec_json, {spec_path}, {out_path}, job.seed));
    return 0;
  }

  if (*ergodic_cmd) {
    const Configuration g = read_checked(cfg_path);
    const CompactTestFunction f = bump_test_function(Ball{zeros(g.dim), f_radius}, f_amp);
    const CylinderFunction u = exp_decay_cylinder({f}, Vec{1.0});
    const std::vector<double> averages = ergodic_average(g, half_width, u, sizes, grid_step);
    const json manifest = make_manifest("ergodic",
                                        {{"half_width", half_width},
                                         {"sizes", sizes},
                                         {"grid_step", grid_step},
                                         {"f_radius", f_radius},
                                         {"f_amp", f_amp}},
                                        {cfg_path}, {out_path}, seed);
    if (format == "csv") {
      std::string text = "n,average\n";
      char buf[96];
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", sizes[i], averages[i]);
        text += buf;
      }
      emit_text(text, out_path, manifest);
    } else {
      json out;
      out["sizes"] = sizes;
      out["averages"] = averages;
      emit(out, out_path, manifest);
    }
    return 0;
  }

  if (*intr_cmd) {
    const Configuration a = read_checked(ifile_a);
    const Configuration b = read_checked(ifile_b);
    if (static_cast<int>(base.size()) != a.dim) base = zeros(a.dim);
    const IntrinsicReport rep = intrinsic_metric_gap(a, b, base, radii, clip, 3, seed);
    const json manifest = make_manifest(
        "intrinsic", {{"radii", radii}, {"clip", clip}, {"base", base}}, {ifile_a, ifile_b}, {out_path},
        seed);
    if (format == "csv") {
      std::string text = "r,local_distance,value\n";
      char buf[128];
      for (const IntrinsicRow& row : rep.rows) {
        if (row.local_distance.is_finite())
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row.radius, row.local_distance.value(),
                        row.value);
        else
          std::snprintf(buf, sizeof(buf), "%.17g,inf,%.17g\n", row.radius, row.value);
        text += buf;
      }
      emit_text(text, out_path, manifest);
    } else {
      json rows = json::array();
      for (const IntrinsicRow& row : rep.rows) {
        json r;
        r["radius"] = row.radius;
        if (row.local_distance.is_finite())
          r["local_distance"] = row.local_distance.value();
        else
          r["local_distance"] = "inf";
        r["value"] = row.value;
        r["fd_ratio"] = row.fd_ratio;
        rows.push_back(std::move(r));
      }
      json out;
      out["rows"] = rows;
      if (rep.rho.is_finite()) {
        out["rho"] = rep.rho.value();
        out["gap"] = rep.gap;
      } else {
        out["rho"] = "inf";
      }
      out["best_value"] = rep.best_value;
      emit(out, out_path, manifest);
    }
    return 0;
  }

  if (*verify_cmd) {
    const verify::SuiteReport rep = verify::run_suite(suite, seed);
    json checks = json::array();
    for (const auto& c : rep.checks) {
      std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    json out;
    out["suite"] = rep.suite;
    out["seed"] = rep.seed;
    out["pass"] = rep.pass();
    out["checks"] = checks;
    if (!out_path.empty()) {
      write_text_file(out_path, out.dump(2) + "\n");
      write_text_file(out_path + ".manifest.json",
                      make_manifest("verify", {{"suite", suite}}, {}, {out_path}, seed).dump(2) + "\n");
    }
    return rep.pass() ? 0 : 3;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "confgeo: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "confgeo: %s\n", e.what());
    return 2;
  }
}

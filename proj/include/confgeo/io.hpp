#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "confgeo/configuration.hpp"
#include "confgeo/coupling.hpp"
#include "confgeo/gibbs.hpp"
#include "confgeo/potential.hpp"

namespace confgeo {

using nlohmann::json;

inline json configuration_to_json(const Configuration& g) {
  json j;
  j["dim"] = g.dim;
  j["points"] = json::array();
  for (const Vec& p : g.points) j["points"].push_back(p);
  return j;
}

inline Configuration configuration_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("points"))
    throw std::invalid_argument("confgeo: configuration JSON needs \"dim\" and \"points\"");
  Configuration g;
  g.dim = j.at("dim").get<int>();
  if (g.dim < 1) throw std::invalid_argument("confgeo: dimension must be >= 1");
  for (const auto& e : j.at("points")) g.points.push_back(e.get<Vec>());
  return Configuration::of(g.dim, std::move(g.points));
}

/// One point per row, full round-trip precision.
inline std::string configuration_to_csv(const Configuration& g) {
  std::string out;
  char buf[64];
  for (const Vec& p : g.points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
      if (i) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline Configuration configuration_from_csv(const std::string& text) {
  std::vector<Vec> pts;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    Vec p;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) p.push_back(std::stod(cell));
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw std::invalid_argument("confgeo: empty CSV configuration (dimension unknown)");
  const int d = static_cast<int>(pts[0].size());
  return Configuration::of(d, std::move(pts));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("confgeo: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("confgeo: cannot write " + path);
  out << text;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Reads .json or .csv configuration files by extension.
inline Configuration read_configuration(const std::string& path) {
  const std::string text = read_text_file(path);
  if (ends_with(path, ".csv")) return configuration_from_csv(text);
  return configuration_from_json(json::parse(text));
}

inline void write_configuration(const std::string& path, const Configuration& g) {
  if (ends_with(path, ".csv")) {
    write_text_file(path, configuration_to_csv(g));
  } else {
    write_text_file(path, configuration_to_json(g).dump(2) + "\n");
  }
}

/// {"distance": number | "inf", "pairs": [[i,j],...], "exits": [[i,[x...]],...]}
inline json transport_result_to_json(const TransportResult& res) {
  json j;
  if (res.distance.is_finite())
    j["distance"] = res.distance.value();
  else
    j["distance"] = "inf";
  if (res.matching) {
    j["pairs"] = json::array();
    for (const auto& [gi, oi] : res.matching->pairs) j["pairs"].push_back({gi, oi});
    j["exits"] = json::array();
    for (const auto& [gi, target] : res.matching->exits) j["exits"].push_back({json(gi), json(target)});
    j["squared_cost"] = res.matching->squared_cost;
  }
  return j;
}

inline PairPotential potential_from_json(const json& j) {
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") return zero_potential();
  if (kind == "hardcore") return hard_core_potential(j.at("radius").get<double>());
  if (kind == "well")
    return smooth_well_potential(j.at("strength").get<double>(), j.at("r1").get<double>(),
                                 j.at("r2").get<double>(), j.value("well_ratio", 1.0),
                                 j.value("hard_core", 0.0));
  throw std::invalid_argument("confgeo: unknown potential kind \"" + kind + "\"");
}

struct SamplerJob {
  std::string sampler = "gibbs";  // gibbs | poisson | mixed-poisson
  GibbsSpec spec;
  std::vector<std::pair<double, double>> mixture;
  std::uint64_t seed = 1;
  long steps = 10000, burn_in = 1000, thin = 10;
  int draws = 100;  // for the plain samplers
};

inline SamplerJob sampler_job_from_json(const json& j) {
  SamplerJob job;
  const int dim = j.at("dim").get<int>();
  if (!j.contains("window")) throw std::invalid_argument("confgeo: sampler spec needs \"window\"");
  Vec lo, hi;
  for (const auto& side : j.at("window")) {
    lo.push_back(side.at(0).get<double>());
    hi.push_back(side.at(1).get<double>());
  }
  if (static_cast<int>(lo.size()) != dim) throw std::invalid_argument("confgeo: window does not match dim");
  job.spec.window = Region::box(lo, hi);
  job.spec.activity = j.value("z", 1.0);
  job.spec.potential = j.contains("potential") ? potential_from_json(j.at("potential")) : zero_potential();
  job.spec.boundary = j.contains("boundary") ? configuration_from_json(j.at("boundary"))
                                             : Configuration::empty(dim);
  job.sampler = j.value("sampler", std::string("gibbs"));
  job.seed = j.value("seed", 1ull);
  job.steps = j.value("steps", 10000l);
  job.burn_in = j.value("burn_in", 1000l);
  job.thin = j.value("thin", 10l);
  job.draws = j.value("draws", 100);
  if (j.contains("mixture"))
    for (const auto& e : j.at("mixture"))
      job.mixture.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return job;
}

}  // namespace confgeo

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "locfade/cli.hpp"
#include "locfade/errors.hpp"

namespace locfade::cli {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(field, "must be finite");
  return x;
}

long long integer(const json& v, const std::string& field) {
  if (v.is_number_integer()) return v.get<long long>();
  const double x = number(v, field);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) throw ValidationError(field, "expected an integer");
  return static_cast<long long>(x);
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) throw ValidationError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Point> points(const json& v, const std::string& field) {
  if (!v.is_array()) throw ValidationError(field, "expected an array of [x, y] pairs");
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const json& p = v[i];
    if (p.is_array() && (p.size() == 1 || p.size() == 2)) {
      out.push_back({number(p[0], f), p.size() == 2 ? number(p[1], f) : 0.0});
    } else if (p.is_object()) {
      for (const auto& [k, _] : p.items()) {
        if (k != "x" && k != "y") throw ValidationError(f + "." + k, "unknown key");
      }
      if (!p.contains("x")) throw ValidationError(f + ".x", "missing");
      out.push_back({number(p["x"], f + ".x"), p.contains("y") ? number(p["y"], f + ".y") : 0.0});
    } else {
      throw ValidationError(f, "expected [x, y] or {\"x\": .., \"y\": ..}");
    }
  }
  return out;
}

std::string string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ValidationError(field, "expected a string");
  return v.get<std::string>();
}

template <class E>
std::vector<E> regimes(const json& v, const std::string& field, const std::map<std::string, E>& names) {
  if (!v.is_array()) throw ValidationError(field, "expected an array of names");
  std::vector<E> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const auto it = names.find(string(v[i], f));
    if (it == names.end()) {
      std::string known;
      for (const auto& [n, _] : names) known += (known.empty() ? "" : ", ") + n;
      throw ValidationError(f, "unknown regime \"" + v[i].get<std::string>() + "\" (known: " + known + ")");
    }
    out.push_back(it->second);
  }
  return out;
}

const std::map<std::string, DetectionRegime>& detection_names() {
  static const std::map<std::string, DetectionRegime> n{
      {"known", DetectionRegime::CoherentKnownH},
      {"marginal", DetectionRegime::RayleighMarginal},
      {"nocsi", DetectionRegime::NoCsiQuadratic}};
  return n;
}

const std::map<std::string, EstimatorRegime>& estimator_names() {
  static const std::map<std::string, EstimatorRegime> n{
      {"awgn_ls", EstimatorRegime::AwgnLs},
      {"nakagami_ml", EstimatorRegime::NakagamiMl},
      {"nocsi_ml", EstimatorRegime::NoCsiMl}};
  return n;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  // nlohmann reports the offset one past the offending character
  const std::size_t end = std::min(text.size(), byte > 0 ? byte - 1 : 0);
  int line = 1, col = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  return {line, col};
}

json points_json(const std::vector<Point>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back({p.x, p.y});
  return a;
}

}  // namespace

ParsedConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what(), line, col);
  }
  if (!doc.is_object()) throw ParseError("top level must be an object", 1, 1);

  ParsedConfig out;
  Scenario& s = out.scenario;
  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"anchors", [&](const json& v, const std::string& f) { s.anchors = points(v, f); }},
      {"nodes", [&](const json& v, const std::string& f) { s.nodes = points(v, f); }},
      {"c", [&](const json& v, const std::string& f) { s.c = number(v, f); }},
      {"m", [&](const json& v, const std::string& f) { s.m = number(v, f); }},
      {"dimension", [&](const json& v, const std::string& f) { s.dimension = static_cast<int>(integer(v, f)); }},
      {"sigma_scale", [&](const json& v, const std::string& f) {
         if (!v.is_null()) s.sigma_scale = numbers(v, f);
       }},
      {"snr_db_grid", [&](const json& v, const std::string& f) { s.snr_db_grid = numbers(v, f); }},
      {"m_grid", [&](const json& v, const std::string& f) { s.m_grid = numbers(v, f); }},
      {"estimators", [&](const json& v, const std::string& f) { s.estimators = regimes(v, f, estimator_names()); }},
      {"grid_points_per_axis",
       [&](const json& v, const std::string& f) { s.grid_points_per_axis = static_cast<int>(integer(v, f)); }},
      {"detectors", [&](const json& v, const std::string& f) { s.detectors = regimes(v, f, detection_names()); }},
      {"detection_snr_db", [&](const json& v, const std::string& f) { s.detection_snr_db = number(v, f); }},
      {"detection_snr_grid", [&](const json& v, const std::string& f) { s.detection_snr_grid = numbers(v, f); }},
      {"samples", [&](const json& v, const std::string& f) { s.samples = static_cast<int>(integer(v, f)); }},
      {"k_values", [&](const json& v, const std::string& f) {
         s.k_values.clear();
         for (double x : numbers(v, f)) {
           if (x != std::floor(x)) throw ValidationError(f, "expected integers");
           s.k_values.push_back(static_cast<int>(x));
         }
       }},
      {"k", [&](const json& v, const std::string& f) { s.k = static_cast<int>(integer(v, f)); }},
      {"central_k", [&](const json& v, const std::string& f) {
         if (!v.is_null()) s.central_k = static_cast<int>(integer(v, f));
       }},
      {"pfa_total", [&](const json& v, const std::string& f) { s.pfa_total = number(v, f); }},
      {"pd_level", [&](const json& v, const std::string& f) { s.pd_level = number(v, f); }},
      {"pfa_grid", [&](const json& v, const std::string& f) { s.pfa_grid = numbers(v, f); }},
      {"alpha_grid", [&](const json& v, const std::string& f) { s.alpha_grid = numbers(v, f); }},
      {"detection_snr_offsets_db", [&](const json& v, const std::string& f) {
         if (!v.is_null()) s.detection_snr_offsets_db = numbers(v, f);
       }},
      {"heterogeneous_fusion", [&](const json& v, const std::string& f) {
         if (!v.is_boolean()) throw ValidationError(f, "expected true or false");
         s.heterogeneous_fusion = v.get<bool>();
       }},
      {"trials", [&](const json& v, const std::string& f) {
         const long long n = integer(v, f);
         if (n < 1) throw ValidationError(f, "must be >= 1");
         s.trials = static_cast<std::size_t>(n);
         out.trials = s.trials;
       }},
      {"seed", [&](const json& v, const std::string& f) {
         if (v.is_number_unsigned()) {
           out.seed = v.get<std::uint64_t>();
         } else {
           const long long n = integer(v, f);
           if (n < 0) throw ValidationError(f, "must be a non-negative integer");
           out.seed = static_cast<std::uint64_t>(n);
         }
       }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ValidationError(key, "unknown key");
    it->second(value, key);
  }
  if (s.anchors.empty()) throw ValidationError("anchors", "need ≥1 anchor");
  try {
    s.validate();
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon == std::string::npos) throw ValidationError("scenario", msg);
    throw ValidationError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  return out;
}

ParsedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string canonical_config(const Scenario& s) {
  json j;  // std::map backed, so keys come out sorted
  j["anchors"] = points_json(s.anchors);
  j["nodes"] = points_json(s.nodes);
  j["c"] = s.c;
  j["m"] = s.m;
  j["dimension"] = s.dimension;
  j["sigma_scale"] = s.sigma_scale ? json(*s.sigma_scale) : json(nullptr);
  j["snr_db_grid"] = s.snr_db_grid;
  j["m_grid"] = s.m_grid;
  json est = json::array();
  for (auto r : s.estimators) est.push_back(regime_name(r));
  j["estimators"] = est;
  j["grid_points_per_axis"] = s.grid_points_per_axis;
  json det = json::array();
  for (auto r : s.detectors) det.push_back(regime_name(r));
  j["detectors"] = det;
  j["detection_snr_db"] = s.detection_snr_db;
  j["detection_snr_grid"] = s.detection_snr_grid;
  j["samples"] = s.samples;
  j["k_values"] = s.k_values;
  j["k"] = s.k;
  j["central_k"] = s.central_k ? json(*s.central_k) : json(nullptr);
  j["pfa_total"] = s.pfa_total;
  j["pd_level"] = s.pd_level;
  j["pfa_grid"] = s.pfa_grid;
  j["alpha_grid"] = s.alpha_grid;
  j["detection_snr_offsets_db"] =
      s.detection_snr_offsets_db ? json(*s.detection_snr_offsets_db) : json(nullptr);
  j["heterogeneous_fusion"] = s.heterogeneous_fusion;
  j["trials"] = s.trials;
  return j.dump();
}

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list{
      {Experiment::CrlbSweep, "crlb-sweep", "Figs. 4-5", "CRLB vs SNR: AWGN, Nakagami, no-CSI and their ratios"},
      {Experiment::KRatio, "k-ratio", "Fig. 6", "fading loss factor k against Nakagami m"},
      {Experiment::MleCompare, "mle-compare", "Fig. 7", "MSE of the fading ML and AWGN LS estimators under fading"},
      {Experiment::Roc, "roc", "Figs. 8-11", "fused ROC per detector regime and K"},
      {Experiment::PdVsSnr, "pd-vs-snr", "Fig. 12", "fused Pd against SNR at fixed fused Pfa"},
      {Experiment::KSweep, "k-sweep", "Figs. 9-11", "best K per fused Pfa target"},
      {Experiment::ThresholdOpt, "threshold-opt", "Fig. 13", "channel-dependent against constant threshold"},
      {Experiment::CentralVsDist, "central-vs-dist", "Figs. 14-15", "centralized combiner against K-out-of-M fusion"},
  };
  return list;
}

std::optional<Experiment> experiment_from_name(std::string_view name) {
  for (const auto& e : experiments()) {
    if (name == e.name) return e.id;
  }
  return std::nullopt;
}

const ExperimentInfo& info(Experiment e) {
  for (const auto& x : experiments()) {
    if (x.id == e) return x;
  }
  throw std::logic_error("unknown experiment");
}

ExperimentResult run(Experiment e, const Scenario& scenario, std::uint64_t seed, std::size_t trials) {
  const std::size_t n = trials > 0 ? trials : scenario.trials;
  ExperimentResult r;
  switch (e) {
    case Experiment::CrlbSweep: r = run_crlb_sweep(scenario); break;
    case Experiment::KRatio: r = run_k_ratio_curve(scenario.m_grid); break;
    case Experiment::MleCompare: r = run_mle_comparison(scenario, n, seed); break;
    case Experiment::Roc: r = run_roc(scenario, scenario.detectors, scenario.k_values, n, seed); break;
    case Experiment::PdVsSnr: r = run_pd_vs_snr(scenario, scenario.pfa_total, scenario.k, n, seed); break;
    case Experiment::KSweep: r = run_k_sweep(scenario); break;
    case Experiment::ThresholdOpt: r = run_threshold_optimality(scenario, n, seed); break;
    case Experiment::CentralVsDist:
      r = run_centralized_vs_distributed(
          scenario, scenario.central_k.value_or(static_cast<int>(scenario.anchors.size())), n, seed);
      break;
  }
  r.seed = seed;
  r.config_hash = git_blob_sha1(canonical_config(scenario));
  return r;
}

}  // namespace locfade::cli

#include "glmb/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace glmb {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string format_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

struct Range {
  double lo, hi;
};

Range sweep_range(SweepParameter p) {
  switch (p) {
    case SweepParameter::Iterations: return {1000.0, 10000.0};
    case SweepParameter::ExpectedTrajectories: return {10.0, 100.0};
    case SweepParameter::DetectionProb: return {0.78, 0.96};
    case SweepParameter::ClutterRate: return {50.0, 140.0};
    case SweepParameter::Alpha:
    case SweepParameter::Beta: return {0.1, 0.9};
    case SweepParameter::None: break;
  }
  return {0.0, 0.0};
}

bool parse_sweep_parameter(const std::string& s, SweepParameter& out) {
  if (s.empty() || s == "none") out = SweepParameter::None;
  else if (s == "iterations") out = SweepParameter::Iterations;
  else if (s == "expected_trajectories") out = SweepParameter::ExpectedTrajectories;
  else if (s == "detection_prob") out = SweepParameter::DetectionProb;
  else if (s == "clutter_rate") out = SweepParameter::ClutterRate;
  else if (s == "alpha") out = SweepParameter::Alpha;
  else if (s == "beta") out = SweepParameter::Beta;
  else return false;
  return true;
}

}  // namespace

const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::None: return "none";
    case SweepParameter::Iterations: return "iterations";
    case SweepParameter::ExpectedTrajectories: return "expected_trajectories";
    case SweepParameter::DetectionProb: return "detection_prob";
    case SweepParameter::ClutterRate: return "clutter_rate";
    case SweepParameter::Alpha: return "alpha";
    case SweepParameter::Beta: return "beta";
  }
  return "none";
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<std::string> bad;
  std::string line;

  const auto as_double = [&](const std::string& key, const std::string& v, double& out) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      out = x;
    } catch (const std::exception&) {
      bad.push_back(key);
    }
  };
  const auto as_int = [&](const std::string& key, const std::string& v, auto& out) {
    try {
      std::size_t used = 0;
      const long long x = std::stoll(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      out = static_cast<std::remove_reference_t<decltype(out)>>(x);
    } catch (const std::exception&) {
      bad.push_back(key);
    }
  };
  const auto as_bool = [&](const std::string& key, const std::string& v, bool& out) {
    if (v == "true" || v == "1") out = true;
    else if (v == "false" || v == "0") out = false;
    else bad.push_back(key);
  };

  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back(line);
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "seed") as_int(key, value, cfg.seed);
    else if (key == "trials") as_int(key, value, cfg.trials);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "experiment.variants") {
      cfg.variants.clear();
      for (const auto& name : split(value, ',')) {
        if (const auto v = parse_variant(name)) cfg.variants.push_back(*v);
        else bad.push_back(key);
      }
    } else if (key == "experiment.sweep_parameter") {
      if (!parse_sweep_parameter(value, cfg.sweep_parameter)) bad.push_back(key);
    } else if (key == "experiment.sweep_values") {
      cfg.sweep_values.clear();
      for (const auto& item : split(value, ',')) {
        double x = 0.0;
        as_double(key, item, x);
        cfg.sweep_values.push_back(x);
      }
    } else if (key == "experiment.allow_out_of_range") as_bool(key, value, cfg.allow_out_of_range);
    else if (key == "experiment.ospa_order") as_double(key, value, cfg.ospa_order);
    else if (key == "experiment.ospa_cutoff") as_double(key, value, cfg.ospa_cutoff);
    else if (key == "experiment.threads") as_int(key, value, cfg.threads);
    else if (key == "scenario.duration") as_int(key, value, cfg.scenario.duration);
    else if (key == "scenario.expected_trajectories")
      as_double(key, value, cfg.scenario.expected_trajectories);
    else if (key == "scenario.num_birth_components")
      as_int(key, value, cfg.scenario.num_birth_components);
    else if (key == "scenario.birth_stddev") as_double(key, value, cfg.scenario.birth_stddev);
    else if (key == "scenario.region_width") as_double(key, value, cfg.scenario.region.width);
    else if (key == "scenario.region_height") as_double(key, value, cfg.scenario.region.height);
    else if (key == "scenario.dt") as_double(key, value, cfg.scenario.dt);
    else if (key == "scenario.accel_stddev") as_double(key, value, cfg.scenario.accel_stddev);
    else if (key == "scenario.survival_prob") as_double(key, value, cfg.scenario.survival_prob);
    else if (key == "scenario.meas_stddev") as_double(key, value, cfg.scenario.meas_stddev);
    else if (key == "scenario.detection_prob") as_double(key, value, cfg.scenario.detection_prob);
    else if (key == "scenario.clutter_rate") as_double(key, value, cfg.scenario.clutter_rate);
    else if (key == "truncation.max_hypotheses")
      as_int(key, value, cfg.truncation.max_hypotheses);
    else if (key == "truncation.min_weight_ratio")
      as_double(key, value, cfg.truncation.min_weight_ratio);
    else if (key == "truncation.exhaustive") as_bool(key, value, cfg.truncation.exhaustive);
    else if (key == "truncation.proportional_allocation")
      as_bool(key, value, cfg.truncation.proportional_allocation);
    else if (key == "truncation.num_threads") as_int(key, value, cfg.truncation.num_threads);
    else if (key == "sampler.variant") {
      if (const auto v = parse_variant(value)) cfg.truncation.sampler.variant = *v;
      else bad.push_back(key);
    } else if (key == "sampler.iterations") as_int(key, value, cfg.truncation.sampler.iterations);
    else if (key == "sampler.alpha") as_double(key, value, cfg.truncation.sampler.alpha);
    else if (key == "sampler.beta") as_double(key, value, cfg.truncation.sampler.beta);
    else bad.push_back(key);
  }

  if (!bad.empty()) {
    std::string msg = "config keys rejected:";
    for (const auto& k : bad) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(f);
}

std::string default_config_text() {
  const ExperimentConfig d;
  std::ostringstream out;
  out << "seed = " << d.seed << '\n';
  out << "trials = " << d.trials << '\n';
  out << "output_dir = " << d.output_dir << '\n';
  out << "experiment.variants = ";
  for (std::size_t i = 0; i < d.variants.size(); ++i)
    out << (i == 0 ? "" : ",") << variant_name(d.variants[i]);
  out << '\n';
  out << "experiment.sweep_parameter = " << sweep_parameter_name(d.sweep_parameter) << '\n';
  out << "experiment.sweep_values =\n";
  out << "experiment.allow_out_of_range = " << (d.allow_out_of_range ? "true" : "false") << '\n';
  out << "experiment.ospa_order = " << format_short(d.ospa_order) << '\n';
  out << "experiment.ospa_cutoff = " << format_short(d.ospa_cutoff) << '\n';
  out << "experiment.threads = " << d.threads << '\n';
  out << "scenario.duration = " << d.scenario.duration << '\n';
  out << "scenario.expected_trajectories = " << format_short(d.scenario.expected_trajectories)
      << '\n';
  out << "scenario.num_birth_components = " << d.scenario.num_birth_components << '\n';
  out << "scenario.birth_stddev = " << format_short(d.scenario.birth_stddev) << '\n';
  out << "scenario.region_width = " << format_short(d.scenario.region.width) << '\n';
  out << "scenario.region_height = " << format_short(d.scenario.region.height) << '\n';
  out << "scenario.dt = " << format_short(d.scenario.dt) << '\n';
  out << "scenario.accel_stddev = " << format_short(d.scenario.accel_stddev) << '\n';
  out << "scenario.survival_prob = " << format_short(d.scenario.survival_prob) << '\n';
  out << "scenario.meas_stddev = " << format_short(d.scenario.meas_stddev) << '\n';
  out << "scenario.detection_prob = " << format_short(d.scenario.detection_prob) << '\n';
  out << "scenario.clutter_rate = " << format_short(d.scenario.clutter_rate) << '\n';
  out << "truncation.max_hypotheses = " << d.truncation.max_hypotheses << '\n';
  out << "truncation.min_weight_ratio = " << format_short(d.truncation.min_weight_ratio) << '\n';
  out << "truncation.exhaustive = " << (d.truncation.exhaustive ? "true" : "false") << '\n';
  out << "truncation.proportional_allocation = "
      << (d.truncation.proportional_allocation ? "true" : "false") << '\n';
  out << "truncation.num_threads = " << d.truncation.num_threads << '\n';
  out << "sampler.variant = " << variant_name(d.truncation.sampler.variant) << '\n';
  out << "sampler.iterations = " << d.truncation.sampler.iterations << '\n';
  out << "sampler.alpha = " << format_short(d.truncation.sampler.alpha) << '\n';
  out << "sampler.beta = " << format_short(d.truncation.sampler.beta) << '\n';
  return out.str();
}

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  const auto check = [&](bool ok, const char* key) {
    if (!ok) bad.push_back(key);
  };

  check(cfg.trials >= 1, "trials");
  check(cfg.threads >= 1, "experiment.threads");
  check(cfg.ospa_order >= 1.0, "experiment.ospa_order");
  check(cfg.ospa_cutoff > 0.0, "experiment.ospa_cutoff");
  check(!cfg.variants.empty(), "experiment.variants");

  if (cfg.sweep_parameter == SweepParameter::None) {
    check(cfg.sweep_values.empty(), "experiment.sweep_values");
  } else {
    check(!cfg.sweep_values.empty(), "experiment.sweep_values");
    if (!cfg.allow_out_of_range) {
      const Range r = sweep_range(cfg.sweep_parameter);
      for (const double v : cfg.sweep_values) {
        if (v < r.lo || v > r.hi) {
          bad.push_back("experiment.sweep_values");
          break;
        }
      }
    }
  }

  const auto& s = cfg.scenario;
  check(s.duration >= 1, "scenario.duration");
  check(s.expected_trajectories >= 0.0, "scenario.expected_trajectories");
  check(s.num_birth_components >= 1, "scenario.num_birth_components");
  check(s.birth_stddev > 0.0, "scenario.birth_stddev");
  check(s.region.width > 0.0, "scenario.region_width");
  check(s.region.height > 0.0, "scenario.region_height");
  check(s.dt > 0.0, "scenario.dt");
  check(s.accel_stddev >= 0.0, "scenario.accel_stddev");
  check(s.survival_prob > 0.0 && s.survival_prob <= 1.0, "scenario.survival_prob");
  check(s.meas_stddev > 0.0, "scenario.meas_stddev");
  check(s.detection_prob >= 0.0 && s.detection_prob <= 1.0, "scenario.detection_prob");
  check(s.clutter_rate > 0.0, "scenario.clutter_rate");
  if (s.duration >= 1 && s.num_birth_components >= 1)
    check(s.birth_probability() < 1.0, "scenario.expected_trajectories");

  const auto& t = cfg.truncation;
  check(t.max_hypotheses >= 1, "truncation.max_hypotheses");
  check(t.min_weight_ratio >= 0.0 && t.min_weight_ratio <= 1.0, "truncation.min_weight_ratio");
  check(t.num_threads >= 1, "truncation.num_threads");
  check(t.sampler.iterations >= 1, "sampler.iterations");
  check(t.sampler.alpha > 0.0 && t.sampler.alpha <= 1.0, "sampler.alpha");
  check(t.sampler.beta > 0.0 && t.sampler.beta <= 1.0, "sampler.beta");

  if (!bad.empty()) {
    std::string msg = "invalid config values for:";
    for (const auto& k : bad) msg += " " + k;
    throw std::invalid_argument(msg);
  }
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig out = cfg;
  switch (cfg.sweep_parameter) {
    case SweepParameter::None: break;
    case SweepParameter::Iterations:
      out.truncation.sampler.iterations = std::llround(value);
      break;
    case SweepParameter::ExpectedTrajectories:
      out.scenario.expected_trajectories = value;
      break;
    case SweepParameter::DetectionProb:
      out.scenario.detection_prob = value;
      break;
    case SweepParameter::ClutterRate:
      out.scenario.clutter_rate = value;
      break;
    case SweepParameter::Alpha:
      out.truncation.sampler.alpha = value;
      break;
    case SweepParameter::Beta:
      out.truncation.sampler.beta = value;
      break;
  }
  return out;
}

}  // namespace glmb

#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "glmb/config.hpp"

using namespace glmb;

namespace {

ExperimentConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string thrown_message(const std::string& text) {
  try {
    parse_text(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("default text parses back to the default config") {
    const ExperimentConfig d;
    const ExperimentConfig parsed = parse_text(default_config_text());

    CHECK(parsed.seed == d.seed);
    CHECK(parsed.trials == d.trials);
    CHECK(parsed.output_dir == d.output_dir);
    CHECK(parsed.variants == d.variants);
    CHECK(parsed.sweep_parameter == d.sweep_parameter);
    CHECK(parsed.sweep_values == d.sweep_values);
    CHECK(parsed.allow_out_of_range == d.allow_out_of_range);
    CHECK(parsed.ospa_order == d.ospa_order);
    CHECK(parsed.ospa_cutoff == d.ospa_cutoff);
    CHECK(parsed.threads == d.threads);
    CHECK(parsed.scenario.duration == d.scenario.duration);
    CHECK(parsed.scenario.expected_trajectories == d.scenario.expected_trajectories);
    CHECK(parsed.scenario.num_birth_components == d.scenario.num_birth_components);
    CHECK(parsed.scenario.birth_stddev == d.scenario.birth_stddev);
    CHECK(parsed.scenario.region.width == d.scenario.region.width);
    CHECK(parsed.scenario.region.height == d.scenario.region.height);
    CHECK(parsed.scenario.dt == d.scenario.dt);
    CHECK(parsed.scenario.accel_stddev == d.scenario.accel_stddev);
    CHECK(parsed.scenario.survival_prob == d.scenario.survival_prob);
    CHECK(parsed.scenario.meas_stddev == d.scenario.meas_stddev);
    CHECK(parsed.scenario.detection_prob == d.scenario.detection_prob);
    CHECK(parsed.scenario.clutter_rate == d.scenario.clutter_rate);
    CHECK(parsed.truncation.max_hypotheses == d.truncation.max_hypotheses);
    CHECK(parsed.truncation.min_weight_ratio == d.truncation.min_weight_ratio);
    CHECK(parsed.truncation.exhaustive == d.truncation.exhaustive);
    CHECK(parsed.truncation.proportional_allocation == d.truncation.proportional_allocation);
    CHECK(parsed.truncation.num_threads == d.truncation.num_threads);
    CHECK(parsed.truncation.sampler.variant == d.truncation.sampler.variant);
    CHECK(parsed.truncation.sampler.iterations == d.truncation.sampler.iterations);
    CHECK(parsed.truncation.sampler.alpha == d.truncation.sampler.alpha);
    CHECK(parsed.truncation.sampler.beta == d.truncation.sampler.beta);

    validate(parsed);  // defaults must be valid
  }

  TEST_CASE("overrides, comments and blank lines") {
    const ExperimentConfig cfg = parse_text(
        "# full line comment\n"
        "\n"
        "seed = 42   # trailing comment\n"
        "trials=3\n"
        "output_dir = /tmp/run one\n"
        "experiment.variants = sgs+, rgs\n"
        "experiment.sweep_parameter = clutter_rate\n"
        "experiment.sweep_values = 50, 70, 90\n"
        "experiment.threads = 4\n"
        "scenario.duration = 12\n"
        "scenario.detection_prob = 0.9\n"
        "truncation.exhaustive = true\n"
        "sampler.variant = dgs+bwd\n"
        "sampler.alpha = 0.25\n");
    CHECK(cfg.seed == 42);
    CHECK(cfg.trials == 3);
    CHECK(cfg.output_dir == "/tmp/run one");
    REQUIRE(cfg.variants.size() == 2);
    CHECK(cfg.variants[0] == SamplerVariant::SgsPlus);
    CHECK(cfg.variants[1] == SamplerVariant::RgsGeneric);
    CHECK(cfg.sweep_parameter == SweepParameter::ClutterRate);
    CHECK(cfg.sweep_values == std::vector<double>{50.0, 70.0, 90.0});
    CHECK(cfg.threads == 4);
    CHECK(cfg.scenario.duration == 12);
    CHECK(cfg.scenario.detection_prob == 0.9);
    CHECK(cfg.truncation.exhaustive);
    CHECK(cfg.truncation.sampler.variant == SamplerVariant::DgsPlusBackward);
    CHECK(cfg.truncation.sampler.alpha == 0.25);
    validate(cfg);
  }

  TEST_CASE("unknown and malformed keys are all reported at once") {
    const std::string msg = thrown_message(
        "seed = abc\n"
        "no_such_key = 1\n"
        "trials = 2.5\n"
        "truncation.exhaustive = maybe\n");
    CHECK(msg.rfind("config keys rejected:", 0) == 0);
    CHECK(msg.find("seed") != std::string::npos);
    CHECK(msg.find("no_such_key") != std::string::npos);
    CHECK(msg.find("trials") != std::string::npos);
    CHECK(msg.find("truncation.exhaustive") != std::string::npos);

    CHECK_THROWS_AS(parse_text("just a dangling line\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("sampler.variant = nope\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("experiment.sweep_parameter = nope\n"), std::invalid_argument);
  }

  TEST_CASE("validate names every offending value") {
    ExperimentConfig cfg;
    cfg.trials = 0;
    cfg.ospa_cutoff = -1.0;
    cfg.scenario.dt = 0.0;
    cfg.truncation.sampler.alpha = 1.5;
    try {
      validate(cfg);
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      CHECK(msg.rfind("invalid config values for:", 0) == 0);
      CHECK(msg.find("trials") != std::string::npos);
      CHECK(msg.find("experiment.ospa_cutoff") != std::string::npos);
      CHECK(msg.find("scenario.dt") != std::string::npos);
      CHECK(msg.find("sampler.alpha") != std::string::npos);
    }
  }

  TEST_CASE("birth probability must stay below one") {
    ExperimentConfig cfg;
    cfg.scenario.duration = 1;
    cfg.scenario.num_birth_components = 10;
    cfg.scenario.expected_trajectories = 10.0;  // probability exactly 1
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.scenario.expected_trajectories = 9.0;
    validate(cfg);
  }

  TEST_CASE("sweep values are range checked unless explicitly allowed") {
    ExperimentConfig cfg;
    cfg.sweep_parameter = SweepParameter::Iterations;
    cfg.sweep_values = {1000.0, 10000.0};
    validate(cfg);

    cfg.sweep_values = {500.0};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.allow_out_of_range = true;
    validate(cfg);

    cfg.allow_out_of_range = false;
    cfg.sweep_parameter = SweepParameter::DetectionProb;
    cfg.sweep_values = {0.78, 0.96};
    validate(cfg);
    cfg.sweep_values = {0.97};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.sweep_parameter = SweepParameter::ExpectedTrajectories;
    cfg.sweep_values = {10.0, 100.0};
    validate(cfg);
    cfg.sweep_values = {101.0};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.sweep_parameter = SweepParameter::ClutterRate;
    cfg.sweep_values = {50.0, 140.0};
    validate(cfg);
    cfg.sweep_values = {141.0};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.sweep_parameter = SweepParameter::Alpha;
    cfg.sweep_values = {0.1, 0.9};
    validate(cfg);
    cfg.sweep_values = {0.05};
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  }

  TEST_CASE("sweep parameter and values must agree") {
    ExperimentConfig cfg;
    cfg.sweep_values = {1500.0};  // values without a parameter
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    cfg.sweep_values.clear();
    cfg.sweep_parameter = SweepParameter::Iterations;  // parameter without values
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  }

  TEST_CASE("apply_sweep_value targets the right field") {
    ExperimentConfig cfg;

    cfg.sweep_parameter = SweepParameter::Iterations;
    CHECK(apply_sweep_value(cfg, 2000.0).truncation.sampler.iterations == 2000);
    cfg.sweep_parameter = SweepParameter::ExpectedTrajectories;
    CHECK(apply_sweep_value(cfg, 25.0).scenario.expected_trajectories == 25.0);
    cfg.sweep_parameter = SweepParameter::DetectionProb;
    CHECK(apply_sweep_value(cfg, 0.8).scenario.detection_prob == 0.8);
    cfg.sweep_parameter = SweepParameter::ClutterRate;
    CHECK(apply_sweep_value(cfg, 60.0).scenario.clutter_rate == 60.0);
    cfg.sweep_parameter = SweepParameter::Alpha;
    CHECK(apply_sweep_value(cfg, 0.3).truncation.sampler.alpha == 0.3);
    cfg.sweep_parameter = SweepParameter::Beta;
    CHECK(apply_sweep_value(cfg, 0.7).truncation.sampler.beta == 0.7);

    cfg.sweep_parameter = SweepParameter::None;
    const ExperimentConfig untouched = apply_sweep_value(cfg, 123.0);
    CHECK(untouched.truncation.sampler.iterations == cfg.truncation.sampler.iterations);
    CHECK(untouched.scenario.clutter_rate == cfg.scenario.clutter_rate);
  }

  TEST_CASE("sweep parameter names round trip") {
    for (const auto p : {SweepParameter::None, SweepParameter::Iterations,
                         SweepParameter::ExpectedTrajectories, SweepParameter::DetectionProb,
                         SweepParameter::ClutterRate, SweepParameter::Alpha,
                         SweepParameter::Beta}) {
      std::istringstream in(std::string("experiment.sweep_parameter = ") +
                            sweep_parameter_name(p) + "\n");
      CHECK(parse_config(in).sweep_parameter == p);
    }
  }

  TEST_CASE("missing config file reports its path") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), std::runtime_error);
  }
}

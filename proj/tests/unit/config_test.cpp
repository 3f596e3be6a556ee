#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "finfold/config.hpp"
#include "finfold/error.hpp"

namespace finfold {
namespace {

namespace fs = std::filesystem;

Error parse_failure(std::string_view text) {
  try {
    parse_experiment_config(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "config accepted: " << text;
  return Error(ErrorKind::kPrecondition, "");
}

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("finfold_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Config, EmptyObjectTakesDefaults) {
  const ExperimentConfig c = parse_experiment_config("{}");
  EXPECT_EQ(c.simulation.dt, 0.002);
  EXPECT_EQ(c.markers, 10);
  EXPECT_EQ(c.model, SwimmerModel{});
  EXPECT_EQ(c.seed, 0u);
}

TEST(Config, NegativeMassNamesField) {
  const Error e = parse_failure(R"({"robot": {"mass": -2.3}})");
  EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  EXPECT_NE(std::string(e.what()).find("robot.mass"), std::string::npos) << e.what();
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_NE(std::string(parse_failure(R"({"robto": {}})").what()).find("robto"), std::string::npos);
  const Error e = parse_failure(R"({"simulation": {"dt": 0.001, "stepsize": 2}})");
  EXPECT_EQ(e.kind(), ErrorKind::kValidation);
  EXPECT_NE(std::string(e.what()).find("simulation.stepsize"), std::string::npos);
}

TEST(Config, SyntaxErrorReportsLineAndColumn) {
  const Error e = parse_failure("{\n  \"seed\": 3,\n  \"robot\": {\"mass\": }\n}");
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
}

TEST(Config, TypeErrorsNameField) {
  const Error e = parse_failure(R"({"gaits": [{"frequency": "fast"}]})");
  EXPECT_NE(std::string(e.what()).find("gaits[0].frequency"), std::string::npos) << e.what();
  EXPECT_NE(std::string(parse_failure(R"({"simulation": {"dt": 0.05}})").what()).find("simulation"),
            std::string::npos);
  EXPECT_NE(std::string(parse_failure(R"({"sweep": {"f_min": 3, "f_max": 1}})").what()).find("sweep.f_max"),
            std::string::npos);
}

TEST(Config, RoundTripIsLossless) {
  const char* text = R"({
    "seed": 17,
    "robot": {"mass": 2.5, "drag_coefficient": 0.04},
    "midline": {"a2": 0.09, "wavelength": 0.9},
    "power": {"p1": 0.07},
    "simulation": {"dt": 0.004, "markers": 12, "speed_marker_fraction": 0.4},
    "gaits": [{"frequency": 2.6, "amplitude_deg": 20}, {"frequency": 1.5, "turn_bias_deg": -30}],
    "schedules": {"policy": [[0, "erected"], [6.5, "folded"]]},
    "sweep": {"f_min": 1.5, "f_max": 2.5, "f_step": 0.5, "fin_states": ["folded"]},
    "output_dir": "results"
  })";
  const ExperimentConfig a = parse_experiment_config(text);
  const ExperimentConfig b = parse_experiment_config(serialize_experiment_config(a));
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_experiment_config(a), serialize_experiment_config(b));
  EXPECT_EQ(b.schedules.at("policy").at(6.4), FinState::kErected);
  EXPECT_EQ(b.schedules.at("policy").at(6.5), FinState::kFolded);
  EXPECT_EQ(b.gaits[1].turn_bias_deg, -30.0);
}

TEST(Config, LoadFromFileAndMissingReferences) {
  const fs::path dir = temp_dir("config");
  {
    std::ofstream(dir / "cfg.json") << R"({"seed": 4, "calibration_file": "cal.json"})";
  }
  try {
    load_experiment_config(dir / "cfg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_NE(std::string(e.what()).find("calibration_file"), std::string::npos);
  }
  {
    std::ofstream(dir / "cal.json") << R"({"parameters": {"drag_coefficient": 0.07}})";
  }
  const ExperimentConfig c = load_experiment_config(dir / "cfg.json");
  EXPECT_EQ(effective_model(c).robot.drag_coefficient, 0.07);
  EXPECT_THROW(load_experiment_config(dir / "missing.json"), Error);
}

TEST(Config, CalibrationFileRoundTrip) {
  const fs::path dir = temp_dir("calfile");
  CalibrationResult result;
  result.parameters = FreeParameters::from_model(SwimmerModel{});
  result.parameters.set_value("envelope_a2", 0.0812345678901234);
  result.objective = 1e-7;
  result.seed = 9;
  write_calibration_file(dir / "cal.json", result);
  const auto values = read_calibration_file(dir / "cal.json");
  EXPECT_EQ(values.at("envelope_a2"), 0.0812345678901234);
  const SwimmerModel m = apply_calibration(SwimmerModel{}, values);
  EXPECT_EQ(m, result.parameters.apply(SwimmerModel{}));

  std::ofstream(dir / "bad.json") << R"({"parameters": {"warp_factor": 9}})";
  EXPECT_THROW(read_calibration_file(dir / "bad.json"), Error);
}

TEST(Config, SeedPrecedence) {
  ExperimentConfig c;
  c.seed = 5;
  unsetenv("FINFOLD_SEED");
  EXPECT_EQ(resolve_seed(std::nullopt, c), 5u);
  setenv("FINFOLD_SEED", "11", 1);
  EXPECT_EQ(resolve_seed(std::nullopt, c), 11u);
  EXPECT_EQ(resolve_seed(3u, c), 3u);
  setenv("FINFOLD_SEED", "eleven", 1);
  EXPECT_THROW(resolve_seed(std::nullopt, c), Error);
  unsetenv("FINFOLD_SEED");
}

}  // namespace
}  // namespace finfold

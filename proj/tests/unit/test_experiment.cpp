#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oscfie/experiment.hpp"
#include "oscfie/quadrature.hpp"

using namespace oscfie;
namespace fs = std::filesystem;

TEST_CASE("training grid") {
  const auto params = SystemParams::make(0.2, 100.0);
  const auto y = benchmark_solution(100.0);
  const auto data = gen_training_grid(params, y, 0.2);
  CHECK(data.x.size() == 601);
  CHECK(data.x.front() == -1.0);
  CHECK(data.x.back() == 1.0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> idx(0, params.N - 1);
  const auto Y = as_function(y);
  for (int trial = 0; trial < 20; ++trial) {
    const long j = idx(rng);
    const double s = data.x[j];
    const cplx expected = Y(s) - 0.2 * reference_K(Y, 100.0, s, 1e-13);
    CHECK(std::abs(data.f[j] - expected) <= 1e-10);
  }
}

TEST_CASE("validation grid") {
  const auto y = benchmark_solution(100.0);
  for (const std::string mode : {"midpoint", "random:5"}) {
    const auto v = gen_validation_grid(y, 0.2, 100.0, mode);
    CHECK(v.points.size() == 512);
    CHECK(v.f.size() == 512);
    for (int q : {1, 2}) {
      const auto params = SystemParams::make(0.2, 100.0, 6.0, 1.0, q);
      for (double x : v.points) {
        const double pos = (x + 1.0) * (params.N - 1) / 2.0;
        CHECK(std::abs(pos - std::round(pos)) > 1e-9);
      }
    }
  }
  const auto mid = gen_validation_grid(y, 0.2, 100.0);
  CHECK(mid.points.front() == doctest::Approx(-1.0 + 1.0 / 512));
  CHECK(gen_validation_grid(y, 0.2, 100.0, "random:5").points == gen_validation_grid(y, 0.2, 100.0, "random:5").points);
  CHECK_THROWS_AS(gen_validation_grid(y, 0.2, 100.0, "sobol"), std::invalid_argument);
  CHECK_THROWS_AS(gen_validation_grid(y, 0.2, 100.0, "random:x"), std::invalid_argument);
}

TEST_CASE("parsing") {
  CHECK(parse_method("cm2") == Method::cm2);
  CHECK(method_name(Method::mgdl) == "mgdl");
  CHECK_THROWS_AS(parse_method("cm3"), std::invalid_argument);
  CHECK(parse_widths("64,64,32") == std::vector<int>{64, 64, 32});
  CHECK_THROWS_AS(parse_widths("64,,32"), std::invalid_argument);
  CHECK_THROWS_AS(parse_widths("0"), std::invalid_argument);
  TrainConfig base;
  base.batch_size = 17;
  const auto spec = parse_grade_spec("64,64:200;32,32:400", base);
  REQUIRE(spec.size() == 2);
  CHECK(spec[1].hidden == std::vector<int>{32, 32});
  CHECK(spec[1].train.epochs == 400);
  CHECK(spec[0].train.batch_size == 17);
  CHECK(format_grade_spec(spec) == "64,64:200;32,32:400");
  CHECK(format_grade_spec(parse_grade_spec("64,64:200/32,32:400", base)) == "64,64:200;32,32:400");
  CHECK_THROWS_AS(parse_grade_spec("64,64", base), std::invalid_argument);
  CHECK_THROWS_AS(parse_grade_spec("", base), std::invalid_argument);
}

TEST_CASE("presets and config validation") {
  const auto desk = preset("desk", Method::mgdl);
  CHECK(desk.kappa == 50.0);
  CHECK(desk.grades.size() == 3);
  CHECK_NOTHROW(desk.validate());
  CHECK(preset("full", Method::sgl).hidden.size() == 8);
  CHECK_THROWS_AS(preset("huge", Method::sgl), std::invalid_argument);
  ExperimentConfig c;
  c.kappa = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ExperimentConfig{};
  c.method = Method::mgdl;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("metrics csv is deterministic") {
  MetricsRecord r{"sgl", 50.0, 301, 0.0123, 1e-4, 2e-4, 1.5, 3};
  std::ostringstream a, b;
  write_metrics_header(a);
  write_metrics_row(a, r);
  write_metrics_header(b);
  write_metrics_row(b, r);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("method,kappa,N,relative_L2,train_loss,val_loss,wall_seconds,seed\nsgl,50,301,", 0) == 0);
}

TEST_CASE("tiny runs write artifacts") {
  const fs::path root = fs::temp_directory_path() / "oscfie_test_experiment";
  fs::remove_all(root);

  ExperimentConfig cm;
  cm.method = Method::cm1;
  cm.kappa = 10.0;
  cm.output_dir = (root / "cm1").string();
  const auto r1 = run_experiment(cm);
  CHECK(r1.ok);
  CHECK(r1.metrics.N == 61);
  CHECK(r1.metrics.relative_L2 < 0.05);
  REQUIRE(r1.decomposition.has_value());
  CHECK(r1.decomposition->holds);
  for (const char* f : {"metrics.csv", "manifest.json", "traces/exact.csv", "traces/solution.csv", "traces/error.csv",
                        "traces/fft_rel_error.csv"})
    CHECK(fs::exists(root / "cm1" / f));

  ExperimentConfig mg = preset("desk20", Method::mgdl);
  mg.kappa = 5.0;
  mg.trace_points = 11;
  for (auto& g : mg.grades) g.train.epochs = 5;
  mg.grades[0].hidden = {8};
  mg.grades[1].hidden = {4};
  mg.grades[2].hidden = {4};
  mg.output_dir = (root / "mgdl").string();
  const auto r2 = run_experiment(mg);
  CHECK(r2.ok);
  CHECK(r2.grades.size() == 3);
  CHECK(r2.histories.size() == 3);
  for (const char* f : {"stack.ckpt", "history.csv", "history_grade2.csv", "traces/grade3.csv",
                        "traces/fft_rel_error_grade1.csv"})
    CHECK(fs::exists(root / "mgdl" / f));
  std::ifstream trace(root / "mgdl" / "traces" / "solution.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "s,re,im");

  ExperimentConfig bad = cm;
  bad.method = Method::cm2;
  bad.kappa = 10.0;
  bad.gamma = 6.5;  // odd N - 1
  bad.output_dir.clear();
  const auto r3 = run_experiment(bad);
  CHECK_FALSE(r3.ok);
  fs::remove_all(root);
}

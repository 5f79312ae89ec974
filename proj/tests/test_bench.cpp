#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <vector>

#include "sdpd/errors.hpp"
#include "sdpd/metrics.hpp"
#include "sdpd/monte_carlo.hpp"
#include "sdpd/rng.hpp"

using namespace sdpd;

namespace {

const McMetricSummary& find_metric(const McSummary& s, const std::string& name) {
  for (const auto& m : s.metrics) {
    if (m.name == name) return m;
  }
  REQUIRE_MESSAGE(false, "metric not found: " << name);
  static McMetricSummary dummy;
  return dummy;
}

}  // namespace

TEST_CASE("seed derivation golden values") {
  // Frozen: changing the derivation silently invalidates every stored seed.
  CHECK(derive_seed(42, 0) == 2949826092126892291ull);
  CHECK(derive_seed(42, 1) == 5139283748462763858ull);
  CHECK(derive_seed(20240817, 5) == 12015237494939408422ull);
}

TEST_CASE("replication seeds are distinct and deterministic") {
  std::set<std::uint64_t> seen;
  for (int r = 0; r < 200; ++r) {
    seen.insert(mc_replication_seed(7, r));
  }
  CHECK(seen.size() == 200);
  CHECK(mc_replication_seed(7, 3) == mc_replication_seed(7, 3));
  CHECK(mc_replication_seed(7, 3) != mc_replication_seed(8, 3));
}

TEST_CASE("absolute and squared error metrics") {
  Eigen::VectorXd est(2), truth(2);
  est << 0.1, 0.3;
  truth << 0.0, 0.1;
  CHECK(ae(est, truth) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(ase(est, truth) == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(ae(truth, truth) == 0.0);
  CHECK(ase(truth, truth) == 0.0);
}

TEST_CASE("metrics skip flagged locations and refuse empty sets") {
  Eigen::VectorXd est(3), truth(3);
  est << std::nan(""), 0.2, std::nan("");
  truth << 0.5, 0.1, 0.9;
  CHECK(ae(est, truth) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(excluded_count(est) == 2);

  est.setConstant(std::nan(""));
  CHECK_THROWS_AS(ae(est, truth), EmptySet);
  CHECK_THROWS_AS(ase(est, truth), EmptySet);

  Eigen::VectorXd bad_truth = truth;
  bad_truth(1) = std::nan("");
  est << 0.1, 0.2, 0.3;
  CHECK_THROWS_AS(ae(est, bad_truth), DataError);
  CHECK_THROWS_AS(ae(est, Eigen::VectorXd::Zero(2)), DataError);
}

TEST_CASE("first-row transition error") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  a(0, 0) = 1.0;
  CHECK(ase_row1(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ase_row1(b, b) == 0.0);
  CHECK_THROWS_AS(ase_row1(a, Eigen::MatrixXd::Zero(3, 3)), DataError);
}

TEST_CASE("benchmark studies are reproducible and thread-count independent") {
  McConfig cfg;
  cfg.p = 6;
  cfg.T = 80;
  cfg.replications = 6;
  cfg.master_seed = 99;
  cfg.estimators = {EstimatorKind::sdpd_known_w, EstimatorKind::var_yule_walker};

  cfg.threads = 1;
  const auto serial = run_monte_carlo(cfg);
  cfg.threads = 3;
  const auto parallel = run_monte_carlo(cfg);

  REQUIRE(serial.raw.size() == 6);
  REQUIRE(parallel.raw.size() == 6);
  for (int r = 0; r < 6; ++r) {
    CHECK(serial.raw[r].seed == parallel.raw[r].seed);
    REQUIRE(serial.raw[r].values.size() == parallel.raw[r].values.size());
    for (const auto& [name, value] : serial.raw[r].values) {
      const double other = parallel.raw[r].values.at(name);
      // Bitwise equality: the same replication must not depend on scheduling.
      CHECK((value == other || (std::isnan(value) && std::isnan(other))));
    }
  }
}

TEST_CASE("summary statistics agree with the raw table") {
  McConfig cfg;
  cfg.p = 6;
  cfg.T = 120;
  cfg.replications = 8;
  cfg.master_seed = 5;
  cfg.estimators = {EstimatorKind::sdpd_known_w};
  const auto s = run_monte_carlo(cfg);

  CHECK(s.wall_seconds > 0.0);
  for (const std::string name :
       {"ae_lambda0", "ae_lambda1", "ase_lambda0", "ase_lambda1",
        "ase_row1_sdpd_known_w"}) {
    const auto& m = find_metric(s, name);
    std::vector<double> vals;
    for (const auto& rep : s.raw) {
      const double v = rep.values.at(name);
      if (std::isfinite(v)) vals.push_back(v);
    }
    REQUIRE(int(vals.size()) == m.n_ok);
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= double(vals.size() - 1);
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(m.sd == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    const double median = n % 2 == 1
                              ? vals[n / 2]
                              : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    CHECK(m.median == doctest::Approx(median).epsilon(1e-12));
  }
}

TEST_CASE("a single replication has zero dispersion") {
  McConfig cfg;
  cfg.p = 6;
  cfg.T = 60;
  cfg.replications = 1;
  cfg.master_seed = 3;
  const auto s = run_monte_carlo(cfg);
  const auto& m = find_metric(s, "ase_lambda1");
  CHECK(m.n_ok == 1);
  CHECK(m.sd == 0.0);
  CHECK(m.mean == m.median);
}

TEST_CASE("the VAR baseline fails cleanly when T <= p") {
  McConfig cfg;
  cfg.p = 8;
  cfg.T = 8;
  cfg.replications = 3;
  cfg.master_seed = 11;
  cfg.estimators = {EstimatorKind::var_yule_walker};
  const auto s = run_monte_carlo(cfg);
  const auto& m = find_metric(s, "ase_row1_var");
  CHECK(m.n_ok == 0);
  CHECK(m.n_fail == 3);
  CHECK(std::isnan(m.mean));
  for (const auto& rep : s.raw) {
    CHECK(std::isnan(rep.values.at("ase_row1_var")));
    CHECK(!rep.notes.empty());
  }
}

TEST_CASE("fixed coefficients are shared across replications") {
  McConfig cfg;
  cfg.p = 6;
  cfg.T = 50;
  cfg.replications = 3;
  cfg.master_seed = 21;
  cfg.fixed_lambda = true;

  std::vector<Eigen::VectorXd> draws;
  std::vector<int> reps_seen;
  run_monte_carlo(cfg, [&](const McArtifacts& art) {
    draws.push_back(art.lambda0_true);
    reps_seen.push_back(art.rep);
  });
  REQUIRE(draws.size() == 3);
  CHECK(reps_seen == std::vector<int>{0, 1, 2});
  CHECK(draws[0] == draws[1]);
  CHECK(draws[1] == draws[2]);

  cfg.fixed_lambda = false;
  draws.clear();
  run_monte_carlo(cfg, [&](const McArtifacts& art) {
    draws.push_back(art.lambda0_true);
  });
  REQUIRE(draws.size() == 3);
  CHECK(draws[0] != draws[1]);
}

TEST_CASE("per-estimator metric columns appear on demand") {
  McConfig cfg;
  cfg.p = 6;
  cfg.T = 70;
  cfg.replications = 2;
  cfg.master_seed = 31;
  cfg.estimators = {EstimatorKind::sdpd_known_w,
                    EstimatorKind::sdpd_estimated_w,
                    EstimatorKind::var_yule_walker};
  const auto s = run_monte_carlo(cfg);
  for (const std::string name :
       {"ase_row1_sdpd_known_w", "ase_row1_sdpd_estimated_w", "ase_row1_var",
        "ae_lambda0", "ase_lambda1"}) {
    CHECK(find_metric(s, name).n_ok + find_metric(s, name).n_fail == 2);
  }
  // Raw rows carry every metric column.
  for (const auto& rep : s.raw) {
    for (const auto& name : s.metric_names) {
      CHECK(rep.values.count(name) == 1);
    }
  }
}

TEST_CASE("benchmark configuration is validated") {
  McConfig cfg;
  cfg.p = 2;  // too small for any link design
  CHECK_THROWS_AS(run_monte_carlo(cfg), BadSpec);

  McConfig zero_reps;
  zero_reps.p = 6;
  zero_reps.replications = 0;
  CHECK_THROWS_AS(run_monte_carlo(zero_reps), BadSpec);

  McConfig no_est;
  no_est.p = 6;
  no_est.estimators.clear();
  CHECK_THROWS_AS(run_monte_carlo(no_est), BadSpec);

  McConfig bad_t;
  bad_t.p = 6;
  bad_t.T = 2;
  CHECK_THROWS_AS(run_monte_carlo(bad_t), BadSpec);
}

#include <doctest.h>

#include <cmath>

#include "mgn/error.hpp"
#include "mgn/pipeline.hpp"

using namespace mgn;

TEST_CASE("local minima on small grids") {
  // 3x3 bowl: one minimum in the middle.
  CHECK(count_local_minima({5, 4, 5, 4, 1, 4, 5, 4, 5}, 3) == 1);
  // Two separated wells.
  const std::vector<double> two = {9, 9, 9, 9, 9,
                                   9, 1, 9, 2, 9,
                                   9, 9, 9, 9, 9,
                                   9, 9, 9, 9, 9,
                                   9, 9, 9, 9, 9};
  CHECK(count_local_minima(two, 5) == 2);
  // Flat plateaus are not strict minima.
  CHECK(count_local_minima(std::vector<double>(16, 1.0), 4) == 0);
  // A tied pair of neighbours counts once.
  const std::vector<double> tied = {9, 9, 9, 9,
                                    9, 1, 9, 9,
                                    9, 9, 1, 9,
                                    9, 9, 9, 9};
  CHECK(count_local_minima(tied, 4) == 1);
  // ...but a tie with a lower cell next to it is not a minimum.
  CHECK(count_local_minima({2, 2, 0, 9}, 2) == 1);
  // Corners count with their three neighbours.
  CHECK(count_local_minima({0, 1, 1, 1}, 2) == 1);
}

TEST_CASE("oracle contours: two wells in compression, one in tension") {
  AnalyticOracle m;
  const ContourGrid c = energy_contour(m, -0.2, 101);
  CHECK(c.axis.size() == 101);
  CHECK(c.energy.size() == 101u * 101u);
  CHECK(c.axis.front() == doctest::Approx(-std::numbers::pi / 5));
  CHECK(c.axis.back() == doctest::Approx(std::numbers::pi / 5));
  CHECK(c.minima == 2);
  CHECK(energy_contour(m, 0.2, 101).minima == 1);
  // the tension minimum falls between two mirror grid cells here
  CHECK(energy_contour(m, 0.2, 61).minima == 1);
  CHECK(energy_contour(m, -0.2, 61).minima == 2);
  // energy[j * n + i] is at (axis[i], axis[j]).
  CHECK(c.energy[7 * 101 + 3] == m.energy({c.axis[3], c.axis[7], -0.2}));
  CHECK_THROWS_AS(energy_contour(m, 0.0, 2), Error);
  const std::string csv = contour_csv(c);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 101 * 101 + 1);
}

TEST_CASE("training picks the candidate with the lowest validation error") {
  AnalyticOracle oracle;
  const Dataset d = label_dataset(oracle, sample_features(200, 1.0, 5), "oracle");
  GprConfig g;
  g.restarts = 1;
  g.max_iterations = 50;
  MlpConfig mc;
  mc.settings.epochs = 20;
  mc.settings.patience = 100;
  const TrainOutcome t = train_surrogates(d, "all", g, mc, {}, 1, 2, 1.0, 1);
  REQUIRE(t.candidates.size() == 4);
  CHECK(t.split.train.size() == 160);
  double best = 1e300;
  std::string name;
  for (const auto& c : t.candidates) {
    if (c.ok && c.validation_smse < best) {
      best = c.validation_smse;
      name = c.name;
    }
  }
  CHECK(t.best_name == name);
  REQUIRE(t.best);
  CHECK(std::abs(t.best->energy({0, 0, 0})) < 1e-12);

  const TrainOutcome only = train_surrogates(d, "gpr", g, mc, {}, 1, 2, 1.0, 1);
  CHECK(only.candidates.size() == 1);
  CHECK(only.best_name == "gpr");
  CHECK_THROWS_AS(train_surrogates(d, "forest", g, mc, {}, 1, 2, 1.0, 1), Error);
}

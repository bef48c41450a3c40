#include "support.hpp"

#include "eqloc/error.hpp"
#include "eqloc/model.hpp"

#include <doctest.h>

using namespace eqloc;

namespace {

InstanceData t1_data() { return testing::fixture_t1().data(); }

}  // namespace

TEST_CASE("well-formed fixture validates") {
  CHECK(validate(t1_data()).ok());
  const auto inst = testing::fixture_t1();
  CHECK(inst.existing_sites() == std::vector<SiteIndex>{0});
  CHECK(inst.candidate_sites() == std::vector<SiteIndex>{1, 2});
  CHECK(inst.total_population() == 160.0);
  CHECK_FALSE(inst.has_coordinates());
}

TEST_CASE("zero total population is a violation") {
  auto d = t1_data();
  for (auto& b : d.blocks) b.population = 0.0;
  const auto report = validate(d);
  CHECK(report.has(Violation::Kind::zero_total_population));
  CHECK_THROWS_AS(Instance{d}, ValidationError);
}

TEST_CASE("matrix with too few rows is a dimension mismatch") {
  auto d = t1_data();
  d.distances = DistanceMatrix(2, 3, 100.0);
  CHECK(validate(d).has(Violation::Kind::dimension_mismatch));
  CHECK_THROWS_AS(Instance{d}, ValidationError);
}

TEST_CASE("bad values are each reported") {
  auto d = t1_data();
  d.blocks[1].population = -3;
  d.blocks[2].id = "b1";
  d.distances(0, 1) = -1.0;
  d.distances(1, 1) = std::numeric_limits<double>::quiet_NaN();
  const auto report = validate(d);
  CHECK(report.has(Violation::Kind::negative_population));
  CHECK(report.has(Violation::Kind::duplicate_id));
  CHECK(report.has(Violation::Kind::negative_distance));
  CHECK(report.has(Violation::Kind::non_finite_distance));
  CHECK(report.summary().find("b1") != std::string::npos);

  auto e = t1_data();
  e.sites.clear();
  e.distances = DistanceMatrix(3, 0);
  CHECK(validate(e).has(Violation::Kind::no_sites));
}

TEST_CASE("distance matrix rejects wrong data length") {
  CHECK_THROWS(DistanceMatrix(2, 2, std::vector<double>{1, 2, 3}));
}

TEST_CASE("baseline distances take the nearest existing site") {
  CHECK(baseline_distances(testing::fixture_t1()) == std::vector<double>{200, 600, 900});

  InstanceData two;
  two.blocks = {{"b", 1, {}}};
  two.sites = {{"e1", SiteKind::existing, {}}, {"e2", SiteKind::existing, {}}};
  two.distances = DistanceMatrix(1, 2, {200, 800});
  CHECK(baseline_distances(Instance(two)) == std::vector<double>{200});
}

TEST_CASE("greenfield baseline falls back to the nearest candidate") {
  InstanceData d;
  d.blocks = {{"b", 1, {}}};
  d.sites = {{"c1", SiteKind::candidate, {}}, {"c2", SiteKind::candidate, {}}};
  d.distances = DistanceMatrix(1, 2, {900, 100});
  CHECK(baseline_distances(Instance(d)) == std::vector<double>{100});
}

TEST_CASE("property: baseline is the row-wise min over existing columns") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_instance(rng);
    CHECK(baseline_distances(inst) == testing::nearest(inst, {}));
  }
}

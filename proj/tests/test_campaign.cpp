#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "celldisc/campaign.hpp"

using namespace celldisc;

namespace {

ScenarioConfig small(std::size_t users = 200) {
  ScenarioConfig c;
  c.users = users;
  c.distribution = {DistributionKind::Normal, 100, 0};
  return c;
}

bool same_records(const RunStats& a, const RunStats& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (!(x.nominal == y.nominal) || !(x.real == y.real) || !(x.result == y.result)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("same seed gives identical campaigns", "[campaign][property]") {
  auto c = small();
  c.obstacles = 10;
  c.location_error_m = 40;
  GeoContextDb d1, d2, d3;
  const auto a = run_campaign(c, 5, d1);
  const auto b = run_campaign(c, 5, d2);
  const auto other = run_campaign(c, 6, d3);
  CHECK(same_records(a, b));
  CHECK_FALSE(same_records(a, other));
}

TEST_CASE("population stays inside the area and out of obstacles", "[campaign]") {
  auto c = small(500);
  c.obstacles = 20;
  c.location_error_m = 100;
  const auto env = make_environment(c, 3);
  CHECK(env.obstacles().size() == 20);
  CHECK(env.reflective_boundary());
  for (const auto& ob : env.obstacles()) CHECK_FALSE(ob.contains(env.bs_pos()));
  auto rng = make_rng(3, Stream::Population);
  for (const auto& u : sample_population(c, env, rng)) {
    CHECK(env.inside(u.nominal));
    CHECK(env.inside(u.real));
    CHECK_FALSE(env.in_obstacle(u.nominal));
    CHECK_FALSE(env.in_obstacle(u.real));
  }
}

TEST_CASE("walls follow the obstacle field unless set", "[campaign]") {
  auto c = small();
  CHECK_FALSE(make_environment(c, 1).reflective_boundary());
  c.reflective_boundary = true;
  CHECK(make_environment(c, 1).reflective_boundary());
}

TEST_CASE("ring distribution keeps its hole", "[campaign]") {
  auto c = small(400);
  c.distribution = {DistributionKind::RingNormal, 50, 40};
  const auto env = make_environment(c, 1);
  auto rng = make_rng(1, Stream::Population);
  for (const auto& u : sample_population(c, env, rng)) CHECK(distance(u.nominal, env.bs_pos()) >= 40.0);
}

TEST_CASE("impossible sampling fails instead of spinning", "[campaign]") {
  auto c = small(10);
  c.distribution = {DistributionKind::RingNormal, 1, 1000};
  const auto env = make_environment(c, 1);
  auto rng = make_rng(1, Stream::Population);
  CHECK_THROWS_AS(sample_population(c, env, rng), std::runtime_error);
}

TEST_CASE("exact positions in free space: one bs step when range suffices", "[campaign]") {
  auto c = small(300);
  c.algorithm = Algorithm::Edp;
  const auto st = run_campaign(c);
  CHECK(st.discovered == 300);
  CHECK(st.unreachable_fraction == 0.0);
  CHECK(st.mt_cdf.back().probability == 1.0);
  const Codebook cb;
  const double spare = std::pow(10.0, -6.0 / (10.0 * c.radio.k_far));
  std::size_t near = 0;
  for (const auto& r : st.records) {
    const auto w0 = initial_level(cb, r.nominal, c.bs(), c.radio);
    if (distance(r.nominal, c.bs()) > spare * max_aligned_range(c.radio, cb.width_rad(w0), c.mt_width())) continue;
    ++near;
    CHECK(r.result.bs_switches == 1);
    CHECK(r.result.mt_switches <= 12);
  }
  CHECK(near > 50);
}

TEST_CASE("db priming: a second pass is no slower", "[campaign]") {
  auto c = small(300);
  c.obstacles = 20;
  c.location_error_m = 30;
  c.db_range_m = 20;
  GeoContextDb db;
  const auto first = run_campaign(c, 4, db);
  const auto size_after_first = db.size();
  const auto second = run_campaign(c, 4, db);
  CHECK(size_after_first == first.discovered);
  CHECK(second.mt.mean <= first.mt.mean);
  CHECK(second.db_hit_rate > first.db_hit_rate);
}

TEST_CASE("db range zero is byte-identical to no db", "[campaign][property]") {
  auto c = small(300);
  c.obstacles = 20;
  c.location_error_m = 60;
  GeoContextDb empty, primed;
  primed.insert({225, 175}, {3, 1});
  const auto plain = run_campaign(c, 8, empty);
  const auto zero = run_campaign(c, 8, primed);
  CHECK(same_records(plain, zero));
}

TEST_CASE("db save and load through the config", "[campaign]") {
  const auto dir = std::filesystem::temp_directory_path() / "celldisc_test_db";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "db.csv").string();
  auto c = small(100);
  c.db_range_m = 30;
  c.db_save = path;
  const auto st = run_campaign(c);
  const auto db = GeoContextDb::load(path, Codebook());
  CHECK(db.size() == st.discovered);
  c.db_save.clear();
  c.db_load = (dir / "missing.csv").string();
  CHECK_THROWS_AS(run_campaign(c), ConfigError);
}

TEST_CASE("summaries", "[campaign]") {
  const auto s = summarize({4, 1, 3, 2, 10});
  CHECK(s.mean == 4.0);
  CHECK(s.median == 3.0);
  CHECK(s.max == 10.0);
  const auto e = summarize({});
  CHECK(std::isnan(e.mean));
}

TEST_CASE("sweep axis values", "[campaign]") {
  const auto c = small();
  CHECK(with_axis_value(c, SweepAxis::EdpSectors, 8).edp_sectors == 8);
  CHECK(with_axis_value(c, SweepAxis::DbRange, 15).db_range_m == 15);
  CHECK_THROWS_AS(with_axis_value(c, SweepAxis::EdpSectors, 2.5), ConfigError);
  CHECK_THROWS_AS(with_axis_value(c, SweepAxis::EdpSectors, 0), ConfigError);
  CHECK_THROWS_AS(parse_axis("speed"), ConfigError);
  CHECK(to_string(parse_axis("db_range")) == "db_range");
}

TEST_CASE("analytic run is reproducible and refuses obstacles", "[campaign]") {
  auto c = small();
  c.distribution.kind = DistributionKind::Uniform;
  c.analytic_samples = 50;
  c.location_error_m = 30;
  const auto a = run_analytic(c);
  const auto b = run_analytic(c);
  CHECK(a.p_bs == b.p_bs);
  CHECK(a.mean_bs_switches >= 1.0);
  c.obstacles = 3;
  CHECK_THROWS_AS(run_analytic(c), ConfigError);
}

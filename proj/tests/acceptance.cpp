// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "celldisc/celldisc.hpp"

using namespace celldisc;

namespace {

// Tolerances and thresholds.
constexpr std::size_t kExpectedConfigs = 280;
constexpr double kSlsMinMeanMt = 450.0;
constexpr double kSlsMaxSeconds = 60.0;
constexpr double kModelMaxGap = 0.15;
constexpr double kModelMaxSeconds = 300.0;
constexpr double kPmfSumTol = 1e-3;
constexpr double kDbMinReduction = 0.10;
constexpr std::size_t kTrendSeeds = 3;
constexpr std::size_t kLayoutSeeds = 10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioConfig normal_users(double eps) {
  ScenarioConfig c;
  c.distribution = {DistributionKind::Normal, 100.0, 0.0};
  c.location_error_m = eps;
  return c;
}

double mean_mt(ScenarioConfig c, Algorithm a, std::size_t seeds, std::size_t sectors = 1) {
  c.algorithm = a;
  c.edp_sectors = sectors;
  c.replications = seeds;
  return aggregate(run_replicated(c)).mean_mt;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome codebook_cardinality() {
  const auto n = Codebook().total_configs();
  return {n == kExpectedConfigs, "configs=" + std::to_string(n)};
}

Outcome sls_cost() {
  const auto t0 = Clock::now();
  auto c = normal_users(50.0);
  const double m = mean_mt(c, Algorithm::Sls, 1);
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "mean_mt=" << m << " (need > " << kSlsMinMeanMt << "), " << s << " s";
  return {m > kSlsMinMeanMt && s < kSlsMaxSeconds, os.str()};
}

Outcome algorithm_ordering() {
  bool ok = true;
  double prev_edp = -1.0;
  std::ostringstream os;
  for (double eps : {0.0, 20.0, 40.0, 60.0, 80.0, 100.0}) {
    const auto c = normal_users(eps);
    const double edp = mean_mt(c, Algorithm::Edp, kTrendSeeds);
    const double dsls = mean_mt(c, Algorithm::Dsls, kTrendSeeds);
    const double sls = mean_mt(c, Algorithm::Sls, kTrendSeeds);
    const bool here = edp <= dsls && dsls < sls && edp >= prev_edp;
    ok = ok && here;
    os << "\n    eps=" << eps << " edp=" << edp << " dsls=" << dsls << " sls=" << sls << (here ? "" : "  <-- violated");
    prev_edp = edp;
  }
  return {ok, os.str()};
}

Outcome model_validation() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream os;
  for (auto alg : {Algorithm::Dsls, Algorithm::Edp}) {
    for (int e = 10; e <= 100; e += 10) {
      ScenarioConfig c;
      c.distribution = {DistributionKind::Uniform, 100.0, 0.0};
      c.location_error_m = e;
      c.algorithm = alg;
      c.replications = kTrendSeeds;
      const auto cmp = compare_model(c);
      const bool here = cmp.gap_bs <= kModelMaxGap && cmp.gap_mt <= kModelMaxGap;
      ok = ok && here;
      os << "\n    " << to_string(alg) << " eps=" << e << " bs " << cmp.analytic.mean_bs_switches << " vs "
         << cmp.simulated.mean_bs << " (gap " << cmp.gap_bs << "), mt " << cmp.analytic.mean_mt_switches << " vs "
         << cmp.simulated.mean_mt << " (gap " << cmp.gap_mt << ")" << (here ? "" : "  <-- over");
    }
  }
  const double s = seconds_since(t0);
  os << "\n    runtime " << s << " s";
  return {ok && s < kModelMaxSeconds, os.str()};
}

Outcome pmf_structure() {
  ScenarioConfig c;
  c.distribution = {DistributionKind::Uniform, 100.0, 0.0};
  c.location_error_m = 50.0;
  c.analytic_samples = 500;
  bool ok = true;
  double worst_sum = 0.0;
  for (auto alg : {Algorithm::Dsls, Algorithm::Edp, Algorithm::Sls}) {
    c.algorithm = alg;
    const auto r = run_analytic(c);
    for (std::size_t n = 0; n < r.p_mt.size(); ++n) ok = ok && r.p_mt[n] == r.p_bs[n / r.mt_beams] / double(r.mt_beams);
    double s = r.p_unreachable;
    for (double p : r.p_bs) s += p;
    worst_sum = std::max(worst_sum, std::abs(s - 1.0));
  }
  std::ostringstream os;
  os << "max |sum - 1| = " << worst_sum;
  return {ok && worst_sum <= kPmfSumTol, os.str()};
}

Outcome obstacle_monotonicity() {
  bool ok = true;
  double prev = -1.0;
  std::ostringstream os;
  for (std::size_t n : {0, 10, 20, 30}) {
    auto c = normal_users(0.0);
    c.obstacles = n;
    const double m = mean_mt(c, Algorithm::Edp, kLayoutSeeds);
    ok = ok && m > prev;
    os << " obst=" << n << ":" << m;
    prev = m;
  }
  return {ok, os.str()};
}

Outcome db_benefit() {
  std::ostringstream os;
  double reduction[2] = {0.0, 0.0};
  bool ok = true;
  int k = 0;
  for (auto alg : {Algorithm::Edp, Algorithm::Dsls}) {
    auto c = normal_users(80.0);
    c.obstacles = 30;
    c.algorithm = alg;
    c.replications = kLayoutSeeds;
    const auto rows = sweep(c, SweepAxis::DbRange, {0, 10, 20, 30, 40, 50, 60});
    const double base = rows.front().agg.mean_mt;
    double best = base;
    for (const auto& r : rows) best = std::min(best, r.agg.mean_mt);
    reduction[k] = base - best;
    ok = ok && reduction[k] >= kDbMinReduction * base;
    os << "\n    " << to_string(alg) << " m=0:" << base << " best:" << best << " reduction " << reduction[k] << " ("
       << 100.0 * reduction[k] / base << "%)";
    ++k;
  }
  const bool order = reduction[1] >= reduction[0];
  os << "\n    dsls reduction >= edp reduction: " << (order ? "yes" : "no");
  return {ok && order, os.str()};
}

Outcome edp_sector_minimum() {
  auto c = normal_users(100.0);
  c.obstacles = 30;
  c.algorithm = Algorithm::Edp;
  c.replications = kLayoutSeeds;
  const std::vector<double> ns{1, 2, 4, 8, 12, 16, 24, 36};
  const auto rows = sweep(c, SweepAxis::EdpSectors, ns);
  const double first = rows.front().agg.mean_mt;
  const double last = rows.back().agg.mean_mt;
  bool found = false;
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << " n=" << rows[i].value << ":" << rows[i].agg.mean_mt;
    if (i > 0 && i + 1 < rows.size() && rows[i].agg.mean_mt < first && rows[i].agg.mean_mt < last) found = true;
  }
  return {found, os.str()};
}

// Compact re-run of the invariant families; the unit suites cover them in depth.
Outcome property_suites() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* name) {
    if (!ok) failed.emplace_back(name);
  };

  for (double w : {3.0, 30.0, 360.0}) {
    const double r = w * kDegToRad;
    check(std::abs(antenna_gain_db(r, 0) - antenna_gain_db(r, r / 2) - 3.0) < 1e-12, "gain half-power");
  }

  {
    const Environment env(10.0, 100.0, {0.0, 0.0}, {}, true);
    bool hit = false;
    for (const auto& p : single_bounce_paths(env, {0, 0}, {4, 6}))
      if (p.kind == PathKind::Reflected && env.surfaces()[p.surface_id].inward_normal == Point2D{-1, 0})
        hit = std::abs(p.length - std::sqrt(292.0)) < 1e-9 && std::abs(p.reflection_point.y - 3.75) < 1e-9;
    check(hit, "mirror image");
  }

  const Codebook cb;
  const LinkBudgetParams params;
  {
    const SectorApprox approx(cb, params, kDefaultMtWidth, {225, 175});
    Rng rng(1);
    const auto seq = seq_random(cb, rng);
    ResidualTracker tr(approx);
    std::vector<AnnularRegion> regions;
    for (const auto& c : seq) regions.push_back(tr.next(c));
    double overlap = 0.0;
    for (std::size_t i = 0; i < regions.size(); ++i)
      for (std::size_t j = i + 1; j < regions.size(); ++j)
        for (const auto& a : regions[i].parts)
          for (const auto& b : regions[j].parts) overlap += overlap_area(a, b);
    check(overlap == 0.0, "residual disjointness");

    const auto dseq = seq_dsls(cb, {330, 250}, {225, 175}, params);
    const auto a = pmf_given_position(approx, dseq, {330, 250}, 15.0, 1e-4);
    const auto b = pmf_given_position(approx, dseq, {330, 250}, 15.0, 1e-5);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) diff = std::max(diff, std::abs(a.p[i] - b.p[i]));
    check(diff <= 1e-4, "quadrature convergence");
  }

  {
    Rng rng(2);
    std::uniform_real_distribution<double> ux(0, 450), uy(0, 350);
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      const Point2D nom{ux(rng), uy(rng)};
      const Point2D bs{225, 175};
      auto full = [&](const SearchSequence& s) { return s.size() == cb.total_configs() && s.well_formed(cb); };
      ok = ok && full(seq_dsls(cb, nom, bs, params)) && full(seq_random(cb, rng)) && seq_sls(cb, nom, bs).well_formed(cb);
      for (std::size_t n : {1, 2, 8, 36}) ok = ok && full(seq_edp(cb, nom, bs, n, params));
    }
    check(ok, "sequence permutation");
  }

  {
    GeoContextDb db;
    db.insert({10, 0}, {1, 1});
    db.insert({2, 0}, {1, 2});
    db.insert({5, 0}, {1, 1});
    db.insert({50, 0}, {1, 3});
    check(db.query({0, 0}, 20) == std::vector<BeamConfig>{{1, 2}, {1, 1}}, "query dedup");
  }

  {
    auto c = normal_users(40.0);
    c.users = 200;
    c.obstacles = 10;
    GeoContextDb d1, d2;
    const auto a = run_campaign(c, 7, d1);
    const auto b = run_campaign(c, 7, d2);
    bool same = a.records.size() == b.records.size();
    for (std::size_t i = 0; same && i < a.records.size(); ++i) same = a.records[i].result == b.records[i].result;
    check(same, "seed determinism");
  }

  std::string detail = failed.empty() ? "all families hold" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

Outcome db_zero_equivalence() {
  auto c = normal_users(60.0);
  c.obstacles = 20;
  c.algorithm = Algorithm::Dsls;
  const std::uint64_t seed = 11;
  const Codebook cb(c.codebook_widths);
  const auto env = make_environment(c, seed);
  auto pop_rng = make_rng(seed, Stream::Population);
  const auto users = sample_population(c, env, pop_rng);

  GeoContextDb db;
  db.insert(users.front().nominal, {cb.narrowest(), 0});  // non-empty on purpose
  std::vector<UserRecord> plain(users.size()), zero(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto& u = users[i];
    auto rng = make_rng(seed, Stream::User, i);
    const MTModel mt{c.mt_beams, u.orientation, i % c.mt_beams};
    const auto seq = build_sequence(c.sequence_request(), cb, u.nominal, env.bs_pos(), c.radio, rng);
    const auto paths = single_bounce_paths(env, env.bs_pos(), u.real);
    plain[i] = {i, u.nominal, u.real, run_rendezvous_on_paths(c.radio, cb, seq, paths, mt)};
    zero[i] = {i, u.nominal, u.real, db_assisted_discovery_on_paths(c.radio, cb, db, 0.0, u.nominal, seq, paths, mt)};
  }
  std::ostringstream a, b;
  write_users_csv(a, compute_stats(seed, plain), cb);
  write_users_csv(b, compute_stats(seed, zero), cb);
  const bool same = a.str() == b.str();
  return {same, same ? std::to_string(users.size()) + " users, identical bytes" : "per-user output differs"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 codebook cardinality", codebook_cardinality},
      {"2 sls cost", sls_cost},
      {"3 algorithm ordering", algorithm_ordering},
      {"4 model validation", model_validation},
      {"5 pmf structure", pmf_structure},
      {"6 obstacle monotonicity", obstacle_monotonicity},
      {"7 db benefit", db_benefit},
      {"8 edp sector minimum", edp_sector_minimum},
      {"9 property suites", property_suites},
      {"10 db range zero equivalence", db_zero_equivalence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}

#include <gtest/gtest.h>

#include <cmath>

#include "cdlab/diagnostics.hpp"
#include "cdlab/errors.hpp"
#include "oracles.hpp"

using namespace cdlab;
using oracle::pi;

namespace {

SpeciesState uniform(const Grid& g) { return {GridField::constant(g, 1.0), GridField::constant(g, 1.0), 0.0}; }

PotentialPair zero_pair(const Grid& g) { return build_pair(PotentialSpec::zero(), PotentialSpec::zero(), g); }

// (a / 2 pi) sin(2 pi x) for species 1, so V = a cos(2 pi x).
PotentialPair cosine_drift(const Grid& g, double a) {
  return build_pair(PotentialSpec::cosine({{a / (2 * pi), 1, -pi / 2}}), PotentialSpec::zero(), g);
}

SpeciesState constant_ratio(const Grid& g, double r0) {
  const GridField s = GridField::sample(g, [](double x) { return 2.0 + std::sin(2 * pi * x); });
  return {r0 * s, (1.0 - r0) * s, 0.0};
}

Trajectory heat_run(std::size_t n, std::size_t snapshots, double t_end, bool record = false) {
  const Grid g(n);
  const GridField half = GridField::sample(g, [](double x) { return 1.0 + 0.5 * std::cos(2 * pi * x); });
  SchemeConfig c;
  c.t_end = t_end;
  std::vector<Observer> obs;
  if (record) obs.push_back(make_recorder(zero_pair(g), c));
  return run(SpeciesState{half, half, 0.0}, zero_pair(g), c, nullptr, snapshots, obs);
}

std::vector<DiagnosticsRecord> records_with(std::initializer_list<double> values,
                                            double DiagnosticsRecord::*field) {
  std::vector<DiagnosticsRecord> out;
  double t = 0.0;
  for (double v : values) {
    DiagnosticsRecord r;
    r.time = t;
    r.*field = v;
    out.push_back(r);
    t += 0.1;
  }
  return out;
}

}  // namespace

TEST(FirstOrderEnergy, ConstantRatioNoDrift) {
  const Grid g(64);
  const FirstOrderEnergy e = first_order_energy(to_mixed(constant_ratio(g, 0.3)), zero_pair(g));
  EXPECT_NEAR(e.value, 0.0, 1e-13);
  EXPECT_TRUE(e.reliable);
}

TEST(FirstOrderEnergy, ConstantRatioCosineDrift) {
  const Grid g(512);
  const double a = 0.8;
  const FirstOrderEnergy e = first_order_energy(to_mixed(constant_ratio(g, 0.3)), cosine_drift(g, a));
  EXPECT_NEAR(e.value, 2 * a / pi, 1e-3);
}

TEST(FirstOrderEnergy, AntiderivativeCancels) {
  const Grid g(128);
  const SpeciesState s{GridField::sample(g, [](double x) { return 1.5 + std::cos(2 * pi * x); }),
                       GridField::sample(g, [](double x) { return 1.2 + 0.7 * std::sin(4 * pi * x + 0.3); }), 0.0};
  const MixedState m = to_mixed(s);
  // V1 = -f(r) makes the discrete derivative of V1 - V2 cancel that of f(r) cell by cell.
  const PotentialPair p = build_pair(PotentialSpec::tabulated(-1.0 * m.f_ratio), PotentialSpec::zero(), g);
  EXPECT_NEAR(first_order_energy(m, p).value, 0.0, 1e-10);
}

TEST(FirstOrderEnergy, ClampedCellsAreExcluded) {
  const Grid g(80);
  std::vector<double> a(80, 1.0), b(80, 1.0);
  b[10] = 0.0;
  const FirstOrderEnergy e = first_order_energy(to_mixed(SpeciesState{GridField(g, a), GridField(g, b), 0.0}),
                                                zero_pair(g));
  EXPECT_EQ(e.excluded_cells, 3u);
  EXPECT_TRUE(e.reliable);
  std::fill(b.begin(), b.begin() + 5, 0.0);
  EXPECT_FALSE(first_order_energy(to_mixed(SpeciesState{GridField(g, a), GridField(g, b), 0.0}), zero_pair(g))
                   .reliable);
}

TEST(FirstOrderEnergy, SwapWithNegatedDrift) {
  const Grid g(96);
  const SpeciesState s{GridField::sample(g, [](double x) { return 1.5 + std::cos(2 * pi * x); }),
                       GridField::sample(g, [](double x) { return 1.2 + 0.7 * std::sin(4 * pi * x); }), 0.0};
  const PotentialPair p = cosine_drift(g, 0.6);
  const double a = first_order_energy(to_mixed(s), p).value;
  const double b = first_order_energy(to_mixed(s.swapped()), p.swapped()).value;
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(GronwallEnvelope, ClosedForm) {
  EXPECT_EQ(gronwall_envelope(0.7, {2.0, 3.0}, 0.0), 0.7);
  EXPECT_EQ(gronwall_envelope(0.7, {0.0, 0.0}, 5.0), 0.7);
  EXPECT_NEAR(gronwall_envelope(1.0, {2.0, 3.0}, 0.1), 1.2 * std::exp(0.3), 1e-14);
  EXPECT_THROW(gronwall_envelope(1.0, {}, -0.1), DomainError);
}

TEST(EntropyEta, UniformState) {
  const Grid g(32);
  for (double eta : {0.1, 0.25, 0.5}) {
    EXPECT_NEAR(entropy_eta(uniform(g), zero_pair(g), eta), (1 - 2 * eta) * 2 * std::log(2.0), 1e-14);
  }
  EXPECT_NEAR(entropy_eta(uniform(g), zero_pair(g), 0.5), 0.0, 1e-15);
}

TEST(EntropyEta, PotentialTermsAndVacuum) {
  const Grid g(64);
  std::vector<double> a(64, 2.0), b(64, 0.0);
  const SpeciesState s{GridField(g, a), GridField(g, b), 0.0};
  const PotentialPair p = build_pair(PotentialSpec::cosine({{1.0, 1, 0.0}}), PotentialSpec::zero(), g);
  // sigma = rho1 = 2; the cosine potential integrates to zero.
  EXPECT_NEAR(entropy_eta(s, p, 0.25), 0.5 * 2 * std::log(2.0) + 0.25 * 2 * std::log(2.0), 1e-13);
}

TEST(SpeciesBv, UniformAndStep) {
  const Grid g(32);
  const auto [u1, u2] = species_bv(uniform(g));
  EXPECT_DOUBLE_EQ(u1, 1.0);
  EXPECT_DOUBLE_EQ(u2, 1.0);
  std::vector<double> a(32);
  for (std::size_t i = 0; i < 32; ++i) a[i] = i < 16 ? 1.25 : 0.75;
  const auto [s1, s2] = species_bv(SpeciesState{GridField(g, a), GridField::constant(g, 1.0), 0.0});
  EXPECT_DOUBLE_EQ(s1, 1.0 + 2 * 0.5);
  EXPECT_DOUBLE_EQ(s2, 1.0);
}

TEST(Dissipation, UniformAndEmpty) {
  const Grid g(32);
  Trajectory t;
  EXPECT_EQ(sqrt_sigma_dissipation(t), 0.0);
  for (double time : {0.0, 0.25, 0.5, 1.0}) t.snapshots.push_back(SpeciesState{uniform(g).rho1, uniform(g).rho2, time});
  EXPECT_NEAR(sqrt_sigma_dissipation(t), 2.0, 1e-14);
  EXPECT_NEAR(sqrt_sigma_h1_squared(uniform(g)), 2.0, 1e-14);
}

TEST(Dissipation, HeatRunAgreesWithRefinedRun) {
  const double coarse = sqrt_sigma_dissipation(heat_run(64, 20, 0.05));
  const double fine = sqrt_sigma_dissipation(heat_run(256, 20, 0.05));
  EXPECT_NEAR(coarse, fine, 0.02 * fine);
}

TEST(WeakResidual, UniformStationaryRun) {
  const Grid g(32);
  SchemeConfig c;
  c.t_end = 0.05;
  const Trajectory t = run(uniform(g), zero_pair(g), c, nullptr, 16);
  const auto res = weak_residual(t, zero_pair(g), c.eta, {{TimeProfile::hermite_bump, 0}, {TimeProfile::hermite_bump, 1},
                                                          {TimeProfile::hermite_bump, 2, SpatialMode::sine}});
  for (const auto& r : res) {
    EXPECT_LE(r.species1, 1e-12);
    EXPECT_LE(r.species2, 1e-12);
  }
}

TEST(WeakResidual, ConstantTestFunctionIsMassDefect) {
  const Grid g(64);
  const PotentialPair p = cosine_drift(g, 0.5);
  const SpeciesState s{GridField::sample(g, [](double x) { return 1.0 + 0.4 * std::cos(2 * pi * x); }),
                       GridField::sample(g, [](double x) { return 1.0 + 0.3 * std::sin(2 * pi * x); }), 0.0};
  SchemeConfig c;
  c.t_end = 0.02;
  const Trajectory t = run(s, p, c, nullptr, 16);
  const auto res = weak_residual(t, p, c.eta, {{TimeProfile::hermite_bump, 0}});
  EXPECT_LE(res[0].species1, 1e-10);
  EXPECT_LE(res[0].species2, 1e-10);
}

TEST(WeakResidual, HeatRunConvergesUnderRefinement) {
  const std::vector<WeakTestFunction> tests{{TimeProfile::hermite_bump, 1}};
  const Trajectory coarse = heat_run(32, 16, 0.05);
  const Trajectory fine = heat_run(64, 32, 0.05);
  const double rc = weak_residual(coarse, zero_pair(Grid(32)), 0.25, tests)[0].species1;
  const double rf = weak_residual(fine, zero_pair(Grid(64)), 0.25, tests)[0].species1;
  EXPECT_GE(rc / rf, 3.0) << rc << " -> " << rf;
}

TEST(WeakResidual, RejectsCoarseOrUnevenCadence) {
  const Trajectory t = heat_run(16, 8, 0.01);
  EXPECT_THROW(weak_residual(t, zero_pair(Grid(16)), 0.25, {{}}), DomainError);
  Trajectory u = heat_run(16, 16, 0.01);
  u.snapshots[3].time += 1e-4;
  EXPECT_THROW(weak_residual(u, zero_pair(Grid(16)), 0.25, {{}}), DomainError);
}

TEST(Record, HeatRunIsFiniteWithFlatEnvelope) {
  const Trajectory t = heat_run(64, 10, 0.05, true);
  ASSERT_EQ(t.records.size(), 11u);
  EXPECT_EQ(t.records.front().gronwall_envelope, t.records.front().first_order_energy);
  for (const auto& r : t.records) {
    for (double v : {r.mass1, r.mass2, r.first_order_energy, r.gronwall_envelope, r.entropy_eta, r.llogl, r.tv_r,
                     r.tv_f, r.bv_rho1, r.bv_rho2, r.sqrt_sigma_h1_cum, r.min_density}) {
      EXPECT_TRUE(std::isfinite(v));
    }
    // alpha = beta = 0 without a drift difference.
    EXPECT_EQ(r.gronwall_envelope, t.records.front().gronwall_envelope);
  }
  for (const auto& c : check_invariants(t, Grid(64).dx(), CheckOptions{})) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST(Record, DriftRunEnvelopeGrows) {
  const Grid g(128);
  const PotentialPair p = cosine_drift(g, 0.5);
  const SpeciesState s{GridField::sample(g, [](double x) { return 1.0 + 0.4 * std::cos(2 * pi * x); }),
                       GridField::sample(g, [](double x) { return 1.0 + 0.3 * std::sin(4 * pi * x); }), 0.0};
  SchemeConfig c;
  c.t_end = 0.05;
  const Trajectory t = run(s, p, c, nullptr, 10, {make_recorder(p, c)});
  ASSERT_TRUE(t.ok());
  EXPECT_GT(t.records.back().gronwall_envelope, t.records.front().gronwall_envelope);
  EXPECT_TRUE(check_envelope_monotone(t.records).pass);
  EXPECT_TRUE(check_gronwall(t.records, CheckOptions{}).pass);
  EXPECT_NEAR(t.records.back().sqrt_sigma_h1_cum, sqrt_sigma_dissipation(t), 1e-12);
}

TEST(Checks, Mass) {
  auto recs = records_with({1.0, 1.0, 1.0 + 1e-12}, &DiagnosticsRecord::mass1);
  for (auto& r : recs) r.mass2 = 1.0;
  EXPECT_TRUE(check_mass(recs, {}).pass);
  recs[1].mass2 = 1.0 + 1e-8;
  EXPECT_FALSE(check_mass(recs, {}).pass);
}

TEST(Checks, Positivity) {
  EXPECT_TRUE(check_positivity(records_with({0.0, 0.3}, &DiagnosticsRecord::min_density)).pass);
  EXPECT_FALSE(check_positivity(records_with({0.1, -1e-300}, &DiagnosticsRecord::min_density)).pass);
}

TEST(Checks, GronwallSlackAndUnreliable) {
  auto recs = records_with({1.0, 1.0, 1.0}, &DiagnosticsRecord::gronwall_envelope);
  recs[1].first_order_energy = 1.09;
  EXPECT_TRUE(check_gronwall(recs, {}).pass);
  recs[2].first_order_energy = 1.11;
  EXPECT_FALSE(check_gronwall(recs, {}).pass);
  recs[2].first_order_energy = 0.5;
  recs[0].energy_reliable = false;
  EXPECT_FALSE(check_gronwall(recs, {}).pass);
}

TEST(Checks, TvOrdering) {
  auto recs = records_with({4.0, 8.0}, &DiagnosticsRecord::tv_f);
  recs[0].tv_r = 1.0;
  recs[1].tv_r = 2.0;
  EXPECT_TRUE(check_tv_ordering(recs).pass);
  recs[1].tv_r = std::nextafter(2.0, 3.0);
  EXPECT_FALSE(check_tv_ordering(recs).pass);
}

TEST(Checks, EntropyTolerance) {
  const double dx = 0.01;
  // Snapshots are 0.1 apart, so the allowance per interval is 10 * dx * 0.1 = 0.01.
  EXPECT_TRUE(check_entropy_decay(records_with({1.0, 0.9, 0.905}, &DiagnosticsRecord::entropy_eta), dx, {}).pass);
  EXPECT_FALSE(check_entropy_decay(records_with({1.0, 0.9, 0.92}, &DiagnosticsRecord::entropy_eta), dx, {}).pass);
}

TEST(Checks, EnvelopeMonotone) {
  EXPECT_TRUE(check_envelope_monotone(records_with({1.0, 1.0, 2.0}, &DiagnosticsRecord::gronwall_envelope)).pass);
  EXPECT_FALSE(check_envelope_monotone(records_with({1.0, 2.0, 1.5}, &DiagnosticsRecord::gronwall_envelope)).pass);
}

TEST(Checks, SpeciesBvBoundOnSegregatedData) {
  const Grid g(64);
  std::vector<double> a(64), b(64);
  for (std::size_t i = 0; i < 64; ++i) {
    a[i] = i < 32 ? 2.0 : 0.0;
    b[i] = 2.0 - a[i];
  }
  Trajectory t;
  t.snapshots.push_back(SpeciesState{GridField(g, a), GridField(g, b), 0.0});
  EXPECT_TRUE(check_species_bv_bound(t).pass);
}

TEST(Checks, ReactionModeReplacesMassAndEntropy) {
  Trajectory t = heat_run(32, 4, 0.01, true);
  CheckOptions opt;
  opt.reactions = true;
  const auto checks = check_invariants(t, Grid(32).dx(), opt);
  ASSERT_EQ(checks.back().name, "reaction_mass_law");
  for (const auto& c : checks) EXPECT_NE(c.name, "mass_conservation");
  t.max_mass_drift = 1e-9;
  EXPECT_FALSE(check_invariants(t, Grid(32).dx(), opt).back().pass);
}

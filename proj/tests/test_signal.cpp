#include "hokalman/signal.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hokalman;

namespace {

double d(const Real& x) { return static_cast<double>(x); }

}  // namespace

TEST(ModeSum, GeometricSingleMode) {
  const Signal s = gen_mode_sum(ModeSum({{Real(1), log(Real(2))}}), 5);
  const double expected[] = {1, 0.5, 0.25, 0.125, 0.0625};
  ASSERT_EQ(s.size(), 5u);
  for (std::size_t n = 0; n < 5; ++n) EXPECT_NEAR(d(s.samples[n]), expected[n], 1e-30);
  EXPECT_EQ(s.true_order(), 1u);
}

TEST(ModeSum, DuplicatesMerge) {
  const ModeSum m({{Real(1), Real(1) / 3}, {Real(1), Real(1) / 3}});
  ASSERT_EQ(m.modes().size(), 1u);
  EXPECT_EQ(m.modes()[0].coefficient, 2);
  EXPECT_EQ(m.order(), 1u);
}

TEST(ModeSum, ZeroTermsDropped) {
  const ModeSum m({{Real(0), Real(1)}, {Real(1), Real(2), Real(0), Waveform::sine}, {Real(3), Real(1)}});
  EXPECT_EQ(m.modes().size(), 1u);
  const ModeSum cancel({{Real(1), Real(1)}, {Real(-1), Real(1)}});
  EXPECT_TRUE(cancel.modes().empty());
}

TEST(ModeSum, OscillatoryPairCountsTwo) {
  EXPECT_EQ(ModeSum({{Real(1), Real(1) / 10, Real(1)}}).order(), 2u);
  EXPECT_EQ(ModeSum({{Real(1), Real(1) / 10, Real(1)}, {Real(2), Real(1) / 10, Real(1), Waveform::sine}}).order(), 2u);
  EXPECT_EQ(ModeSum({{Real(1), Real(1) / 10, Real(1)}, {Real(2), Real(1) / 10, Real(2)}}).order(), 4u);
}

TEST(ModeSum, NegativeFrequencyFolds) {
  const ModeSum a({{Real(1), Real(0), Real(-2), Waveform::sine}});
  const ModeSum b({{Real(-1), Real(0), Real(2), Waveform::sine}});
  for (int n = 0; n < 5; ++n) EXPECT_EQ(a.evaluate(n), b.evaluate(n));
}

TEST(ModeSum, RejectsNonFinite) {
  EXPECT_THROW(ModeSum({{infinity(), Real(1)}}), std::invalid_argument);
  EXPECT_THROW(ModeSum({{Real(1), std::numeric_limits<Real>::quiet_NaN()}}), std::invalid_argument);
}

TEST(ModeSum, PermutationInvariant) {
  std::vector<Mode> modes = {{Real(1), Real(1) / 7},
                             {Real(-2), Real(1) / 3, Real(1) / 2},
                             {Real(3) / 2, Real(1) / 3, Real(1) / 2, Waveform::sine},
                             {Real(1) / 4, Real(2)},
                             {Real(5), Real(1) / 7}};
  const Signal reference = gen_mode_sum(ModeSum(modes), 30);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(modes.begin(), modes.end(), rng);
    const Signal s = gen_mode_sum(ModeSum(modes), 30);
    EXPECT_EQ(s.samples, reference.samples);
    EXPECT_EQ(s.true_order(), reference.true_order());
  }
}

TEST(GenModeSum, RejectsBadArguments) {
  EXPECT_THROW(gen_mode_sum(ModeSum({{Real(1), Real(1)}}), 0), std::invalid_argument);
  EXPECT_THROW(gen_mode_sum(ModeSum({{Real(1), Real(1)}}), 3, Real(0)), std::invalid_argument);
}

TEST(GenModeSum, SamplePeriodScalesTime) {
  const ModeSum m({{Real(1), Real(1)}});
  const Signal s = gen_mode_sum(m, 4, Real(1) / 4);
  for (int n = 0; n < 4; ++n) EXPECT_EQ(s.samples[n], exp(-Real(n) / 4));
}

TEST(PoleProximity, FirstSample) {
  const Signal s = gen_mode_sum(pole_proximity_modes(10, 3), 1);
  EXPECT_EQ(s.samples[0], Real(1.125));
  EXPECT_EQ(s.true_order(), 2u);
}

TEST(Y5, TrueOrderAndModeCount) {
  EXPECT_EQ(y5_modes().modes().size(), 5u);
  EXPECT_EQ(gen_y5(10).true_order(), 5u);
}

TEST(Y5, FirstSampleByDirectSummation) {
  // (1/7)(s1 - s2 + s4 - s5 + s7) with s_k = sin(2 pi k / 3) = +-sqrt(3)/2
  const Signal s = gen_y5(1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(d(s.samples[0]), std::sqrt(3.0) / 14, 1e-16);
  EXPECT_NEAR(d(s.samples[0]), 0.12371791482634838, 1e-16);
}

TEST(Y5, MatchesTermByTermFormula) {
  const Signal s = gen_y5(100);
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_LE(abs(s.samples[n] - oracle::y5_direct(n)), Real(1e-30)) << n;
}

TEST(Y5, MatchesExplicitModes) {
  const Real c = sqrt(Real(3)) / 14;
  const ModeSum explicit_modes({{c, Real(1) / 10},
                                {c, Real(1) / 20},
                                {-c, Real(1) / 40},
                                {-c, Real(1) / 50},
                                {c, Real(1) / 70}});
  const Signal a = gen_y5(60);
  const Signal b = gen_mode_sum(explicit_modes, 60);
  for (std::size_t n = 0; n < 60; ++n) EXPECT_LE(abs(a.samples[n] - b.samples[n]), Real(1e-12));
}

TEST(HighOrder, SingleExponentialTerm) {
  const Signal s = gen_high_order(HighOrderFamily::exponential, 1, 1, {Real(1)}, 3);
  EXPECT_EQ(s.samples[0], 1);
  EXPECT_NEAR(d(s.samples[1]), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(d(s.samples[2]), std::exp(-2.0), 1e-16);
}

TEST(HighOrder, TwoTermDirectSum) {
  const Signal s = gen_high_order(HighOrderFamily::exponential, 2, 1, {Real(1), Real(2)}, 2);
  EXPECT_EQ(s.samples[0], 1);
  EXPECT_LE(abs(s.samples[1] - (exp(Real(-1)) + exp(Real(-1) / 2)) / 2), Real(1e-32));
}

TEST(HighOrder, SinusoidDirectSum) {
  const auto sched = linear_schedule(50);
  const Signal s = gen_high_order(HighOrderFamily::sinusoid, 50, 1, sched, 20);
  for (std::size_t n = 0; n < 20; ++n) {
    Real expected = 0;
    for (int k = 1; k <= 50; ++k) expected += sin(Real(n) / k);
    EXPECT_LE(abs(s.samples[n] - expected / 50), Real(1e-30));
  }
  EXPECT_EQ(s.true_order(), 100u);
}

TEST(HighOrder, RejectsBadSchedule) {
  EXPECT_THROW(gen_high_order(HighOrderFamily::exponential, 2, 1, {Real(1), Real(0)}, 3), std::invalid_argument);
  EXPECT_THROW(gen_high_order(HighOrderFamily::exponential, 2, 1, {Real(1), Real(-1)}, 3), std::invalid_argument);
  EXPECT_THROW(gen_high_order(HighOrderFamily::exponential, 2, 2, linear_schedule(3), 3), std::invalid_argument);
}

TEST(Nonhomogeneous, InitialConditionAndAmplitude) {
  const auto pair = gen_nonhomogeneous(10);
  EXPECT_EQ(pair.y.samples[0], 0);
  EXPECT_NEAR(d(nonhomogeneous_particular_amplitude()), 1.2903225806451613, 1e-15);
  EXPECT_EQ(nonhomogeneous_particular_amplitude(), Real(40) / 31);
  EXPECT_EQ(pair.y.true_order(), 2u);
  EXPECT_EQ(pair.u.samples[0], 1);
}

TEST(Nonhomogeneous, ForwardDifferenceConvergesFirstOrder) {
  // Residual of (y[n+1]-y[n])/T + 0.9 y[n] - u[n] at a fixed time t = 1.
  std::vector<double> residuals;
  for (int e = 1; e <= 3; ++e) {
    const Real period = pow(Real(10), -e);
    const std::size_t n = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
    const auto pair = gen_nonhomogeneous(n + 2, period);
    const auto& y = pair.y.samples;
    const Real r = (y[n + 1] - y[n]) / period + Real(9) / 10 * y[n] - pair.u.samples[n];
    residuals.push_back(std::abs(d(r)));
  }
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    const double ratio = residuals[i - 1] / residuals[i];
    EXPECT_GT(ratio, 8.0);
    EXPECT_LT(ratio, 12.5);
  }
}

TEST(Noise, ZeroAmplitudeIsIdentity) {
  const Signal s = gen_y5(20);
  const Signal out = add_noise(s, {Real(0), 5});
  EXPECT_EQ(out.samples, s.samples);
}

TEST(Noise, DeterministicAndBounded) {
  const Signal s = gen_y5(200);
  const Real a = Real(1) / 100;
  const Signal x = add_noise(s, {a, 42});
  const Signal y = add_noise(s, {a, 42});
  const Signal z = add_noise(s, {a, 43});
  EXPECT_EQ(x.samples, y.samples);
  EXPECT_NE(x.samples, z.samples);
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_LE(abs(x.samples[n] - s.samples[n]), a);
  EXPECT_FALSE(x.true_order().has_value());
}

TEST(Noise, RejectsNegativeAmplitude) {
  EXPECT_THROW(add_noise(gen_y5(3), {Real(-1), 0}), std::invalid_argument);
}

TEST(Offset, IdentityAndRoundTrip) {
  const Signal s = gen_mode_sum(ModeSum({{Real(1), Real(1) / 2}}), 20);
  EXPECT_EQ(add_offset(s, 0).samples, s.samples);
  const Signal back = add_offset(add_offset(s, Real(7) / 3), -Real(7) / 3);
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_LE(abs(back.samples[n] - s.samples[n]), 4 * machine_epsilon());
}

TEST(Offset, AddsConstantMode) {
  const Signal s = gen_mode_sum(ModeSum({{Real(1), Real(1) / 2}}), 20);
  EXPECT_EQ(add_offset(s, 1).true_order(), 2u);
}

TEST(Snr, IdenticalIsInfinite) {
  const Signal s = gen_y5(10);
  EXPECT_TRUE(std::isinf(snr_db(s, s)));
}

TEST(Snr, ScaledCopyIsTwentyDb) {
  const Signal s = gen_y5(50);
  Signal noisy = s;
  for (auto& v : noisy.samples) v += v / 10;
  EXPECT_NEAR(snr_db(s, noisy), 20.0, 1e-12);
}

TEST(Snr, LengthMismatchRejected) {
  EXPECT_THROW(snr_db(gen_y5(10), gen_y5(11)), std::invalid_argument);
}

TEST(Snr, UniformNoiseMonteCarlo) {
  // RMS of Uniform(-a, a) is a / sqrt(3).
  const Real c = 2, a = Real(1) / 5;
  Signal s;
  s.samples.assign(100000, c);
  const Signal noisy = add_noise(s, {a, 2024});
  const double expected = 20 * std::log10(2.0 / (0.2 / std::sqrt(3.0)));
  EXPECT_NEAR(snr_db(s, noisy), expected, 0.05);
}

TEST(Snr, AmplitudeForTargetSnr) {
  const Signal s = gen_mode_sum(ModeSum({{Real(1), Real(1) / 2}}), 4000);
  const Signal noisy = add_noise(s, {noise_amplitude_for_snr(s, 40), 9});
  EXPECT_NEAR(snr_db(s, noisy), 40.0, 0.3);
}

TEST(Validate, Invariants) {
  Signal s;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s.samples = {Real(1), infinity()};
  EXPECT_THROW(validate(s), std::invalid_argument);
  s.samples = {Real(1)};
  s.sample_period = 0;
  EXPECT_THROW(validate(s), std::invalid_argument);
  s.sample_period = 1;
  EXPECT_NO_THROW(validate(s));
}

TEST(RationalSignal, MergesAndEvaluates) {
  const auto r = gen_rational_mode_sum({{mpq_class(1), mpq_class(1, 2)}, {mpq_class(1), mpq_class(1, 2)},
                                        {mpq_class(3), mpq_class(-1, 3)}},
                                       6);
  EXPECT_EQ(r.true_order, 2u);
  EXPECT_EQ(r.samples[2], mpq_class(1, 2) + mpq_class(1, 3));
  const Signal s = r.to_signal();
  for (std::size_t n = 0; n < 6; ++n) EXPECT_LE(abs(s.samples[n] - to_real(r.samples[n])), Real(1e-32));
  EXPECT_THROW(gen_rational_mode_sum({{mpq_class(1), mpq_class(0)}}, 3), std::invalid_argument);
}

TEST(Generators, Deterministic) {
  EXPECT_EQ(gen_y5(30).samples, gen_y5(30).samples);
  EXPECT_EQ(gen_nonhomogeneous(30).y.samples, gen_nonhomogeneous(30).y.samples);
  const auto sched = linear_schedule(50);
  EXPECT_EQ(gen_high_order(HighOrderFamily::sinusoid, 50, 1, sched, 30).samples,
            gen_high_order(HighOrderFamily::sinusoid, 50, 1, sched, 30).samples);
}

TEST(RealFormat, RoundTrips) {
  const Real x = sqrt(Real(2)) / 3;
  EXPECT_EQ(parse_real(format_real(x)), x);
  EXPECT_EQ(format_real(infinity()), "inf");
  EXPECT_THROW(parse_real("abc"), std::invalid_argument);
}

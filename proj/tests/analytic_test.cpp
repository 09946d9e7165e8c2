#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "inert/analytic.hpp"

namespace {

namespace an = inert::analytic;
using inert::GravParams;

// Independent normal CDF.
double phi(double x) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

// P(tau_a <= t) for B_s + m s, a > 0: reflection principle with the
// Girsanov factor.
double first_passage_cdf(double a, double m, double t) {
  const double r = std::sqrt(t);
  return phi((-a + m * t) / r) + std::exp(2.0 * a * m) * phi((-a - m * t) / r);
}

TEST(NormalCdf, AgreesWithIndependentImplementation) {
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    EXPECT_NEAR(an::standard_normal_cdf(x), phi(x), 1e-15) << x;
  }
  EXPECT_EQ(an::standard_normal_cdf(-40.0), 0.0);
  EXPECT_EQ(an::standard_normal_cdf(40.0), 1.0);
}

TEST(StationaryDensity, PeakValue) {
  EXPECT_NEAR(an::stationary_density(-1.0, 0.0, GravParams(1.0)),
              1.1283791670955126, 1e-15);
  EXPECT_NEAR(an::stationary_density(-1.0, 0.0, GravParams(1.0)),
              2.0 / std::sqrt(std::numbers::pi), 1e-15);
}

TEST(StationaryDensity, OffPeakValue) {
  const double oracle = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-2.0);
  EXPECT_NEAR(an::stationary_density(-2.0, 0.5, GravParams(1.0)), oracle,
              1e-15);
  EXPECT_NEAR(oracle, 0.15270951417716433, 1e-15);
}

TEST(StationaryDensity, DecaysInGap) {
  for (double g : {0.3, 1.0, 4.0}) {
    EXPECT_EQ(an::stationary_density(-g, 1e4, GravParams(g)), 0.0);
    EXPECT_LT(an::stationary_density(-g, 20.0 / g, GravParams(g)), 1e-16);
  }
  EXPECT_THROW(an::stationary_density(0.0, -0.1, GravParams(1.0)),
               std::invalid_argument);
}

TEST(StationaryDensity, IntegratesToOne) {
  boost::math::quadrature::tanh_sinh<double> vquad;
  boost::math::quadrature::exp_sinh<double> hquad;
  for (double g : {0.5, 1.0, 2.0}) {
    const GravParams p(g);
    const double total = hquad.integrate([&](double h) {
      return vquad.integrate(
          [&](double v) { return an::stationary_density(v, h, p); },
          -g - 12.0, -g + 12.0);
    });
    EXPECT_NEAR(total, 1.0, 1e-6) << g;
  }
}

TEST(StationaryDensity, MarginalsMatchCdfs) {
  boost::math::quadrature::tanh_sinh<double> quad;
  boost::math::quadrature::exp_sinh<double> hquad;
  const GravParams p(1.3);
  const double g = p.g();
  for (double v : {-3.0, -1.3, -0.5, 0.4}) {
    const double mass = quad.integrate(
        [&](double u) {
          return hquad.integrate(
              [&](double h) { return an::stationary_density(u, h, p); });
        },
        -g - 12.0, v);
    EXPECT_NEAR(mass, an::stationary_v_cdf(v, p), 1e-6) << v;
  }
  for (double h : {0.1, 0.5, 2.0}) {
    const double mass = quad.integrate(
        [&](double k) {
          return quad.integrate(
              [&](double u) { return an::stationary_density(u, k, p); },
              -g - 12.0, -g + 12.0);
        },
        0.0, h);
    EXPECT_NEAR(mass, an::stationary_gap_cdf(h, p), 1e-6) << h;
  }
}

TEST(StationaryVCdf, Values) {
  for (double g : {0.5, 1.0, 3.0}) {
    const GravParams p(g);
    EXPECT_DOUBLE_EQ(an::stationary_v_cdf(-g, p), 0.5);
    EXPECT_EQ(an::stationary_v_cdf(1e6, p), 1.0);
    EXPECT_NEAR(an::stationary_v_cdf(-g + 1.0, p), phi(std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(an::stationary_v_cdf(-g + 1.0, p), 0.9213504, 5e-8);
  }
}

TEST(StationaryGapCdf, Values) {
  for (double g : {0.5, 1.0, 3.0}) {
    const GravParams p(g);
    EXPECT_EQ(an::stationary_gap_cdf(0.0, p), 0.0);
    EXPECT_NEAR(an::stationary_gap_cdf(1.0 / (2.0 * g), p), 1.0 - std::exp(-1.0),
                1e-15);
    EXPECT_NEAR(an::stationary_gap_cdf(1.0 / (2.0 * g), p), 0.6321206, 5e-8);
    const an::StationaryLaw law(p);
    EXPECT_DOUBLE_EQ(law.gap_mean(), 1.0 / (2.0 * g));
    EXPECT_EQ(law.v_variance(), 0.5);
  }
  EXPECT_THROW(an::stationary_gap_cdf(-1.0, GravParams(1.0)),
               std::invalid_argument);
}

TEST(BmSupTail, Values) {
  EXPECT_NEAR(an::bm_sup_tail(1e-14, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(an::bm_sup_tail(1.0, 1.0), 2.0 * (1.0 - phi(1.0)), 1e-15);
  EXPECT_NEAR(an::bm_sup_tail(1.0, 1.0), 0.3173105, 5e-8);
  EXPECT_NEAR(an::bm_sup_tail(2.0, 4.0), an::bm_sup_tail(1.0, 1.0), 1e-15);
}

TEST(BmSupTail, MonotoneAndScaleInvariant) {
  for (double t : {0.1, 1.0, 10.0}) {
    double prev = 2.0;
    for (double x = 0.25; x < 10.0; x += 0.25) {
      const double p = an::bm_sup_tail(x, t);
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_LE(p, prev);
      EXPECT_LE(p, an::bm_sup_tail(x, 2.0 * t));
      for (double c : {0.5, 3.0}) {
        EXPECT_NEAR(an::bm_sup_tail(c * x, c * c * t), p, 1e-14);
      }
      prev = p;
    }
  }
}

TEST(HittingDensity, Values) {
  EXPECT_NEAR(an::bm_drift_hitting_density(1.0, 0.0, 1.0),
              std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(an::bm_drift_hitting_density(1.0, 0.0, 1.0), 0.2419707, 5e-8);
  for (double t = 1e-3; t < 50.0; t *= 1.7) {
    EXPECT_GE(an::bm_drift_hitting_density(-1.5, 0.7, t), 0.0);
  }
}

TEST(HittingDensity, ModeAtOneThirdForZeroDrift) {
  // d/dt of t^{-3/2} exp(-1/(2t)) vanishes at t = 1/3.
  const double mode = 1.0 / 3.0;
  const double f = an::bm_drift_hitting_density(1.0, 0.0, mode);
  EXPECT_GT(f, an::bm_drift_hitting_density(1.0, 0.0, mode - 1e-3));
  EXPECT_GT(f, an::bm_drift_hitting_density(1.0, 0.0, mode + 1e-3));
}

TEST(HittingProb, Values) {
  EXPECT_EQ(an::bm_drift_hitting_prob(1.0, 1.0), 1.0);
  EXPECT_NEAR(an::bm_drift_hitting_prob(1.0, -1.0), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(an::bm_drift_hitting_prob(1.0, -1.0), 0.1353353, 5e-8);
  EXPECT_NEAR(an::bm_drift_hitting_prob(-2.0, 1.0), std::exp(-4.0), 1e-16);
  EXPECT_NEAR(an::bm_drift_hitting_prob(-2.0, 1.0), 0.0183156, 5e-8);
}

TEST(HittingMass, ConvergesToHittingProbability) {
  EXPECT_NEAR(an::bm_drift_hitting_mass(1.0, -1.0, 0.0, 1e3), std::exp(-2.0),
              1e-6);
  for (auto [a, m] : std::vector<std::pair<double, double>>{
           {1.0, -1.0}, {0.5, -2.0}, {-2.0, 1.0}, {2.0, -0.3}}) {
    EXPECT_NEAR(an::bm_drift_hitting_mass(a, m, 0.0, 1e4),
                an::bm_drift_hitting_prob(a, m), 1e-6)
        << a << ' ' << m;
  }
}

TEST(HittingMass, MatchesClosedFormFirstPassageCdf) {
  for (auto [a, m] : std::vector<std::pair<double, double>>{
           {1.0, -1.0}, {1.0, 0.0}, {1.0, 1.0}, {0.3, -2.0}, {2.5, 0.4}}) {
    for (double t : {0.05, 0.3, 1.0, 4.0, 30.0, 200.0}) {
      EXPECT_NEAR(an::bm_drift_hitting_mass(a, m, 0.0, t),
                  first_passage_cdf(a, m, t), 1e-9)
          << a << ' ' << m << ' ' << t;
    }
    // Mirror image for a negative level.
    EXPECT_NEAR(an::bm_drift_hitting_mass(-a, -m, 0.0, 3.0),
                first_passage_cdf(a, m, 3.0), 1e-9);
  }
  const double piece = an::bm_drift_hitting_mass(1.0, -1.0, 0.7, 1.9);
  EXPECT_NEAR(piece,
              first_passage_cdf(1.0, -1.0, 1.9) - first_passage_cdf(1.0, -1.0, 0.7),
              1e-10);
}

TEST(HittingDensity, RejectsBadArguments) {
  EXPECT_THROW(an::bm_drift_hitting_density(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(an::bm_drift_hitting_density(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST(SkorokhodLinear, Values) {
  const std::vector<an::PathPoint> flat{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  EXPECT_EQ(an::skorokhod_linear(flat, 1.0), 0.0);
  const std::vector<an::PathPoint> two{{0.0, 0.0}, {1.0, 2.0}};
  EXPECT_EQ(an::skorokhod_linear(two, 1.0), 1.0);
  const std::vector<an::PathPoint> three{{0.0, 0.0}, {1.0, -1.0}, {2.0, 3.0}};
  EXPECT_EQ(an::skorokhod_linear(three, 0.5), 2.0);
  EXPECT_THROW(an::skorokhod_linear(std::vector<an::PathPoint>{}, 1.0),
               std::invalid_argument);
}

TEST(SkorokhodLinear, MonotoneInPrefixLength) {
  std::vector<an::PathPoint> path;
  double b = 0.0;
  double prev = 0.0;
  unsigned state = 12345;
  for (int i = 0; i < 500; ++i) {
    state = state * 1103515245u + 12345u;
    b += (static_cast<double>(state >> 8) / 16777216.0 - 0.5) * 0.3;
    path.push_back({0.01 * i, b});
    const double val = an::skorokhod_linear(path, 0.4);
    EXPECT_GE(val, prev);
    prev = val;
  }
}

}  // namespace

#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "wsncalc/curve.hpp"
#include "wsncalc/errors.hpp"

using namespace wsncalc;
using doctest::Approx;

TEST_SUITE("curve") {
  TEST_CASE("construction rejects malformed curves") {
    CHECK_THROWS_AS(Curve({}), InvalidCurve);
    CHECK_THROWS_AS(Curve({{1.0, 0.0, 1.0}}), InvalidCurve);
    CHECK_THROWS_AS(Curve({{0.0, 0.0, -1.0}}), InvalidCurve);
    CHECK_THROWS_AS(Curve({{0.0, -1.0, 1.0}}), InvalidCurve);
    CHECK_THROWS_AS(Curve({{0.0, 5.0, 0.0}, {1.0, 4.0, 0.0}}), InvalidCurve);
    CHECK_THROWS_AS(Curve({{0.0, 0.0, 1.0}, {2.0, 3.0, 1.0}, {2.0, 4.0, 0.0}}), InvalidCurve);
    CHECK_THROWS_AS(Curve::rate_latency(0.0, 1.0), InvalidCurve);
    CHECK_THROWS_AS(Curve::burst_delay(-1.0), InvalidCurve);
  }

  TEST_CASE("canonical form merges collinear continuous segments") {
    Curve c({{0.0, 0.0, 2.0}, {1.0, 2.0, 2.0}, {3.0, 6.0, 1.0}});
    REQUIRE(c.segments().size() == 2);
    CHECK(c.segments()[1].start == 3.0);
    // A jump keeps the breakpoint.
    Curve j({{0.0, 0.0, 2.0}, {1.0, 3.0, 2.0}});
    CHECK(j.segments().size() == 2);
  }

  TEST_CASE("eval is left-continuous after 0 and right-limited at 0") {
    Curve rl = Curve::rate_latency(100.0, 1.0);
    CHECK(rl.eval(1.0).value() == 0.0);
    CHECK(rl.eval(3.0).value() == Approx(200.0));
    Curve tb = Curve::affine(0.5, 30.0);
    CHECK(tb.eval(10.0).value() == Approx(35.0));
    CHECK(tb.eval(0.0).value() == 30.0);
    Curve step({{0.0, 0.0, 0.0}, {2.0, 5.0, 0.0}});
    CHECK(step.eval(2.0).value() == 0.0);
    CHECK(step.right_limit(2.0).value() == 5.0);
    Curve bd = Curve::burst_delay(2.0);
    CHECK(bd.eval(2.0).value() == 0.0);
    CHECK(bd.eval(2.0001).is_infinite());
  }

  TEST_CASE("extended values") {
    CHECK(Extended::infinite().is_infinite());
    CHECK_THROWS_AS(Extended::infinite().value(), InvalidArgument);
    CHECK(Extended(3.0) < Extended::infinite());
    CHECK_FALSE(Extended::infinite() < Extended(3.0));
    CHECK((Extended(1.0) + Extended::infinite()).is_infinite());
    CHECK(Extended(2.0).value_or(7.0) == 2.0);
    CHECK(Extended::infinite().to_string() == "inf");
  }

  TEST_CASE("burst-delay at 0 is the identity of convolution") {
    const Curve delta0 = Curve::burst_delay(0.0);
    for (const Curve& f : {Curve::affine(1.22, 480.0), Curve::rate_latency(198.86, 7.9), Curve::zero(),
                           Curve::burst_delay(3.0)}) {
      CHECK(convolve(delta0, f).approx_equal(f));
    }
  }

  TEST_CASE("rate-latency concatenation") {
    Curve got = convolve(Curve::rate_latency(540.0, 5.8), Curve::rate_latency(510.0, 7.8));
    CHECK(got.approx_equal(Curve::rate_latency(510.0, 13.6)));
  }

  TEST_CASE("burst-delay shifts a curve right") {
    Curve f = Curve::rate_latency(100.0, 1.0);
    CHECK(convolve(f, Curve::burst_delay(2.0)).approx_equal(Curve::rate_latency(100.0, 3.0)));
    Curve tb = Curve::affine(0.5, 30.0);
    Curve shifted = convolve(tb, Curve::burst_delay(2.0));
    // f(0) is the burst, so the shifted curve holds it from 0 to the delay.
    CHECK(shifted.eval(1.0).value() == Approx(30.0));
    CHECK(shifted.eval(2.0).value() == Approx(30.0));
    CHECK(shifted.eval(12.0).value() == Approx(35.0));
  }

  TEST_CASE("convolution takes f(0) as the right limit") {
    // (10 + t) * beta_{5,2}: the burst is present from t = 0 on.
    Curve c = convolve(Curve::affine(1.0, 10.0), Curve::rate_latency(5.0, 2.0));
    CHECK(c.eval(0.0).value() == Approx(10.0));
    CHECK(c.eval(2.0).value() == Approx(10.0));
    CHECK(c.eval(4.0).value() == Approx(12.0));
    CHECK(c.eval(14.0).value() == Approx(22.0));
    CHECK(c.final_slope() == Approx(1.0));
  }

  TEST_CASE("convolution algebra on random curves") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
      Curve f = testing_corpus::random_curve(rng);
      Curve g = testing_corpus::random_curve(rng);
      Curve h = testing_corpus::random_curve(rng);
      CHECK(convolve(f, g).approx_equal(convolve(g, f)));
      CHECK(convolve(convolve(f, g), h).approx_equal(convolve(f, convolve(g, h))));
    }
  }

  TEST_CASE("min_of and sum_of") {
    Curve f = Curve::affine(1.22, 480.0);
    CHECK(min_of(f, f).approx_equal(f));
    CHECK(sum_of(f, Curve::zero()).approx_equal(f));
    Curve a1 = sum_of(sum_of(Curve::affine(0.5, 30.0), Curve::affine(0.3, 300.0)), Curve::affine(0.42, 150.0));
    CHECK(a1.approx_equal(Curve::affine(1.22, 480.0)));
    Curve m = min_of(Curve::affine(4.0, 10.0), Curve::affine(1.0, 40.0));
    REQUIRE(m.segments().size() == 2);
    CHECK(m.segments()[1].start == Approx(10.0));
    CHECK(m.final_slope() == 1.0);
  }

  TEST_CASE("vertical deviation") {
    Curve alpha = Curve::affine(1.22, 480.0);
    Curve beta = Curve::rate_latency(198.86, 7.9);
    CHECK(v_dev(alpha, beta).value() == Approx(489.638));
    Curve rl = Curve::rate_latency(100.0, 1.0);
    CHECK(v_dev(rl, rl).value() == Approx(0.0));
    CHECK(v_dev(Curve::affine(2.36, 0.0), Curve::rate_latency(1.0, 0.0)).is_infinite());
  }

  TEST_CASE("horizontal deviation") {
    Curve alpha = Curve::affine(1.22, 480.0);
    Curve beta = Curve::rate_latency(198.86, 7.9);
    CHECK(h_dev(alpha, beta).value() == Approx(7.9 + 480.0 / 198.86));
    Curve rl = Curve::rate_latency(100.0, 1.0);
    CHECK(h_dev(rl, rl).value() == Approx(0.0));
    CHECK(h_dev(Curve::affine(2.36, 1.0), Curve::rate_latency(1.0, 0.0)).is_infinite());
    // Against a burst-delay curve the delay is at most d.
    CHECK(h_dev(alpha, Curve::burst_delay(2.0)).value() == Approx(2.0));
  }

  TEST_CASE("deviations are monotone in the service rate") {
    Curve alpha = Curve::affine(1.22, 480.0);
    double prev_q = 1e300, prev_d = 1e300;
    for (double r = 2.0; r <= 400.0; r *= 1.5) {
      Curve beta = Curve::rate_latency(r, 3.0);
      double q = v_dev(alpha, beta).value();
      double d = h_dev(alpha, beta).value();
      CHECK(q <= prev_q + 1e-9);
      CHECK(d <= prev_d + 1e-9);
      CHECK(q >= 0.0);
      CHECK(d >= 0.0);
      prev_q = q;
      prev_d = d;
    }
  }

  TEST_CASE("effective bandwidth") {
    Curve a3 = Curve::affine(0.3, 200.0);
    CHECK(effective_bandwidth(a3, 8.91).value() == Approx(200.0 / 8.91));
    CHECK(effective_bandwidth(Curve::affine(0.3, 0.0), 5.0).value() == Approx(0.3));
    CHECK_THROWS_AS(effective_bandwidth(a3, 0.0), InvalidArgument);
    // Concave envelope: the supremum may sit at a breakpoint.
    Curve m = min_of(Curve::affine(4.0, 10.0), Curve::affine(1.0, 40.0));
    CHECK(effective_bandwidth(m, 1.0).value() == Approx(10.0));
  }

  TEST_CASE("token-bucket envelope") {
    TokenBucketEnvelope env{{{4.0, 10.0}, {1.0, 40.0}}};
    CHECK(env.to_curve().eval(5.0).value() == Approx(30.0));
    CHECK(env.to_curve().eval(20.0).value() == Approx(60.0));
    TokenBucket tail = env.affine_bound();
    CHECK(tail.rate == 1.0);
    CHECK(tail.burst == 40.0);
    CHECK_THROWS_AS(TokenBucketEnvelope{}.validate(), InvalidArgument);
    CHECK_THROWS_AS((TokenBucketEnvelope{{{-1.0, 1.0}}}.validate()), InvalidArgument);
  }
}

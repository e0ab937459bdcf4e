#include <doctest.h>

#include <cmath>
#include <random>

#include "tsito/scale_spec.hpp"
#include "tsito/summation.hpp"
#include "tsito/time_scale.hpp"

using namespace tsito;

namespace {

TimeScale two_intervals() { return TimeScale::canonicalize({piece::Interval{0, 1}, piece::Interval{2, 3}}); }
TimeScale qscale(int kmin = -3, int kmax = 3) {
  return TimeScale::canonicalize({piece::QScale{2.0, kmin, kmax, true}});
}
TimeScale mixed() {
  return TimeScale::canonicalize({piece::Interval{0, 1}, piece::Point{1.5}, piece::Interval{2, 3}});
}

}  // namespace

TEST_CASE("canonicalize expands q-scales and merges pieces") {
  const auto q = qscale();
  std::vector<double> pts;
  for (const auto& s : q.segments()) {
    CHECK(s.is_point());
    pts.push_back(s.a);
  }
  CHECK(pts == std::vector<double>{0, 0.125, 0.25, 0.5, 1, 2, 4, 8});

  const auto merged = TimeScale::canonicalize({piece::Interval{0, 1}, piece::Interval{0.5, 2}});
  REQUIRE(merged.segments().size() == 1);
  CHECK(merged.segments()[0] == Segment{0, 2});

  const auto absorbed = TimeScale::canonicalize({piece::Interval{0, 1}, piece::Point{1}});
  REQUIRE(absorbed.segments().size() == 1);
  CHECK(absorbed.segments()[0] == Segment{0, 1});

  // touching closed intervals are one segment
  const auto touching = TimeScale::canonicalize({piece::Interval{1, 2}, piece::Interval{0, 1}});
  CHECK(touching.segments().size() == 1);
}

TEST_CASE("canonicalize rejects invalid input") {
  CHECK_THROWS_AS(TimeScale::canonicalize({}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::Point{-1}}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::Interval{-1, 2}}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::QScale{1.0, 0, 3, false}}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::QScale{0.5, 0, 3, false}}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::Interval{2, 1}}), ScaleError);
  CHECK_THROWS_AS(TimeScale::canonicalize({piece::QScale{2.0, -100, 100, true}}, 50), ScaleError);
}

TEST_CASE("jump operators and graininess") {
  const auto q = qscale();
  CHECK(q.sigma(4) == 8);
  CHECK(q.rho(4) == 2);
  CHECK(q.mu(4) == 4);

  const auto unit = TimeScale::canonicalize({piece::Interval{0, 1}});
  CHECK(unit.sigma(0.5) == 0.5);
  CHECK(unit.rho(0.5) == 0.5);
  CHECK(unit.mu(0.5) == 0.0);

  const auto ti = two_intervals();
  CHECK(ti.sigma(1) == 2);
  CHECK(ti.rho(2) == 1);
  CHECK(ti.mu(1) == 1);

  // conventions at the ends of the scale
  CHECK(ti.sigma(3) == 3);
  CHECK(ti.rho(0) == 0);
  CHECK(q.sigma(8) == 8);

  CHECK_THROWS_AS(ti.sigma(1.5), ScaleError);
  CHECK_THROWS_AS(ti.rho(1.5), ScaleError);
  CHECK_THROWS_AS(ti.mu(5), ScaleError);
}

TEST_CASE("q-scale jump identities hold at every nonzero point") {
  for (double q : {1.5, 2.0, 3.0}) {
    const auto scale = TimeScale::canonicalize({piece::QScale{q, -10, 10, true}});
    const auto& segs = scale.segments();
    for (std::size_t i = 1; i + 1 < segs.size(); ++i) {
      const double t = segs[i].a;
      CHECK(scale.sigma(t) == doctest::Approx(q * t).epsilon(1e-14));
      CHECK(scale.rho(segs[i + 1].a) == t);
      if (i > 1) {
        CHECK(scale.rho(t) == doctest::Approx(t / q).epsilon(1e-14));
      }
      CHECK(scale.mu(t) == doctest::Approx((q - 1) * t).epsilon(1e-13));
    }
  }
}

TEST_CASE("sup_le") {
  const auto ti = two_intervals();
  CHECK(ti.sup_le(1.5) == 1);
  CHECK(ti.sup_le(2.5) == 2.5);
  CHECK(ti.sup_le(10) == 3);
  CHECK(qscale().sup_le(3) == 2);
  const auto shifted = TimeScale::canonicalize({piece::Interval{1, 2}});
  CHECK_THROWS_AS(shifted.sup_le(0.5), ScaleError);
}

TEST_CASE("gaps_between") {
  const auto ti = two_intervals();
  const auto g = ti.gaps_between(0, 3);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == GapInterval{1, 2});

  const auto qg = qscale().gaps_between(1, 8);
  CHECK(qg == std::vector<GapInterval>{{1, 2}, {2, 4}, {4, 8}});

  const auto dense = TimeScale::canonicalize({piece::Interval{0, 3}});
  CHECK(dense.gaps_between(0.5, 2.5).empty());

  CHECK_THROWS_AS(ti.gaps_between(0, 1.5), ScaleError);
}

TEST_CASE("gap structure properties") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScalePiece> pieces;
    for (int k = 0; k < 6; ++k) {
      const double a = u(gen);
      if (k % 3 == 0) {
        pieces.emplace_back(piece::Point{a});
      } else {
        pieces.emplace_back(piece::Interval{a, a + u(gen) / 10});
      }
    }
    const auto scale = TimeScale::canonicalize(pieces);
    const auto gaps = scale.gaps_between(scale.min(), scale.max());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const auto& g = gaps[i];
      CHECK(g.s_minus < g.s_plus);
      CHECK_FALSE(scale.contains(0.5 * (g.s_minus + g.s_plus)));
      CHECK(scale.sigma(g.s_minus) == g.s_plus);
      CHECK(scale.rho(g.s_plus) == g.s_minus);
      if (i > 0) CHECK(gaps[i - 1].s_plus <= g.s_minus);
    }
    for (const auto& seg : scale.segments()) {
      for (double t : {seg.a, seg.b}) {
        if (scale.sigma(t) > t) CHECK(scale.rho(scale.sigma(t)) == t);
        if (scale.rho(t) < t) CHECK(scale.sigma(scale.rho(t)) == t);
      }
    }
  }
}

TEST_CASE("partition of a discrete scale uses every point and labels only gaps") {
  const auto q = qscale();
  const auto p = partition(q, 0, 8, 5);
  CHECK(p.times == std::vector<double>{0, 0.125, 0.25, 0.5, 1, 2, 4, 8});
  for (auto l : p.labels) CHECK(l == SubintervalClass::gap);
}

TEST_CASE("partition of [0,1] at level 3 is the dyadic grid") {
  const auto unit = TimeScale::canonicalize({piece::Interval{0, 1}});
  const auto p = partition(unit, 0, 1, 3);
  REQUIRE(p.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(p.times[i] == i / 8.0);
  for (auto l : p.labels) CHECK(l == SubintervalClass::dense);
}

TEST_CASE("partition labels the gap of [0,1] u [2,3] as (b)") {
  const auto p = partition(two_intervals(), 0, 3, 1);
  CHECK(p.times == std::vector<double>{0, 0.5, 1, 2, 2.5, 3});
  CHECK(p.labels == std::vector<SubintervalClass>{SubintervalClass::dense, SubintervalClass::dense,
                                                  SubintervalClass::gap, SubintervalClass::dense,
                                                  SubintervalClass::dense});
}

TEST_CASE("partition invariants on mixed scales") {
  const std::vector<TimeScale> scales{
      mixed(), two_intervals(), qscale(),
      TimeScale::canonicalize({piece::Interval{0.3, 1.7}, piece::Point{2.2}, piece::Interval{2.9, 5.05},
                               piece::QScale{3.0, -2, 1, false}})};
  for (const auto& scale : scales) {
    for (int n = 0; n <= 9; ++n) {
      const auto p = partition(scale, scale.min(), scale.max(), n);
      REQUIRE(p.labels.size() + 1 == p.times.size());
      for (const auto& g : scale.gaps_between(scale.min(), scale.max())) {
        CHECK(p.has_time(g.s_minus));
        CHECK(p.has_time(g.s_plus));
      }
      CompensatedSum total;
      for (std::size_t i = 1; i < p.size(); ++i) {
        const double lo = p.times[i - 1];
        const double hi = p.times[i];
        CHECK(lo < hi);
        CHECK(scale.contains(hi));
        CHECK(scale.rho(hi) - lo <= std::ldexp(1.0, -n));
        const bool is_gap = scale.sigma(lo) == hi && hi > lo && !scale.contains(0.5 * (lo + hi));
        CHECK((p.labels[i - 1] == SubintervalClass::gap) == is_gap);
        if (!is_gap) CHECK(hi - lo <= std::ldexp(1.0, -n));
        total += hi - lo;
      }
      CHECK(total.value() == doctest::Approx(scale.max() - scale.min()).epsilon(1e-14));
      if (n > 0) CHECK(refines(p, partition(scale, scale.min(), scale.max(), n - 1)));
    }
  }
}

TEST_CASE("subinterval lengths sum exactly on dyadic scales") {
  for (int n = 0; n < 12; ++n) {
    const auto p = partition(mixed(), 0, 3, n);
    double total = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i) total += p.times[i] - p.times[i - 1];
    CHECK(total == 3.0);
  }
}

TEST_CASE("partition errors") {
  const auto ti = two_intervals();
  CHECK_THROWS_AS(partition(ti, 1, 1, 3), ScaleError);
  CHECK_THROWS_AS(partition(ti, 2, 1, 3), ScaleError);
  CHECK_THROWS_AS(partition(ti, 0, 1.5, 3), ScaleError);
  CHECK_THROWS_AS(partition(ti, 0, 3, -1), ScaleError);
}

TEST_CASE("scale spec JSON") {
  const auto scale = scale_from_json(nlohmann::json::parse(
      R"({"pieces":[{"interval":[2,3]},{"point":1.5},{"interval":[0,1]},)"
      R"({"qscale":{"q":2.0,"kmin":-2,"kmax":-1,"include_zero":true}}]})"));
  CHECK(scale.segments() == std::vector<Segment>{{0, 1}, {1.5, 1.5}, {2, 3}});
  CHECK(scale_from_json(scale_to_json(scale)).segments() == scale.segments());

  CHECK_THROWS_AS(scale_from_json(nlohmann::json::parse(R"({"pieces":[]})")), ScaleError);
  CHECK_THROWS_AS(scale_from_json(nlohmann::json::parse(R"({"pieces":[{"ray":1}]})")), ScaleError);
  CHECK_THROWS_AS(scale_from_json(nlohmann::json::parse(R"({"pieces":[{"interval":[1]}]})")), ScaleError);
  CHECK_THROWS_AS(scale_from_json(nlohmann::json::parse(R"([1,2])")), ScaleError);
  CHECK_THROWS_AS(load_scale_file("/nonexistent/scale.json"), ScaleError);
}

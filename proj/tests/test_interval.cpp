#include "bsq/interval.hpp"

#include <cmath>

#include "doctest.h"

using namespace bsq;

namespace {

ParamSpacePtr unit_square() {
  return std::make_shared<ParamSpace>(
      std::vector<ParamSpace::Dim>{{"t1", 0.0, 1.0}, {"t2", 0.0, 1.0}});
}

ParamSpacePtr unit_cube() {
  return std::make_shared<ParamSpace>(
      std::vector<ParamSpace::Dim>{{"t1", 0.0, 1.0}, {"t2", 0.0, 1.0}, {"t3", 0.0, 1.0}});
}

IntervalSet box2(const ParamSpacePtr& sp, double x0, double x1, double y0, double y1) {
  std::vector<Box> b;
  b.emplace_back(std::vector<double>{x0, y0}, std::vector<double>{x1, y1});
  return IntervalSet::from_boxes(sp, std::move(b));
}

// Monte-Carlo membership estimate, used as the independent volume oracle.
double mc_volume(const IntervalSet& s, int n, std::uint64_t seed) {
  Rng rng(seed);
  int hits = 0;
  std::vector<double> p(s.space()->size());
  for (int i = 0; i < n; ++i) {
    for (auto& x : p) x = rng.uniform01();
    if (s.contains(p)) ++hits;
  }
  return double(hits) / n;
}

}  // namespace

TEST_SUITE("interval") {

TEST_CASE("from_constraint clamps to the domain") {
  auto sp = unit_square();
  auto lt = IntervalSet::from_constraint(sp, 0, Cmp::Lt, 0.6);
  CHECK(lt == box2(sp, 0.0, 0.6, 0.0, 1.0));

  auto ge = IntervalSet::from_constraint(sp, 0, Cmp::Ge, 0.6);
  CHECK(ge == box2(sp, 0.6, 1.0, 0.0, 1.0));

  auto above = IntervalSet::from_constraint(sp, 1, Cmp::Gt, 1.5);
  CHECK(above.empty());

  CHECK_THROWS_AS(IntervalSet::from_constraint(sp, 5, Cmp::Lt, 0.5), Error);
  CHECK_THROWS_AS(IntervalSet::from_constraint(sp, 0, Cmp::Lt, std::nan("")), Error);
}

TEST_CASE("strict and non-strict constraints canonicalize identically") {
  auto sp = unit_square();
  CHECK(IntervalSet::from_constraint(sp, 0, Cmp::Lt, 0.3) ==
        IntervalSet::from_constraint(sp, 0, Cmp::Le, 0.3));
  CHECK(IntervalSet::from_constraint(sp, 0, Cmp::Gt, 0.3) ==
        IntervalSet::from_constraint(sp, 0, Cmp::Ge, 0.3));
}

TEST_CASE("constraint and its complement tile the domain exactly") {
  auto sp = unit_square();
  for (double bound : {0.0, 0.25, 0.5, 0.977, 1.0}) {
    auto a = IntervalSet::from_constraint(sp, 1, Cmp::Gt, bound);
    auto b = IntervalSet::from_constraint(sp, 1, Cmp::Le, bound);
    CHECK(b == a.complement());
    CHECK(a.intersect(b).empty());
    CHECK(a.unite(b).volume() == 1.0);  // exact, not approximate
    CHECK(a.unite(b) == IntervalSet::full(sp));
  }
}

TEST_CASE("intersect basics") {
  auto sp = unit_square();
  auto a = box2(sp, 0.0, 0.6, 0.0, 1.0);
  auto b = box2(sp, 0.5, 1.0, 0.0, 1.0);
  CHECK(a.intersect(b) == box2(sp, 0.5, 0.6, 0.0, 1.0));
  CHECK(a.intersect(IntervalSet::full(sp)) == a);
  CHECK(box2(sp, 0.0, 0.3, 0.0, 1.0).intersect(b).empty());
}

TEST_CASE("subtract basics and frame decomposition") {
  auto sp = unit_square();
  auto full = IntervalSet::full(sp);
  CHECK(full.subtract(box2(sp, 0.0, 0.5, 0.0, 1.0)) == box2(sp, 0.5, 1.0, 0.0, 1.0));

  auto a = box2(sp, 0.1, 0.9, 0.2, 0.8);
  CHECK(a.subtract(a).empty());

  // frame around the middle box; MC oracle pins the volume
  auto mid = box2(sp, 0.25, 0.75, 0.25, 0.75);
  auto frame = full.subtract(mid);
  CHECK(frame.volume() == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(mc_volume(frame, 100000, 99) == doctest::Approx(0.75).epsilon(0.007));
  CHECK(frame.boxes().size() == 4);
}

TEST_CASE("volume") {
  auto sp = unit_square();
  CHECK(box2(sp, 0.0, 0.5, 0.0, 0.5).volume() == doctest::Approx(0.25));
  CHECK(IntervalSet::empty(sp).volume() == 0.0);
  CHECK(IntervalSet::full(unit_cube()).volume() == doctest::Approx(1.0));
}

TEST_CASE("conservation: subtract plus intersect preserves volume") {
  auto sp = unit_cube();
  Rng rng(7);
  for (int iter = 0; iter < 10000; ++iter) {
    auto rand_set = [&](int nboxes) {
      std::vector<Box> bs;
      for (int i = 0; i < nboxes; ++i) {
        std::vector<double> lo(3), hi(3);
        for (int d = 0; d < 3; ++d) {
          double a = rng.uniform01(), b = rng.uniform01();
          lo[d] = std::min(a, b);
          hi[d] = std::max(a, b);
        }
        bs.emplace_back(lo, hi);
      }
      return IntervalSet::from_boxes(sp, std::move(bs));
    };
    auto a = rand_set(1 + int(rng.index(3)));
    auto b = rand_set(1 + int(rng.index(3)));
    double lhs = a.volume();
    double rhs = a.subtract(b).volume() + a.intersect(b).volume();
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("canonical equality across operation orders") {
  auto sp = unit_square();
  auto left = box2(sp, 0.0, 0.5, 0.0, 1.0);
  auto right = box2(sp, 0.5, 1.0, 0.0, 1.0);
  auto top = box2(sp, 0.0, 1.0, 0.5, 1.0);
  auto bottom = box2(sp, 0.0, 1.0, 0.0, 0.5);

  auto via_lr = left.unite(right);
  auto via_tb = top.unite(bottom);
  CHECK(via_lr == via_tb);
  CHECK(via_lr == IntervalSet::full(sp));
  CHECK(via_lr.boxes().size() == 1);

  // same L-shape assembled two different ways
  auto l1 = left.unite(bottom);
  auto l2 = IntervalSet::full(sp).subtract(box2(sp, 0.5, 1.0, 0.5, 1.0));
  CHECK(l1 == l2);
  CHECK(l1.dump() == l2.dump());
}

TEST_CASE("contains respects half-open bounds") {
  auto sp = unit_square();
  auto a = box2(sp, 0.0, 0.5, 0.0, 1.0);
  CHECK_FALSE(a.contains(std::vector<double>{0.5, 0.2}));
  CHECK(a.contains(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(IntervalSet::empty(sp).contains(std::vector<double>{0.1, 0.1}));
  CHECK_THROWS_AS(a.contains(std::vector<double>{0.1}), DimensionMismatch);
}

TEST_CASE("sample_uniform membership, determinism, and mean") {
  auto sp = unit_square();
  auto a = box2(sp, 0.0, 0.5, 0.0, 1.0);
  Rng r1(42), r2(42);
  auto p1 = a.sample_uniform(r1);
  auto p2 = a.sample_uniform(r2);
  CHECK(p1 == p2);
  CHECK(p1[0] < 0.5);

  Rng rng(5);
  auto full = IntervalSet::full(sp);
  double sx = 0, sy = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto p = full.sample_uniform(rng);
    CHECK(full.contains(p));
    sx += p[0];
    sy += p[1];
  }
  CHECK(sx / n == doctest::Approx(0.5).epsilon(0.04));
  CHECK(sy / n == doctest::Approx(0.5).epsilon(0.04));

  CHECK_THROWS_AS(IntervalSet::empty(sp).sample_uniform(rng), Error);
}

TEST_CASE("samples from a multi-box set always satisfy contains") {
  auto sp = unit_square();
  auto s = box2(sp, 0.0, 0.3, 0.0, 1.0).unite(box2(sp, 0.7, 1.0, 0.0, 0.4));
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) CHECK(s.contains(s.sample_uniform(rng)));
}

TEST_CASE("dump format") {
  auto sp = unit_square();
  auto s = box2(sp, 0.0, 0.5, 0.0, 1.0);
  CHECK(s.dump() == "[0,0.5)x[0,1)");
  CHECK(IntervalSet::empty(sp).dump().empty());
}

TEST_CASE("dimension mismatch is rejected") {
  auto a = IntervalSet::full(unit_square());
  auto b = IntervalSet::full(unit_cube());
  CHECK_THROWS_AS(a.intersect(b), DimensionMismatch);
  CHECK_THROWS_AS(a.subtract(b), DimensionMismatch);
}

TEST_CASE("canonical_less orders deterministically") {
  auto sp = unit_square();
  auto a = box2(sp, 0.0, 0.5, 0.0, 1.0);
  auto b = box2(sp, 0.5, 1.0, 0.0, 1.0);
  CHECK(a.canonical_less(b));
  CHECK_FALSE(b.canonical_less(a));
  CHECK_FALSE(a.canonical_less(a));
  CHECK(IntervalSet::empty(sp).canonical_less(a));
}

}  // TEST_SUITE

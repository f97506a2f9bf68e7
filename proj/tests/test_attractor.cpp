#include "doctest.h"

#include <memory>
#include <random>

#include "sftlab/attractor.hpp"
#include "support.hpp"

using namespace sftlab;

namespace {

RatBox box1d(const Rat& lo, const Rat& hi) { return RatBox{{lo}, {hi}}; }

// f(x) = x/2 on [-1, 1]; attractor {0}.
std::shared_ptr<AffineOracle> halving_oracle() {
  return std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(1, 2)}}, RatVec{Rat(0)},
      box1d(Rat(-1), Rat(1)));
}

TrapRegion halving_trap() {
  TrapRegion trap;
  trap.cells = {DyadicCell(1, {Int(-1)}), DyadicCell(1, {Int(0)})};  // [-1/2, 1/2]
  trap.lipschitz = Rat(1, 2);
  return trap;
}

// The 3-4-5 rational rotation composed with r -> 1/2 + r/2; attractor is
// the unit circle.
std::shared_ptr<SpiralOracle> spiral_oracle() {
  RatBox dom{{Rat(-2), Rat(-2)}, {Rat(2), Rat(2)}};
  return std::make_shared<SpiralOracle>(Rat(1, 2), Rat(1, 4), dom);
}

// Level-2 cells meeting the annulus 3/4 <= |x| <= 5/4.
TrapRegion spiral_trap() {
  TrapRegion trap;
  for (int kx = -8; kx < 8; ++kx)
    for (int ky = -8; ky < 8; ++ky) {
      DyadicCell cell(2, {Int(kx), Int(ky)});
      auto [lo2, hi2] = norm2_range(cell.box());
      if (lo2 <= Rat(25, 16) && hi2 >= Rat(9, 16))
        trap.cells.push_back(cell);
    }
  trap.lipschitz = Rat(4);
  return trap;
}

}  // namespace

TEST_CASE("dyadic values canonicalize") {
  Dyadic d(Int(4), 2);  // 4/4 = 1
  CHECK(d.num == 1);
  CHECK(d.level == 0);
  CHECK(Dyadic(Int(3), 2).value() == Rat(3, 4));
  DyadicCell c(1, {Int(-1)});
  CHECK(c.box().lo[0] == Rat(-1, 2));
  CHECK(c.box().hi[0] == Rat(0));
  CHECK(c.children().size() == 2);
}

TEST_CASE("oracle queries read finitely many digits and are locally constant") {
  auto f = halving_oracle();
  std::vector<EffectiveMapOracle::Tie> up{EffectiveMapOracle::Tie::Up};
  auto a = f->query({Rat(1, 3)}, up, 8);
  CHECK(a.digits_read >= 0);

  // Any point sharing the first digits_read digits gets the same answer.
  Rat unit = pow2(-a.digits_read);
  Rat cell_lo = Rat(rat_floor(Rat(1, 3) / unit)) * unit;
  Rat probe = cell_lo + unit / 7;
  auto b = f->query({probe}, up, 8);
  CHECK(b.digits_read == a.digits_read);
  CHECK(b.value == a.value);

  // And the answer is a true 1/8-approximation of f.
  CHECK(abs(a.value[0] - Rat(1, 6)) <= Rat(1, 8));
}

TEST_CASE("query tie directions select the two dyadic representations") {
  auto f = halving_oracle();
  auto up = f->query({Rat(1, 2)}, {EffectiveMapOracle::Tie::Up}, 64);
  auto down = f->query({Rat(1, 2)}, {EffectiveMapOracle::Tie::Down}, 64);
  // Up cell sits above 1/2, down cell below; both answers approximate 1/4.
  CHECK(abs(up.value[0] - Rat(1, 4)) <= Rat(1, 64));
  CHECK(abs(down.value[0] - Rat(1, 4)) <= Rat(1, 64));
  CHECK(up.value != down.value);
}

TEST_CASE("approx_image is two-sided accurate for exact affine images") {
  std::mt19937_64 rng(8675309);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + static_cast<int>(rng() % 2);
    // Random diagonal affine map with moderate rational entries.
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d, Rat(0)));
    RatVec off(d);
    for (int i = 0; i < d; ++i) {
      m[i][i] = Rat(1 + static_cast<int>(rng() % 3),
                    2 + static_cast<int>(rng() % 3));
      if (rng() % 2) m[i][i] = -m[i][i];
      off[i] = Rat(static_cast<int>(rng() % 5) - 2, 1 + static_cast<int>(rng() % 3));
    }
    RatBox dom;
    dom.lo.assign(d, Rat(-16));
    dom.hi.assign(d, Rat(16));
    AffineOracle f(m, off, dom);

    int level = 1 + static_cast<int>(rng() % 3);
    std::vector<Int> corner(d);
    for (int i = 0; i < d; ++i)
      corner[i] = Int(static_cast<int>(rng() % 5) - 2);
    DyadicCell cell(level, corner);
    std::uint64_t n = 1 + rng() % 16;

    auto points = approx_image(f, cell, n);
    REQUIRE_FALSE(points.empty());
    RatBox image = f.exact_image(cell.box());
    Rat m_tol = Rat(1, Int(5 * n));

    // (i) every point is within 1/m of f(D) (exactly: of the image box).
    for (const auto& p : points) CHECK(dist_point_box(p, image) <= m_tol);

    // (ii) the image box is covered by 1/m-balls around the points, checked
    // by recursive subdivision; only candidates whose ball still meets the
    // current box are carried down a branch.
    std::function<bool(const RatBox&, const std::vector<int>&, int)> covered =
        [&](const RatBox& box, const std::vector<int>& cand, int depth) -> bool {
      std::vector<int> live;
      for (int idx : cand) {
        const auto& p = points[idx];
        bool inside = true, touches = true;
        for (int i = 0; i < d; ++i) {
          if (box.lo[i] < p[i] - m_tol || box.hi[i] > p[i] + m_tol)
            inside = false;
          if (box.hi[i] < p[i] - m_tol || box.lo[i] > p[i] + m_tol)
            touches = false;
        }
        if (inside) return true;
        if (touches) live.push_back(idx);
      }
      if (live.empty() || depth == 0) return false;
      int axis = 0;
      for (int i = 1; i < d; ++i)
        if (box.hi[i] - box.lo[i] > box.hi[axis] - box.lo[axis]) axis = i;
      RatBox a = box, b = box;
      Rat mid = (box.lo[axis] + box.hi[axis]) / 2;
      a.hi[axis] = mid;
      b.lo[axis] = mid;
      return covered(a, live, depth - 1) && covered(b, live, depth - 1);
    };
    std::vector<int> all(points.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    CHECK(covered(image, all, 16));
  }
}

TEST_CASE("approx_image spec examples") {
  SUBCASE("identity on a half interval") {
    AffineOracle id({{Rat(1)}}, {Rat(0)}, box1d(Rat(0), Rat(1)));
    DyadicCell half(1, {Int(0)});  // [0, 1/2]
    auto pts = approx_image(id, half, 4);
    for (const auto& p : pts) {
      CHECK(p[0] >= Rat(-1, 4));
      CHECK(p[0] <= Rat(3, 4));
    }
    REQUIRE_FALSE(pts.empty());
  }
  SUBCASE("halving the unit interval") {
    AffineOracle f({{Rat(1, 2)}}, {Rat(0)}, box1d(Rat(-1), Rat(2)));
    DyadicCell unit(0, {Int(0)});
    auto pts = approx_image(f, unit, 8);
    RatBox image = box1d(Rat(0), Rat(1, 2));
    for (const auto& p : pts) CHECK(dist_point_box(p, image) <= Rat(1, 40));
  }
  SUBCASE("a constant map lands within tolerance of its value") {
    AffineOracle c({{Rat(0)}}, {Rat(1, 3)}, box1d(Rat(-1), Rat(1)));
    DyadicCell unit(1, {Int(-1)});
    for (const auto& p : approx_image(c, unit, 16))
      CHECK(abs(p[0] - Rat(1, 3)) <= Rat(1, 16));
  }
  SUBCASE("cells outside the domain are rejected") {
    AffineOracle f({{Rat(1, 2)}}, {Rat(0)}, box1d(Rat(0), Rat(1)));
    DyadicCell outside(0, {Int(-2)});
    CHECK_THROWS_AS(approx_image(f, outside, 4), DomainViolation);
  }
}

TEST_CASE("trap validation accepts the halving trap and rejects an escaping one") {
  auto f = halving_oracle();
  CHECK_FALSE(trap_violation(*f, halving_trap(), 8));

  // A trap far from the dynamics: f([3/4, 1]) = [3/8, 1/2] escapes it.
  TrapRegion bogus;
  bogus.cells = {DyadicCell(2, {Int(3)})};  // [3/4, 1]
  bogus.lipschitz = Rat(1, 2);
  CHECK(trap_violation(*f, bogus, 16));
  CHECK_THROWS(AttractorApproximator(*f, bogus,
                                     AttractorOptions{16, {}, 1u << 20}));
}

TEST_CASE("cell avoidance semidecision on the halving map") {
  auto f = halving_oracle();
  AttractorApproximator approx(*f, halving_trap());

  SUBCASE("a cell to the right of the origin is eventually cleared") {
    DyadicCell cell(2, {Int(1)});  // [1/4, 1/2]
    auto v = semidecide_cell_avoids_attractor(approx, cell, 32);
    CHECK(v.proved);
  }
  SUBCASE("a cell containing the attractor never clears") {
    DyadicCell cell(3, {Int(-1)});  // [-1/8, 0]
    auto v = semidecide_cell_avoids_attractor(approx, cell, 16);
    CHECK_FALSE(v.proved);
  }
  SUBCASE("without a Lipschitz bound only the first rung runs") {
    TrapRegion nolip = halving_trap();
    nolip.lipschitz.reset();
    AttractorApproximator a2(*f, nolip);
    DyadicCell cell(2, {Int(1)});
    auto v = semidecide_cell_avoids_attractor(a2, cell, 32);
    if (v.proved) CHECK(v.n == 1);
  }
}

TEST_CASE("image disjointness semidecision on the halving map") {
  auto f = halving_oracle();
  SUBCASE("f([1/2,1]) = [1/4,1/2] misses [0,1/8]") {
    auto v = semidecide_images_disjoint(*f, DyadicCell(1, {Int(1)}),
                                        DyadicCell(3, {Int(0)}), 32);
    CHECK(v.proved);
  }
  SUBCASE("f([0,1/2]) = [0,1/4] meets [0,1/4]: sound silence") {
    auto v = semidecide_images_disjoint(*f, DyadicCell(1, {Int(0)}),
                                        DyadicCell(2, {Int(0)}), 24);
    CHECK_FALSE(v.proved);
  }
  SUBCASE("identity with cells 1/4 apart clears by n = 8") {
    AffineOracle id({{Rat(1)}}, {Rat(0)}, box1d(Rat(-1), Rat(1)));
    auto v = semidecide_images_disjoint(id, DyadicCell(2, {Int(-2)}),
                                        DyadicCell(2, {Int(1)}), 8);
    CHECK(v.proved);
    CHECK(v.n <= 8);
  }
}

TEST_CASE("spiral dynamics: cells near the origin avoid the circle attractor") {
  auto f = spiral_oracle();
  AttractorApproximator approx(*f, spiral_trap());

  DyadicCell origin_cell(2, {Int(0), Int(0)});  // [0,1/4]^2
  auto v = semidecide_cell_avoids_attractor(approx, origin_cell, 24);
  CHECK(v.proved);

  // A cell straddling the circle never clears.
  DyadicCell on_circle(2, {Int(3), Int(0)});  // [3/4,1] x [0,1/4]
  auto w = semidecide_cell_avoids_attractor(approx, on_circle, 10);
  CHECK_FALSE(w.proved);
}

TEST_CASE("encode and decode interleave binary digits") {
  SUBCASE("zero encodes to the zero stream") {
    CylinderPattern p = encode_point({Rat(0)}, 6);
    for (const auto& [i, v] : p.bits()) CHECK_FALSE(v);
  }
  SUBCASE("one half encodes to 1 0 0 ...") {
    CylinderPattern p = encode_point({Rat(1, 2)}, 4);
    CHECK(p.at(0) == true);
    CHECK(p.at(1) == false);
    CHECK(p.at(2) == false);
    CHECK(p.at(3) == false);
  }
  SUBCASE("two coordinates interleave") {
    CylinderPattern p = encode_point({Rat(1, 2), Rat(1, 4)}, 3);
    // Expect 1,0, 0,1, 0,0.
    CHECK(p.at(0) == true);
    CHECK(p.at(1) == false);
    CHECK(p.at(2) == false);
    CHECK(p.at(3) == true);
    CHECK(p.at(4) == false);
    CHECK(p.at(5) == false);
  }
  SUBCASE("decode inverts encode on dyadic corners") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
      int d = 1 + static_cast<int>(rng() % 2);
      int k = 1 + static_cast<int>(rng() % 4);
      RatVec x(d);
      for (auto& v : x) v = Rat(static_cast<int>(rng() % (1 << k)), 1 << k);
      DyadicCell cell = decode_cell(encode_point(x, k), d, k);
      CHECK(cell.level == k);
      CHECK(cell.box().contains_point(x));
    }
  }
}

TEST_CASE("forbidden cylinder enumeration for the halving-style map on [0,1]") {
  // f(y) = y/2 + 1/4 on [0,1], attractor {1/2}: conjugate of x -> x/2.
  auto f = std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(1, 2)}}, RatVec{Rat(1, 4)},
      box1d(Rat(0), Rat(1)));
  TrapRegion trap;
  trap.cells = {DyadicCell(2, {Int(1)}), DyadicCell(2, {Int(2)})};  // [1/4,3/4]
  trap.lipschitz = Rat(1, 2);
  AttractorApproximator approx(*f, trap);

  auto low = enumerate_forbidden_cylinders(approx, 6);
  auto high = enumerate_forbidden_cylinders(approx, 12);

  SUBCASE("emissions are monotone in fuel") {
    std::set<GenCylinder> big(high.begin(), high.end());
    for (const auto& g : low) CHECK(big.count(g) == 1);
    CHECK(enumerate_forbidden_cylinders(approx, 0).empty());
  }
  SUBCASE("pairs covering the orbit of the fixed point are never emitted") {
    // The fixed point 1/2 maps to itself; its encoded orbit, read with more
    // digits than any emitted cylinder pins, must violate no exclusion.
    CylinderPattern half = encode_point({Rat(1, 2)}, 8);
    for (const auto& g : high) {
      auto it0 = g.cells().find(Site{0});
      auto it1 = g.cells().find(Site{1});
      REQUIRE(it0 != g.cells().end());
      REQUIRE(it1 != g.cells().end());
      bool matches =
          cyl_subset(half, it0->second) && cyl_subset(half, it1->second);
      CHECK_FALSE(matches);
    }
  }
  SUBCASE("a clause-a pair is emitted once fuel suffices") {
    // Cell [0, 1/4] misses the attractor {1/2}, so any pair whose first
    // component is that cell gets emitted.
    CylinderPattern low_cell = encode_point({Rat(0)}, 2);
    bool found = false;
    for (const auto& g : high)
      if (g.cells().at(Site{0}) == low_cell) found = true;
    CHECK(found);
  }
}

TEST_CASE("forbidden cylinders of the halving map with the symmetric trap") {
  // f(x) = x/2 with trap [-1/2, 1/2]; the encoded cells live in [0,1].
  auto f = std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(1, 2)}}, RatVec{Rat(0)},
      box1d(Rat(-1), Rat(1)));
  AttractorApproximator approx(*f, halving_trap());
  auto emitted = enumerate_forbidden_cylinders(approx, 16);

  SUBCASE("the ([1/4,1/2], [1/4,1/2]) pair is emitted via cell avoidance") {
    CylinderPattern quarter = encode_point({Rat(1, 4)}, 2);  // cell [1/4,1/2]
    bool found = false;
    for (const auto& g : emitted)
      if (g.cells().at(Site{0}) == quarter && g.cells().at(Site{1}) == quarter)
        found = true;
    CHECK(found);
    // And its decoded cell indeed avoids the attractor but its image only
    // touches the right cell, so clause (c) alone would stay silent.
    DyadicCell cell = decode_cell(quarter, 1, 2);
    CHECK(semidecide_cell_avoids_attractor(approx, cell, 16).proved);
    CHECK_FALSE(semidecide_images_disjoint(*f, cell, cell, 16).proved);
  }
  SUBCASE("a pair whose first cell holds the attractor and maps into the second is never emitted") {
    CylinderPattern low = encode_point({Rat(0)}, 1);  // cell [0,1/2] contains 0
    for (const auto& g : emitted) {
      bool both = g.cells().at(Site{0}) == low && g.cells().at(Site{1}) == low;
      CHECK_FALSE(both);
    }
  }
}

TEST_CASE("eds presentation wraps the enumeration as a monotone enumerator") {
  auto f = std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(1, 2)}}, RatVec{Rat(1, 4)},
      box1d(Rat(0), Rat(1)));
  TrapRegion trap;
  trap.cells = {DyadicCell(2, {Int(1)}), DyadicCell(2, {Int(2)})};
  trap.lipschitz = Rat(1, 2);
  auto e = eds_presentation(f, trap);
  CHECK(e->dim() == 1);
  CHECK(e->step(0).empty());
  auto prev = e->step(0);
  for (int k = 2; k <= 20; k += 3) {
    auto cur = e->step(k);
    std::set<GenCylinder> big(cur.begin(), cur.end());
    for (const auto& g : prev) CHECK(big.count(g) == 1);
    prev = cur;
  }

  // The presentation plugs into the guard machinery: every guarded stage of
  // the orbit subshift is nonempty (the orbit itself survives).
  for (int k : {5, 12, 25}) {
    StageSet s = guarded_stage(*e, k);
    CHECK_FALSE(decide_empty_eds_1d(s.excluded()));
  }
}

TEST_CASE("orbit consistency for the spiral attractor") {
  // Conjugate the spiral into [0,1]^2 through x -> x/4 + 1/2 so orbits can
  // be encoded; the attractor becomes the radius-1/4 circle at (1/2, 1/2).
  RatBox unit{{Rat(0), Rat(0)}, {Rat(1), Rat(1)}};
  RatBox wide{{Rat(-2), Rat(-2)}, {Rat(2), Rat(2)}};
  auto into = std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(4), Rat(0)}, {Rat(0), Rat(4)}},
      RatVec{Rat(-2), Rat(-2)}, unit);
  auto sp = std::make_shared<SpiralOracle>(Rat(1, 2), Rat(1, 4), wide);
  auto back = std::make_shared<AffineOracle>(
      std::vector<std::vector<Rat>>{{Rat(1, 4), Rat(0)}, {Rat(0), Rat(1, 4)}},
      RatVec{Rat(1, 2), Rat(1, 2)}, wide);
  auto g = std::make_shared<ComposedOracle>(
      std::vector<std::shared_ptr<EffectiveMapOracle>>{into, sp, back});

  TrapRegion trap;
  for (const auto& cell : spiral_trap().cells) {
    std::vector<Int> corner(2);
    for (int i = 0; i < 2; ++i)
      corner[i] = cell.corner[i] + Int(2) * (Int(1) << cell.level);
    trap.cells.emplace_back(cell.level + 2, std::move(corner));
  }
  trap.lipschitz = Rat(4);
  AttractorApproximator approx(*g, trap, AttractorOptions{4, {}, 1u << 20});

  PresentationOptions popts;
  popts.max_depth = 2;
  auto emitted = enumerate_forbidden_cylinders(approx, 3, popts);

  // Walk the circle orbit (exact rational rotation of (1,0) scaled into the
  // unit square) and check no emitted pair cuts a consecutive orbit pair.
  Rat c(3, 5), s(4, 5);
  RatVec p{Rat(1), Rat(0)};
  for (int t = 0; t < 12; ++t) {
    RatVec q{c * p[0] - s * p[1], s * p[0] + c * p[1]};
    RatVec pe{p[0] / 4 + Rat(1, 2), p[1] / 4 + Rat(1, 2)};
    RatVec qe{q[0] / 4 + Rat(1, 2), q[1] / 4 + Rat(1, 2)};
    CylinderPattern ep = encode_point(pe, 6);
    CylinderPattern eq = encode_point(qe, 6);
    for (const auto& gcyl : emitted) {
      bool cuts = cyl_subset(ep, gcyl.cells().at(Site{0})) &&
                  cyl_subset(eq, gcyl.cells().at(Site{1}));
      CHECK_FALSE(cuts);
    }
    p = q;
  }
}

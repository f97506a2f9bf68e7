#include "sftlab/attractor.hpp"

#include <algorithm>
#include <set>

namespace sftlab {

namespace {

// Smallest k >= 0 with 2^-k <= r (for 0 < r <= 1); crude bit estimate
// corrected by a short loop.
int ceil_log2_inv(const Rat& r) {
  if (r <= 0) throw Error("ceil_log2_inv: argument must be positive");
  if (r >= 1) return 0;
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  int k = static_cast<int>(boost::multiprecision::msb(den) -
                           boost::multiprecision::msb(num));
  while (k > 0 && pow2(-(k - 1)) <= r) --k;
  while (pow2(-k) > r) ++k;
  return k;
}

const Rat kSqrt2Upper = Rat(17, 12);  // > sqrt(2)

}  // namespace

Dyadic::Dyadic(Int n, int lvl) : num(std::move(n)), level(lvl) {
  if (level < 0) throw Error("dyadic level must be nonnegative");
  while (level > 0 && num % 2 == 0) {
    num /= 2;
    --level;
  }
}

DyadicCell::DyadicCell(int lvl, std::vector<Int> c)
    : level(lvl), corner(std::move(c)) {
  if (level < 0) throw Error("dyadic cell level must be nonnegative");
  if (corner.empty()) throw Error("dyadic cell needs at least one axis");
}

RatBox DyadicCell::box() const {
  RatBox b;
  Rat unit = pow2(-level);
  for (const auto& k : corner) {
    b.lo.push_back(Rat(k) * unit);
    b.hi.push_back(Rat(k + 1) * unit);
  }
  return b;
}

std::vector<DyadicCell> DyadicCell::children() const {
  std::vector<DyadicCell> out;
  int d = dim();
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<Int> c(d);
    for (int i = 0; i < d; ++i) c[i] = corner[i] * 2 + ((mask >> i) & 1);
    out.emplace_back(level + 1, std::move(c));
  }
  return out;
}

EffectiveMapOracle::Answer EffectiveMapOracle::query(
    const RatVec& x, const std::vector<Tie>& ties, std::uint64_t precision,
    int max_digits) const {
  if (static_cast<int>(x.size()) != dim() ||
      static_cast<int>(ties.size()) != dim())
    throw DimensionMismatch("oracle query: arity mismatch");
  if (precision == 0) throw Error("oracle query: precision must be positive");
  if (!domain().contains_point(x))
    throw DomainViolation("oracle query outside the declared domain");

  Rat tol = Rat(1, Int(precision));
  for (int N = 0; N <= max_digits; ++N) {
    // Digit cell of the first N fractional digits of the representation.
    RatBox cell;
    Rat unit = pow2(-N);
    for (int i = 0; i < dim(); ++i) {
      Rat scaled = x[i] / unit;
      Int corner = rat_floor(scaled);
      if (ties[i] == Tie::Down && Rat(corner) == scaled) corner -= 1;
      cell.lo.push_back(Rat(corner) * unit);
      cell.hi.push_back(Rat(corner + 1) * unit);
    }
    auto enc = image_box(cell);
    if (enc && enc->radius <= tol) return Answer{enc->center, N};
  }
  throw BudgetExhausted("oracle query did not stabilize within the digit cap");
}

AffineOracle::AffineOracle(std::vector<std::vector<Rat>> matrix, RatVec offset,
                           RatBox domain)
    : matrix_(std::move(matrix)), offset_(std::move(offset)),
      domain_(std::move(domain)) {
  size_t d = offset_.size();
  if (d == 0 || matrix_.size() != d)
    throw DimensionMismatch("affine oracle: square matrix required");
  for (const auto& row : matrix_)
    if (row.size() != d)
      throw DimensionMismatch("affine oracle: square matrix required");
  if (domain_.lo.size() != d || domain_.hi.size() != d)
    throw DimensionMismatch("affine oracle: domain arity mismatch");
}

RatBox AffineOracle::exact_image(const RatBox& box) const {
  RatBox out;
  int d = dim();
  for (int i = 0; i < d; ++i) {
    Rat lo = offset_[i], hi = offset_[i];
    for (int j = 0; j < d; ++j) {
      const Rat& m = matrix_[i][j];
      if (m >= 0) {
        lo += m * box.lo[j];
        hi += m * box.hi[j];
      } else {
        lo += m * box.hi[j];
        hi += m * box.lo[j];
      }
    }
    out.lo.push_back(lo);
    out.hi.push_back(hi);
  }
  return out;
}

Rat AffineOracle::lipschitz() const {
  Rat best = 0;
  for (const auto& row : matrix_) {
    Rat sum = 0;
    for (const auto& m : row) sum += m < 0 ? -m : m;
    best = std::max(best, sum);
  }
  return best;
}

std::optional<Enclosure> AffineOracle::image_box(const RatBox& box) const {
  RatBox img = exact_image(box);
  return Enclosure{img.center(), img.radius()};
}

SpiralOracle::SpiralOracle(Rat tan_half, Rat inner_radius, RatBox domain)
    : inner_radius_(std::move(inner_radius)), domain_(std::move(domain)) {
  if (inner_radius_ <= 0)
    throw Error("spiral oracle: inner radius must be positive");
  Rat t2 = tan_half * tan_half;
  cos_ = (1 - t2) / (1 + t2);
  sin_ = 2 * tan_half / (1 + t2);
  if (domain_.lo.size() != 2 || domain_.hi.size() != 2)
    throw DimensionMismatch("spiral oracle is planar");
}

std::optional<Enclosure> SpiralOracle::image_box(const RatBox& box) const {
  if (box.dim() != 2) throw DimensionMismatch("spiral oracle is planar");
  auto [r2min, r2max] = norm2_range(box);
  Rat clamp2 = inner_radius_ * inner_radius_;

  int bits = std::max(ceil_log2_inv(inner_radius_) + 2,
                      ceil_log2_inv(std::min(Rat(1), box.radius() == 0
                                                          ? Rat(1)
                                                          : box.radius())) +
                          6);

  // Spread term: sup-norm Lipschitz bound on the box via the Euclidean one,
  // L2 = 1/2 + 1/(2 max(rho_min, inner)); the clamped and unclamped pieces
  // share it, so the bound holds across the clamp boundary too.
  Rat rho_min_lo = inner_radius_;
  if (r2min > clamp2)
    rho_min_lo = std::max(rho_min_lo, sqrt_bounds(r2min, bits).first);
  Rat l2 = Rat(1, 2) + 1 / (2 * rho_min_lo);
  Rat spread = l2 * kSqrt2Upper * box.radius();

  // Value at the center: y = g(c) * R c with g = 1/2 + 1/(2 max(|c|, inner)).
  RatVec c = box.center();
  Rat rc2 = c[0] * c[0] + c[1] * c[1];
  RatVec rot{cos_ * c[0] - sin_ * c[1], sin_ * c[0] + cos_ * c[1]};
  Rat value_err = 0;
  Rat g_mid;
  if (rc2 <= clamp2) {
    g_mid = Rat(1, 2) + 1 / (2 * inner_radius_);  // exact in the clamped zone
  } else {
    auto [a, b] = sqrt_bounds(rc2, bits);
    a = std::max(a, inner_radius_);
    Rat g_lo = Rat(1, 2) + 1 / (2 * b);
    Rat g_hi = Rat(1, 2) + 1 / (2 * a);
    g_mid = (g_lo + g_hi) / 2;
    // |y - f(c)|_2 = |g_mid - g(c)| * |c|_2 <= halfwidth * b.
    value_err = (g_hi - g_lo) / 2 * b;
  }
  RatVec y{g_mid * rot[0], g_mid * rot[1]};
  return Enclosure{std::move(y), spread + value_err};
}

ComposedOracle::ComposedOracle(
    std::vector<std::shared_ptr<EffectiveMapOracle>> stages)
    : stages_(std::move(stages)) {
  if (stages_.empty()) throw Error("composition needs at least one stage");
  for (const auto& s : stages_) {
    if (!s) throw Error("composition stage must not be null");
    if (s->dim() != stages_.front()->dim())
      throw DimensionMismatch("composition stages must share a dimension");
  }
}

int ComposedOracle::dim() const { return stages_.front()->dim(); }

RatBox ComposedOracle::domain() const { return stages_.front()->domain(); }

std::optional<Enclosure> ComposedOracle::image_box(const RatBox& box) const {
  RatBox cur = box;
  std::optional<Enclosure> enc;
  for (const auto& stage : stages_) {
    enc = stage->image_box(cur);
    if (!enc) return std::nullopt;
    cur.lo.clear();
    cur.hi.clear();
    for (const auto& v : enc->center) {
      cur.lo.push_back(v - enc->radius);
      cur.hi.push_back(v + enc->radius);
    }
  }
  return enc;
}

namespace {

// Subdivide until the center queries of a cell answer within the cell +1
// digit budget; union the answers of all 2^d representations.
void approx_image_rec(const EffectiveMapOracle& oracle, const DyadicCell& cell,
                      std::uint64_t m, const ApproxImageOptions& opts,
                      std::uint64_t& cells_seen, std::vector<RatVec>& out) {
  if (++cells_seen > opts.max_cells)
    throw BudgetExhausted("approx_image: subdivision cell budget exhausted");
  if (cell.level > opts.max_level)
    throw BudgetExhausted("approx_image: subdivision level cap hit");

  int d = cell.dim();
  RatVec center(d);
  Rat unit = pow2(-(cell.level + 1));
  for (int i = 0; i < d; ++i) center[i] = Rat(2 * cell.corner[i] + 1) * unit;

  std::vector<EffectiveMapOracle::Answer> answers;
  bool all_local = true;
  for (int mask = 0; mask < (1 << d) && all_local; ++mask) {
    std::vector<EffectiveMapOracle::Tie> ties(d);
    for (int i = 0; i < d; ++i)
      ties[i] = (mask >> i & 1) ? EffectiveMapOracle::Tie::Up
                                : EffectiveMapOracle::Tie::Down;
    auto ans = oracle.query(center, ties, m, opts.max_level + 2);
    if (ans.digits_read > cell.level + 1) all_local = false;
    answers.push_back(std::move(ans));
  }
  if (all_local) {
    // The 2^d digit cells of the representations tile this cell, so the
    // answers jointly cover f(cell) within 1/m.
    for (auto& a : answers) out.push_back(std::move(a.value));
    return;
  }
  for (const auto& child : cell.children())
    approx_image_rec(oracle, child, m, opts, cells_seen, out);
}

}  // namespace

std::vector<RatVec> approx_image_prec(const EffectiveMapOracle& oracle,
                                      const DyadicCell& cell, std::uint64_t m,
                                      const ApproxImageOptions& opts) {
  if (cell.dim() != oracle.dim())
    throw DimensionMismatch("approx_image: cell dimension mismatch");
  if (!oracle.domain().contains_box(cell.box()))
    throw DomainViolation("approx_image: cell leaves the oracle domain");
  std::vector<RatVec> out;
  std::uint64_t cells_seen = 0;
  approx_image_rec(oracle, cell, m, opts, cells_seen, out);
  return out;
}

std::vector<RatVec> approx_image(const EffectiveMapOracle& oracle,
                                 const DyadicCell& cell, std::uint64_t n,
                                 const ApproxImageOptions& opts) {
  if (n == 0) throw Error("approx_image: precision must be positive");
  return approx_image_prec(oracle, cell, 5 * n, opts);
}

RatBox TrapRegion::bounding_box() const {
  if (cells.empty()) throw Error("trap region must be nonempty");
  RatBox bb = cells.front().box();
  for (const auto& c : cells) {
    RatBox b = c.box();
    for (int i = 0; i < bb.dim(); ++i) {
      bb.lo[i] = std::min(bb.lo[i], b.lo[i]);
      bb.hi[i] = std::max(bb.hi[i], b.hi[i]);
    }
  }
  return bb;
}

Rat TrapRegion::dist_to(const RatVec& p) const {
  if (cells.empty()) throw Error("trap region must be nonempty");
  Rat best = dist_point_box(p, cells.front().box());
  for (size_t i = 1; i < cells.size(); ++i)
    best = std::min(best, dist_point_box(p, cells[i].box()));
  return best;
}

std::optional<RatVec> trap_violation(const EffectiveMapOracle& oracle,
                                     const TrapRegion& trap, std::uint64_t n,
                                     const ApproxImageOptions& opts) {
  Rat slack = Rat(2, Int(n));
  for (const auto& cell : trap.cells)
    for (auto& s : approx_image(oracle, cell, n, opts))
      if (trap.dist_to(s) > slack) return s;
  return std::nullopt;
}

AttractorApproximator::AttractorApproximator(const EffectiveMapOracle& oracle,
                                             TrapRegion trap,
                                             AttractorOptions opts)
    : oracle_(oracle), trap_(std::move(trap)), opts_(opts) {
  if (trap_.cells.empty()) throw Error("trap region must be nonempty");
  for (const auto& c : trap_.cells)
    if (c.dim() != oracle_.dim())
      throw DimensionMismatch("trap cell dimension mismatch");
  if (opts_.validate_precision > 0) {
    auto witness = trap_violation(oracle_, trap_, opts_.validate_precision,
                                  opts_.image);
    if (witness) {
      std::string where;
      for (const auto& v : *witness) where += rational_to_string(v) + " ";
      throw Error("trap region rejected: image point " + where +
                  "escapes the inflated trap");
    }
  }
}

const std::vector<RatVec>& AttractorApproximator::stage(int n) {
  if (n < 1) throw Error("attractor stage index must be >= 1");
  auto it = stages_.find(n);
  if (it != stages_.end()) return it->second;

  // The final cover has side 2^-level <= 1/(4n); the density guarantee only
  // needs that at the last step, so earlier steps run coarser (one level per
  // three remaining steps) and the contraction toward the attractor absorbs
  // their extra slack. The cover is never coarser than the trap cells, so
  // refining the trap is exact.
  int trap_level = 0;
  for (const auto& c : trap_.cells) trap_level = std::max(trap_level, c.level);
  int final_level = std::max(ceil_log2_inv(Rat(1, 4 * Int(n))), trap_level);
  auto level_at = [&](int step) {  // step = 1..n advances to f^step(C)
    return std::max(trap_level, final_level - (n - step) / 3);
  };

  int d = oracle_.dim();

  // Start from the trap cells refined to the first working level.
  int level = level_at(1);
  std::set<std::vector<Int>> cover;
  for (const auto& c : trap_.cells) {
    std::vector<DyadicCell> work{c};
    while (!work.empty()) {
      DyadicCell cur = work.back();
      work.pop_back();
      if (cur.level >= level) {
        cover.insert(cur.corner);  // finer cells only tighten the cover
        continue;
      }
      for (auto& child : cur.children()) work.push_back(std::move(child));
      if (cover.size() > opts_.max_cover_cells)
        throw BudgetExhausted("attractor stage: cover too large");
    }
  }

  for (int step = 1; step <= n; ++step) {
    // Advance every cover cell through the oracle, then re-cover the image
    // points at this step's level. The new cover contains f of the old one,
    // so by induction it contains f^step(C); density is re-established from
    // scratch each step and no error accumulates across steps.
    int next_level = level_at(step);
    Rat unit = pow2(-next_level);
    Rat sel = unit;
    std::vector<RatVec> points;
    for (const auto& corner : cover) {
      std::vector<DyadicCell> work{DyadicCell(level, corner)};
      while (!work.empty()) {
        DyadicCell cur = work.back();
        work.pop_back();
        if (cur.level > opts_.image.max_level)
          throw BudgetExhausted("attractor stage: subdivision cap hit");
        auto key = std::make_pair(cur.level, cur.corner);
        auto hit = enclosure_cache_.find(key);
        std::optional<Enclosure> enc;
        if (hit != enclosure_cache_.end()) {
          enc = hit->second;
        } else {
          enc = oracle_.image_box(cur.box());
          if (enc) enclosure_cache_.emplace(std::move(key), *enc);
        }
        if (enc && enc->radius <= sel) {
          points.push_back(std::move(enc->center));
        } else {
          for (auto& child : cur.children()) work.push_back(std::move(child));
        }
      }
    }
    std::set<std::vector<Int>> next;
    for (const auto& p : points) {
      std::vector<Int> lo(d), hi(d);
      for (int i = 0; i < d; ++i) {
        lo[i] = rat_floor((p[i] - sel) / unit);
        hi[i] = rat_floor((p[i] + sel) / unit);
      }
      std::vector<Int> cur = lo;
      while (true) {
        next.insert(cur);
        int i = d - 1;
        while (i >= 0) {
          if (++cur[i] <= hi[i]) break;
          cur[i] = lo[i];
          --i;
        }
        if (i < 0) break;
      }
      if (next.size() > opts_.max_cover_cells)
        throw BudgetExhausted("attractor stage: cover too large");
    }
    cover = std::move(next);
    level = next_level;
  }

  std::vector<RatVec> centers;
  centers.reserve(cover.size());
  Rat unit = pow2(-level);
  Rat half = unit / 2;
  for (const auto& corner : cover) {
    RatVec c(d);
    for (int i = 0; i < d; ++i) c[i] = Rat(corner[i]) * unit + half;
    centers.push_back(std::move(c));
  }
  return stages_.emplace(n, std::move(centers)).first->second;
}

DisjointVerdict semidecide_cell_avoids_attractor(AttractorApproximator& approx,
                                                 const DyadicCell& cell,
                                                 int fuel) {
  if (cell.dim() != approx.oracle().dim())
    throw DimensionMismatch("cell dimension mismatch");
  int cap = approx.trap().lipschitz ? fuel : std::min(fuel, 1);
  RatBox target = cell.box();
  for (int n = 1; n <= cap; ++n) {
    Rat gap = Rat(1, Int(n));
    const auto& pts = approx.stage(n);
    // Stage points are sorted by coordinates, so only the slab with first
    // coordinate within gap of the cell can violate the distance test;
    // everything outside it is > gap away in that coordinate already.
    Rat x_lo = target.lo[0] - gap, x_hi = target.hi[0] + gap;
    auto begin = std::lower_bound(
        pts.begin(), pts.end(), x_lo,
        [](const RatVec& p, const Rat& v) { return p[0] < v; });
    bool clear = true;
    for (auto it = begin; it != pts.end() && (*it)[0] <= x_hi; ++it)
      if (dist_point_box(*it, target) <= gap) {
        clear = false;
        break;
      }
    if (clear) return DisjointVerdict{true, n};
  }
  return DisjointVerdict{false, 0};
}

DisjointVerdict semidecide_images_disjoint(const EffectiveMapOracle& oracle,
                                           const DyadicCell& d1,
                                           const DyadicCell& d2, int fuel,
                                           const ApproxImageOptions& opts) {
  RatBox target = d2.box();
  for (int n = 1; n <= fuel; ++n) {
    Rat gap = Rat(1, Int(n));
    bool clear = true;
    for (const auto& p : approx_image(oracle, d1, static_cast<std::uint64_t>(n), opts))
      if (dist_point_box(p, target) <= gap) {
        clear = false;
        break;
      }
    if (clear) return DisjointVerdict{true, n};
  }
  return DisjointVerdict{false, 0};
}

CylinderPattern encode_point(const RatVec& x, int depth) {
  if (depth < 1) throw Error("encode_point: depth must be >= 1");
  int d = static_cast<int>(x.size());
  std::map<int, bool> bits;
  for (int i = 0; i < d; ++i) {
    if (x[i] < 0 || x[i] > 1)
      throw Error("encode_point: coordinates must lie in [0,1]");
    Rat r = x[i];
    for (int t = 0; t < depth; ++t) {
      r *= 2;
      bool digit = r >= 1;
      if (digit) r -= 1;
      bits[d * t + i] = digit;
    }
  }
  return CylinderPattern(std::move(bits));
}

DyadicCell decode_cell(const CylinderPattern& a, int dim, int depth) {
  if (depth < 1 || dim < 1) throw Error("decode_cell: bad arity");
  std::vector<Int> corner(dim, 0);
  for (int t = 0; t < depth; ++t)
    for (int i = 0; i < dim; ++i) {
      auto bit = a.at(dim * t + i);
      if (!bit)
        throw Error("decode_cell: cylinder must fix the full depth prefix");
      corner[i] = corner[i] * 2 + (*bit ? 1 : 0);
    }
  return DyadicCell(depth, std::move(corner));
}

std::vector<GenCylinder> enumerate_forbidden_cylinders(
    AttractorApproximator& approx, int fuel, const PresentationOptions& opts) {
  const EffectiveMapOracle& oracle = approx.oracle();
  int d = oracle.dim();
  std::vector<GenCylinder> out;

  for (int k = 1; k <= std::min(fuel, opts.max_depth); ++k) {
    if (d * k > 20) break;
    int npat = 1 << (d * k);

    std::vector<CylinderPattern> pats(npat);
    std::vector<DyadicCell> cells(npat);
    std::vector<bool> avoids(npat);
    for (int p = 0; p < npat; ++p) {
      std::map<int, bool> bits;
      for (int j = 0; j < d * k; ++j) bits[j] = (p >> j) & 1;
      pats[p] = CylinderPattern(std::move(bits));
      cells[p] = decode_cell(pats[p], d, k);
      avoids[p] = semidecide_cell_avoids_attractor(approx, cells[p], fuel).proved;
    }

    for (int p = 0; p < npat; ++p) {
      // Image approximations of cell p, lazily per precision rung. Cells
      // the oracle cannot evaluate (outside its true domain, e.g. over a
      // singularity) contribute through the avoidance clauses only.
      std::map<int, std::optional<std::vector<RatVec>>> images;
      bool p_evaluable = oracle.domain().contains_box(cells[p].box());
      for (int q = 0; q < npat; ++q) {
        bool emitted = avoids[p] || avoids[q];
        if (!emitted && p_evaluable) {
          RatBox target = cells[q].box();
          for (int n = 1; n <= fuel && !emitted; ++n) {
            auto it = images.find(n);
            if (it == images.end()) {
              std::optional<std::vector<RatVec>> pts;
              try {
                pts = approx_image(oracle, cells[p],
                                   static_cast<std::uint64_t>(n));
              } catch (const DomainViolation&) {
              } catch (const BudgetExhausted&) {
              }
              it = images.emplace(n, std::move(pts)).first;
            }
            if (!it->second) break;
            Rat gap = Rat(1, Int(n));
            bool clear = true;
            for (const auto& s : *it->second)
              if (dist_point_box(s, target) <= gap) {
                clear = false;
                break;
              }
            emitted = clear;
          }
        }
        if (emitted)
          out.push_back(GenCylinder(
              1, {{Site{0}, pats[p]}, {Site{1}, pats[q]}}));
      }
    }
  }
  return out;
}

namespace {

class AttractorEnumerator : public Enumerator {
public:
  AttractorEnumerator(std::shared_ptr<EffectiveMapOracle> oracle,
                      TrapRegion trap, AttractorOptions aopts,
                      PresentationOptions popts)
      : oracle_(std::move(oracle)),
        approx_(std::make_unique<AttractorApproximator>(*oracle_, std::move(trap),
                                                        aopts)),
        popts_(popts) {}
  int dim() const override { return 1; }
  std::vector<GenCylinder> step(int k) const override {
    return enumerate_forbidden_cylinders(*approx_, k, popts_);
  }

private:
  std::shared_ptr<EffectiveMapOracle> oracle_;
  mutable std::unique_ptr<AttractorApproximator> approx_;
  PresentationOptions popts_;
};

}  // namespace

std::shared_ptr<Enumerator> eds_presentation(
    std::shared_ptr<EffectiveMapOracle> oracle, TrapRegion trap,
    AttractorOptions aopts, PresentationOptions popts) {
  if (!oracle) throw Error("eds_presentation: oracle must not be null");
  return std::make_shared<AttractorEnumerator>(std::move(oracle),
                                               std::move(trap), aopts, popts);
}

}  // namespace sftlab

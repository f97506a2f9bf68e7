#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sftlab/cylinders.hpp"
#include "sftlab/eds.hpp"
#include "sftlab/rational.hpp"

namespace sftlab {

// Canonical dyadic rational num / 2^level (num odd, or level 0).
struct Dyadic {
  Int num;
  int level = 0;

  Dyadic() : num(0) {}
  Dyadic(Int n, int lvl);

  Rat value() const { return Rat(num) * pow2(-level); }
  bool operator==(const Dyadic& o) const {
    return num == o.num && level == o.level;
  }
};

// Closed dyadic cell: the product of [corner_i / 2^level, (corner_i+1) / 2^level].
struct DyadicCell {
  int level = 0;
  std::vector<Int> corner;

  DyadicCell() = default;
  DyadicCell(int lvl, std::vector<Int> c);

  int dim() const { return static_cast<int>(corner.size()); }
  Rat side() const { return pow2(-level); }
  RatBox box() const;

  // The 2^d children one level deeper.
  std::vector<DyadicCell> children() const;

  bool operator<(const DyadicCell& o) const {
    if (level != o.level) return level < o.level;
    return corner < o.corner;
  }
  bool operator==(const DyadicCell& o) const {
    return level == o.level && corner == o.corner;
  }
};

// Sup-norm enclosure of an image set: all of f(input) lies in the closed
// ball of the given radius around the center.
struct Enclosure {
  RatVec center;
  Rat radius;
};

// Precision-indexed approximator of a map on R^d. The primitive is an
// interval extension: a sound enclosure of f(box), or nullopt when the box
// must shrink before the map can be evaluated (e.g. it straddles a
// singularity). `query` builds the digit-reading interface on top: the
// answer for a point depends only on the first digits_read binary digits of
// the chosen representation.
class EffectiveMapOracle {
public:
  virtual ~EffectiveMapOracle() = default;
  virtual int dim() const = 0;
  virtual RatBox domain() const = 0;
  virtual std::optional<Enclosure> image_box(const RatBox& box) const = 0;

  // Tie direction for binary representations of dyadic coordinates: Up reads
  // the expansion ending in zeros, Down the one ending in ones.
  enum class Tie { Up, Down };

  struct Answer {
    RatVec value;        // within 1/precision of f(x') for every x' in the
                         // digit cell of the representation
    int digits_read;
  };

  // Evaluate at an exact point through the digit-reading protocol: digit
  // cells shrink until the image enclosure meets the 1/precision tolerance.
  Answer query(const RatVec& x, const std::vector<Tie>& ties,
               std::uint64_t precision, int max_digits = 256) const;
};

// f(x) = M x + b with rational entries; the enclosure is exact interval
// arithmetic, so answers carry no slack beyond the cell width.
class AffineOracle : public EffectiveMapOracle {
public:
  AffineOracle(std::vector<std::vector<Rat>> matrix, RatVec offset, RatBox domain);
  int dim() const override { return static_cast<int>(offset_.size()); }
  RatBox domain() const override { return domain_; }
  std::optional<Enclosure> image_box(const RatBox& box) const override;

  // Exact image of a box (componentwise interval arithmetic).
  RatBox exact_image(const RatBox& box) const;
  // Max row sum of |M|: a sup-norm Lipschitz bound.
  Rat lipschitz() const;

private:
  std::vector<std::vector<Rat>> matrix_;
  RatVec offset_;
  RatBox domain_;
};

// Planar spiral: rotation by the exact rational angle with tan(theta/2) =
// tan_half, composed with the radial map r -> 1/2 + r/2. The unit circle is
// the attractor. Below inner_radius the radial factor is clamped, which
// makes the map total and evaluable on the whole domain box without
// touching the dynamics at radii >= inner_radius. Evaluation is exact
// rational arithmetic with certified enclosures (integer square roots bound
// the radius terms).
class SpiralOracle : public EffectiveMapOracle {
public:
  SpiralOracle(Rat tan_half, Rat inner_radius, RatBox domain);
  int dim() const override { return 2; }
  RatBox domain() const override { return domain_; }
  std::optional<Enclosure> image_box(const RatBox& box) const override;

  Rat rot_cos() const { return cos_; }
  Rat rot_sin() const { return sin_; }

private:
  Rat cos_, sin_, inner_radius_;
  RatBox domain_;
};

// Composition combinator: stages applied first to last.
class ComposedOracle : public EffectiveMapOracle {
public:
  explicit ComposedOracle(std::vector<std::shared_ptr<EffectiveMapOracle>> stages);
  int dim() const override;
  RatBox domain() const override;
  std::optional<Enclosure> image_box(const RatBox& box) const override;

private:
  std::vector<std::shared_ptr<EffectiveMapOracle>> stages_;
};

struct ApproxImageOptions {
  int max_level = 48;        // subdivision floor before giving up
  std::uint64_t max_cells = 1u << 22;
};

// Finite point set two-sidedly close to f(D): every returned point is
// within 1/m of f(D) and f(D) is covered by 1/m-balls around the returned
// points, where m = 5n. Queries are issued for all 2^d representations of
// each subdivision center and the answers unioned.
std::vector<RatVec> approx_image(const EffectiveMapOracle& oracle,
                                 const DyadicCell& cell, std::uint64_t n,
                                 const ApproxImageOptions& opts = {});

// Same with an explicit internal precision m (two-sided 1/m bound).
std::vector<RatVec> approx_image_prec(const EffectiveMapOracle& oracle,
                                      const DyadicCell& cell, std::uint64_t m,
                                      const ApproxImageOptions& opts = {});

// Finite union of closed dyadic cells asserted to satisfy X ⊆ C ⊆ V with
// closure(f(V)) ⊆ V. The Lipschitz bound (sup-norm, valid on the domain
// box) drives stage sizing; without it the attractor semi-decision is
// limited to its first rung.
struct TrapRegion {
  std::vector<DyadicCell> cells;
  std::optional<Rat> lipschitz;

  RatBox bounding_box() const;
  Rat dist_to(const RatVec& p) const;  // sup-norm distance to the union
};

// Necessary-condition screen: a point of the 1/n-approximate image of C
// farther than 2/n from C witnesses that the trap cannot be forward
// invariant; returns that witness.
std::optional<RatVec> trap_violation(const EffectiveMapOracle& oracle,
                                     const TrapRegion& trap, std::uint64_t n,
                                     const ApproxImageOptions& opts = {});

struct AttractorOptions {
  int validate_precision = 4;   // 0 skips the trap screen
  ApproxImageOptions image;
  std::uint64_t max_cover_cells = 1u << 20;
};

// Cached ladder of finite approximations F_n of the iterated images f^n(C).
// Stage n is built by n rounds of cover propagation: a set of dyadic cells
// covering f^t(C) is advanced through the oracle and re-covered, so F_n is
// (1/n)-dense in f^n(C) unconditionally; no error accumulates across steps.
class AttractorApproximator {
public:
  AttractorApproximator(const EffectiveMapOracle& oracle, TrapRegion trap,
                        AttractorOptions opts = {});

  const EffectiveMapOracle& oracle() const { return oracle_; }
  const TrapRegion& trap() const { return trap_; }

  // Points 1/n-dense in f^n(C) (n >= 1).
  const std::vector<RatVec>& stage(int n);

private:
  const EffectiveMapOracle& oracle_;
  TrapRegion trap_;
  AttractorOptions opts_;
  std::map<int, std::vector<RatVec>> stages_;
  // Enclosures recur heavily across cover steps (the cover settles onto the
  // attractor's neighborhood), so they are memoized per cell.
  std::map<std::pair<int, std::vector<Int>>, Enclosure> enclosure_cache_;
};

struct DisjointVerdict {
  bool proved = false;  // ProvedDisjoint{n}; otherwise Unknown
  int n = 0;
};

// Halts (proved) once the stage-n approximation of f^n(C) keeps distance
// > 1/n from D; sound: proved implies X ∩ D = ∅. D itself is never
// evaluated, so it may lie outside the oracle domain.
DisjointVerdict semidecide_cell_avoids_attractor(AttractorApproximator& approx,
                                                 const DyadicCell& cell,
                                                 int fuel);

// Halts once a 1/(5n)-accurate approximation of f(D') keeps distance > 1/n
// from D''; sound for f(D') ∩ D'' = ∅.
DisjointVerdict semidecide_images_disjoint(const EffectiveMapOracle& oracle,
                                           const DyadicCell& d1,
                                           const DyadicCell& d2, int fuel,
                                           const ApproxImageOptions& opts = {});

// Digit interleaving of [0,1]^d into the Cantor space: bit d*t + i holds the
// (t+1)-st binary digit of coordinate i, ties resolved toward the finite
// expansion. Returns the first depth*d bits.
CylinderPattern encode_point(const RatVec& x, int depth);

// Inverse on full depth-k patterns: the level-k dyadic cell the cylinder
// projects onto.
DyadicCell decode_cell(const CylinderPattern& a, int dim, int depth);

struct PresentationOptions {
  int max_depth = 4;  // cylinder depth cap per site
};

// Forbidden two-site cylinders of the orbit subshift: a pair (P, Q) of
// depth-k patterns is emitted once one of the three semi-decisions halts
// within the fuel: cell(P) misses X, cell(Q) misses X, or f(cell(P)) misses
// cell(Q). Monotone in fuel.
std::vector<GenCylinder> enumerate_forbidden_cylinders(
    AttractorApproximator& approx, int fuel,
    const PresentationOptions& opts = {});

// The above packaged as an eds enumerator (dim 1): step(k) = emissions
// within fuel k.
std::shared_ptr<Enumerator> eds_presentation(
    std::shared_ptr<EffectiveMapOracle> oracle, TrapRegion trap,
    AttractorOptions aopts = {}, PresentationOptions popts = {});

}  // namespace sftlab

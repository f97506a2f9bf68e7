#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/errors.hpp"
#include "sftlab/patterns.hpp"

namespace sftlab {

// A basic cylinder of the Cantor space K = {0,1}^N: finitely many bit
// positions pinned to values. Empty support denotes all of K.
class CylinderPattern {
public:
  CylinderPattern() = default;
  explicit CylinderPattern(std::map<int, bool> bits);

  const std::map<int, bool>& bits() const { return bits_; }
  bool empty() const { return bits_.empty(); }
  int size() const { return static_cast<int>(bits_.size()); }

  std::optional<bool> at(int i) const;
  CylinderPattern with_bit(int i, bool v) const;

  // Largest constrained bit index, or -1 when empty.
  int max_bit() const { return bits_.empty() ? -1 : bits_.rbegin()->first; }

  bool operator==(const CylinderPattern& o) const { return bits_ == o.bits_; }
  bool operator<(const CylinderPattern& o) const { return bits_ < o.bits_; }

private:
  std::map<int, bool> bits_;
};

// [a] subset of [b] in K: b's constraints are a subset of a's.
bool cyl_subset(const CylinderPattern& a, const CylinderPattern& b);

// A generalized cylinder of Omega = K^{Z^d}: finitely many sites each
// carrying a cylinder pattern. Sites pinned to the empty pattern are legal
// (they constrain nothing) and are ignored by the semantic operations.
class GenCylinder {
public:
  GenCylinder(int dim, std::map<Site, CylinderPattern> cells);

  int dim() const { return dim_; }
  const std::map<Site, CylinderPattern>& cells() const { return cells_; }

  // Semantic normal form: vacuous sites dropped. Support may become empty,
  // in which case the cylinder denotes all of Omega.
  GenCylinder normalized() const;

  // Translation by u (acts on sites only).
  GenCylinder translated(const Site& u) const;

  // Equal as subsets of Omega.
  bool equivalent(const GenCylinder& o) const;

  bool operator==(const GenCylinder& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_;
  }
  bool operator<(const GenCylinder& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    return cells_ < o.cells_;
  }

private:
  int dim_;
  std::map<Site, CylinderPattern> cells_;
};

// [a] subset of [b] in Omega. Decided per site: every nonvacuous constraint
// of b must be implied by a's constraint at the same site.
bool gencyl_subset(const GenCylinder& a, const GenCylinder& b);

}  // namespace sftlab

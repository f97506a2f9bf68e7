#include "sftlab/cylinders.hpp"

namespace sftlab {

CylinderPattern::CylinderPattern(std::map<int, bool> bits)
    : bits_(std::move(bits)) {
  for (const auto& [i, v] : bits_)
    if (i < 0) throw Error("cylinder bit index must be nonnegative");
}

std::optional<bool> CylinderPattern::at(int i) const {
  auto it = bits_.find(i);
  if (it == bits_.end()) return std::nullopt;
  return it->second;
}

CylinderPattern CylinderPattern::with_bit(int i, bool v) const {
  auto bits = bits_;
  bits[i] = v;
  return CylinderPattern(std::move(bits));
}

bool cyl_subset(const CylinderPattern& a, const CylinderPattern& b) {
  for (const auto& [i, v] : b.bits()) {
    auto got = a.at(i);
    if (!got || *got != v) return false;
  }
  return true;
}

GenCylinder::GenCylinder(int dim, std::map<Site, CylinderPattern> cells)
    : dim_(dim), cells_(std::move(cells)) {
  if (cells_.empty()) throw Error("generalized cylinder support must be nonempty");
  for (const auto& [site, pat] : cells_)
    if (site.dim() != dim_)
      throw DimensionMismatch("gencylinder site arity differs from dim");
}

GenCylinder GenCylinder::normalized() const {
  std::map<Site, CylinderPattern> kept;
  for (const auto& [site, pat] : cells_)
    if (!pat.empty()) kept.emplace(site, pat);
  if (kept.empty()) {
    // Keep one vacuous site so the invariant (nonempty support) holds; the
    // canonical representative of "all of Omega" pins nothing at the origin.
    kept.emplace(Site(std::vector<int>(dim_, 0)), CylinderPattern());
  }
  return GenCylinder(dim_, std::move(kept));
}

GenCylinder GenCylinder::translated(const Site& u) const {
  std::map<Site, CylinderPattern> cells;
  for (const auto& [site, pat] : cells_) cells.emplace(site + u, pat);
  return GenCylinder(dim_, std::move(cells));
}

bool GenCylinder::equivalent(const GenCylinder& o) const {
  return gencyl_subset(*this, o) && gencyl_subset(o, *this);
}

bool gencyl_subset(const GenCylinder& a, const GenCylinder& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("gencyl_subset: dimension mismatch");
  for (const auto& [site, pat] : b.cells()) {
    if (pat.empty()) continue;  // constrains nothing
    auto it = a.cells().find(site);
    if (it == a.cells().end()) return false;
    if (!cyl_subset(it->second, pat)) return false;
  }
  return true;
}

}  // namespace sftlab

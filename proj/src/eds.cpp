#include "sftlab/eds.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sftlab {

std::uint64_t pairing(std::uint64_t i, std::uint64_t n) {
  std::uint64_t s = i + n;
  return s * (s + 1) / 2 + n;
}

std::pair<std::uint64_t, std::uint64_t> unpairing(std::uint64_t k) {
  // Largest s with s(s+1)/2 <= k.
  std::uint64_t s = static_cast<std::uint64_t>(
      (std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
  while (s * (s + 1) / 2 > k) --s;
  while ((s + 1) * (s + 2) / 2 <= k) ++s;
  std::uint64_t n = k - s * (s + 1) / 2;
  return {s - n, n};
}

CylinderPattern project_cylinder(std::uint64_t n, const CylinderPattern& a) {
  std::map<int, bool> bits;
  for (const auto& [pos, v] : a.bits()) {
    auto [i, lane] = unpairing(static_cast<std::uint64_t>(pos));
    if (lane == n) bits[static_cast<int>(i)] = v;
  }
  return CylinderPattern(std::move(bits));
}

CylinderPattern lift_cylinder(std::uint64_t n, const CylinderPattern& a) {
  std::map<int, bool> bits;
  for (const auto& [i, v] : a.bits())
    bits[static_cast<int>(pairing(static_cast<std::uint64_t>(i), n))] = v;
  return CylinderPattern(std::move(bits));
}

GenCylinder project_gencyl(std::uint64_t n, const GenCylinder& a) {
  std::map<Site, CylinderPattern> cells;
  for (const auto& [site, pat] : a.cells())
    cells.emplace(site, project_cylinder(n, pat));
  return GenCylinder(a.dim(), std::move(cells));
}

GenCylinder lift_gencyl(std::uint64_t n, const GenCylinder& a) {
  std::map<Site, CylinderPattern> cells;
  for (const auto& [site, pat] : a.cells())
    cells.emplace(site, lift_cylinder(n, pat));
  return GenCylinder(a.dim(), std::move(cells));
}

bool proj_subset(std::uint64_t n, const GenCylinder& a, const GenCylinder& b) {
  return gencyl_subset(project_gencyl(n, a), b);
}

ScriptedEnumerator::ScriptedEnumerator(
    int dim, std::vector<std::pair<int, GenCylinder>> emissions)
    : dim_(dim), emissions_(std::move(emissions)) {
  for (const auto& [stamp, cyl] : emissions_) {
    if (stamp < 1) throw Error("emission step stamps must be >= 1");
    if (cyl.dim() != dim_)
      throw DimensionMismatch("scripted emission dimension mismatch");
  }
  std::stable_sort(emissions_.begin(), emissions_.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
}

std::vector<GenCylinder> ScriptedEnumerator::step(int k) const {
  std::vector<GenCylinder> out;
  for (const auto& [stamp, cyl] : emissions_)
    if (stamp <= k) out.push_back(cyl);
  return out;
}

StageSet::StageSet(int dim, std::vector<GenCylinder> excluded) : dim_(dim) {
  std::set<GenCylinder> dedup;
  for (const auto& g : excluded) {
    if (g.dim() != dim_)
      throw DimensionMismatch("stage exclusion dimension mismatch");
    dedup.insert(g.normalized());
  }
  excluded_.assign(dedup.begin(), dedup.end());
}

namespace {

// Weight grading for the canonical enumeration. Every class is finite and
// every 1D generalized cylinder lands in exactly one class.
int coord_weight(int x) { return 2 * std::abs(x) + (x < 0 ? 1 : 0) + 1; }
int bit_weight(int b) { return b + 2; }

// All nonempty cylinder patterns of exactly the given weight, bits drawn
// from indices >= 0.
void cylinders_of_weight(int weight, int min_bit, std::map<int, bool>& cur,
                         std::vector<CylinderPattern>& out) {
  if (weight == 0) {
    if (!cur.empty()) out.emplace_back(cur);
    return;
  }
  for (int b = min_bit; bit_weight(b) <= weight; ++b) {
    for (bool v : {false, true}) {
      cur[b] = v;
      cylinders_of_weight(weight - bit_weight(b), b + 1, cur, out);
      cur.erase(b);
    }
  }
}

void gencyls_of_weight(int weight, int min_coord_rank,
                       std::map<Site, CylinderPattern>& cur,
                       std::vector<GenCylinder>& out) {
  if (weight == 0) {
    if (!cur.empty()) out.emplace_back(GenCylinder(1, cur));
    return;
  }
  // Coordinates ranked 0, -1, 1, -2, 2, ... by weight; enumerate sites in
  // increasing rank so each site set is chosen once.
  for (int rank = min_coord_rank;; ++rank) {
    int x = (rank % 2 == 0) ? rank / 2 : -(rank / 2 + 1);
    int cw = coord_weight(x);
    if (cw + bit_weight(0) > weight) break;
    std::vector<CylinderPattern> pats;
    for (int pw = bit_weight(0); pw <= weight - cw; ++pw) {
      std::map<int, bool> scratch;
      cylinders_of_weight(pw, 0, scratch, pats);
    }
    for (const auto& p : pats) {
      int pw = 0;
      for (const auto& [b, v] : p.bits()) pw += bit_weight(b);
      cur.emplace(Site{x}, p);
      gencyls_of_weight(weight - cw - pw, rank + 1, cur, out);
      cur.erase(Site{x});
    }
  }
}

}  // namespace

std::vector<GenCylinder> canonical_gencylinders(int count) {
  std::vector<GenCylinder> out;
  for (int w = 3; static_cast<int>(out.size()) < count; ++w) {
    std::vector<GenCylinder> cls;
    std::map<Site, CylinderPattern> cur;
    gencyls_of_weight(w, 0, cur, cls);
    std::sort(cls.begin(), cls.end());
    for (auto& g : cls) {
      out.push_back(std::move(g));
      if (static_cast<int>(out.size()) == count) break;
    }
    if (w > 256) throw Error("canonical enumeration ran away");
  }
  return out;
}

RegistryMaster::RegistryMaster(std::vector<std::shared_ptr<Enumerator>> lanes)
    : lanes_(std::move(lanes)) {
  for (const auto& e : lanes_)
    if (!e) throw Error("registry lane must not be null");
}

int RegistryMaster::dim() const {
  return lanes_.empty() ? 1 : lanes_.front()->dim();
}

std::vector<LaneEmission> RegistryMaster::step(int k) const {
  std::vector<LaneEmission> out;
  for (std::uint64_t n = 0; n < lanes_.size() && n <= static_cast<std::uint64_t>(k); ++n)
    for (auto& cyl : lanes_[n]->step(k - static_cast<int>(n)))
      out.push_back(LaneEmission{n, std::move(cyl)});
  return out;
}

StageSet product_stage(const MasterEnumerator& master, int k) {
  std::vector<GenCylinder> lifted;
  for (const auto& [lane, cyl] : master.step(k))
    lifted.push_back(lift_gencyl(lane, cyl));
  return StageSet(master.dim(), std::move(lifted));
}

StageSet guarded_stage(const Enumerator& source, int k,
                       const EdsEmptinessOptions& opts) {
  if (source.dim() != 1)
    throw DimensionMismatch("guarded_stage requires a 1D enumerator");
  std::vector<GenCylinder> canon = canonical_gencylinders(k);
  std::vector<GenCylinder> canon_norm;
  canon_norm.reserve(canon.size());
  for (const auto& g : canon) canon_norm.push_back(g.normalized());

  // L_j = emissions within j steps whose canonical index is <= j.
  auto truncation = [&](int j) {
    std::vector<GenCylinder> kept;
    for (const auto& g : source.step(j)) {
      GenCylinder n = g.normalized();
      for (int i = 0; i < j && i < static_cast<int>(canon_norm.size()); ++i)
        if (canon_norm[i] == n) {
          kept.push_back(n);
          break;
        }
    }
    return kept;
  };

  // Truncations grow with j, so emptiness is monotone; the largest
  // nonempty prefix is found scanning down from k. L_0 is empty and the
  // full shift is nonempty, so the scan terminates.
  for (int j = k; j >= 0; --j) {
    std::vector<GenCylinder> candidate = truncation(j);
    if (!decide_empty_eds_1d(candidate, opts))
      return StageSet(1, std::move(candidate));
  }
  throw Error("guarded_stage: unreachable, empty truncation cannot be empty");
}

namespace {

class GuardedRegistryMaster : public MasterEnumerator {
public:
  GuardedRegistryMaster(const std::vector<std::shared_ptr<Enumerator>>& lanes,
                        const EdsEmptinessOptions& opts)
      : lanes_(lanes), opts_(opts) {}
  int dim() const override { return 1; }
  std::vector<LaneEmission> step(int k) const override {
    std::vector<LaneEmission> out;
    for (std::uint64_t n = 0;
         n < lanes_.size() && n <= static_cast<std::uint64_t>(k); ++n) {
      StageSet guarded =
          guarded_stage(*lanes_[n], k - static_cast<int>(n), opts_);
      for (const auto& cyl : guarded.excluded())
        out.push_back(LaneEmission{n, cyl});
    }
    return out;
  }

private:
  const std::vector<std::shared_ptr<Enumerator>>& lanes_;
  EdsEmptinessOptions opts_;
};

}  // namespace

StageSet universal_stage(int k,
                         const std::vector<std::shared_ptr<Enumerator>>& registry,
                         const EdsEmptinessOptions& opts) {
  for (const auto& e : registry)
    if (e->dim() != 1)
      throw DimensionMismatch("universal_stage requires 1D enumerators");
  return product_stage(GuardedRegistryMaster(registry, opts), k);
}

ClopenPartition::ClopenPartition(Alphabet alphabet, int dim,
                                 std::vector<std::vector<GenCylinder>> parts)
    : alphabet_(std::move(alphabet)), dim_(dim), parts_(std::move(parts)) {
  if (static_cast<int>(parts_.size()) != alphabet_.size())
    throw AlphabetMismatch("partition needs one part per symbol");

  std::set<std::pair<Site, int>> atom_set;
  for (auto& part : parts_)
    for (auto& g : part) {
      if (g.dim() != dim_)
        throw DimensionMismatch("partition cylinder dimension mismatch");
      g = g.normalized();
      for (const auto& [site, pat] : g.cells())
        for (const auto& [b, v] : pat.bits()) atom_set.emplace(site, b);
    }
  atoms_.assign(atom_set.begin(), atom_set.end());
  if (atoms_.size() > 24)
    throw Error("partition constrains too many atoms to validate");

  // Exhaustive boolean analysis: every assignment of the constrained atoms
  // must land in exactly one part.
  std::map<std::pair<Site, int>, int> pos;
  for (size_t i = 0; i < atoms_.size(); ++i) pos[atoms_[i]] = static_cast<int>(i);
  std::uint64_t combos = 1ull << atoms_.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    int hits = 0;
    for (const auto& part : parts_) {
      bool in_part = false;
      for (const auto& g : part) {
        bool match = true;
        for (const auto& [site, pat] : g.cells())
          for (const auto& [b, v] : pat.bits()) {
            bool bit = mask >> pos.at({site, b}) & 1;
            if (bit != v) {
              match = false;
              break;
            }
          }
        if (match) {
          in_part = true;
          break;
        }
      }
      if (in_part) ++hits;
    }
    if (hits != 1)
      throw Error(hits == 0 ? "partition does not cover Omega"
                            : "partition parts overlap");
  }
}

bool verify_partition_factor(const StageSet& src_stage,
                             const ClopenPartition& part,
                             const SftSpec& dst_spec, int n, int r,
                             Budget& budget) {
  int d = src_stage.dim();
  if (part.dim() != d || dst_spec.dim() != d)
    throw DimensionMismatch("verify_partition_factor: dimension mismatch");
  if (!(part.alphabet() == dst_spec.alphabet()))
    throw AlphabetMismatch("partition symbols must match the target alphabet");
  if (r <= dst_spec.max_extent())
    throw Error("verify_partition_factor requires r above the forbidden extent");

  Box window = Box::centered(d, r);
  Box shifts = Box::centered(d, n);

  // Exclusion instances: every stage cylinder at every shift in range.
  std::vector<GenCylinder> instances;
  for (const auto& g : src_stage.excluded()) {
    GenCylinder norm = g.normalized();
    bool vacuous = true;
    for (const auto& [site, pat] : norm.cells())
      if (!pat.empty()) vacuous = false;
    if (vacuous) return true;  // stage already excludes everything
    for (const auto& u : shifts.sites()) instances.push_back(norm.translated(u));
  }

  // Atom universe: partition atoms shifted over the symbol window, plus all
  // instance atoms.
  std::set<std::pair<Site, int>> atom_set;
  for (const auto& v : window.sites())
    for (const auto& [site, b] : part.atoms()) atom_set.emplace(site + v, b);
  for (const auto& inst : instances)
    for (const auto& [site, pat] : inst.cells())
      for (const auto& [b, val] : pat.bits()) atom_set.emplace(site, b);

  std::vector<std::pair<Site, int>> atoms(atom_set.begin(), atom_set.end());
  if (atoms.size() >= 63 ||
      (1ull << atoms.size()) > budget.node_limit - budget.nodes)
    throw BudgetExhausted("verify_partition_factor: atom space too large");
  std::map<std::pair<Site, int>, int> pos;
  for (size_t i = 0; i < atoms.size(); ++i) pos[atoms[i]] = static_cast<int>(i);

  auto matches = [&](const GenCylinder& g, std::uint64_t mask) {
    for (const auto& [site, pat] : g.cells())
      for (const auto& [b, v] : pat.bits()) {
        bool bit = mask >> pos.at({site, b}) & 1;
        if (bit != v) return false;
      }
    return true;
  };

  std::uint64_t combos = 1ull << atoms.size();
  auto window_sites = window.sites();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    budget.tick();
    bool excluded = false;
    for (const auto& inst : instances)
      if (matches(inst, mask)) {
        excluded = true;
        break;
      }
    if (excluded) continue;

    // Symbolize the window and check admissibility.
    std::vector<std::pair<Site, int>> cells;
    for (const auto& v : window_sites) {
      int symbol = -1;
      for (int s = 0; s < part.alphabet().size() && symbol < 0; ++s)
        for (const auto& g : part.parts()[s])
          if (matches(g.translated(v), mask)) {
            symbol = s;
            break;
          }
      // The partition covers Omega, so a symbol always exists.
      cells.emplace_back(v, symbol);
    }
    if (!is_admissible(Pattern(d, std::move(cells)), dst_spec)) return false;
  }
  return true;
}

}  // namespace sftlab

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "sftlab/cylinders.hpp"
#include "sftlab/onedim.hpp"
#include "sftlab/patterns.hpp"

namespace sftlab {

// Cantor pairing and its inverse.
std::uint64_t pairing(std::uint64_t i, std::uint64_t n);
std::pair<std::uint64_t, std::uint64_t> unpairing(std::uint64_t k);

// Lane-n projection: keeps the bits at positions pairing(i, n), re-indexed
// to i. Bits outside the lane vanish (possibly leaving the empty pattern).
CylinderPattern project_cylinder(std::uint64_t n, const CylinderPattern& a);

// Lane-n embedding: bit i moves to position pairing(i, n). The canonical
// preimage of a cylinder through the lane projection.
CylinderPattern lift_cylinder(std::uint64_t n, const CylinderPattern& a);

GenCylinder project_gencyl(std::uint64_t n, const GenCylinder& a);
GenCylinder lift_gencyl(std::uint64_t n, const GenCylinder& a);

// Whether the lane-n projection of [a] is contained in [b].
bool proj_subset(std::uint64_t n, const GenCylinder& a, const GenCylinder& b);

// Step-indexed enumerator of generalized cylinders: step(k) is the finite
// set emitted within k steps, monotone in k, step(0) empty.
class Enumerator {
public:
  virtual ~Enumerator() = default;
  virtual int dim() const = 0;
  virtual std::vector<GenCylinder> step(int k) const = 0;
};

// Enumerator scripted as a finite list of (step stamp, cylinder) emissions.
class ScriptedEnumerator : public Enumerator {
public:
  ScriptedEnumerator(int dim, std::vector<std::pair<int, GenCylinder>> emissions);
  int dim() const override { return dim_; }
  std::vector<GenCylinder> step(int k) const override;
  const std::vector<std::pair<int, GenCylinder>>& emissions() const {
    return emissions_;
  }

private:
  int dim_;
  std::vector<std::pair<int, GenCylinder>> emissions_;
};

// Finite stage approximation of an effective subshift: the exclusions known
// so far, semantically deduplicated.
class StageSet {
public:
  StageSet(int dim, std::vector<GenCylinder> excluded);
  int dim() const { return dim_; }
  const std::vector<GenCylinder>& excluded() const { return excluded_; }
  bool operator==(const StageSet& o) const {
    return dim_ == o.dim_ && excluded_ == o.excluded_;
  }

private:
  int dim_;
  std::vector<GenCylinder> excluded_;
};

// The first `count` entries of the fixed canonical enumeration of 1D
// generalized cylinders: graded by a finite weight (sites, coordinate
// magnitudes and bit indices all contribute), ordered lexicographically
// within a weight class. Deterministic and stable across runs.
std::vector<GenCylinder> canonical_gencylinders(int count);

// Master enumerator over lane-tagged emissions.
struct LaneEmission {
  std::uint64_t lane;
  GenCylinder cyl;
};

class MasterEnumerator {
public:
  virtual ~MasterEnumerator() = default;
  virtual int dim() const = 0;
  virtual std::vector<LaneEmission> step(int k) const = 0;
};

// Dovetails a registry of enumerators: lane n contributes its step(k-n)
// emissions at master stage k, so every emission eventually appears and
// only lanes n <= k are consulted.
class RegistryMaster : public MasterEnumerator {
public:
  explicit RegistryMaster(std::vector<std::shared_ptr<Enumerator>> lanes);
  int dim() const override;
  std::vector<LaneEmission> step(int k) const override;

private:
  std::vector<std::shared_ptr<Enumerator>> lanes_;
};

// Stage-k exclusions of the product system: every emitted (n, b) lifted to
// the canonical preimage cylinder through lane n.
StageSet product_stage(const MasterEnumerator& master, int k);

// Guarded truncation of an enumerator (dim 1): the largest prefix, indexed
// against the canonical enumeration, that still defines a nonempty subshift.
// The result is nonempty at every stage by construction.
StageSet guarded_stage(const Enumerator& source, int k,
                       const EdsEmptinessOptions& opts = {});

// Stage-k exclusions of the guarded universal product over the registry.
StageSet universal_stage(int k,
                         const std::vector<std::shared_ptr<Enumerator>>& registry,
                         const EdsEmptinessOptions& opts = {});

// Finite clopen partition of Omega indexed by the symbols of an alphabet;
// each part is a finite union of generalized cylinders. Disjointness and
// covering are validated eagerly by exhaustive boolean analysis over the
// finitely many constrained (site, bit) atoms.
class ClopenPartition {
public:
  ClopenPartition(Alphabet alphabet, int dim,
                  std::vector<std::vector<GenCylinder>> parts);

  const Alphabet& alphabet() const { return alphabet_; }
  int dim() const { return dim_; }
  const std::vector<std::vector<GenCylinder>>& parts() const { return parts_; }

  // All (site, bit) atoms any part constrains.
  const std::vector<std::pair<Site, int>>& atoms() const { return atoms_; }

private:
  Alphabet alphabet_;
  int dim_;
  std::vector<std::vector<GenCylinder>> parts_;
  std::vector<std::pair<Site, int>> atoms_;
};

// Finite factor check: true iff every bit assignment consistent with the
// stage exclusions applied at all shifts of sup-norm <= n symbolizes,
// through the partition, to a dst-admissible pattern on [-r;r]^d. Requires
// r exceeding the largest dst forbidden extent. Throws BudgetExhausted when
// the boolean analysis would exceed the budget's node limit.
bool verify_partition_factor(const StageSet& src_stage,
                             const ClopenPartition& part,
                             const SftSpec& dst_spec, int n, int r,
                             Budget& budget);

}  // namespace sftlab

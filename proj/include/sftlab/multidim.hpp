#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/patterns.hpp"

namespace sftlab {

// Fully periodic configuration given by its fundamental domain; the standard
// machine-checkable nonemptiness certificate.
struct TorusPattern {
  std::vector<int> periods;  // one positive period per axis
  std::vector<int> cells;    // row-major over the fundamental domain

  int dim() const { return static_cast<int>(periods.size()); }
  std::uint64_t volume() const;
  int at(const Site& s) const;  // periodic extension lookup
};

// True iff no forbidden pattern appears anywhere in the periodic extension.
bool verify_torus(const SftSpec& spec, const TorusPattern& t);

struct Verdict {
  enum class Kind { ProvedEmpty, ProvedNonempty, Unknown };
  Kind kind;
  int radius = 0;                      // ProvedEmpty: no admissible pattern on [-n;n]^d
  std::optional<TorusPattern> cert;    // ProvedNonempty
  std::uint64_t fuel_spent = 0;        // search nodes consumed

  bool proved_empty() const { return kind == Kind::ProvedEmpty; }
  bool proved_nonempty() const { return kind == Kind::ProvedNonempty; }
  bool unknown() const { return kind == Kind::Unknown; }
};

struct Fuel {
  int max_radius = 6;                  // emptiness ladder bound
  std::uint64_t node_budget = 2'000'000;
};

// Budgeted semi-decision of SFT emptiness. Alternates the growing-radius
// emptiness ladder with the growing-volume periodic-certificate ladder;
// sound in both proved branches, Unknown when fuel runs out.
Verdict semidecide_empty(const SftSpec& spec, const Fuel& fuel);

// First admissible torus in period-volume order (ties lexicographic on the
// period tuple, then on the fundamental-domain word).
std::optional<TorusPattern> search_periodic(const SftSpec& spec,
                                            const std::vector<int>& max_periods,
                                            Budget& budget);

// A Wang tile: four edge colors.
struct WangTile {
  std::string name;
  std::string north, east, south, west;
};

// Compile a Wang tile set to the 2D SFT forbidding mismatched horizontal
// (east/west) and vertical (north/south) neighbor pairs. Coordinates are
// (x, y) with y growing northward.
SftSpec wang_to_sft(const std::vector<WangTile>& tiles);

}  // namespace sftlab

#pragma once

// Shared test helpers: small spec factories and independent brute-force
// oracles. Everything here is deliberately naive so library results can be
// checked against a second, unrelated code path.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "sftlab/cylinders.hpp"
#include "sftlab/eds.hpp"
#include "sftlab/patterns.hpp"

namespace testsupport {

using namespace sftlab;

inline SftSpec golden_mean_1d() {
  Alphabet ab = Alphabet::digits(2);
  return SftSpec(ab, 1, {Pattern(1, {{Site{0}, 1}, {Site{1}, 1}})});
}

// Forbid "11" horizontally and vertically.
inline SftSpec golden_mean_2d() {
  Alphabet ab = Alphabet::digits(2);
  return SftSpec(ab, 2,
                 {Pattern(2, {{Site{0, 0}, 1}, {Site{1, 0}, 1}}),
                  Pattern(2, {{Site{0, 0}, 1}, {Site{0, 1}, 1}})});
}

// Forbid equal adjacent symbols in both axes.
inline SftSpec checkerboard_2d() {
  Alphabet ab = Alphabet::digits(2);
  std::vector<Pattern> forb;
  for (int s = 0; s < 2; ++s) {
    forb.push_back(Pattern(2, {{Site{0, 0}, s}, {Site{1, 0}, s}}));
    forb.push_back(Pattern(2, {{Site{0, 0}, s}, {Site{0, 1}, s}}));
  }
  return SftSpec(ab, 2, std::move(forb));
}

// Brute-force admissibility: scan every offset of every forbidden pattern.
inline bool naive_admissible(const Pattern& a, const SftSpec& spec) {
  std::map<Site, int> cells(a.cells().begin(), a.cells().end());
  for (const auto& b : spec.forbidden()) {
    // Try every offset that lands all of b inside a's support bounding box.
    std::vector<int> alo = a.cells().front().first.coords, ahi = alo;
    for (const auto& [s, v] : a.cells())
      for (int i = 0; i < a.dim(); ++i) {
        alo[i] = std::min(alo[i], s[i]);
        ahi[i] = std::max(ahi[i], s[i]);
      }
    // Offsets range so that each b-site stays within [alo, ahi].
    std::function<bool(int, Site&)> rec = [&](int axis, Site& u) -> bool {
      if (axis == a.dim()) {
        for (const auto& [s, v] : b.cells()) {
          auto it = cells.find(s + u);
          if (it == cells.end() || it->second != v) return false;
        }
        return true;
      }
      for (int x = alo[axis] - 8; x <= ahi[axis] + 8; ++x) {
        u.coords[axis] = x;
        if (rec(axis + 1, u)) return true;
      }
      return false;
    };
    Site u(std::vector<int>(a.dim(), 0));
    if (rec(0, u)) return false;
  }
  return true;
}

// Brute-force enumeration of all admissible total patterns on a box.
inline std::vector<Pattern> naive_enumerate(const SftSpec& spec, const Box& box) {
  auto sites = box.sites();
  std::vector<Pattern> out;
  int nsym = spec.alphabet().size();
  std::vector<int> assign(sites.size(), 0);
  while (true) {
    std::vector<std::pair<Site, int>> cells;
    for (size_t i = 0; i < sites.size(); ++i) cells.emplace_back(sites[i], assign[i]);
    Pattern p(spec.dim(), std::move(cells));
    if (naive_admissible(p, spec)) out.push_back(p);
    int i = static_cast<int>(sites.size()) - 1;
    while (i >= 0) {
      if (++assign[i] < nsym) break;
      assign[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

// Brute-force 1D emptiness: search for an admissible cyclic word of length
// <= max_p (the repetition of which is checked directly).
inline bool naive_empty_1d(const SftSpec& spec, int max_p) {
  int nsym = spec.alphabet().size();
  for (int p = 1; p <= max_p; ++p) {
    std::vector<int> w(p, 0);
    while (true) {
      bool ok = true;
      for (const auto& b : spec.forbidden()) {
        int lo = b.cells().front().first[0], hi = b.cells().back().first[0];
        for (int u = -2 * p; u <= 2 * p && ok; ++u) {
          bool match = true;
          for (const auto& [s, v] : b.cells()) {
            int x = (((u + s[0]) % p) + p) % p;
            if (w[x] != v) {
              match = false;
              break;
            }
          }
          if (match) ok = false;
        }
        (void)lo;
        (void)hi;
        if (!ok) break;
      }
      if (ok) return false;  // found a periodic configuration
      int i = p - 1;
      while (i >= 0) {
        if (++w[i] < nsym) break;
        w[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return true;
}

// Semantic cylinder-set inclusion over truncated Cantor points {0,1}^m.
inline bool naive_cyl_subset(const CylinderPattern& a, const CylinderPattern& b,
                             int m) {
  for (std::uint32_t x = 0; x < (1u << m); ++x) {
    auto matches = [&](const CylinderPattern& c) {
      for (const auto& [i, v] : c.bits())
        if (((x >> i) & 1) != static_cast<unsigned>(v)) return false;
      return true;
    };
    if (matches(a) && !matches(b)) return false;
  }
  return true;
}

// A point of Omega_1 with finitely many nonzero bits over a zero background.
struct FinitePoint {
  std::map<std::pair<int, int>, bool> bits;  // (site, bit) -> value

  bool bit(int site, int idx) const {
    auto it = bits.find({site, idx});
    return it == bits.end() ? false : it->second;
  }
};

// Does the point lie inside the translated cylinder instance?
inline bool point_in_gencyl(const FinitePoint& p, const GenCylinder& g, int shift) {
  for (const auto& [site, pat] : g.cells())
    for (const auto& [b, v] : pat.bits())
      if (p.bit(site[0] + shift, b) != v) return false;
  return true;
}

// Membership of the point in the subshift stage: no exclusion matches at any
// shift. Only finitely many shifts interact with the point's support; beyond
// them the all-zero background decides, so testing one far shift suffices.
inline bool point_survives_stage(const FinitePoint& p, const StageSet& stage) {
  int lo = -1, hi = 1;
  for (const auto& [key, v] : p.bits) {
    lo = std::min(lo, key.first);
    hi = std::max(hi, key.first);
  }
  for (const auto& g : stage.excluded()) {
    int glo = g.cells().begin()->first[0], ghi = g.cells().rbegin()->first[0];
    for (int shift = lo - ghi - 1; shift <= hi - glo + 1; ++shift)
      if (point_in_gencyl(p, g, shift)) return false;
    // Far placement: only the zero background is read.
    if (point_in_gencyl(p, g, hi - glo + 2)) return false;
  }
  return true;
}

// Lane projection of a finite point: bit (site, i) of the image is bit
// (site, pairing(i, lane)) of the source. Zero background is preserved.
inline FinitePoint project_point(const FinitePoint& p, std::uint64_t lane) {
  FinitePoint out;
  for (const auto& [key, v] : p.bits) {
    auto [i, n] = unpairing(static_cast<std::uint64_t>(key.second));
    if (n == lane) out.bits[{key.first, static_cast<int>(i)}] = v;
  }
  return out;
}

}  // namespace testsupport

#include "sftlab/multidim.hpp"

#include <algorithm>
#include <functional>

namespace sftlab {

std::uint64_t TorusPattern::volume() const {
  std::uint64_t v = 1;
  for (int p : periods) v *= static_cast<std::uint64_t>(p);
  return v;
}

int TorusPattern::at(const Site& s) const {
  // Row-major: first coordinate most significant.
  std::uint64_t idx = 0;
  for (int i = 0; i < dim(); ++i) {
    int r = s[i] % periods[i];
    if (r < 0) r += periods[i];
    idx = idx * periods[i] + r;
  }
  return cells[idx];
}

bool verify_torus(const SftSpec& spec, const TorusPattern& t) {
  if (t.dim() != spec.dim())
    throw DimensionMismatch("verify_torus: dimension mismatch");
  for (int c : t.cells)
    if (c < 0 || c >= spec.alphabet().size())
      throw AlphabetMismatch("verify_torus: cell symbol outside alphabet");
  // Offsets within one fundamental domain suffice: every placement in the
  // periodic extension is a translate of one of these mod the periods.
  int d = t.dim();
  for (const auto& b : spec.forbidden()) {
    Site u(std::vector<int>(d, 0));
    while (true) {
      bool match = true;
      for (const auto& [site, sym] : b.cells())
        if (t.at(site + u) != sym) {
          match = false;
          break;
        }
      if (match) return false;
      int i = d - 1;
      while (i >= 0) {
        if (++u.coords[i] < t.periods[i]) break;
        u.coords[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return true;
}

namespace {

// All period tuples with the given volume, in lexicographic order.
void tuples_with_volume(int d, std::uint64_t vol, const std::vector<int>& max_periods,
                        std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == static_cast<size_t>(d) - 1) {
    if (vol <= static_cast<std::uint64_t>(max_periods.back())) {
      cur.push_back(static_cast<int>(vol));
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  int axis = static_cast<int>(cur.size());
  for (std::uint64_t p = 1; p <= vol && p <= static_cast<std::uint64_t>(max_periods[axis]); ++p) {
    if (vol % p) continue;
    cur.push_back(static_cast<int>(p));
    tuples_with_volume(d, vol / p, max_periods, cur, out);
    cur.pop_back();
  }
}

// DFS over fundamental-domain assignments; prunes on any forbidden pattern
// fully determined by the assigned prefix (reading through the torus wrap).
std::optional<TorusPattern> search_torus_with_periods(const SftSpec& spec,
                                                      const std::vector<int>& periods,
                                                      Budget& budget) {
  int d = spec.dim();
  std::uint64_t vol = 1;
  for (int p : periods) vol *= static_cast<std::uint64_t>(p);

  TorusPattern t;
  t.periods = periods;
  t.cells.assign(vol, -1);

  auto flat = [&](const Site& s) {
    std::uint64_t idx = 0;
    for (int i = 0; i < d; ++i) {
      int r = s[i] % periods[i];
      if (r < 0) r += periods[i];
      idx = idx * periods[i] + r;
    }
    return idx;
  };

  // For each flat index, the forbidden placements whose wrapped support has
  // that index as its largest flat index.
  std::vector<std::vector<std::vector<std::pair<std::uint64_t, int>>>> by_last(vol);
  for (const auto& b : spec.forbidden()) {
    // Offsets over one fundamental domain.
    Site u(std::vector<int>(d, 0));
    while (true) {
      std::vector<std::pair<std::uint64_t, int>> checks;
      std::uint64_t last = 0;
      bool degenerate = false;
      for (const auto& [site, sym] : b.cells()) {
        std::uint64_t idx = flat(site + u);
        // Two support sites may wrap onto the same torus cell; conflicting
        // symbols there make the placement unsatisfiable, so skip it.
        for (const auto& [pidx, psym] : checks)
          if (pidx == idx && psym != sym) degenerate = true;
        checks.emplace_back(idx, sym);
        last = std::max(last, idx);
      }
      if (!degenerate) by_last[last].push_back(std::move(checks));
      int i = d - 1;
      while (i >= 0) {
        if (++u.coords[i] < periods[i]) break;
        u.coords[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

  int nsym = spec.alphabet().size();
  std::function<std::optional<TorusPattern>(std::uint64_t)> dfs =
      [&](std::uint64_t j) -> std::optional<TorusPattern> {
    if (j == vol) return t;
    for (int s = 0; s < nsym; ++s) {
      if (!budget.tick())
        throw BudgetExhausted("search_periodic: node budget exhausted");
      t.cells[j] = s;
      bool blocked = false;
      for (const auto& checks : by_last[j]) {
        bool match = true;
        for (const auto& [idx, sym] : checks)
          if (t.cells[idx] != sym) {
            match = false;
            break;
          }
        if (match) {
          blocked = true;
          break;
        }
      }
      if (!blocked) {
        auto found = dfs(j + 1);
        if (found) return found;
      }
      t.cells[j] = -1;
    }
    return std::nullopt;
  };
  return dfs(0);
}

}  // namespace

std::optional<TorusPattern> search_periodic(const SftSpec& spec,
                                            const std::vector<int>& max_periods,
                                            Budget& budget) {
  int d = spec.dim();
  if (static_cast<int>(max_periods.size()) != d)
    throw DimensionMismatch("search_periodic: period tuple arity mismatch");
  std::uint64_t max_vol = 1;
  for (int p : max_periods) {
    if (p < 1) throw Error("search_periodic: max periods must be >= 1");
    max_vol *= static_cast<std::uint64_t>(p);
  }
  for (std::uint64_t vol = 1; vol <= max_vol; ++vol) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    tuples_with_volume(d, vol, max_periods, cur, tuples);
    for (const auto& periods : tuples) {
      auto found = search_torus_with_periods(spec, periods, budget);
      if (found) return found;
    }
  }
  return std::nullopt;
}

Verdict semidecide_empty(const SftSpec& spec, const Fuel& fuel) {
  Budget budget;
  budget.node_limit = fuel.node_budget;
  int d = spec.dim();

  for (int n = 1; n <= fuel.max_radius; ++n) {
    // Emptiness rung: a completed, empty enumeration on [-n;n]^d proves
    // emptiness of the whole shift space.
    bool saw_pattern = false;
    EnumerationResult rung;
    try {
      rung = enumerate_admissible(spec, Box::centered(d, n), budget,
                                  [&](const Pattern&) {
                                    saw_pattern = true;
                                    return false;  // existence is enough
                                  });
    } catch (const BudgetExhausted&) {
      return Verdict{Verdict::Kind::Unknown, 0, std::nullopt, budget.nodes};
    }
    if (!saw_pattern && rung.complete)
      return Verdict{Verdict::Kind::ProvedEmpty, n, std::nullopt, budget.nodes};
    if (!saw_pattern && !rung.complete)
      return Verdict{Verdict::Kind::Unknown, 0, std::nullopt, budget.nodes};

    // Periodic rung: all period tuples of volume n.
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    std::vector<int> cap(d, n);
    tuples_with_volume(d, n, cap, cur, tuples);
    try {
      for (const auto& periods : tuples) {
        auto found = search_torus_with_periods(spec, periods, budget);
        if (found) {
          if (!verify_torus(spec, *found))
            throw Error("internal: periodic certificate failed verification");
          return Verdict{Verdict::Kind::ProvedNonempty, 0, *found, budget.nodes};
        }
      }
    } catch (const BudgetExhausted&) {
      return Verdict{Verdict::Kind::Unknown, 0, std::nullopt, budget.nodes};
    }
  }
  return Verdict{Verdict::Kind::Unknown, 0, std::nullopt, budget.nodes};
}

SftSpec wang_to_sft(const std::vector<WangTile>& tiles) {
  if (tiles.empty()) throw Error("wang_to_sft: empty tile set");
  std::vector<std::string> names;
  names.reserve(tiles.size());
  for (const auto& t : tiles) names.push_back(t.name);
  Alphabet alphabet(std::move(names));

  std::vector<Pattern> forbidden;
  int n = static_cast<int>(tiles.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // b to the east of a: a.east must equal b.west.
      if (tiles[a].east != tiles[b].west)
        forbidden.push_back(Pattern(2, {{Site{0, 0}, a}, {Site{1, 0}, b}}));
      // b to the north of a: a.north must equal b.south.
      if (tiles[a].north != tiles[b].south)
        forbidden.push_back(Pattern(2, {{Site{0, 0}, a}, {Site{0, 1}, b}}));
    }
  return SftSpec(alphabet, 2, std::move(forbidden));
}

}  // namespace sftlab

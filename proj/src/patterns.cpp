#include "sftlab/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace sftlab {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw AlphabetMismatch("alphabet must be nonempty");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size())
    throw AlphabetMismatch("alphabet symbol names must be distinct");
}

int Alphabet::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return -1;
}

Alphabet Alphabet::digits(int k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (int i = 0; i < k; ++i) names.push_back(std::to_string(i));
  return Alphabet(std::move(names));
}

Site operator+(const Site& a, const Site& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("site arity mismatch");
  Site r = a;
  for (int i = 0; i < b.dim(); ++i) r.coords[i] += b.coords[i];
  return r;
}

Site operator-(const Site& a, const Site& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("site arity mismatch");
  Site r = a;
  for (int i = 0; i < b.dim(); ++i) r.coords[i] -= b.coords[i];
  return r;
}

std::string to_string(const Site& s) {
  std::ostringstream os;
  for (int i = 0; i < s.dim(); ++i) {
    if (i) os << ',';
    os << s.coords[i];
  }
  return os.str();
}

Pattern::Pattern(int dim, std::vector<std::pair<Site, int>> cells)
    : dim_(dim), cells_(std::move(cells)) {
  if (cells_.empty()) throw Error("pattern support must be nonempty");
  for (const auto& [site, sym] : cells_) {
    if (site.dim() != dim_)
      throw DimensionMismatch("pattern site arity differs from pattern dim");
    if (sym < 0) throw AlphabetMismatch("negative symbol index");
  }
  std::sort(cells_.begin(), cells_.end());
  for (size_t i = 1; i < cells_.size(); ++i)
    if (cells_[i].first == cells_[i - 1].first)
      throw Error("pattern assigns a site twice");
}

std::optional<int> Pattern::at(const Site& s) const {
  auto it = std::lower_bound(
      cells_.begin(), cells_.end(), s,
      [](const auto& cell, const Site& key) { return cell.first < key; });
  if (it != cells_.end() && it->first == s) return it->second;
  return std::nullopt;
}

Pattern Pattern::translated(const Site& u) const {
  std::vector<std::pair<Site, int>> cells = cells_;
  for (auto& [site, sym] : cells) site = site + u;
  return Pattern(dim_, std::move(cells));
}

Pattern Pattern::normalized() const {
  // cells_ is sorted, so the lexicographic minimum of the support is first.
  Site min = cells_.front().first;
  for (auto& c : min.coords) c = -c;
  return translated(min);
}

Pattern Pattern::restricted(const Box& box) const {
  std::vector<std::pair<Site, int>> cells;
  for (const auto& [site, sym] : cells_)
    if (box.contains(site)) cells.emplace_back(site, sym);
  if (cells.empty()) throw Error("restriction has empty support");
  return Pattern(dim_, std::move(cells));
}

std::vector<int> Pattern::extents() const {
  std::vector<int> lo = cells_.front().first.coords;
  std::vector<int> hi = lo;
  for (const auto& [site, sym] : cells_)
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::min(lo[i], site[i]);
      hi[i] = std::max(hi[i], site[i]);
    }
  std::vector<int> ext(dim_);
  for (int i = 0; i < dim_; ++i) ext[i] = hi[i] - lo[i];
  return ext;
}

std::string Pattern::word(const Alphabet& alphabet) const {
  if (dim_ != 1) throw DimensionMismatch("word() requires a 1D pattern");
  std::string w;
  int lo = cells_.front().first[0];
  int hi = cells_.back().first[0];
  for (int x = lo; x <= hi; ++x) {
    auto sym = at(Site{x});
    if (!sym) throw Error("word() requires a pattern total on its span");
    w += alphabet.name(*sym);
  }
  return w;
}

Pattern Pattern::from_word(const std::vector<int>& symbols, int origin) {
  std::vector<std::pair<Site, int>> cells;
  cells.reserve(symbols.size());
  for (size_t i = 0; i < symbols.size(); ++i)
    cells.emplace_back(Site{origin + static_cast<int>(i)}, symbols[i]);
  return Pattern(1, std::move(cells));
}

Box::Box(Site lo_, Site hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.dim() != hi.dim()) throw DimensionMismatch("box corner arity mismatch");
  for (int i = 0; i < lo.dim(); ++i)
    if (lo[i] > hi[i]) throw Error("box requires lo <= hi coordinatewise");
}

std::uint64_t Box::volume() const {
  std::uint64_t v = 1;
  for (int i = 0; i < dim(); ++i)
    v *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
  return v;
}

bool Box::contains(const Site& s) const {
  if (s.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (s[i] < lo[i] || s[i] > hi[i]) return false;
  return true;
}

std::vector<Site> Box::sites() const {
  std::vector<Site> out;
  out.reserve(volume());
  Site cur = lo;
  while (true) {
    out.push_back(cur);
    int i = dim() - 1;
    while (i >= 0) {
      if (++cur.coords[i] <= hi[i]) break;
      cur.coords[i] = lo[i];
      --i;
    }
    if (i < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Box Box::centered(int dim, int n) {
  return Box(Site(std::vector<int>(dim, -n)), Site(std::vector<int>(dim, n)));
}

Box Box::corner(int dim, int n) {
  return Box(Site(std::vector<int>(dim, 0)), Site(std::vector<int>(dim, n - 1)));
}

SftSpec::SftSpec(Alphabet alphabet, int dim, std::vector<Pattern> forbidden)
    : alphabet_(std::move(alphabet)), dim_(dim), max_extent_(0) {
  if (dim_ < 1) throw DimensionMismatch("dimension must be positive");
  std::set<Pattern> dedup;
  for (const auto& p : forbidden) {
    if (p.dim() != dim_)
      throw DimensionMismatch("forbidden pattern dimension differs from spec");
    for (const auto& [site, sym] : p.cells())
      if (sym >= alphabet_.size())
        throw AlphabetMismatch("forbidden pattern uses unknown symbol");
    dedup.insert(p.normalized());
  }
  forbidden_.assign(dedup.begin(), dedup.end());
  for (const auto& p : forbidden_)
    for (int e : p.extents()) max_extent_ = std::max(max_extent_, e);
}

bool appears_at(const Pattern& a, const Pattern& b, const Site& u) {
  if (a.dim() != b.dim() || a.dim() != u.dim())
    throw DimensionMismatch("appears_at: dimension mismatch");
  for (const auto& [site, sym] : b.cells()) {
    auto got = a.at(site + u);
    if (!got)
      throw SupportNotContained("appears_at: support(b)+u not inside support(a)");
    if (*got != sym) return false;
  }
  return true;
}

namespace {

// Offsets u such that support(b)+u fits inside the bounding box of a's
// support; only those can witness an appearance.
bool forbidden_appears(const Pattern& a, const Pattern& b) {
  int d = a.dim();
  std::vector<int> alo = a.cells().front().first.coords, ahi = alo;
  for (const auto& [site, sym] : a.cells())
    for (int i = 0; i < d; ++i) {
      alo[i] = std::min(alo[i], site[i]);
      ahi[i] = std::max(ahi[i], site[i]);
    }
  std::vector<int> blo = b.cells().front().first.coords, bhi = blo;
  for (const auto& [site, sym] : b.cells())
    for (int i = 0; i < d; ++i) {
      blo[i] = std::min(blo[i], site[i]);
      bhi[i] = std::max(bhi[i], site[i]);
    }
  std::vector<int> ulo(d), uhi(d);
  for (int i = 0; i < d; ++i) {
    ulo[i] = alo[i] - blo[i];
    uhi[i] = ahi[i] - bhi[i];
    if (ulo[i] > uhi[i]) return false;
  }
  // Iterate offsets.
  Site u(ulo);
  while (true) {
    bool match = true;
    for (const auto& [site, sym] : b.cells()) {
      auto got = a.at(site + u);
      if (!got || *got != sym) {
        match = false;
        break;
      }
    }
    if (match) return true;
    int i = d - 1;
    while (i >= 0) {
      if (++u.coords[i] <= uhi[i]) break;
      u.coords[i] = ulo[i];
      --i;
    }
    if (i < 0) return false;
  }
}

}  // namespace

bool is_admissible(const Pattern& a, const SftSpec& spec) {
  if (a.dim() != spec.dim())
    throw DimensionMismatch("is_admissible: dimension mismatch");
  for (const auto& [site, sym] : a.cells())
    if (sym >= spec.alphabet().size())
      throw AlphabetMismatch("pattern symbol outside spec alphabet");
  for (const auto& b : spec.forbidden())
    if (forbidden_appears(a, b)) return false;
  return true;
}

namespace {

// One forbidden-pattern placement inside the box, expressed in site indices
// of the box's lexicographic site order. `last` is the largest index, so the
// placement is fully assigned exactly when the DFS reaches it.
struct Placement {
  std::vector<std::pair<int, int>> checks;  // (site index, required symbol)
};

struct DfsContext {
  std::vector<Site> sites;
  // placements_by_last[j]: placements whose largest site index is j.
  std::vector<std::vector<Placement>> placements_by_last;
};

DfsContext prepare(const SftSpec& spec, const Box& box) {
  DfsContext ctx;
  ctx.sites = box.sites();
  std::map<Site, int> index;
  for (size_t i = 0; i < ctx.sites.size(); ++i)
    index[ctx.sites[i]] = static_cast<int>(i);
  ctx.placements_by_last.resize(ctx.sites.size());

  int d = box.dim();
  for (const auto& b : spec.forbidden()) {
    // Place b at every offset that keeps it inside the box.
    std::vector<int> blo = b.cells().front().first.coords, bhi = blo;
    for (const auto& [site, sym] : b.cells())
      for (int i = 0; i < d; ++i) {
        blo[i] = std::min(blo[i], site[i]);
        bhi[i] = std::max(bhi[i], site[i]);
      }
    std::vector<int> ulo(d), uhi(d);
    bool fits = true;
    for (int i = 0; i < d; ++i) {
      ulo[i] = box.lo[i] - blo[i];
      uhi[i] = box.hi[i] - bhi[i];
      if (ulo[i] > uhi[i]) fits = false;
    }
    if (!fits) continue;
    Site u(ulo);
    while (true) {
      Placement pl;
      int last = -1;
      for (const auto& [site, sym] : b.cells()) {
        int idx = index.at(site + u);
        pl.checks.emplace_back(idx, sym);
        last = std::max(last, idx);
      }
      ctx.placements_by_last[last].push_back(std::move(pl));
      int i = d - 1;
      while (i >= 0) {
        if (++u.coords[i] <= uhi[i]) break;
        u.coords[i] = ulo[i];
        --i;
      }
      if (i < 0) break;
    }
  }
  return ctx;
}

}  // namespace

EnumerationResult enumerate_admissible(
    const SftSpec& spec, const Box& box, Budget& budget,
    const std::function<bool(const Pattern&)>& visit) {
  if (box.dim() != spec.dim())
    throw DimensionMismatch("enumerate_admissible: box dimension mismatch");
  EnumerationResult res;
  DfsContext ctx = prepare(spec, box);
  const int nsites = static_cast<int>(ctx.sites.size());
  const int nsym = spec.alphabet().size();
  std::vector<int> assign(nsites, -1);

  // Returns false to abort the whole search (budget or visitor stop).
  std::function<bool(int)> dfs = [&](int j) -> bool {
    if (j == nsites) {
      std::vector<std::pair<Site, int>> cells;
      cells.reserve(nsites);
      for (int i = 0; i < nsites; ++i)
        cells.emplace_back(ctx.sites[i], assign[i]);
      return visit(Pattern(spec.dim(), std::move(cells)));
    }
    for (int s = 0; s < nsym; ++s) {
      if (!budget.tick()) return false;
      assign[j] = s;
      bool blocked = false;
      for (const auto& pl : ctx.placements_by_last[j]) {
        bool match = true;
        for (const auto& [idx, sym] : pl.checks)
          if (assign[idx] != sym) {
            match = false;
            break;
          }
        if (match) {
          blocked = true;
          break;
        }
      }
      if (!blocked && !dfs(j + 1)) {
        assign[j] = -1;
        return false;
      }
      assign[j] = -1;
    }
    return true;
  };

  res.complete = dfs(0);
  res.nodes = budget.nodes;
  return res;
}

EnumerationResult enumerate_admissible(const SftSpec& spec, const Box& box,
                                       Budget& budget) {
  std::vector<Pattern> acc;
  auto res = enumerate_admissible(spec, box, budget, [&](const Pattern& p) {
    acc.push_back(p);
    return true;
  });
  res.patterns = std::move(acc);
  return res;
}

std::uint64_t count_admissible(const SftSpec& spec, int n, Budget& budget) {
  if (n < 1) throw Error("count_admissible requires n >= 1");
  std::uint64_t count = 0;
  auto res = enumerate_admissible(spec, Box::corner(spec.dim(), n), budget,
                                  [&](const Pattern&) {
                                    ++count;
                                    return true;
                                  });
  if (!res.complete)
    throw BudgetExhausted("count_admissible: node budget exhausted");
  return count;
}

double entropy_upper(const SftSpec& spec, int n, Budget& budget) {
  std::uint64_t count = count_admissible(spec, n, budget);
  double cells = std::pow(static_cast<double>(n), spec.dim());
  if (count == 0) return -std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(count)) / cells;
}

}  // namespace sftlab

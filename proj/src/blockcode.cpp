#include "sftlab/blockcode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace sftlab {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base)
      throw Error("rule table size overflows");
    r *= base;
  }
  return r;
}

}  // namespace

BlockCode::BlockCode(int dim, Alphabet src, Alphabet dst,
                     std::vector<Site> window, std::vector<int> rule)
    : dim_(dim), src_(std::move(src)), dst_(std::move(dst)),
      window_(std::move(window)), rule_(std::move(rule)) {
  if (window_.empty()) throw Error("block code window must be nonempty");
  for (const auto& s : window_)
    if (s.dim() != dim_)
      throw DimensionMismatch("window site arity differs from code dim");
  std::sort(window_.begin(), window_.end());
  if (std::adjacent_find(window_.begin(), window_.end()) != window_.end())
    throw Error("window sites must be distinct");
  std::uint64_t expect = checked_pow(src_.size(), window_.size());
  if (rule_.size() != expect)
    throw Error("rule table size does not match |src|^|window|");
  for (int s : rule_)
    if (s < 0 || s >= dst_.size())
      throw AlphabetMismatch("rule output outside destination alphabet");
}

int BlockCode::window_radius() const {
  int r = 0;
  for (const auto& s : window_)
    for (int i = 0; i < dim_; ++i) r = std::max(r, std::abs(s[i]));
  return r;
}

std::vector<int> BlockCode::window_min() const {
  std::vector<int> lo = window_.front().coords;
  for (const auto& s : window_)
    for (int i = 0; i < dim_; ++i) lo[i] = std::min(lo[i], s[i]);
  return lo;
}

std::vector<int> BlockCode::window_max() const {
  std::vector<int> hi = window_.front().coords;
  for (const auto& s : window_)
    for (int i = 0; i < dim_; ++i) hi[i] = std::max(hi[i], s[i]);
  return hi;
}

std::uint64_t BlockCode::word_index(const std::vector<int>& word) const {
  if (word.size() != window_.size())
    throw Error("word length does not match window size");
  std::uint64_t idx = 0;
  std::uint64_t base = 1;
  for (size_t j = 0; j < word.size(); ++j) {
    if (word[j] < 0 || word[j] >= src_.size())
      throw AlphabetMismatch("word symbol outside source alphabet");
    idx += static_cast<std::uint64_t>(word[j]) * base;
    base *= static_cast<std::uint64_t>(src_.size());
  }
  return idx;
}

int BlockCode::rule_at(const std::vector<int>& word) const {
  return rule_[word_index(word)];
}

BlockCode BlockCode::identity(const Alphabet& alphabet, int dim) {
  std::vector<int> rule(alphabet.size());
  for (int i = 0; i < alphabet.size(); ++i) rule[i] = i;
  return BlockCode(dim, alphabet, alphabet,
                   {Site(std::vector<int>(dim, 0))}, std::move(rule));
}

BlockCode BlockCode::constant(const Alphabet& src, const Alphabet& dst,
                              int dim, int symbol) {
  std::vector<int> rule(src.size(), symbol);
  return BlockCode(dim, src, dst, {Site(std::vector<int>(dim, 0))},
                   std::move(rule));
}

CaSpec::CaSpec(BlockCode code) : code_(std::move(code)) {
  if (!(code_.src() == code_.dst()))
    throw AlphabetMismatch("a cellular automaton needs equal alphabets");
}

Pattern apply_to_pattern(const BlockCode& code, const Pattern& a) {
  if (a.dim() != code.dim())
    throw DimensionMismatch("apply_to_pattern: dimension mismatch");
  int d = code.dim();

  // The pattern must be total on its bounding box.
  std::vector<int> lo = a.cells().front().first.coords, hi = lo;
  for (const auto& [site, sym] : a.cells())
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], site[i]);
      hi[i] = std::max(hi[i], site[i]);
    }
  Box box{Site(lo), Site(hi)};
  if (box.volume() != static_cast<std::uint64_t>(a.size()))
    throw Error("apply_to_pattern: pattern must be total on a box");

  std::vector<int> fmin = code.window_min(), fmax = code.window_max();
  std::vector<int> olo(d), ohi(d);
  for (int i = 0; i < d; ++i) {
    olo[i] = lo[i] - fmin[i];
    ohi[i] = hi[i] - fmax[i];
    if (olo[i] > ohi[i])
      throw EmptyOutputSupport("apply_to_pattern: box too small for window");
  }
  Box out{Site(olo), Site(ohi)};

  std::vector<std::pair<Site, int>> cells;
  std::vector<int> word(code.window().size());
  for (const auto& u : out.sites()) {
    for (size_t j = 0; j < code.window().size(); ++j) {
      auto sym = a.at(u + code.window()[j]);
      word[j] = *sym;
    }
    cells.emplace_back(u, code.rule_at(word));
  }
  return Pattern(d, std::move(cells));
}

BlockCode compose(const BlockCode& outer, const BlockCode& inner) {
  if (outer.dim() != inner.dim())
    throw DimensionMismatch("compose: dimension mismatch");
  if (!(inner.dst() == outer.src()))
    throw AlphabetMismatch("compose: inner.dst must equal outer.src");

  std::vector<Site> window;
  for (const auto& fo : outer.window())
    for (const auto& fi : inner.window()) window.push_back(fo + fi);
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());

  std::map<Site, int> pos;
  for (size_t j = 0; j < window.size(); ++j) pos[window[j]] = static_cast<int>(j);

  int nsrc = inner.src().size();
  std::uint64_t tsize = checked_pow(nsrc, window.size());
  std::vector<int> rule(tsize);
  std::vector<int> word(window.size(), 0);
  std::vector<int> inner_word(inner.window().size());
  std::vector<int> outer_word(outer.window().size());
  for (std::uint64_t idx = 0; idx < tsize; ++idx) {
    std::uint64_t rem = idx;
    for (size_t j = 0; j < window.size(); ++j) {
      word[j] = static_cast<int>(rem % nsrc);
      rem /= nsrc;
    }
    for (size_t o = 0; o < outer.window().size(); ++o) {
      for (size_t i = 0; i < inner.window().size(); ++i)
        inner_word[i] = word[pos.at(outer.window()[o] + inner.window()[i])];
      outer_word[o] = inner.rule_at(inner_word);
    }
    rule[idx] = outer.rule_at(outer_word);
  }
  return BlockCode(outer.dim(), inner.src(), outer.dst(), std::move(window),
                   std::move(rule));
}

namespace {

// DFS completion: extend fixed central cells to an admissible total pattern
// on the box. Same forward-checking scheme as enumerate_admissible.
bool admissible_completion_exists(const SftSpec& spec, const Box& box,
                                  const std::map<Site, int>& fixed,
                                  Budget& budget) {
  auto sites = box.sites();
  int nsites = static_cast<int>(sites.size());
  std::map<Site, int> index;
  for (int i = 0; i < nsites; ++i) index[sites[i]] = i;

  int d = box.dim();
  std::vector<std::vector<std::vector<std::pair<int, int>>>> by_last(nsites);
  for (const auto& b : spec.forbidden()) {
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
      std::vector<std::pair<int, int>> checks;
      int last = -1;
      for (const auto& [site, sym] : b.cells()) {
        int idx = index.at(site + u);
        checks.emplace_back(idx, sym);
        last = std::max(last, idx);
      }
      by_last[last].push_back(std::move(checks));
      int i = d - 1;
      while (i >= 0) {
        if (++u.coords[i] <= uhi[i]) break;
        u.coords[i] = ulo[i];
        --i;
      }
      if (i < 0) break;
    }
  }

  std::vector<int> assign(nsites, -1);
  std::vector<int> pinned(nsites, -1);
  for (const auto& [site, sym] : fixed) pinned[index.at(site)] = sym;
  int nsym = spec.alphabet().size();

  std::function<bool(int)> dfs = [&](int j) -> bool {
    if (j == nsites) return true;
    int from = pinned[j] >= 0 ? pinned[j] : 0;
    int to = pinned[j] >= 0 ? pinned[j] : nsym - 1;
    for (int s = from; s <= to; ++s) {
      if (!budget.tick())
        throw BudgetExhausted("completion search: node budget exhausted");
      assign[j] = s;
      bool blocked = false;
      for (const auto& checks : by_last[j]) {
        bool match = true;
        for (const auto& [idx, sym] : checks)
          if (assign[idx] != sym) {
            match = false;
            break;
          }
        if (match) {
          blocked = true;
          break;
        }
      }
      if (!blocked && dfs(j + 1)) return true;
      assign[j] = -1;
    }
    return false;
  };
  return dfs(0);
}

int combined_max_extent(const SftSpec& a, const SftSpec& b) {
  return std::max(a.max_extent(), b.max_extent());
}

}  // namespace

bool verify_factor_step(const SftSpec& src_spec, const SftSpec& dst_spec,
                        const BlockCode& code, int r, Budget& budget) {
  if (src_spec.dim() != dst_spec.dim() || code.dim() != src_spec.dim())
    throw DimensionMismatch("verify_factor_step: dimension mismatch");
  if (!(code.src() == src_spec.alphabet()))
    throw AlphabetMismatch("verify_factor_step: code source alphabet mismatch");
  if (!(code.dst() == dst_spec.alphabet()))
    throw AlphabetMismatch("verify_factor_step: code target alphabet mismatch");

  int d = src_spec.dim();
  int R = combined_max_extent(src_spec, dst_spec);
  int k = code.window_radius();
  if (r <= R + k + 1)
    throw Error("verify_factor_step requires r > R + k + 1");

  Box central = Box::centered(d, R + k);
  Box image_box = Box::centered(d, R);
  Box full = Box::centered(d, r);

  bool ok = true;
  auto res = enumerate_admissible(
      src_spec, central, budget, [&](const Pattern& a) {
        Pattern img = apply_to_pattern(code, a).restricted(image_box);
        if (is_admissible(img, dst_spec)) return true;
        // Violation only counts if it extends to an admissible pattern on
        // the full box.
        std::map<Site, int> fixed;
        for (const auto& [site, sym] : a.cells()) fixed[site] = sym;
        if (admissible_completion_exists(src_spec, full, fixed, budget)) {
          ok = false;
          return false;
        }
        return true;
      });
  if (ok && !res.complete)
    throw BudgetExhausted("verify_factor_step: enumeration incomplete");
  return ok;
}

namespace {

// One admissible pattern on the box, or nullopt (complete search).
std::optional<Pattern> first_admissible(const SftSpec& spec, const Box& box,
                                        Budget& budget) {
  std::optional<Pattern> found;
  auto res = enumerate_admissible(spec, box, budget, [&](const Pattern& p) {
    found = p;
    return false;
  });
  if (!found && !res.complete)
    throw BudgetExhausted("first_admissible: node budget exhausted");
  return found;
}

}  // namespace

std::optional<FactorSearchResult> search_factor(const SftSpec& src_spec,
                                                const SftSpec& dst_spec,
                                                const FactorSearchBounds& bounds,
                                                Budget& budget) {
  if (src_spec.dim() != dst_spec.dim())
    throw DimensionMismatch("search_factor: dimension mismatch");
  int d = src_spec.dim();
  int R = combined_max_extent(src_spec, dst_spec);
  int nsrc = src_spec.alphabet().size();
  int ndst = dst_spec.alphabet().size();

  for (int k = 0; k <= bounds.max_k; ++k) {
    std::vector<Site> window = Box::centered(d, k).sites();
    std::uint64_t tsize;
    try {
      tsize = checked_pow(nsrc, window.size());
    } catch (const Error&) {
      break;  // window already too large to tabulate
    }
    // Number of rule tables |dst|^tsize, saturated.
    long double total_ld = std::pow(static_cast<long double>(ndst),
                                    static_cast<long double>(tsize));
    std::uint64_t nrules = total_ld > static_cast<long double>(UINT64_MAX)
                               ? UINT64_MAX
                               : static_cast<std::uint64_t>(total_ld);

    for (int r = R + k + 2; r <= bounds.max_r; ++r) {
      // A concrete admissible pattern on the full box drives the pre-test;
      // its central restriction is extendable by construction.
      auto probe = first_admissible(src_spec, Box::centered(d, r), budget);
      Box image_box = Box::centered(d, R);
      for (std::uint64_t rho = 0; rho < nrules && rho < bounds.max_rules; ++rho) {
        std::vector<int> rule(tsize);
        std::uint64_t rem = rho;
        for (std::uint64_t j = 0; j < tsize; ++j) {
          rule[j] = static_cast<int>(rem % ndst);
          rem /= ndst;
        }
        BlockCode code(d, src_spec.alphabet(), dst_spec.alphabet(), window,
                       std::move(rule));
        if (probe) {
          Pattern img = apply_to_pattern(code, *probe).restricted(image_box);
          if (!is_admissible(img, dst_spec)) continue;  // cheap rejection
        }
        if (verify_factor_step(src_spec, dst_spec, code, r, budget))
          return FactorSearchResult{code, r};
      }
    }
  }
  return std::nullopt;
}

std::set<Pattern> ca_image_language(const CaSpec& ca, int t, int n,
                                    Budget& budget) {
  if (t < 0 || n < 1) throw Error("ca_image_language requires t >= 0, n >= 1");
  int d = ca.dim();
  const BlockCode& code = ca.code();
  std::vector<int> fmin = code.window_min(), fmax = code.window_max();

  Box out = Box::corner(d, n);
  std::vector<int> ilo = out.lo.coords, ihi = out.hi.coords;
  for (int i = 0; i < d; ++i) {
    ilo[i] += t * fmin[i];
    ihi[i] += t * fmax[i];
  }
  Box inflated{Site(ilo), Site(ihi)};

  SftSpec full_shift(ca.alphabet(), d, {});
  std::set<Pattern> language;
  auto res = enumerate_admissible(
      full_shift, inflated, budget, [&](const Pattern& p) {
        Pattern img = p;
        for (int step = 0; step < t; ++step) img = apply_to_pattern(code, img);
        language.insert(img.restricted(out));
        return true;
      });
  if (!res.complete)
    throw BudgetExhausted("ca_image_language: enumeration incomplete");
  return language;
}

std::vector<int> quiescent_fixed_points(const CaSpec& ca) {
  std::vector<int> fixed;
  const BlockCode& code = ca.code();
  for (int s = 0; s < ca.alphabet().size(); ++s) {
    std::vector<int> word(code.window().size(), s);
    if (code.rule_at(word) == s) fixed.push_back(s);
  }
  return fixed;
}

}  // namespace sftlab

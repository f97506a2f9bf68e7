#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/errors.hpp"

namespace sftlab {

// Finite ordered alphabet. Symbols are identified with their indices
// 0..size()-1 everywhere except in the text codecs, which use the names.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int symbol) const { return names_.at(symbol); }
  const std::vector<std::string>& names() const { return names_; }

  // -1 when the name is unknown.
  int index_of(const std::string& name) const;

  bool operator==(const Alphabet& o) const { return names_ == o.names_; }

  // Convenience: symbols named "0", "1", ..., "k-1".
  static Alphabet digits(int k);

private:
  std::vector<std::string> names_;
};

// A lattice site in Z^d.
struct Site {
  std::vector<int> coords;

  Site() = default;
  explicit Site(std::vector<int> c) : coords(std::move(c)) {}
  Site(std::initializer_list<int> c) : coords(c) {}

  int dim() const { return static_cast<int>(coords.size()); }
  int operator[](int i) const { return coords[i]; }

  friend Site operator+(const Site& a, const Site& b);
  friend Site operator-(const Site& a, const Site& b);
  bool operator==(const Site& o) const { return coords == o.coords; }
  bool operator<(const Site& o) const { return coords < o.coords; }
};

std::string to_string(const Site& s);

struct Box;

// Finite partial coloring of Z^d. Cells are kept sorted by site, so equal
// patterns compare equal structurally.
class Pattern {
public:
  Pattern() : dim_(0) {}
  Pattern(int dim, std::vector<std::pair<Site, int>> cells);

  int dim() const { return dim_; }
  const std::vector<std::pair<Site, int>>& cells() const { return cells_; }
  int size() const { return static_cast<int>(cells_.size()); }

  // Symbol at the site, if assigned.
  std::optional<int> at(const Site& s) const;

  // Translate the whole support by u.
  Pattern translated(const Site& u) const;

  // Translation-normal form: the support's lexicographic minimum moved to
  // the origin. Canonical key for dedup and hashing of forbidden patterns.
  Pattern normalized() const;

  // Restriction to the cells inside the box; throws if that is empty.
  Pattern restricted(const Box& box) const;

  // Coordinatewise extent (max - min) of the support along each axis.
  std::vector<int> extents() const;

  bool operator==(const Pattern& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_;
  }
  bool operator<(const Pattern& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    return cells_ < o.cells_;
  }

  // 1D helper: the word a(lo), a(lo+1), ..., a(hi) of a pattern total on a
  // 1D box; throws if a site is missing.
  std::string word(const Alphabet& alphabet) const;

  // 1D helper: build a pattern from symbol indices at sites origin..origin+n-1.
  static Pattern from_word(const std::vector<int>& symbols, int origin = 0);

private:
  int dim_;
  std::vector<std::pair<Site, int>> cells_;
};

// Axis-aligned box lo..hi (inclusive both ends).
struct Box {
  Site lo, hi;

  Box() = default;
  Box(Site lo_, Site hi_);

  int dim() const { return lo.dim(); }
  std::uint64_t volume() const;
  bool contains(const Site& s) const;

  // Sites in lexicographic order (first coordinate most significant).
  std::vector<Site> sites() const;

  // The cube [-n, n]^d.
  static Box centered(int dim, int n);
  // The cube [0, n-1]^d.
  static Box corner(int dim, int n);
};

// A shift of finite type: alphabet, dimension, and a finite forbidden list.
// Forbidden patterns are stored in translation-normal form and deduplicated.
class SftSpec {
public:
  SftSpec(Alphabet alphabet, int dim, std::vector<Pattern> forbidden);

  const Alphabet& alphabet() const { return alphabet_; }
  int dim() const { return dim_; }
  const std::vector<Pattern>& forbidden() const { return forbidden_; }

  // Maximum extent of any forbidden pattern along any axis (0 if none).
  int max_extent() const { return max_extent_; }

private:
  Alphabet alphabet_;
  int dim_;
  std::vector<Pattern> forbidden_;
  int max_extent_;
};

// True iff b appears in a at offset u, i.e. a(u+v) = b(v) on all of b's
// support. Requires support(b)+u to be contained in support(a).
bool appears_at(const Pattern& a, const Pattern& b, const Site& u);

// True iff no forbidden pattern of spec appears anywhere inside a.
bool is_admissible(const Pattern& a, const SftSpec& spec);

struct EnumerationResult {
  std::vector<Pattern> patterns;
  bool complete = true;          // false when the node budget ran out
  std::uint64_t nodes = 0;       // search-tree nodes visited
};

// Depth-first enumeration of all spec-admissible total patterns on the box,
// in lexicographic order of their symbol words (sites in lexicographic
// order). Forward checking: a branch is pruned as soon as a forbidden
// pattern fully fits inside the assigned prefix.
//
// The visitor may return false to stop early (the result is then marked
// incomplete). If the node budget runs out, the patterns seen so far form a
// (possibly strict) prefix of the full enumeration and complete=false.
EnumerationResult enumerate_admissible(
    const SftSpec& spec, const Box& box, Budget& budget,
    const std::function<bool(const Pattern&)>& visit);

// Convenience overload collecting the patterns.
EnumerationResult enumerate_admissible(const SftSpec& spec, const Box& box,
                                       Budget& budget);

// Number of admissible patterns on [0, n-1]^d. Throws BudgetExhausted when
// the enumeration cannot be completed within the budget.
std::uint64_t count_admissible(const SftSpec& spec, int n, Budget& budget);

// log(count_admissible(spec, n)) / n^d; an upper-bound entropy estimate.
double entropy_upper(const SftSpec& spec, int n, Budget& budget);

}  // namespace sftlab

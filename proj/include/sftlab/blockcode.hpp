#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sftlab/patterns.hpp"

namespace sftlab {

// A sliding block code: local rule over a finite window, total on Δ^F.
// The rule table is dense, indexed by the mixed-radix encoding of the word
// read off the window in canonical (lexicographic) site order, first window
// site least significant.
class BlockCode {
public:
  BlockCode(int dim, Alphabet src, Alphabet dst, std::vector<Site> window,
            std::vector<int> rule);

  int dim() const { return dim_; }
  const Alphabet& src() const { return src_; }
  const Alphabet& dst() const { return dst_; }
  const std::vector<Site>& window() const { return window_; }
  const std::vector<int>& rule() const { return rule_; }

  // Max sup-norm of a window site.
  int window_radius() const;
  // Per-axis min/max window coordinate.
  std::vector<int> window_min() const;
  std::vector<int> window_max() const;

  std::uint64_t table_size() const { return rule_.size(); }
  std::uint64_t word_index(const std::vector<int>& word) const;
  int rule_at(const std::vector<int>& word) const;

  static BlockCode identity(const Alphabet& alphabet, int dim);
  static BlockCode constant(const Alphabet& src, const Alphabet& dst, int dim,
                            int symbol);

  bool operator==(const BlockCode& o) const {
    return dim_ == o.dim_ && src_ == o.src_ && dst_ == o.dst_ &&
           window_ == o.window_ && rule_ == o.rule_;
  }

private:
  int dim_;
  Alphabet src_, dst_;
  std::vector<Site> window_;
  std::vector<int> rule_;
};

// Endomorphism of the full shift: a block code with equal alphabets.
class CaSpec {
public:
  explicit CaSpec(BlockCode code);
  const BlockCode& code() const { return code_; }
  const Alphabet& alphabet() const { return code_.src(); }
  int dim() const { return code_.dim(); }

private:
  BlockCode code_;
};

// Slide the code over a pattern that is total on a box; the output lives on
// the eroded box {u : u + F inside the box}.
Pattern apply_to_pattern(const BlockCode& code, const Pattern& a);

// outer after inner; windows add (Minkowski sum).
BlockCode compose(const BlockCode& outer, const BlockCode& inner);

// True iff every src-admissible pattern on [-r;r]^d maps, restricted to
// [-R;R]^d, to a dst-admissible pattern (R = max forbidden diameter over
// both specs). Requires r > R + k + 1 for soundness of the conclusion.
//
// Decided by counterexample search: only the central [-(R+k); R+k]^d cells
// determine the restricted image, so candidates are enumerated there and a
// violating candidate counts only if it completes to an admissible pattern
// on the full [-r;r]^d box.
bool verify_factor_step(const SftSpec& src_spec, const SftSpec& dst_spec,
                        const BlockCode& code, int r, Budget& budget);

struct FactorSearchBounds {
  int max_k = 1;
  int max_r = 6;
  std::uint64_t max_rules = 4096;  // rule tables examined per window
};

struct FactorSearchResult {
  BlockCode code;
  int r;
};

// First (k, r, rule-index) triple whose code passes verify_factor_step;
// windows are the full boxes [-k;k]^d. Returns nullopt when the bounds are
// exhausted without a hit; throws BudgetExhausted when the node budget dies
// first.
std::optional<FactorSearchResult> search_factor(const SftSpec& src_spec,
                                                const SftSpec& dst_spec,
                                                const FactorSearchBounds& bounds,
                                                Budget& budget);

// Exact window-n language of f^t applied to the full shift: the image
// patterns on [0,n-1]^d of all patterns on the t-step inflated box.
// Decreasing in t; at t=0 this is the full language.
std::set<Pattern> ca_image_language(const CaSpec& ca, int t, int n,
                                    Budget& budget);

// Symbols whose uniform configuration is fixed by the CA.
std::vector<int> quiescent_fixed_points(const CaSpec& ca);

}  // namespace sftlab

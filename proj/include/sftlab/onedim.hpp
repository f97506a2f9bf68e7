#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sftlab/cylinders.hpp"
#include "sftlab/patterns.hpp"

namespace sftlab {

// de Bruijn-style transfer graph of a 1D SFT: vertices are the admissible
// words of length block_len, edges the consistent overlaps whose merged
// (block_len+1)-word is again admissible. Bi-infinite admissible sequences
// correspond exactly to bi-infinite walks.
struct TransferGraph {
  int block_len = 1;
  std::vector<std::vector<int>> vertices;  // symbol words, each block_len long
  std::vector<std::vector<int>> succ;      // adjacency by vertex index
};

// block_len = 0 picks the minimal sound choice: the longest forbidden
// diameter (max extent + 1), at least 1. An explicit block_len below that is
// rejected.
TransferGraph build_transfer_graph(const SftSpec& spec, int block_len = 0);

struct Emptiness1D {
  bool empty;
  int pruned;  // vertices not lying on any cycle
  int kept;    // vertices in a nontrivial SCC or carrying a self-loop
};

// Exact emptiness decision for a 1D SFT; always terminates.
Emptiness1D decide_empty_1d_detail(const SftSpec& spec);
bool decide_empty_1d(const SftSpec& spec);

struct PeriodicPoint {
  int period;
  std::vector<int> word;  // length == period; bi-infinite repetition is admissible
};

// Shortest periodic witness of nonemptiness (ties broken lexicographically);
// nullopt exactly when the SFT is empty.
std::optional<PeriodicPoint> periodic_point_1d(const SftSpec& spec);

// True iff the bi-infinite repetition of `word` avoids every forbidden
// pattern of the spec (1D).
bool periodic_word_admissible(const SftSpec& spec, const std::vector<int>& word);

struct EdsEmptinessOptions {
  int bit_cap = 20;                    // refuse when |I| exceeds this
  std::uint64_t word_cap = 1u << 20;   // refuse when a cylinder would expand
                                       // to more forbidden words than this
  std::vector<int> pad_bits;           // extra bit positions forced into I;
                                       // the decision is invariant under them
};

// Emptiness of the 1D effective subshift excluding the given generalized
// cylinders (with every shift applied). Reduces to an SFT over the finite
// alphabet {0,1}^I, I the union of all constrained bit positions, and
// decides that SFT. Throws SupportCapExceeded past the configured caps.
bool decide_empty_eds_1d(const std::vector<GenCylinder>& excluded,
                         const EdsEmptinessOptions& opts = {});

}  // namespace sftlab

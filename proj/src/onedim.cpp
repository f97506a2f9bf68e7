#include "sftlab/onedim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace sftlab {

namespace {

int default_block_len(const SftSpec& spec) {
  return std::max(1, spec.max_extent() + 1);
}

}  // namespace

TransferGraph build_transfer_graph(const SftSpec& spec, int block_len) {
  if (spec.dim() != 1)
    throw DimensionMismatch("build_transfer_graph requires a 1D spec");
  int m = block_len == 0 ? default_block_len(spec) : block_len;
  if (m < default_block_len(spec))
    throw Error("block_len below the longest forbidden diameter is unsound");

  TransferGraph g;
  g.block_len = m;

  Budget unlimited;
  auto res = enumerate_admissible(spec, Box::corner(1, m), unlimited);
  for (const auto& p : res.patterns) {
    std::vector<int> w(m);
    for (const auto& [site, sym] : p.cells()) w[site[0]] = sym;
    g.vertices.push_back(std::move(w));
  }

  // Group vertices by their (m-1)-prefix for overlap matching.
  std::map<std::vector<int>, std::vector<int>> by_prefix;
  for (size_t i = 0; i < g.vertices.size(); ++i) {
    std::vector<int> pre(g.vertices[i].begin(), g.vertices[i].begin() + (m - 1));
    by_prefix[pre].push_back(static_cast<int>(i));
  }

  g.succ.resize(g.vertices.size());
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    std::vector<int> suf(g.vertices[v].begin() + 1, g.vertices[v].end());
    auto it = by_prefix.find(suf);
    if (it == by_prefix.end()) continue;
    for (int w : it->second) {
      std::vector<int> merged = g.vertices[v];
      merged.push_back(g.vertices[w].back());
      if (is_admissible(Pattern::from_word(merged), spec))
        g.succ[v].push_back(w);
    }
  }
  return g;
}

namespace {

// Iterative Tarjan SCC; returns component id per vertex.
std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& succ, int& ncomp) {
  int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  ncomp = 0;
  int next_index = 0;

  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < succ[f.v].size()) {
        int w = succ[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = ncomp;
            if (w == f.v) break;
          }
          ++ncomp;
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

Emptiness1D decide_empty_1d_detail(const SftSpec& spec) {
  TransferGraph g = build_transfer_graph(spec);
  int n = static_cast<int>(g.vertices.size());
  int ncomp = 0;
  std::vector<int> comp = tarjan_scc(g.succ, ncomp);
  std::vector<int> comp_size(ncomp, 0);
  for (int v = 0; v < n; ++v) ++comp_size[comp[v]];

  int kept = 0;
  for (int v = 0; v < n; ++v) {
    bool self_loop =
        std::find(g.succ[v].begin(), g.succ[v].end(), v) != g.succ[v].end();
    if (comp_size[comp[v]] >= 2 || self_loop) ++kept;
  }
  return Emptiness1D{kept == 0, n - kept, kept};
}

bool decide_empty_1d(const SftSpec& spec) {
  return decide_empty_1d_detail(spec).empty;
}

bool periodic_word_admissible(const SftSpec& spec, const std::vector<int>& word) {
  if (spec.dim() != 1)
    throw DimensionMismatch("periodic_word_admissible requires a 1D spec");
  int p = static_cast<int>(word.size());
  if (p == 0) throw Error("periodic word must be nonempty");
  for (const auto& b : spec.forbidden()) {
    // b is translation-normalized: support starts at 0.
    for (int u = 0; u < p; ++u) {
      bool match = true;
      for (const auto& [site, sym] : b.cells()) {
        int x = (u + site[0]) % p;
        if (x < 0) x += p;
        if (word[x] != sym) {
          match = false;
          break;
        }
      }
      if (match) return false;
    }
  }
  return true;
}

std::optional<PeriodicPoint> periodic_point_1d(const SftSpec& spec) {
  if (decide_empty_1d(spec)) return std::nullopt;
  int nsym = spec.alphabet().size();
  // A cycle of the transfer graph has length at most the vertex count, so a
  // witness of that period is guaranteed to exist.
  TransferGraph g = build_transfer_graph(spec);
  int max_p = std::max<int>(1, static_cast<int>(g.vertices.size()));
  for (int p = 1; p <= max_p; ++p) {
    std::vector<int> word(p, 0);
    while (true) {
      if (periodic_word_admissible(spec, word))
        return PeriodicPoint{p, word};
      int i = p - 1;
      while (i >= 0) {
        if (++word[i] < nsym) break;
        word[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  // Unreachable for a nonempty SFT.
  throw Error("periodic_point_1d: no witness found below the cycle bound");
}

bool decide_empty_eds_1d(const std::vector<GenCylinder>& excluded,
                         const EdsEmptinessOptions& opts) {
  // Collect the bit support I and normalize away vacuous sites.
  std::set<int> bit_set;
  std::vector<GenCylinder> norm;
  for (const auto& g : excluded) {
    if (g.dim() != 1)
      throw DimensionMismatch("decide_empty_eds_1d requires 1D cylinders");
    GenCylinder n = g.normalized();
    bool vacuous = true;
    for (const auto& [site, pat] : n.cells()) {
      for (const auto& [i, v] : pat.bits()) bit_set.insert(i);
      if (!pat.empty()) vacuous = false;
    }
    if (vacuous) return true;  // excludes all of Omega
    norm.push_back(std::move(n));
  }
  if (norm.empty()) return false;  // full shift over the Cantor alphabet
  for (int b : opts.pad_bits) {
    if (b < 0) throw Error("pad bit indices must be nonnegative");
    bit_set.insert(b);
  }

  if (static_cast<int>(bit_set.size()) > opts.bit_cap)
    throw SupportCapExceeded("decide_empty_eds_1d: bit support exceeds cap of " +
                             std::to_string(opts.bit_cap));
  std::vector<int> bits(bit_set.begin(), bit_set.end());
  std::map<int, int> bit_pos;
  for (size_t j = 0; j < bits.size(); ++j) bit_pos[bits[j]] = static_cast<int>(j);
  int nbits = static_cast<int>(bits.size());
  if (nbits > 30)
    throw SupportCapExceeded("decide_empty_eds_1d: alphabet would overflow");

  // Alphabet {0,1}^I, symbol index = bitmask in the sorted-bit order.
  int nsym = 1 << nbits;
  std::vector<std::string> names(nsym);
  for (int m = 0; m < nsym; ++m) {
    std::string s(nbits, '0');
    for (int j = 0; j < nbits; ++j)
      if (m & (1 << j)) s[j] = '1';
    names[m] = std::move(s);
  }
  Alphabet alphabet(std::move(names));

  // Each cylinder expands to every word over {0,1}^I on its site span that
  // matches its constrained bits; unconstrained bits range freely.
  std::vector<Pattern> forbidden;
  for (const auto& g : norm) {
    int lo = g.cells().begin()->first[0];
    int hi = g.cells().rbegin()->first[0];
    int span = hi - lo + 1;
    // (position, bit index, value) constraints.
    std::vector<std::tuple<int, int, bool>> cons;
    for (const auto& [site, pat] : g.cells())
      for (const auto& [i, v] : pat.bits())
        cons.emplace_back(site[0] - lo, bit_pos.at(i), v);
    std::uint64_t free_bits =
        static_cast<std::uint64_t>(span) * nbits - cons.size();
    if (free_bits >= 63 || (1ull << free_bits) > opts.word_cap)
      throw SupportCapExceeded(
          "decide_empty_eds_1d: cylinder expansion exceeds word cap");

    // Base word with constrained bits set; then enumerate the free ones.
    std::vector<int> base(span, 0);
    std::vector<std::pair<int, int>> free_slots;  // (position, bit)
    std::vector<std::vector<bool>> fixed(span, std::vector<bool>(nbits, false));
    for (const auto& [pos, bit, v] : cons) {
      fixed[pos][bit] = true;
      if (v) base[pos] |= 1 << bit;
    }
    for (int pos = 0; pos < span; ++pos)
      for (int bit = 0; bit < nbits; ++bit)
        if (!fixed[pos][bit]) free_slots.emplace_back(pos, bit);

    std::uint64_t combos = 1ull << free_slots.size();
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::vector<int> word = base;
      for (size_t j = 0; j < free_slots.size(); ++j)
        if (c & (1ull << j)) word[free_slots[j].first] |= 1 << free_slots[j].second;
      forbidden.push_back(Pattern::from_word(word));
    }
  }

  SftSpec sft(alphabet, 1, std::move(forbidden));
  return decide_empty_1d(sft);
}

}  // namespace sftlab

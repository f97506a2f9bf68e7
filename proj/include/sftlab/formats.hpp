#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sftlab/attractor.hpp"
#include "sftlab/blockcode.hpp"
#include "sftlab/cylinders.hpp"
#include "sftlab/eds.hpp"
#include "sftlab/multidim.hpp"
#include "sftlab/patterns.hpp"

namespace sftlab {

// All parsers accept '#' comments and blank lines; all writers emit the
// canonical form (sorted blocks, sorted sites) so that parse(write(x)) == x
// and equal values serialize identically.

// SFT text format:
//   dim 2
//   alphabet 0 1
//   forbid
//   site 0,0 = 1
//   site 1,0 = 1
SftSpec parse_sft(std::istream& in);
SftSpec parse_sft_string(const std::string& text);
std::string write_sft(const SftSpec& spec);

// Wang tile format: `tile <name> n=<c> e=<c> s=<c> w=<c>` per line.
std::vector<WangTile> parse_wang(std::istream& in);
std::vector<WangTile> parse_wang_string(const std::string& text);
std::string write_wang(const std::vector<WangTile>& tiles);

// Torus certificate:
//   dim 2
//   alphabet 0 1
//   periods 2 2
//   cells 0 1 1 0
struct TorusCert {
  Alphabet alphabet;
  TorusPattern torus;
};
TorusCert parse_torus(std::istream& in);
TorusCert parse_torus_string(const std::string& text);
std::string write_torus(const Alphabet& alphabet, const TorusPattern& torus);

// Block code format:
//   dim 1
//   src 0 1
//   dst 0 1
//   window 0 1
//   map 0 0 -> 0
BlockCode parse_block_code(std::istream& in);
BlockCode parse_block_code_string(const std::string& text);
std::string write_block_code(const BlockCode& code);

// Generalized cylinder site line: `site x1,...,xd : bit i = v, bit j = w`.
// A standalone gencylinder file is one or more `cylinder` blocks of site
// lines; an enumerator script uses `emit <stamp>` headers instead.
std::string write_gencyl_lines(const GenCylinder& g);
std::vector<GenCylinder> parse_gencyl_file(std::istream& in, int dim);
std::string write_gencyl_file(const std::vector<GenCylinder>& gs);

ScriptedEnumerator parse_enumerator_script(std::istream& in, int dim);
ScriptedEnumerator parse_enumerator_script_string(const std::string& text,
                                                  int dim);
std::string write_enumerator_script(const ScriptedEnumerator& e);

// Trap region: optional `lipschitz <rational>` plus `cell <level> <k1> ...`
// lines (the DyadicCell text format).
TrapRegion parse_trap(std::istream& in);
TrapRegion parse_trap_string(const std::string& text);
std::string write_trap(const TrapRegion& trap);

// Oracle declaration: `dim`, `domain lo1 hi1 ...`, then map stages applied
// first to last: an `affine`/`row`/`offset`/`end` block or a one-line
// `spiral <tan_half> <inner_radius>`.
std::shared_ptr<EffectiveMapOracle> parse_oracle(std::istream& in);
std::shared_ptr<EffectiveMapOracle> parse_oracle_string(const std::string& text);

}  // namespace sftlab

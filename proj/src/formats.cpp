#include "sftlab/formats.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sftlab {

namespace {

// Strip comments and surrounding whitespace; empty result means skip.
std::string clean_line(const std::string& raw) {
  std::string s = raw;
  auto hash = s.find('#');
  if (hash != std::string::npos) s.erase(hash);
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("malformed " + what + ": '" + s + "'");
  }
}

Site parse_site_coords(const std::string& s) {
  std::vector<int> coords;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (cur.empty()) throw FormatError("malformed site: '" + s + "'");
      coords.push_back(parse_int(cur, "site coordinate"));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return Site(std::move(coords));
}

std::vector<std::string> read_clean_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    std::string s = clean_line(raw);
    if (!s.empty()) lines.push_back(s);
  }
  return lines;
}

}  // namespace

SftSpec parse_sft(std::istream& in) {
  auto lines = read_clean_lines(in);
  int dim = -1;
  std::optional<Alphabet> alphabet;
  std::vector<Pattern> forbidden;
  std::vector<std::pair<Site, int>> block;
  bool in_block = false;

  auto flush = [&]() {
    if (!in_block) return;
    if (block.empty()) throw FormatError("empty forbid block");
    forbidden.push_back(Pattern(dim, block));
    block.clear();
  };

  for (const auto& line : lines) {
    auto toks = split_ws(line);
    if (toks[0] == "dim") {
      if (toks.size() != 2) throw FormatError("dim wants one argument");
      dim = parse_int(toks[1], "dimension");
    } else if (toks[0] == "alphabet") {
      alphabet = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else if (toks[0] == "forbid") {
      flush();
      in_block = true;
    } else if (toks[0] == "site") {
      if (!in_block) throw FormatError("site line outside a forbid block");
      if (dim < 1 || !alphabet)
        throw FormatError("site line before dim/alphabet headers");
      if (toks.size() != 4 || toks[2] != "=")
        throw FormatError("malformed site line: '" + line + "'");
      Site s = parse_site_coords(toks[1]);
      if (s.dim() != dim) throw FormatError("site arity differs from dim");
      int sym = alphabet->index_of(toks[3]);
      if (sym < 0) throw FormatError("unknown symbol '" + toks[3] + "'");
      block.emplace_back(s, sym);
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  flush();
  if (dim < 1) throw FormatError("missing dim header");
  if (!alphabet) throw FormatError("missing alphabet header");
  return SftSpec(*alphabet, dim, std::move(forbidden));
}

SftSpec parse_sft_string(const std::string& text) {
  std::istringstream is(text);
  return parse_sft(is);
}

std::string write_sft(const SftSpec& spec) {
  std::ostringstream os;
  os << "dim " << spec.dim() << "\n";
  os << "alphabet";
  for (const auto& n : spec.alphabet().names()) os << ' ' << n;
  os << "\n";
  // SftSpec already stores normalized, sorted, deduplicated patterns.
  for (const auto& p : spec.forbidden()) {
    os << "forbid\n";
    for (const auto& [site, sym] : p.cells())
      os << "site " << to_string(site) << " = " << spec.alphabet().name(sym)
         << "\n";
  }
  return os.str();
}

std::vector<WangTile> parse_wang(std::istream& in) {
  std::vector<WangTile> tiles;
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] != "tile" || toks.size() != 6)
      throw FormatError("malformed tile line: '" + line + "'");
    WangTile t;
    t.name = toks[1];
    for (size_t i = 2; i < 6; ++i) {
      const std::string& kv = toks[i];
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq + 1 >= kv.size())
        throw FormatError("malformed edge color: '" + kv + "'");
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "n")
        t.north = val;
      else if (key == "e")
        t.east = val;
      else if (key == "s")
        t.south = val;
      else if (key == "w")
        t.west = val;
      else
        throw FormatError("unknown edge '" + key + "'");
    }
    if (t.north.empty() || t.east.empty() || t.south.empty() || t.west.empty())
      throw FormatError("tile is missing an edge color");
    tiles.push_back(std::move(t));
  }
  if (tiles.empty()) throw FormatError("no tiles in tile set");
  return tiles;
}

std::vector<WangTile> parse_wang_string(const std::string& text) {
  std::istringstream is(text);
  return parse_wang(is);
}

std::string write_wang(const std::vector<WangTile>& tiles) {
  std::vector<WangTile> sorted = tiles;
  std::sort(sorted.begin(), sorted.end(),
            [](const WangTile& a, const WangTile& b) { return a.name < b.name; });
  std::ostringstream os;
  for (const auto& t : sorted)
    os << "tile " << t.name << " n=" << t.north << " e=" << t.east
       << " s=" << t.south << " w=" << t.west << "\n";
  return os.str();
}

TorusCert parse_torus(std::istream& in) {
  int dim = -1;
  std::optional<Alphabet> alphabet;
  std::vector<int> periods;
  std::vector<std::string> cell_names;
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] == "dim") {
      dim = parse_int(toks.at(1), "dimension");
    } else if (toks[0] == "alphabet") {
      alphabet = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else if (toks[0] == "periods") {
      for (size_t i = 1; i < toks.size(); ++i)
        periods.push_back(parse_int(toks[i], "period"));
    } else if (toks[0] == "cells") {
      cell_names.assign(toks.begin() + 1, toks.end());
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  if (dim < 1 || !alphabet || periods.empty())
    throw FormatError("torus certificate is missing headers");
  if (static_cast<int>(periods.size()) != dim)
    throw FormatError("periods arity differs from dim");
  TorusPattern t;
  t.periods = periods;
  for (const auto& n : cell_names) {
    int sym = alphabet->index_of(n);
    if (sym < 0) throw FormatError("unknown symbol '" + n + "'");
    t.cells.push_back(sym);
  }
  if (t.cells.size() != t.volume())
    throw FormatError("cell count does not match the period volume");
  return TorusCert{*alphabet, std::move(t)};
}

TorusCert parse_torus_string(const std::string& text) {
  std::istringstream is(text);
  return parse_torus(is);
}

std::string write_torus(const Alphabet& alphabet, const TorusPattern& torus) {
  std::ostringstream os;
  os << "dim " << torus.dim() << "\n";
  os << "alphabet";
  for (const auto& n : alphabet.names()) os << ' ' << n;
  os << "\nperiods";
  for (int p : torus.periods) os << ' ' << p;
  os << "\ncells";
  for (int c : torus.cells) os << ' ' << alphabet.name(c);
  os << "\n";
  return os.str();
}

BlockCode parse_block_code(std::istream& in) {
  int dim = -1;
  std::optional<Alphabet> src, dst;
  std::vector<Site> window;
  std::vector<std::pair<std::vector<int>, int>> entries;
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] == "dim") {
      dim = parse_int(toks.at(1), "dimension");
    } else if (toks[0] == "src") {
      src = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else if (toks[0] == "dst") {
      dst = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else if (toks[0] == "window") {
      for (size_t i = 1; i < toks.size(); ++i)
        window.push_back(parse_site_coords(toks[i]));
    } else if (toks[0] == "map") {
      if (!src || !dst || window.empty())
        throw FormatError("map line before the code headers");
      // map <w1> ... <wn> -> <out>
      if (toks.size() != window.size() + 3 || toks[window.size() + 1] != "->")
        throw FormatError("malformed map line: '" + line + "'");
      std::vector<int> word;
      for (size_t i = 1; i <= window.size(); ++i) {
        int s = src->index_of(toks[i]);
        if (s < 0) throw FormatError("unknown source symbol '" + toks[i] + "'");
        word.push_back(s);
      }
      int out = dst->index_of(toks.back());
      if (out < 0)
        throw FormatError("unknown target symbol '" + toks.back() + "'");
      entries.emplace_back(std::move(word), out);
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  if (dim < 1 || !src || !dst || window.empty())
    throw FormatError("block code is missing headers");

  // Words are given in the listed window order; canonicalize through a
  // temporary identity-rule code to compute table indices.
  std::vector<Site> sorted_window = window;
  std::sort(sorted_window.begin(), sorted_window.end());
  std::vector<int> order(window.size());
  for (size_t i = 0; i < window.size(); ++i) {
    auto it = std::lower_bound(sorted_window.begin(), sorted_window.end(),
                               window[i]);
    order[i] = static_cast<int>(it - sorted_window.begin());
  }

  std::uint64_t tsize = 1;
  for (size_t i = 0; i < window.size(); ++i) {
    if (tsize > (1ull << 40))
      throw FormatError("rule table too large to parse");
    tsize *= static_cast<std::uint64_t>(src->size());
  }
  std::vector<int> rule(tsize, -1);
  for (const auto& [word, out] : entries) {
    std::uint64_t idx = 0, base = 1;
    std::vector<int> canonical(word.size());
    for (size_t i = 0; i < word.size(); ++i) canonical[order[i]] = word[i];
    for (size_t i = 0; i < canonical.size(); ++i) {
      idx += static_cast<std::uint64_t>(canonical[i]) * base;
      base *= static_cast<std::uint64_t>(src->size());
    }
    if (rule[idx] != -1) throw FormatError("duplicate map entry");
    rule[idx] = out;
  }
  for (int v : rule)
    if (v < 0) throw FormatError("rule table is not total");
  return BlockCode(dim, *src, *dst, std::move(sorted_window), std::move(rule));
}

BlockCode parse_block_code_string(const std::string& text) {
  std::istringstream is(text);
  return parse_block_code(is);
}

std::string write_block_code(const BlockCode& code) {
  std::ostringstream os;
  os << "dim " << code.dim() << "\n";
  os << "src";
  for (const auto& n : code.src().names()) os << ' ' << n;
  os << "\ndst";
  for (const auto& n : code.dst().names()) os << ' ' << n;
  os << "\nwindow";
  for (const auto& s : code.window()) os << ' ' << to_string(s);
  os << "\n";
  std::vector<int> word(code.window().size(), 0);
  for (std::uint64_t idx = 0; idx < code.table_size(); ++idx) {
    std::uint64_t rem = idx;
    for (size_t j = 0; j < word.size(); ++j) {
      word[j] = static_cast<int>(rem % code.src().size());
      rem /= code.src().size();
    }
    os << "map";
    for (int w : word) os << ' ' << code.src().name(w);
    os << " -> " << code.dst().name(code.rule()[idx]) << "\n";
  }
  return os.str();
}

std::string write_gencyl_lines(const GenCylinder& g) {
  std::ostringstream os;
  for (const auto& [site, pat] : g.cells()) {
    os << "site " << to_string(site) << " :";
    bool first = true;
    for (const auto& [b, v] : pat.bits()) {
      os << (first ? " " : ", ") << "bit " << b << " = " << (v ? 1 : 0);
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::pair<Site, CylinderPattern> parse_gencyl_site_line(
    const std::vector<std::string>& toks, const std::string& line) {
  // site <coords> : bit i = v, bit j = w
  if (toks.size() < 2) throw FormatError("malformed site line: '" + line + "'");
  Site s = parse_site_coords(toks[1]);
  std::map<int, bool> bits;
  if (toks.size() >= 3) {
    if (toks[2] != ":") throw FormatError("expected ':' in '" + line + "'");
    size_t i = 3;
    while (i < toks.size()) {
      if (toks[i] != "bit" || i + 3 >= toks.size() || toks[i + 2] != "=")
        throw FormatError("malformed bit constraint in '" + line + "'");
      int b = parse_int(toks[i + 1], "bit index");
      std::string val = toks[i + 3];
      if (!val.empty() && val.back() == ',') val.pop_back();
      int v = parse_int(val, "bit value");
      if (v != 0 && v != 1) throw FormatError("bit value must be 0 or 1");
      bits[b] = v == 1;
      i += 4;
    }
  }
  return {std::move(s), CylinderPattern(std::move(bits))};
}

}  // namespace

std::vector<GenCylinder> parse_gencyl_file(std::istream& in, int dim) {
  std::vector<GenCylinder> out;
  std::map<Site, CylinderPattern> cells;
  auto flush = [&]() {
    if (!cells.empty()) {
      out.push_back(GenCylinder(dim, cells));
      cells.clear();
    }
  };
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] == "cylinder") {
      flush();
    } else if (toks[0] == "site") {
      auto [site, pat] = parse_gencyl_site_line(toks, line);
      if (site.dim() != dim) throw FormatError("site arity differs from dim");
      if (!cells.emplace(site, pat).second)
        throw FormatError("duplicate site in cylinder");
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  flush();
  return out;
}

std::string write_gencyl_file(const std::vector<GenCylinder>& gs) {
  std::ostringstream os;
  for (const auto& g : gs) {
    os << "cylinder\n";
    os << write_gencyl_lines(g);
  }
  return os.str();
}

ScriptedEnumerator parse_enumerator_script(std::istream& in, int dim) {
  std::vector<std::pair<int, GenCylinder>> emissions;
  int stamp = -1;
  std::map<Site, CylinderPattern> cells;
  auto flush = [&]() {
    if (!cells.empty()) {
      emissions.emplace_back(stamp, GenCylinder(dim, cells));
      cells.clear();
    }
  };
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] == "emit") {
      flush();
      stamp = parse_int(toks.at(1), "emission stamp");
    } else if (toks[0] == "site") {
      if (stamp < 1) throw FormatError("site line before an emit header");
      auto [site, pat] = parse_gencyl_site_line(toks, line);
      if (site.dim() != dim) throw FormatError("site arity differs from dim");
      if (!cells.emplace(site, pat).second)
        throw FormatError("duplicate site in cylinder");
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  flush();
  return ScriptedEnumerator(dim, std::move(emissions));
}

ScriptedEnumerator parse_enumerator_script_string(const std::string& text,
                                                  int dim) {
  std::istringstream is(text);
  return parse_enumerator_script(is, dim);
}

std::string write_enumerator_script(const ScriptedEnumerator& e) {
  std::ostringstream os;
  for (const auto& [stamp, cyl] : e.emissions()) {
    os << "emit " << stamp << "\n";
    os << write_gencyl_lines(cyl);
  }
  return os.str();
}

TrapRegion parse_trap(std::istream& in) {
  TrapRegion trap;
  for (const auto& line : read_clean_lines(in)) {
    auto toks = split_ws(line);
    if (toks[0] == "lipschitz") {
      trap.lipschitz = parse_rational(toks.at(1));
    } else if (toks[0] == "cell") {
      if (toks.size() < 3) throw FormatError("malformed cell line: '" + line + "'");
      int level = parse_int(toks[1], "cell level");
      std::vector<Int> corner;
      for (size_t i = 2; i < toks.size(); ++i) {
        try {
          corner.emplace_back(toks[i]);
        } catch (const std::exception&) {
          throw FormatError("malformed cell corner: '" + toks[i] + "'");
        }
      }
      trap.cells.emplace_back(level, std::move(corner));
    } else {
      throw FormatError("unrecognized line: '" + line + "'");
    }
  }
  if (trap.cells.empty()) throw FormatError("trap region has no cells");
  return trap;
}

TrapRegion parse_trap_string(const std::string& text) {
  std::istringstream is(text);
  return parse_trap(is);
}

std::string write_trap(const TrapRegion& trap) {
  std::ostringstream os;
  if (trap.lipschitz) os << "lipschitz " << rational_to_string(*trap.lipschitz) << "\n";
  std::vector<DyadicCell> cells = trap.cells;
  std::sort(cells.begin(), cells.end());
  for (const auto& c : cells) {
    os << "cell " << c.level;
    for (const auto& k : c.corner) os << ' ' << k.str();
    os << "\n";
  }
  return os.str();
}

std::shared_ptr<EffectiveMapOracle> parse_oracle(std::istream& in) {
  auto lines = read_clean_lines(in);
  int dim = -1;
  std::optional<RatBox> domain;
  std::vector<std::shared_ptr<EffectiveMapOracle>> stages;

  size_t i = 0;
  while (i < lines.size()) {
    auto toks = split_ws(lines[i]);
    if (toks[0] == "dim") {
      dim = parse_int(toks.at(1), "dimension");
      ++i;
    } else if (toks[0] == "domain") {
      if (dim < 1) throw FormatError("domain before dim header");
      if (static_cast<int>(toks.size()) != 1 + 2 * dim)
        throw FormatError("domain wants lo/hi per axis");
      RatBox box;
      for (int a = 0; a < dim; ++a) {
        box.lo.push_back(parse_rational(toks[1 + 2 * a]));
        box.hi.push_back(parse_rational(toks[2 + 2 * a]));
      }
      domain = std::move(box);
      ++i;
    } else if (toks[0] == "affine") {
      if (dim < 1 || !domain) throw FormatError("affine before dim/domain");
      std::vector<std::vector<Rat>> matrix;
      RatVec offset;
      ++i;
      while (i < lines.size()) {
        auto t = split_ws(lines[i]);
        if (t[0] == "row") {
          if (static_cast<int>(t.size()) != dim + 1)
            throw FormatError("row wants dim entries");
          std::vector<Rat> row;
          for (int a = 0; a < dim; ++a) row.push_back(parse_rational(t[1 + a]));
          matrix.push_back(std::move(row));
          ++i;
        } else if (t[0] == "offset") {
          if (static_cast<int>(t.size()) != dim + 1)
            throw FormatError("offset wants dim entries");
          for (int a = 0; a < dim; ++a) offset.push_back(parse_rational(t[1 + a]));
          ++i;
        } else if (t[0] == "end") {
          ++i;
          break;
        } else {
          throw FormatError("unrecognized affine line: '" + lines[i] + "'");
        }
      }
      if (offset.empty()) offset.assign(dim, Rat(0));
      stages.push_back(
          std::make_shared<AffineOracle>(std::move(matrix), std::move(offset), *domain));
    } else if (toks[0] == "spiral") {
      if (dim != 2) throw FormatError("spiral requires dim 2");
      if (!domain) throw FormatError("spiral before domain");
      if (toks.size() != 3) throw FormatError("spiral wants tan_half and rmin");
      stages.push_back(std::make_shared<SpiralOracle>(
          parse_rational(toks[1]), parse_rational(toks[2]), *domain));
      ++i;
    } else {
      throw FormatError("unrecognized line: '" + lines[i] + "'");
    }
  }
  if (stages.empty()) throw FormatError("oracle file declares no map");
  if (stages.size() == 1) return stages.front();
  return std::make_shared<ComposedOracle>(std::move(stages));
}

std::shared_ptr<EffectiveMapOracle> parse_oracle_string(const std::string& text) {
  std::istringstream is(text);
  return parse_oracle(is);
}

}  // namespace sftlab

// sftlab: workbench for shifts of finite type, effective dynamical systems,
// cellular-automaton limit languages, and effective attractors.
//
// Exit codes: 0 positive/nonempty/proved, 1 negative/empty, 2 unknown or
// budget exhausted, 64 usage error, 65 input format error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "sftlab/attractor.hpp"
#include "sftlab/blockcode.hpp"
#include "sftlab/eds.hpp"
#include "sftlab/formats.hpp"
#include "sftlab/multidim.hpp"
#include "sftlab/onedim.hpp"
#include "sftlab/patterns.hpp"
#include "sftlab/report.hpp"

using namespace sftlab;

namespace {

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;
constexpr int kExitFormat = 65;

// --format compact suppresses payload bodies after the key=value report.
bool g_compact = false;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Wang tile sets are a front-end syntax: compile them to an SFT.
SftSpec load_spec(const std::string& path, std::string* digest = nullptr) {
  std::string bytes = slurp(path);
  if (digest) *digest = digest_hex(bytes);
  if (ends_with(path, ".tiles")) return wang_to_sft(parse_wang_string(bytes));
  return parse_sft_string(bytes);
}

std::vector<int> parse_word(const Alphabet& ab, const std::vector<std::string>& toks) {
  std::vector<int> word;
  for (const auto& t : toks) {
    int s = ab.index_of(t);
    if (s < 0) throw FormatError("unknown symbol '" + t + "'");
    word.push_back(s);
  }
  return word;
}

DyadicCell parse_cell_arg(const std::vector<std::string>& toks) {
  if (toks.size() < 2) throw FormatError("cell wants: <level> <k1> [k2 ...]");
  int level = std::stoi(toks[0]);
  std::vector<Int> corner;
  for (size_t i = 1; i < toks.size(); ++i) corner.emplace_back(toks[i]);
  return DyadicCell(level, std::move(corner));
}

// Partition file: `alphabet ...` header, then `part <symbol>` sections of
// `cylinder` blocks of gencylinder site lines.
ClopenPartition parse_partition_file(const std::string& path, int dim) {
  std::istringstream in(slurp(path));
  std::optional<Alphabet> ab;
  std::vector<std::vector<GenCylinder>> parts;
  std::map<Site, CylinderPattern> cells;
  int current = -1;

  auto flush_cyl = [&]() {
    if (!cells.empty()) {
      if (current < 0) throw FormatError("cylinder outside a part");
      parts[current].push_back(GenCylinder(dim, cells));
      cells.clear();
    }
  };

  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "alphabet") {
      ab = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
      parts.assign(ab->size(), {});
    } else if (toks[0] == "part") {
      flush_cyl();
      if (!ab || toks.size() != 2) throw FormatError("part wants a symbol");
      current = ab->index_of(toks[1]);
      if (current < 0) throw FormatError("unknown symbol '" + toks[1] + "'");
    } else if (toks[0] == "cylinder") {
      flush_cyl();
    } else if (toks[0] == "site") {
      std::ostringstream line;
      for (const auto& tok : toks) line << tok << ' ';
      std::istringstream single(line.str());
      auto cyls = parse_gencyl_file(single, dim);
      if (cyls.size() != 1) throw FormatError("malformed site line");
      for (const auto& [site, pat] : cyls.front().cells())
        if (!cells.emplace(site, pat).second)
          throw FormatError("duplicate site in cylinder");
    } else {
      throw FormatError("unrecognized line in partition file");
    }
  }
  flush_cyl();
  if (!ab) throw FormatError("partition file is missing the alphabet");
  return ClopenPartition(*ab, dim, std::move(parts));
}

int cmd_check_empty_1d(const std::string& file) {
  std::string digest;
  SftSpec spec = load_spec(file, &digest);
  if (spec.dim() != 1) throw FormatError("check-empty-1d wants a 1D spec");
  RunReport report("check-empty-1d");
  report.set("input", file);
  report.set("digest", digest);
  Emptiness1D result = decide_empty_1d_detail(spec);
  if (result.empty) {
    report.set("verdict", "empty");
    report.set("pruned", result.pruned);
    std::cout << report.render();
    return kExitNegative;
  }
  auto witness = periodic_point_1d(spec);
  report.set("verdict", "nonempty");
  report.set("period", witness->period);
  std::string word;
  for (int s : witness->word) {
    if (!word.empty()) word += ' ';
    word += spec.alphabet().name(s);
  }
  report.set("certificate", word);
  std::cout << report.render();
  return kExitPositive;
}

int cmd_check_empty(const std::string& file, int fuel, std::uint64_t nodes,
                    int dim_flag, const std::string& cert_out) {
  std::string digest;
  SftSpec spec = load_spec(file, &digest);
  if (dim_flag > 0 && dim_flag != spec.dim())
    throw FormatError("--dim disagrees with the input file");
  RunReport report("check-empty");
  report.set("input", file);
  report.set("digest", digest);
  report.set("fuel", fuel);
  Verdict v = semidecide_empty(spec, Fuel{fuel, nodes});
  report.set("nodes", v.fuel_spent);
  switch (v.kind) {
    case Verdict::Kind::ProvedEmpty:
      report.set("verdict", "ProvedEmpty");
      report.set("radius", v.radius);
      std::cout << report.render();
      return kExitNegative;
    case Verdict::Kind::ProvedNonempty: {
      report.set("verdict", "ProvedNonempty");
      std::string periods;
      for (int p : v.cert->periods) {
        if (!periods.empty()) periods += ' ';
        periods += std::to_string(p);
      }
      report.set("periods", periods);
      if (!cert_out.empty()) {
        std::ofstream out(cert_out);
        out << write_torus(spec.alphabet(), *v.cert);
        report.set("certificate_file", cert_out);
      } else {
        report.set("certificate", "inline");
      }
      std::cout << report.render();
      if (cert_out.empty() && !g_compact)
        std::cout << write_torus(spec.alphabet(), *v.cert);
      return kExitPositive;
    }
    case Verdict::Kind::Unknown:
      report.set("verdict", "Unknown");
      std::cout << report.render();
      return kExitUnknown;
  }
  return kExitUnknown;
}

int cmd_verify_cert(const std::string& spec_file, const std::string& cert_file) {
  std::string sd;
  SftSpec spec = load_spec(spec_file, &sd);
  std::string bytes = slurp(cert_file);
  TorusCert cert = parse_torus_string(bytes);
  if (!(cert.alphabet == spec.alphabet()))
    throw FormatError("certificate alphabet differs from the spec");
  RunReport report("verify-cert");
  report.set("spec", spec_file);
  report.set("spec_digest", sd);
  report.set("cert", cert_file);
  report.set("cert_digest", digest_hex(bytes));
  bool ok = verify_torus(spec, cert.torus);
  report.set("verdict", ok ? "valid" : "invalid");
  std::cout << report.render();
  return ok ? kExitPositive : kExitNegative;
}

int cmd_count(const std::string& file, int n, std::uint64_t nodes) {
  std::string digest;
  SftSpec spec = load_spec(file, &digest);
  RunReport report("count");
  report.set("input", file);
  report.set("digest", digest);
  report.set("n", n);
  Budget budget;
  budget.node_limit = nodes;
  std::uint64_t count = count_admissible(spec, n, budget);
  report.set("count", count);
  std::ostringstream h;
  h.precision(12);
  h << std::fixed << entropy_upper(spec, n, budget);
  report.set("entropy_upper", h.str());
  report.set("nodes", budget.nodes);
  std::cout << report.render();
  return kExitPositive;
}

int cmd_code_apply(const std::string& code_file, const std::vector<std::string>& word) {
  BlockCode code = parse_block_code_string(slurp(code_file));
  if (code.dim() != 1)
    throw FormatError("code apply --word handles 1D codes");
  Pattern input = Pattern::from_word(parse_word(code.src(), word));
  Pattern out = apply_to_pattern(code, input);
  RunReport report("code-apply");
  report.set("code", code_file);
  std::string rendered;
  for (const auto& [site, sym] : out.cells()) {
    if (!rendered.empty()) rendered += ' ';
    rendered += code.dst().name(sym);
  }
  report.set("output", rendered);
  std::cout << report.render();
  return kExitPositive;
}

int cmd_code_verify(const std::string& src_file, const std::string& dst_file,
                    const std::string& code_file, int r, std::uint64_t nodes) {
  SftSpec src = load_spec(src_file);
  SftSpec dst = load_spec(dst_file);
  BlockCode code = parse_block_code_string(slurp(code_file));
  RunReport report("code-verify");
  report.set("src", src_file);
  report.set("dst", dst_file);
  report.set("code", code_file);
  report.set("r", r);
  Budget budget;
  budget.node_limit = nodes;
  bool ok = verify_factor_step(src, dst, code, r, budget);
  report.set("nodes", budget.nodes);
  report.set("verdict", ok ? "pass" : "fail");
  std::cout << report.render();
  return ok ? kExitPositive : kExitNegative;
}

int cmd_code_search(const std::string& src_file, const std::string& dst_file,
                    int max_k, int max_r, std::uint64_t max_rules,
                    std::uint64_t nodes) {
  SftSpec src = load_spec(src_file);
  SftSpec dst = load_spec(dst_file);
  RunReport report("code-search");
  report.set("src", src_file);
  report.set("dst", dst_file);
  Budget budget;
  budget.node_limit = nodes;
  auto hit = search_factor(src, dst, FactorSearchBounds{max_k, max_r, max_rules},
                           budget);
  report.set("nodes", budget.nodes);
  if (!hit) {
    report.set("verdict", "none-in-bounds");
    std::cout << report.render();
    return kExitNegative;
  }
  report.set("verdict", "found");
  report.set("r", hit->r);
  std::cout << report.render();
  if (!g_compact) std::cout << write_block_code(hit->code);
  return kExitPositive;
}

int cmd_ca_limit(const std::string& code_file, int steps, int window,
                 std::uint64_t nodes) {
  CaSpec ca(parse_block_code_string(slurp(code_file)));
  RunReport report("ca-limit");
  report.set("code", code_file);
  report.set("steps", steps);
  report.set("window", window);
  Budget budget;
  budget.node_limit = nodes;
  auto language = ca_image_language(ca, steps, window, budget);
  report.set("size", static_cast<std::uint64_t>(language.size()));
  report.set("nodes", budget.nodes);
  std::cout << report.render();
  if (ca.dim() == 1 && !g_compact) {
    for (const auto& p : language) {
      std::string w;
      for (const auto& [site, sym] : p.cells()) {
        if (!w.empty()) w += ' ';
        w += ca.alphabet().name(sym);
      }
      std::cout << "word " << w << "\n";
    }
  }
  return kExitPositive;
}

int cmd_eds_stage(const std::string& script, int k) {
  ScriptedEnumerator e = parse_enumerator_script_string(slurp(script), 1);
  StageSet s = guarded_stage(e, k);
  RunReport report("eds-stage");
  report.set("script", script);
  report.set("k", k);
  report.set("exclusions", static_cast<std::uint64_t>(s.excluded().size()));
  std::cout << report.render();
  if (!g_compact) std::cout << write_gencyl_file(s.excluded());
  return kExitPositive;
}

int cmd_eds_product(const std::vector<std::string>& scripts, int k, bool guard) {
  std::vector<std::shared_ptr<Enumerator>> lanes;
  for (const auto& path : scripts)
    lanes.push_back(std::make_shared<ScriptedEnumerator>(
        parse_enumerator_script_string(slurp(path), 1)));
  StageSet s = guard ? universal_stage(k, lanes)
                     : product_stage(RegistryMaster(lanes), k);
  RunReport report(guard ? "eds-universal" : "eds-product");
  report.set("lanes", static_cast<std::uint64_t>(lanes.size()));
  report.set("k", k);
  report.set("exclusions", static_cast<std::uint64_t>(s.excluded().size()));
  std::cout << report.render();
  if (!g_compact) std::cout << write_gencyl_file(s.excluded());
  return kExitPositive;
}

int cmd_eds_verify_partition(const std::string& stage_file,
                             const std::string& part_file,
                             const std::string& dst_file, int n, int r,
                             std::uint64_t nodes) {
  SftSpec dst = load_spec(dst_file);
  std::istringstream stage_in(slurp(stage_file));
  StageSet stage(dst.dim(), parse_gencyl_file(stage_in, dst.dim()));
  ClopenPartition part = parse_partition_file(part_file, dst.dim());
  RunReport report("eds-verify-partition");
  report.set("stage", stage_file);
  report.set("partition", part_file);
  report.set("dst", dst_file);
  report.set("n", n);
  report.set("r", r);
  Budget budget;
  budget.node_limit = nodes;
  bool ok = verify_partition_factor(stage, part, dst, n, r, budget);
  report.set("nodes", budget.nodes);
  report.set("verdict", ok ? "pass" : "fail");
  std::cout << report.render();
  return ok ? kExitPositive : kExitNegative;
}

int cmd_attractor_image(const std::string& oracle_file,
                        const std::vector<std::string>& cell_arg, int n) {
  auto oracle = parse_oracle_string(slurp(oracle_file));
  DyadicCell cell = parse_cell_arg(cell_arg);
  auto points = approx_image(*oracle, cell, static_cast<std::uint64_t>(n));
  RunReport report("attractor-image");
  report.set("oracle", oracle_file);
  report.set("n", n);
  report.set("points", static_cast<std::uint64_t>(points.size()));
  std::cout << report.render();
  if (!g_compact) for (const auto& p : points) {
    std::cout << "point";
    for (const auto& v : p) std::cout << ' ' << rational_to_string(v);
    std::cout << "\n";
  }
  return kExitPositive;
}

int cmd_attractor_test_cell(const std::string& oracle_file,
                            const std::string& trap_file,
                            const std::vector<std::string>& cell_arg, int fuel) {
  auto oracle = parse_oracle_string(slurp(oracle_file));
  TrapRegion trap = parse_trap_string(slurp(trap_file));
  DyadicCell cell = parse_cell_arg(cell_arg);
  AttractorApproximator approx(*oracle, std::move(trap));
  RunReport report("attractor-test-cell");
  report.set("oracle", oracle_file);
  report.set("trap", trap_file);
  report.set("fuel", fuel);
  DisjointVerdict v = semidecide_cell_avoids_attractor(approx, cell, fuel);
  if (v.proved) {
    report.set("verdict", "ProvedDisjoint");
    report.set("n", v.n);
    std::cout << report.render();
    return kExitPositive;
  }
  report.set("verdict", "Unknown");
  std::cout << report.render();
  return kExitUnknown;
}

int cmd_attractor_encode(const std::string& oracle_file,
                         const std::string& trap_file, int fuel, int depth) {
  auto oracle = parse_oracle_string(slurp(oracle_file));
  TrapRegion trap = parse_trap_string(slurp(trap_file));
  AttractorApproximator approx(*oracle, std::move(trap));
  PresentationOptions popts;
  popts.max_depth = depth;
  auto emitted = enumerate_forbidden_cylinders(approx, fuel, popts);
  RunReport report("attractor-encode");
  report.set("oracle", oracle_file);
  report.set("trap", trap_file);
  report.set("fuel", fuel);
  report.set("emitted", static_cast<std::uint64_t>(emitted.size()));
  std::cout << report.render();
  if (!g_compact) std::cout << write_gencyl_file(emitted);
  return kExitPositive;
}

// ---- corpus ----

struct CorpusEntry {
  std::string name;
  std::map<std::string, std::string> kv;
};

std::vector<CorpusEntry> parse_corpus(const std::string& text) {
  std::vector<CorpusEntry> entries;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] != "entry") throw FormatError("corpus lines start with 'entry'");
    CorpusEntry e;
    for (size_t i = 1; i < toks.size(); ++i) {
      auto eq = toks[i].find('=');
      if (eq == std::string::npos)
        throw FormatError("corpus fields are key=value: '" + toks[i] + "'");
      e.kv[toks[i].substr(0, eq)] = toks[i].substr(eq + 1);
    }
    if (!e.kv.count("name") || !e.kv.count("op"))
      throw FormatError("corpus entry needs name= and op=");
    e.name = e.kv["name"];
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string corpus_dir(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

// Runs one corpus entry; returns {got, pass}.
std::pair<std::string, bool> run_corpus_entry(const CorpusEntry& e,
                                              const std::string& dir) {
  auto need = [&](const std::string& key) -> std::string {
    auto it = e.kv.find(key);
    if (it == e.kv.end())
      throw FormatError("entry '" + e.name + "' is missing " + key + "=");
    return it->second;
  };
  auto file = [&](const std::string& key) { return dir + "/" + need(key); };
  const std::string op = need("op");
  const std::string expect = need("expect");

  if (op == "count") {
    SftSpec spec = load_spec(file("file"));
    Budget budget;
    std::uint64_t got = count_admissible(spec, std::stoi(need("n")), budget);
    return {std::to_string(got), std::to_string(got) == expect};
  }
  if (op == "check-empty-1d") {
    SftSpec spec = load_spec(file("file"));
    bool empty = decide_empty_1d(spec);
    std::string got = empty ? "empty" : "nonempty";
    bool pass = got == expect;
    if (pass && !empty && e.kv.count("cert")) {
      auto witness = periodic_point_1d(spec);
      std::string word;
      for (int s : witness->word) word += spec.alphabet().name(s);
      pass = word == e.kv.at("cert");
      got += ":" + word;
    }
    return {got, pass};
  }
  if (op == "check-empty") {
    SftSpec spec = load_spec(file("file"));
    int fuel = std::stoi(need("fuel"));
    Verdict v = semidecide_empty(spec, Fuel{fuel, 1u << 22});
    std::string got = v.proved_empty() ? "empty"
                      : v.proved_nonempty() ? "nonempty"
                                            : "unknown";
    bool pass = got == expect;
    if (pass && v.proved_empty() && e.kv.count("radius"))
      pass = std::to_string(v.radius) == e.kv.at("radius");
    return {got, pass};
  }
  if (op == "verify-cert") {
    SftSpec spec = load_spec(file("file"));
    TorusCert cert = parse_torus_string(slurp(file("cert")));
    bool ok = verify_torus(spec, cert.torus);
    std::string got = ok ? "valid" : "invalid";
    return {got, got == expect};
  }
  if (op == "code-verify") {
    SftSpec src = load_spec(file("src"));
    SftSpec dst = load_spec(file("dst"));
    BlockCode code = parse_block_code_string(slurp(file("code")));
    Budget budget;
    bool ok = verify_factor_step(src, dst, code, std::stoi(need("r")), budget);
    std::string got = ok ? "pass" : "fail";
    return {got, got == expect};
  }
  if (op == "ca-limit") {
    CaSpec ca(parse_block_code_string(slurp(file("code"))));
    Budget budget;
    auto language = ca_image_language(ca, std::stoi(need("steps")),
                                      std::stoi(need("window")), budget);
    std::string got = std::to_string(language.size());
    return {got, got == expect};
  }
  if (op == "eds-empty") {
    std::istringstream in(slurp(file("file")));
    auto cyls = parse_gencyl_file(in, 1);
    bool empty = decide_empty_eds_1d(cyls);
    std::string got = empty ? "empty" : "nonempty";
    return {got, got == expect};
  }
  if (op == "eds-stage") {
    ScriptedEnumerator en = parse_enumerator_script_string(slurp(file("file")), 1);
    StageSet s = guarded_stage(en, std::stoi(need("k")));
    std::string got = std::to_string(s.excluded().size());
    return {got, got == expect};
  }
  if (op == "attractor-test-cell") {
    auto oracle = parse_oracle_string(slurp(file("oracle")));
    TrapRegion trap = parse_trap_string(slurp(file("trap")));
    // Cell spec uses underscores so it stays one key=value token.
    std::string spec = need("cell");
    std::replace(spec.begin(), spec.end(), '_', ' ');
    std::istringstream cs(spec);
    std::vector<std::string> toks;
    std::string t;
    while (cs >> t) toks.push_back(t);
    DyadicCell cell = parse_cell_arg(toks);
    AttractorApproximator approx(*oracle, std::move(trap));
    DisjointVerdict v =
        semidecide_cell_avoids_attractor(approx, cell, std::stoi(need("fuel")));
    std::string got = v.proved ? "disjoint" : "unknown";
    return {got, got == expect};
  }
  throw FormatError("entry '" + e.name + "': unknown op '" + op + "'");
}

int cmd_corpus_run(const std::string& path) {
  std::string bytes = slurp(path);
  std::vector<CorpusEntry> entries = parse_corpus(bytes);
  std::string dir = corpus_dir(path);

  // SFTLAB_SEED fixes the (otherwise file-order) execution order.
  if (const char* seed = std::getenv("SFTLAB_SEED")) {
    std::mt19937_64 rng(std::strtoull(seed, nullptr, 10));
    std::shuffle(entries.begin(), entries.end(), rng);
  }

  RunReport report("corpus-run");
  report.set("corpus", path);
  report.set("digest", digest_hex(bytes));
  report.set("entries", static_cast<std::uint64_t>(entries.size()));
  std::cout << report.render();

  int failures = 0;
  for (const auto& e : entries) {
    std::string got;
    bool pass = false;
    try {
      std::tie(got, pass) = run_corpus_entry(e, dir);
    } catch (const Error& err) {
      got = std::string("error: ") + err.what();
    }
    if (!pass) ++failures;
    std::cout << "entry name=" << e.name << " expect=" << e.kv.at("expect")
              << " got=" << got << " status=" << (pass ? "pass" : "FAIL")
              << "\n";
  }
  std::cout << "summary total=" << entries.size() << " failures=" << failures
            << "\n";
  return failures == 0 ? kExitPositive : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for shifts of finite type and effective dynamics"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "cap on worker threads")->check(CLI::Range(1, 1024));
  std::string format = "text";
  app.add_option("--format", format, "report body: text or compact")
      ->check(CLI::IsMember({"text", "compact"}));

  std::string file;
  auto* c1d = app.add_subcommand("check-empty-1d", "exact 1D emptiness decision");
  c1d->add_option("file", file, "SFT file")->required();

  auto* ce = app.add_subcommand("check-empty", "budgeted d-dimensional emptiness");
  std::string ce_file, ce_cert;
  int ce_fuel = 4, ce_dim = 0;
  std::uint64_t ce_nodes = 1u << 22;
  ce->add_option("file", ce_file, "SFT or Wang tile file")->required();
  ce->add_option("--fuel", ce_fuel, "max ladder radius / period volume");
  ce->add_option("--nodes", ce_nodes, "search node budget");
  ce->add_option("--dim", ce_dim, "expected dimension (checked)");
  ce->add_option("--cert-out", ce_cert, "write the certificate here");

  auto* vc = app.add_subcommand("verify-cert", "re-check a torus certificate");
  std::string vc_spec, vc_cert;
  vc->add_option("spec", vc_spec)->required();
  vc->add_option("cert", vc_cert)->required();

  auto* cnt = app.add_subcommand("count", "count admissible patterns on [0,n)^d");
  std::string cnt_file;
  int cnt_n = 1;
  std::uint64_t cnt_nodes = 1u << 24;
  cnt->add_option("file", cnt_file)->required();
  cnt->add_option("--n", cnt_n)->required();
  cnt->add_option("--nodes", cnt_nodes);

  auto* code = app.add_subcommand("code", "sliding block code operations");
  code->require_subcommand(1);
  auto* capply = code->add_subcommand("apply", "apply a 1D code to a word");
  std::string ca_code;
  std::vector<std::string> ca_word;
  capply->add_option("--code", ca_code)->required();
  capply->add_option("--word", ca_word, "input symbols")->required()->expected(-1);
  auto* cverify = code->add_subcommand("verify", "factor verification step");
  std::string cv_src, cv_dst, cv_code;
  int cv_r = 0;
  std::uint64_t cv_nodes = 1u << 24;
  cverify->add_option("--src", cv_src)->required();
  cverify->add_option("--dst", cv_dst)->required();
  cverify->add_option("--code", cv_code)->required();
  cverify->add_option("--r", cv_r)->required();
  cverify->add_option("--nodes", cv_nodes);
  auto* csearch = code->add_subcommand("search", "search for a factor code");
  std::string cs_src, cs_dst;
  int cs_maxk = 1, cs_maxr = 6;
  std::uint64_t cs_rules = 4096, cs_nodes = 1u << 24;
  csearch->add_option("--src", cs_src)->required();
  csearch->add_option("--dst", cs_dst)->required();
  csearch->add_option("--max-k", cs_maxk);
  csearch->add_option("--max-r", cs_maxr);
  csearch->add_option("--max-rules", cs_rules);
  csearch->add_option("--nodes", cs_nodes);

  auto* ca = app.add_subcommand("ca", "cellular automaton operations");
  ca->require_subcommand(1);
  auto* calimit = ca->add_subcommand("limit", "window language of f^t(full shift)");
  std::string cl_code;
  int cl_steps = 1, cl_window = 3;
  std::uint64_t cl_nodes = 1u << 24;
  calimit->add_option("--code", cl_code)->required();
  calimit->add_option("--steps", cl_steps)->required();
  calimit->add_option("--window", cl_window)->required();
  calimit->add_option("--nodes", cl_nodes);

  auto* eds = app.add_subcommand("eds", "effective dynamical system stages");
  eds->require_subcommand(1);
  auto* estage = eds->add_subcommand("stage", "guarded stage of one enumerator");
  std::string es_script;
  int es_k = 0;
  estage->add_option("--script", es_script)->required();
  estage->add_option("--k", es_k)->required();
  auto* eprod = eds->add_subcommand("product", "product stage of a registry");
  std::vector<std::string> ep_scripts;
  int ep_k = 0;
  eprod->add_option("--script", ep_scripts)->required()->expected(-1);
  eprod->add_option("--k", ep_k)->required();
  auto* euniv = eds->add_subcommand("universal", "guarded universal product stage");
  std::vector<std::string> eu_scripts;
  int eu_k = 0;
  euniv->add_option("--script", eu_scripts)->required()->expected(-1);
  euniv->add_option("--k", eu_k)->required();
  auto* epart = eds->add_subcommand("verify-partition", "clopen partition factor check");
  std::string vp_stage, vp_part, vp_dst;
  int vp_n = 2, vp_r = 1;
  std::uint64_t vp_nodes = 1u << 24;
  epart->add_option("--stage", vp_stage)->required();
  epart->add_option("--partition", vp_part)->required();
  epart->add_option("--dst", vp_dst)->required();
  epart->add_option("--n", vp_n)->required();
  epart->add_option("--r", vp_r)->required();
  epart->add_option("--nodes", vp_nodes);

  auto* at = app.add_subcommand("attractor", "effective attractor operations");
  at->require_subcommand(1);
  auto* aimg = at->add_subcommand("image", "two-sided image approximation");
  std::string ai_oracle;
  std::vector<std::string> ai_cell;
  int ai_n = 4;
  aimg->add_option("--oracle", ai_oracle)->required();
  aimg->add_option("--cell", ai_cell, "level k1 [k2 ...]")->required()->expected(-1);
  aimg->add_option("--n", ai_n);
  auto* atest = at->add_subcommand("test-cell", "semidecide cell avoids attractor");
  std::string at_oracle, at_trap;
  std::vector<std::string> at_cell;
  int at_fuel = 16;
  atest->add_option("--oracle", at_oracle)->required();
  atest->add_option("--trap", at_trap)->required();
  atest->add_option("--cell", at_cell)->required()->expected(-1);
  atest->add_option("--fuel", at_fuel);
  auto* aenc = at->add_subcommand("encode", "emit forbidden orbit cylinders");
  std::string ae_oracle, ae_trap;
  int ae_fuel = 8, ae_depth = 3;
  aenc->add_option("--oracle", ae_oracle)->required();
  aenc->add_option("--trap", ae_trap)->required();
  aenc->add_option("--fuel", ae_fuel);
  aenc->add_option("--depth", ae_depth);

  auto* corpus = app.add_subcommand("corpus", "expectation corpora");
  corpus->require_subcommand(1);
  auto* crun = corpus->add_subcommand("run", "run a corpus of expectations");
  std::string cr_path;
  crun->add_option("file", cr_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  g_compact = format == "compact";

  try {
    if (c1d->parsed()) return cmd_check_empty_1d(file);
    if (ce->parsed())
      return cmd_check_empty(ce_file, ce_fuel, ce_nodes, ce_dim, ce_cert);
    if (vc->parsed()) return cmd_verify_cert(vc_spec, vc_cert);
    if (cnt->parsed()) return cmd_count(cnt_file, cnt_n, cnt_nodes);
    if (capply->parsed()) return cmd_code_apply(ca_code, ca_word);
    if (cverify->parsed())
      return cmd_code_verify(cv_src, cv_dst, cv_code, cv_r, cv_nodes);
    if (csearch->parsed())
      return cmd_code_search(cs_src, cs_dst, cs_maxk, cs_maxr, cs_rules, cs_nodes);
    if (calimit->parsed()) return cmd_ca_limit(cl_code, cl_steps, cl_window, cl_nodes);
    if (estage->parsed()) return cmd_eds_stage(es_script, es_k);
    if (eprod->parsed()) return cmd_eds_product(ep_scripts, ep_k, false);
    if (euniv->parsed()) return cmd_eds_product(eu_scripts, eu_k, true);
    if (epart->parsed())
      return cmd_eds_verify_partition(vp_stage, vp_part, vp_dst, vp_n, vp_r, vp_nodes);
    if (aimg->parsed()) return cmd_attractor_image(ai_oracle, ai_cell, ai_n);
    if (atest->parsed())
      return cmd_attractor_test_cell(at_oracle, at_trap, at_cell, at_fuel);
    if (aenc->parsed())
      return cmd_attractor_encode(ae_oracle, ae_trap, ae_fuel, ae_depth);
    if (crun->parsed()) return cmd_corpus_run(cr_path);
  } catch (const FormatError& e) {
    std::cout << "error=format message=" << e.what() << "\n";
    return kExitFormat;
  } catch (const BudgetExhausted& e) {
    std::cout << "error=budget message=" << e.what() << "\n";
    return kExitUnknown;
  } catch (const Error& e) {
    std::cout << "error=domain message=" << e.what() << "\n";
    return kExitNegative;
  }
  return kExitUsage;
}

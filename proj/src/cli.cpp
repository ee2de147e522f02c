#include "multiwit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "multiwit/dimension.hpp"
#include "multiwit/fixtures.hpp"
#include "multiwit/monodromy.hpp"
#include "multiwit/nid.hpp"
#include "multiwit/witness.hpp"

namespace multiwit {

namespace {

using nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string input;
  std::string fixture;
  std::string witness_in;
  std::string output;
  std::string archive_out;
  unsigned long long seed = kDefaultSeed;
  double tol_rank = kDefaultRankTol;
  double tol_track = 1e-10;
  double tol_match = 1e-6;
  double tol_trace = 1e-10;
  int max_loops = 200;
  int workers = 0;
  bool extended = false;
  int dim = -1;
  std::string keys;
  std::string probe;
  std::string point;
  std::string merge;
  int group = -1;
  std::string first_vars;
  std::string target;
  std::string key;
  std::string part;
  std::string degrees;
  std::string nvec;
  std::string route;
  bool ungrouped = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad integer list '" + s + "'");
    }
  }
  return out;
}

std::vector<int> one_based(const std::vector<int>& v, int bound) {
  std::vector<int> out;
  for (int i : v) {
    if (i < 1 || i > bound) throw InputError("group index " + std::to_string(i) + " out of range");
    out.push_back(i - 1);
  }
  return out;
}

CVector parse_point(const std::string& s, int nvars) {
  ordered_json j;
  try {
    j = ordered_json::parse(s);
  } catch (const std::exception&) {
    throw InputError("point must be a JSON array of [re, im] pairs");
  }
  if (!j.is_array() || static_cast<int>(j.size()) != nvars)
    throw InputError("point arity does not match the system (" + std::to_string(nvars) + " coordinates)");
  CVector x(nvars);
  for (int i = 0; i < nvars; ++i) {
    const auto& c = j[i];
    if (c.is_number()) {
      x(i) = c.get<double>();
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      x(i) = Complex(c[0].get<double>(), c[1].get<double>());
    } else {
      throw InputError("point coordinate " + std::to_string(i) + " is malformed");
    }
  }
  return x;
}

ordered_json degrees_json(const MultidegreeMap& md) {
  ordered_json o = ordered_json::object();
  for (const auto& [e, v] : md) o[key_string(e)] = v;
  return o;
}

std::string set_string(const GroupSet& I) {
  std::vector<int> b;
  for (int i : I) b.push_back(i + 1);
  return comma_string(b);
}

ordered_json profile_json(const DimensionProfile& p) {
  ordered_json o;
  o["total_dim"] = p.total_dim;
  ordered_json pd = ordered_json::object();
  for (const auto& [I, d] : p.proj_dims) pd[set_string(I)] = d;
  o["proj_dims"] = pd;
  return o;
}

ordered_json polytope_json(const DimensionPolytope& dp) {
  ordered_json a = ordered_json::array();
  for (const auto& e : dp) a.push_back(key_string(e));
  return a;
}

ordered_json blocks_json(const std::vector<GroupSet>& blocks) {
  ordered_json a = ordered_json::array();
  for (const auto& b : blocks) {
    ordered_json c = ordered_json::array();
    for (int i : b) c.push_back(i + 1);
    a.push_back(c);
  }
  return a;
}

struct Loaded {
  SystemDocument doc;
  std::string source;
  std::string name;
};

Loaded load_input(const Config& c) {
  Loaded l;
  if (!c.fixture.empty() && !c.input.empty()) throw InputError("give either --input or --fixture, not both");
  if (!c.fixture.empty()) {
    auto names = fixture_names(true);
    if (std::find(names.begin(), names.end(), c.fixture) == names.end())
      throw InputError("unknown fixture '" + c.fixture + "'");
    if (c.fixture == "pentad" && !c.extended) throw InputError("the pentad fixture needs --extended");
    l.source = fixture_text(c.fixture);
    l.name = c.fixture;
  } else if (!c.input.empty()) {
    l.source = read_file(c.input);
    l.name = c.input;
  } else if (c.witness_in.empty()) {
    throw InputError("no input: use --input FILE or --fixture NAME");
  }
  if (!l.source.empty()) l.doc = parse_system(l.source);
  if (c.ungrouped && !l.source.empty()) {
    l.doc.system = l.doc.system.with_grouping(l.doc.grouping.ungrouped());
    l.doc.grouping = l.doc.system.grouping();
  }
  return l;
}

Settings make_settings(const Config& c) {
  Settings s;
  s.rank_tol = c.tol_rank;
  s.track.newton_tol = c.tol_track;
  s.match_tol = c.tol_match;
  s.trace_tol = c.tol_trace;
  s.max_loops = c.max_loops;
  s.track.workers = c.workers > 0 ? c.workers : std::max(1u, std::thread::hardware_concurrency());
  return s;
}

int dimension_of(const Config& c, const Loaded& l, RandomSource& rs, const Settings& s) {
  if (c.dim >= 0) return c.dim;
  if (!c.probe.empty())
    return local_multidimension(l.doc.system, parse_point(c.probe, l.doc.system.num_vars()), s.rank_tol).total_dim;
  auto it = l.doc.metadata.find("dim");
  if (it != l.doc.metadata.end()) {
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw InputError("bad dim metadata");
    }
  }
  (void)rs;
  throw InputError("dimension unknown: give --dim, --probe, or a '# @dim' line");
}

WitnessCollection obtain_collection(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  if (!c.witness_in.empty()) {
    WitnessArchive a;
    try {
      a = load_witness(read_file(c.witness_in));
    } catch (const ArchiveError& ex) {
      throw InputError(ex.what());
    }
    WitnessCollection wc = from_archive(a, rs);
    l.doc = parse_system(a.system);
    l.source = a.system;
    if (l.name.empty()) l.name = c.witness_in;
    return wc;
  }
  const auto& g = l.doc.grouping;
  std::vector<MultiIndex> cands;
  if (!c.keys.empty()) {
    std::stringstream ss(c.keys);
    std::string item;
    while (std::getline(ss, item, ';')) {
      MultiIndex e = parse_key(item);
      if (static_cast<int>(e.size()) != g.num_groups()) throw InputError("key '" + item + "' has the wrong length");
      cands.push_back(e);
    }
  } else {
    cands = multi_indices(g.sizes(), dimension_of(c, l, rs, s));
  }
  if (cands.empty()) throw InputError("no candidate keys for that dimension");
  return compute_witness_collection(l.doc.system, cands, rs, s);
}

MultiIndex pick_key(const Config& c, const WitnessCollection& wc) {
  if (!c.key.empty()) {
    MultiIndex e = parse_key(c.key);
    if (!wc.entries.count(e)) throw InputError("no witness entry for key " + c.key);
    return e;
  }
  if (wc.entries.empty()) throw InputError("witness collection is empty");
  return wc.entries.begin()->first;
}

ordered_json collection_json(const WitnessCollection& wc) {
  ordered_json o;
  o["dimension"] = wc.dimension();
  o["degrees"] = degrees_json(wc.degrees());
  o["segre_degree"] = segre_degree(wc.degrees());
  o["complete"] = wc.complete;
  return o;
}

// Written to PATH.partial first, then renamed.
void write_file(const std::string& path, const std::string& text) {
  std::string tmp = path + ".partial";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_output(const Config& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  write_file(c.output, text);
}

ordered_json cmd_witness(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  ordered_json o = collection_json(wc);
  if (!c.archive_out.empty()) {
    write_file(c.archive_out, save_witness(to_archive(wc, l.source, c.seed)));
  }
  return o;
}

ordered_json cmd_dim(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  std::vector<CVector> pts;
  PolySystem f;
  if (!c.point.empty()) {
    if (l.source.empty()) throw InputError("--point needs a system");
    f = l.doc.system;
    pts.push_back(parse_point(c.point, f.num_vars()));
  } else {
    WitnessCollection wc = obtain_collection(c, l, rs, s);
    f = wc.system;
    for (const auto& [e, p] : wc.entries) pts.insert(pts.end(), p.begin(), p.end());
  }
  ordered_json parts = ordered_json::array();
  for (const auto& part : equidim_partition(f, pts, s.rank_tol)) {
    ordered_json o;
    o["count"] = part.indices.size();
    o["profile"] = profile_json(part.profile);
    DimensionPolytope dp = dimension_polytope(part.profile, f.grouping().sizes());
    o["polytope"] = polytope_json(dp);
    o["factorization"] = blocks_json(product_factorization(dp));
    parts.push_back(o);
  }
  ordered_json o;
  o["points"] = pts.size();
  o["parts"] = parts;
  return o;
}

ordered_json cmd_slice(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  if (c.group < 1 || c.group > wc.grouping().num_groups()) throw InputError("--group out of range");
  WitnessCollection sl = slice(wc, c.group - 1);
  ordered_json o = collection_json(sl);
  o["paths_tracked"] = 0;
  return o;
}

ordered_json cmd_refine(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  const auto& g = wc.grouping();
  if (c.group < 1 || c.group > g.num_groups()) throw InputError("--group out of range");
  std::vector<int> first = parse_int_list(c.first_vars);
  std::vector<int> vars;
  for (int v : first) {
    if (v < 1 || v > g.group_size(c.group - 1)) throw InputError("--first index out of range");
    vars.push_back(g.group(c.group - 1)[v - 1]);
  }
  std::vector<int> t = parse_int_list(c.target);
  if (t.size() != 2) throw InputError("--target needs two counts");
  MultiIndex e = pick_key(c, wc);
  if (t[0] < 0 || t[1] < 0 || t[0] + t[1] != e[c.group - 1])
    throw InputError("--target must add up to " + std::to_string(e[c.group - 1]) + ", the source key's slice count");
  RefineResult r = refine(wc.witness_set(e), c.group - 1, vars, {t[0], t[1]}, rs, s);
  ordered_json o;
  o["source_key"] = key_string(e);
  o["target_key"] = key_string(r.ws.e);
  o["starts"] = wc.entries.at(e).size();
  o["points"] = r.ws.points.size();
  o["converged"] = r.converged;
  o["diverged"] = r.diverged;
  o["failed"] = r.failed;
  return o;
}

ordered_json cmd_coarsen(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  std::vector<int> merge = one_based(parse_int_list(c.merge), wc.grouping().num_groups());
  if (merge.size() < 2) throw InputError("--merge needs at least two groups");
  CoarsenCollectionResult r = coarsen_collection(wc, merge, rs, s);
  ordered_json o = collection_json(r.wc);
  ordered_json runs = ordered_json::object();
  for (const auto& [e, run] : r.runs) {
    ordered_json j;
    j["starts"] = run.delta;
    j["converged"] = run.converged;
    j["diverged"] = run.diverged;
    j["failed"] = run.failed;
    runs[key_string(e)] = j;
  }
  o["runs"] = runs;
  return o;
}

ordered_json cmd_member(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  if (c.point.empty()) throw InputError("member needs --point");
  CVector q = parse_point(c.point, wc.system.num_vars());
  ordered_json o;
  o["member"] = membership(wc, q, rs, s);
  return o;
}

// Ungrouped curve witness: witness set of V(F) in one group, sliced down to one form.
WitnessSet curve_witness(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  if (!c.route.empty()) {
    try {
      return reduce_to_curve(wc, parse_route(c.route), rs, s);
    } catch (const NidError& ex) {
      throw InputError(ex.what());
    }
  }
  if (wc.grouping().num_groups() != 1) {
    std::vector<int> all(wc.grouping().num_groups());
    for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
    wc = coarsen_collection(wc, all, rs, s).wc;
  }
  while (wc.dimension() > 1) wc = slice(wc, 0);
  if (wc.dimension() != 1) throw InputError("trace and decomposition of curves need positive dimension");
  return wc.witness_set({1});
}

ordered_json cmd_trace(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessSet ws = curve_witness(c, l, rs, s);
  std::vector<int> part;
  if (c.part.empty()) {
    for (int i = 0; i < static_cast<int>(ws.points.size()); ++i) part.push_back(i);
  } else {
    for (int i : parse_int_list(c.part)) {
      if (i < 0 || i >= static_cast<int>(ws.points.size())) throw InputError("--part index out of range");
      part.push_back(i);
    }
  }
  ordered_json o;
  o["points"] = ws.points.size();
  o["part_size"] = part.size();
  o["trace"] = trace_test(ws, part, rs, s);
  return o;
}

ordered_json cmd_decompose_curve(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessSet ws = curve_witness(c, l, rs, s);
  CurveDecomposition cd = nid_curve_affine(ws, rs, s);
  ordered_json parts = ordered_json::array();
  for (const auto& p : cd.parts) {
    ordered_json j;
    j["degree"] = p.degree;
    j["certified"] = p.certified;
    j["indices"] = p.indices;
    parts.push_back(j);
  }
  ordered_json o;
  o["points"] = cd.points.size();
  o["parts"] = parts;
  o["loops"] = cd.loops;
  o["complete"] = cd.complete;
  return o;
}

ordered_json cmd_decompose(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  if (!c.route.empty()) return cmd_decompose_curve(c, l, rs, s);
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  std::vector<CVector> pts;
  std::vector<MultiIndex> keys;
  for (const auto& [e, p] : wc.entries) {
    if (!c.key.empty() && e != parse_key(c.key)) continue;
    for (const auto& x : p) {
      pts.push_back(x);
      keys.push_back(e);
    }
  }
  Decomposition d = nid_multi(wc.system, pts, rs, s, &keys);
  ordered_json comps = ordered_json::array();
  for (const auto& r : d.components) {
    ordered_json j;
    j["profile"] = profile_json(r.profile);
    j["polytope"] = polytope_json(r.polytope);
    j["m"] = key_string(r.m);
    j["e"] = key_string(r.e);
    ordered_json order = ordered_json::array();
    for (int i : r.I_order) order.push_back(i + 1);
    j["I_order"] = order;
    j["curve_degree"] = r.curve.points.size();
    j["certified"] = r.certified;
    j["members"] = r.members;
    j["degrees"] = degrees_json(r.degrees);
    comps.push_back(j);
  }
  ordered_json o;
  o["points"] = pts.size();
  o["components"] = comps;
  o["assignment"] = d.assignment;
  o["complete"] = d.complete;
  if (!d.diagnostic.empty()) o["diagnostic"] = d.diagnostic;
  return o;
}

ordered_json cmd_segre(const Config& c, Loaded& l, RandomSource& rs, const Settings& s) {
  WitnessCollection wc = obtain_collection(c, l, rs, s);
  ordered_json o;
  o["degrees"] = degrees_json(wc.degrees());
  o["segre_degree"] = segre_degree(wc.degrees());
  return o;
}

ordered_json cmd_class(const Config& c) {
  std::vector<MultiIndex> degs;
  MultiIndex nvec;
  if (c.fixture == "class" || (c.degrees.empty() && c.fixture.empty())) {
    degs = class_fixture_degrees();
    nvec = {3, 3, 3};
  }
  if (!c.degrees.empty()) {
    degs.clear();
    std::stringstream ss(c.degrees);
    std::string item;
    while (std::getline(ss, item, ';')) degs.push_back(parse_int_list(item));
  }
  if (!c.nvec.empty()) nvec = parse_int_list(c.nvec);
  if (nvec.empty()) throw InputError("class needs --nvec");
  for (const auto& d : degs)
    if (d.size() != nvec.size()) throw InputError("degree vector length differs from --nvec");
  MultidegreeMap cls;
  try {
    cls = complete_intersection_class(degs, nvec);
  } catch (const AlgebraError& ex) {
    throw InputError(ex.what());
  }
  ordered_json o;
  o["class"] = degrees_json(cls);
  ordered_json slices = ordered_json::object();
  for (std::size_t i = 0; i < nvec.size(); ++i)
    slices[std::to_string(i + 1)] = degrees_json(slice_degrees(cls, static_cast<int>(i)));
  o["slices"] = slices;
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw;
  // `fixture NAME COMMAND ...` is shorthand for `COMMAND --fixture NAME ...`
  if (args.size() >= 3 && args[0] == "fixture" && args[1].rfind("-", 0) != 0 && args[2].rfind("-", 0) != 0) {
    std::vector<std::string> re = {args[2], "--fixture", args[1]};
    re.insert(re.end(), args.begin() + 3, args.end());
    args = re;
  }
  Config c;
  CLI::App app{"multiwit: witness collections for multiprojective varieties"};
  app.require_subcommand(1);
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--tol-rank", c.tol_rank, "relative rank tolerance")->capture_default_str();
  app.add_option("--tol-track", c.tol_track, "corrector tolerance")->capture_default_str();
  app.add_option("--tol-match", c.tol_match, "endpoint matching tolerance")->capture_default_str();
  app.add_option("--tol-trace", c.tol_trace, "trace test tolerance")->capture_default_str();
  app.add_option("--max-loops", c.max_loops, "monodromy loop budget")->capture_default_str();
  app.add_option("--workers", c.workers, "path-tracking threads (0 = all cores)");
  app.add_flag("--extended", c.extended, "enable extended fixtures");
  app.add_option("--output,-o", c.output, "write JSON here instead of stdout");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", c.input, "system file");
    sub->add_option("--fixture,-f", c.fixture, "built-in system");
    sub->add_option("--witness", c.witness_in, "witness archive to start from");
    sub->add_option("--dim", c.dim, "dimension of the slices");
    sub->add_option("--keys", c.keys, "candidate keys separated by ';'");
    sub->add_option("--probe", c.probe, "point fixing the dimension, JSON [[re,im],...]");
    sub->add_flag("--ungrouped", c.ungrouped, "treat all variables as one group");
    // Global options are also accepted after the command.
    sub->add_option("--seed", c.seed);
    sub->add_option("--tol-rank", c.tol_rank);
    sub->add_option("--tol-track", c.tol_track);
    sub->add_option("--tol-match", c.tol_match);
    sub->add_option("--tol-trace", c.tol_trace);
    sub->add_option("--max-loops", c.max_loops);
    sub->add_option("--workers", c.workers);
    sub->add_flag("--extended", c.extended);
    sub->add_option("--output,-o", c.output);
  };
  auto* witness = app.add_subcommand("witness", "witness collection and multidegree");
  common(witness);
  witness->add_option("--archive", c.archive_out, "also save the collection here");
  auto* dim = app.add_subcommand("dim", "local multidimension and equidimensional parts");
  common(dim);
  dim->add_option("--point", c.point, "point, JSON [[re,im],...]");
  auto* slice_cmd = app.add_subcommand("slice", "witness collection of a slice");
  common(slice_cmd);
  slice_cmd->add_option("--group", c.group, "group to slice (1-based)")->required();
  auto* refine_cmd = app.add_subcommand("refine", "split one group");
  common(refine_cmd);
  refine_cmd->add_option("--group", c.group, "group to split (1-based)")->required();
  refine_cmd->add_option("--first", c.first_vars, "variables of the first part, 1-based within the group")->required();
  refine_cmd->add_option("--target", c.target, "slice counts 'a,b' for the two parts")->required();
  refine_cmd->add_option("--key", c.key, "source key");
  auto* coarsen_cmd = app.add_subcommand("coarsen", "merge groups");
  common(coarsen_cmd);
  coarsen_cmd->add_option("--merge", c.merge, "groups to merge, 1-based, comma separated")->required();
  auto* member = app.add_subcommand("member", "membership test");
  common(member);
  member->add_option("--point", c.point, "point, JSON [[re,im],...]")->required();
  auto* trace = app.add_subcommand("trace", "trace test on the affine curve section");
  common(trace);
  trace->add_option("--part", c.part, "0-based point indices (default all)");
  trace->add_option("--route", c.route, "reduction to a curve, e.g. 'merge:2,3;slice:2;merge:1,2,3'");
  auto* decompose = app.add_subcommand("decompose", "numerical irreducible decomposition");
  common(decompose);
  decompose->add_option("--key", c.key, "use only this key's witness points");
  decompose->add_option("--route", c.route, "decompose the curve reached by this reduction");
  auto* segre = app.add_subcommand("segre", "Segre degree");
  common(segre);
  auto* cls = app.add_subcommand("class", "complete-intersection class");
  cls->add_option("--degrees", c.degrees, "degree vectors 'a,b,c;a,b,c;...'");
  cls->add_option("--nvec", c.nvec, "group sizes 'n1,n2,...'");
  cls->add_option("--fixture,-f", c.fixture, "'class' for the built-in example");
  cls->add_option("--output,-o", c.output);
  auto* fixture = app.add_subcommand("fixture", "list or print built-in systems");
  std::string fixture_name;
  fixture->add_option("name", fixture_name, "fixture to print");
  fixture->add_flag("--extended", c.extended);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    ordered_json result;
    RandomSource rs(c.seed);
    Settings s = make_settings(c);
    std::string text;
    if (fixture->parsed()) {
      if (fixture_name.empty()) {
        ordered_json names = fixture_names(c.extended);
        names.push_back("class");
        text = names.dump(2) + "\n";
      } else {
        auto names = fixture_names(true);
        if (std::find(names.begin(), names.end(), fixture_name) == names.end())
          throw InputError("unknown fixture '" + fixture_name + "'");
        text = fixture_text(fixture_name);
      }
      write_output(c, text, out);
      return kExitOk;
    }
    if (cls->parsed()) {
      result = cmd_class(c);
      result = ordered_json{{"command", "class"}, {"result", result}};
    } else {
      Loaded l = load_input(c);
      std::string name;
      if (witness->parsed()) name = "witness", result = cmd_witness(c, l, rs, s);
      if (dim->parsed()) name = "dim", result = cmd_dim(c, l, rs, s);
      if (slice_cmd->parsed()) name = "slice", result = cmd_slice(c, l, rs, s);
      if (refine_cmd->parsed()) name = "refine", result = cmd_refine(c, l, rs, s);
      if (coarsen_cmd->parsed()) name = "coarsen", result = cmd_coarsen(c, l, rs, s);
      if (member->parsed()) name = "member", result = cmd_member(c, l, rs, s);
      if (trace->parsed()) name = "trace", result = cmd_trace(c, l, rs, s);
      if (decompose->parsed()) name = "decompose", result = cmd_decompose(c, l, rs, s);
      if (segre->parsed()) name = "segre", result = cmd_segre(c, l, rs, s);
      ordered_json full;
      full["command"] = name;
      full["system"] = l.name;
      full["seed"] = c.seed;
      full["result"] = result;
      result = full;
    }
    write_output(c, result.dump(2) + "\n", out);
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ArchiveError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace multiwit

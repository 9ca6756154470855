#include "fsf/multitree.hpp"
#include "fsf/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fsf;
using nlohmann::json;

namespace {

// Shared output settings.
struct Output {
  std::string format = "table";
  std::string path;
};

void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot open output file " + out.path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

double parse_double(const std::string& s) {
  try {
    size_t used = 0;
    double v = std::stod(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
  }
}

// "7,8,9" or the integer range "7..12".
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string s = trim(text);
  if (auto dots = s.find(".."); dots != std::string::npos && s.find(',') == std::string::npos) {
    double lo = parse_double(s.substr(0, dots)), hi = parse_double(s.substr(dots + 2));
    if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo) throw Error(ErrorKind::Parse, "bad range " + s);
    for (double v = lo; v <= hi; v += 1.0) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw Error(ErrorKind::Parse, "empty list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Points from a JSON array of arrays or from text with one point per line.
Points read_points(const std::string& path) {
  std::string text = read_file(path);
  Points pts;
  if (trim(text).rfind('[', 0) == 0) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("bad JSON points: ") + e.what());
    }
    for (const auto& row : j) {
      if (!row.is_array()) throw Error(ErrorKind::Parse, "each point must be an array");
      Vec v(static_cast<long>(row.size()));
      for (size_t k = 0; k < row.size(); ++k) {
        if (!row[k].is_number()) throw Error(ErrorKind::Parse, "coordinates must be numbers");
        v(static_cast<long>(k)) = row[k].get<double>();
      }
      pts.push_back(v);
    }
  } else {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      for (char& c : line)
        if (c == ',' || c == '\t') c = ' ';
      std::stringstream ls(line);
      std::vector<double> c;
      std::string tok;
      while (ls >> tok) c.push_back(parse_double(tok));
      pts.push_back(Eigen::Map<Vec>(c.data(), static_cast<long>(c.size())));
    }
  }
  if (pts.empty()) throw Error(ErrorKind::Parse, "no points in " + path);
  for (const auto& p : pts)
    if (p.size() != pts[0].size() || p.size() == 0) throw Error(ErrorKind::Parse, "points have mixed dimensions");
  return pts;
}

std::string fmt_vec(const Vec& v, int sig = 8) {
  std::string s = "(";
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_sig(v(i), sig);
  return s + ")";
}

template <class T>
std::string fmt_list(const T& v, int sig = 8) {
  std::string s;
  bool first = true;
  for (double x : v) {
    s += (first ? "" : ", ") + fmt_sig(x, sig);
    first = false;
  }
  return s;
}

EdgeTuple make_tuple(int n, const std::string& tuple, int consecutive) {
  EdgeTuple t;
  t.N = n;
  if (!tuple.empty()) {
    t.lengths = parse_list(tuple);
  } else {
    for (int k = 0; k < EdgeTuple::edge_count(n); ++k) t.lengths.push_back(consecutive + k);
  }
  if (static_cast<int>(t.lengths.size()) != EdgeTuple::edge_count(n))
    throw Error(ErrorKind::Parse, "tuple needs N(N+1)/2 = " + std::to_string(EdgeTuple::edge_count(n)) + " lengths");
  t.validate();
  return t;
}

// Merges the fields of a JSON config file into argv; explicit flags win.
std::vector<std::string> merge_config(const CLI::App& app, std::vector<std::string> args) {
  std::string path;
  size_t at = 0;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
      break;
    }
  }
  if (path.empty()) return args;
  if (args.size() < 2) throw Error(ErrorKind::Parse, "--config needs a subcommand");
  const CLI::App* sub = nullptr;
  for (const auto* s : app.get_subcommands({}))
    if (s->get_name() == args[1]) sub = s;
  if (!sub) throw Error(ErrorKind::Parse, "--config needs a known subcommand first");

  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bad config: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    for (char& c : name)
      if (c == '_') c = '-';
    if (name == "config") throw Error(ErrorKind::Parse, "config files cannot nest");
    const CLI::Option* opt = sub->get_option_no_throw("--" + name);
    if (!opt) throw Error(ErrorKind::Parse, "unknown config field '" + key + "'");
    bool given = false;
    for (const auto& a : args)
      if (a == "--" + name || a.rfind("--" + name + "=", 0) == 0) given = true;
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back("--" + name);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (size_t k = 0; k < value.size(); ++k) {
        if (!value[k].is_number()) throw Error(ErrorKind::Parse, "config field '" + key + "' must hold numbers");
        text += (k ? "," : "") + value[k].dump();
      }
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number()) {
      text = value.dump();
    } else {
      throw Error(ErrorKind::Parse, "unsupported value for config field '" + key + "'");
    }
    extra.push_back("--" + name + "=" + text);
  }
  args.erase(args.begin() + static_cast<long>(at), args.begin() + static_cast<long>(at) + (args[at] == "--config" ? 2 : 1));
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

void add_output(CLI::App* sub, Output& out, const std::string& def = "table") {
  out.format = def;
  sub->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("-o,--output", out.path, "Write to a file instead of stdout");
  sub->add_option("--config", "JSON file with option values (unknown fields are rejected)");
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  int n = 3;
  std::string tuple;
  int consecutive = 0;
  Output out;
};

void run_check(const CheckArgs& a, bool consecutive_given) {
  EdgeTuple t = make_tuple(a.n, a.tuple, a.consecutive);
  EnumerateOptions eo;
  eo.realizable_only = false;
  auto all = enumerate_incongruent(t, eo);
  int realizable = 0;
  for (const auto& x : all)
    if (is_realizable(x)) ++realizable;
  const double lam = dekster_wilker_min_edge(t.N, 1.0);
  auto [lo, hi] = std::minmax_element(t.lengths.begin(), t.lengths.end());
  const bool dw = dekster_wilker_guaranteed(t);

  json j;
  j["schema"] = 1;
  j["N"] = t.N;
  j["tuple"] = t.lengths;
  j["incongruent"] = all.size();
  j["realizable"] = realizable;
  j["complete"] = realizable == static_cast<int>(all.size());
  j["dekster_wilker"] = {{"lambda", lam}, {"ratio", *lo / *hi}, {"guaranteed", dw}};
  std::ostringstream os;
  os << all.size() << " incongruent, " << realizable << " realizable\n";
  os << "dekster-wilker: " << (dw ? "guaranteed" : "not guaranteed") << " (min/max " << fmt_sig(*lo / *hi)
     << ", lambda " << fmt_sig(lam) << ")\n";
  if (consecutive_given) {
    int threshold = (t.N == 3) ? 7 : static_cast<int>(std::ceil(min_consecutive_start(t.N)));
    bool ok = a.consecutive >= threshold;
    j["consecutive"] = {{"start", a.consecutive}, {"threshold", threshold}, {"holds", ok}};
    if (t.N == 3) {
      double root = hertog_consecutive_root();
      j["hertog"] = {{"root", root}, {"holds", ok}};
      os << "hertog: " << (ok ? "true" : "false") << " (start " << a.consecutive << ", root " << fmt_sig(root, 8)
         << ", realizable for every start >= 7)\n";
    } else {
      os << "consecutive: " << (ok ? "true" : "false") << " (start " << a.consecutive << ", threshold " << threshold
         << ")\n";
    }
  }
  if (t.N == 3) {
    double b = blumenthal_ratio_threshold();
    j["blumenthal_ratio_threshold"] = b;
    os << "blumenthal ratio threshold: " << fmt_sig(b, 8) << "\n";
  }
  if (a.out.format == "json") emit(a.out, dump(j));
  else if (a.out.format == "csv") {
    std::ostringstream cs;
    cs << "N,incongruent,realizable,dekster_wilker\n"
       << t.N << "," << all.size() << "," << realizable << "," << (dw ? 1 : 0) << "\n";
    emit(a.out, cs.str());
  } else emit(a.out, os.str());
}

// ------------------------------------------------------------ multitree

struct MultitreeArgs {
  int n = 3;
  std::string tuple;
  int consecutive = 0;
  std::string weights;
  double bst = 1.0;
  std::string mode = "fermat";
  bool paper_order = true;
  bool permute_weights = false;
  int threads = 0;
  Output out;
};

void run_multitree(const MultitreeArgs& a) {
  EdgeTuple t = make_tuple(a.n, a.tuple, a.consecutive);
  std::vector<double> w = a.weights.empty() ? std::vector<double>{} : parse_list(a.weights);
  MultitreeOptions o;
  o.mode = a.mode == "steiner" ? TreeMode::Steiner : TreeMode::Fermat;
  o.paper_order = a.paper_order;
  o.permute_weights = a.permute_weights;
  o.threads = a.threads;
  auto rep = build_multitree(t, w, a.bst, o);
  const bool po = a.paper_order && t.N == 3;
  if (a.out.format == "csv") return emit(a.out, multitree_csv(rep, po));
  if (a.out.format == "json") {
    json cfg = {{"command", "multitree"}, {"N", t.N},        {"tuple", t.lengths},
                {"weights", rep.weights}, {"bst", a.bst},    {"mode", a.mode},
                {"paper_order", po},      {"permute_weights", a.permute_weights}};
    return emit(a.out, dump(multitree_json(rep, po, cfg)));
  }
  std::ostringstream os;
  os << multitree_table(rep, po);
  const auto& g = rep.rows[rep.global_min_index];
  const auto& m = rep.rows[rep.max_volume_index];
  os << "global minimum: row " << rep.global_min_index + 1 << ", length " << fmt_sig(g.length) << "\n";
  os << "max volume: row " << rep.max_volume_index + 1 << ", length " << fmt_sig(m.length) << ", D "
     << det_string(m) << "\n";
  emit(a.out, os.str());
}

// -------------------------------------------------------------- natural

struct NaturalArgs {
  int n = 3;
  int start = 7;
  int grid = 20;
  Output out;
};

void run_natural(const NaturalArgs& a) {
  auto r = most_natural(a.n, a.start, a.grid);
  std::vector<double> key = r.max_volume.key;
  json j;
  j["schema"] = 1;
  j["N"] = r.N;
  j["start"] = r.start;
  j["max_volume_edges"] = key;
  j["max_volume_D"] = cayley_menger_det(r.max_volume.edges);
  j["global_min_at_unit_bst"] = r.global_min_at_unit;
  j["grid"] = r.grid;
  std::vector<bool> holds(r.grid_holds.begin(), r.grid_holds.end());
  j["grid_holds"] = holds;
  j["bst_bound"] = r.bst_bound ? json::array({r.bst_bound->first, r.bst_bound->second}) : json(nullptr);
  if (a.out.format == "json") return emit(a.out, dump(j));
  std::ostringstream os;
  if (a.out.format == "csv") {
    os << "bst,max_volume_is_min\n";
    for (size_t i = 0; i < r.grid.size(); ++i) os << fmt_sig(r.grid[i]) << "," << (r.grid_holds[i] ? 1 : 0) << "\n";
    return emit(a.out, os.str());
  }
  os << "max-volume assignment (flat a12,a13,...): " << fmt_list(key, 6) << "\n";
  os << "minimal at bST = 1: " << (r.global_min_at_unit ? "yes" : "no") << "\n";
  if (r.bst_bound)
    os << "bST bound: (" << fmt_sig(r.bst_bound->first, 8) << ", " << fmt_sig(r.bst_bound->second, 8) << ")\n";
  else
    os << "bST bound: none (the max-volume tree is not minimal at any grid value)\n";
  emit(a.out, os.str());
}

// -------------------------------------------------------------- steiner

struct SteinerArgs {
  bool example = false;
  std::string points;
  std::string weights;
  double bst = 1.0;
  Output out;
};

json dihedral_json(const DihedralSolution& s) {
  return {{"delta12_rad", s.delta12}, {"delta34_rad", s.delta34}, {"alpha_rad", s.alpha}, {"phi_rad", s.phi},
          {"H", s.H},
          {"h12", s.h12},
          {"h34", s.h34},
          {"T12", to_json(s.T12)},
          {"T34", to_json(s.T34)},
          {"O12", to_json(s.O12)},
          {"O34", to_json(s.O34)},
          {"iterations", s.iterations},
          {"residual", s.residual},
          {"non_contraction", s.non_contraction},
          {"concircularity", concircularity_check(s)}};
}

void run_steiner(const SteinerArgs& a) {
  Points pts;
  std::vector<double> w;
  if (a.example) {
    Vec p1(3), p2(3), p3(3), p4(3);
    p1 << 2, 0, 0;
    p2 << 6.86, 1.37, 0;
    p3 << 0, 6, 5;
    p4 << 0, 0, 5;
    pts = {p1, p2, p3, p4};
    w = {0.85, 0.88, 0.83, 1.08};
  } else {
    if (a.points.empty()) throw Error(ErrorKind::Parse, "steiner needs --points or --example-ex1");
    pts = read_points(a.points);
  }
  if (!a.weights.empty()) w = parse_list(a.weights);
  if (w.empty()) w.assign(pts.size(), 1.0);
  if (w.size() != pts.size()) throw Error(ErrorKind::DimensionMismatch, "need one weight per point");

  json j;
  j["schema"] = 1;
  j["config"] = {{"command", "steiner"}, {"example", a.example}, {"weights", w}, {"bst", a.bst}};
  std::ostringstream os;
  if (pts.size() == 4 && pts[0].size() == 3) {
    auto r = solve_steiner_tetrahedron(pts, {w[0], w[1], w[2], w[3]}, a.bst);
    j["fermat"] = to_json(r.fermat);
    j["best"] = to_json(r.best);
    j["candidates"] = json::array();
    os << "Fermat tree length: " << fmt_sig(r.fermat.objective, 8) << "\n";
    for (const auto& c : r.candidates) {
      json cj = {{"pairing", pairing_name(c.pairing)}, {"valid", c.valid}, {"reason", c.reason}};
      os << "pairing " << pairing_name(c.pairing) << ": " << (c.valid ? "valid" : "invalid");
      if (!c.valid) os << " (" << c.reason << ")";
      os << "\n";
      if (c.solution) {
        const auto& s = *c.solution;
        auto sc = simpson_geometry(pts, {w[0], w[1], w[2], w[3]}, a.bst, c.pairing);
        cj["solution"] = dihedral_json(s);
        cj["M12"] = to_json(sc.M12);
        cj["phi_in_range"] = sc.phi_in_range;
        cj["tree"] = to_json(c.tree);
        os << "  phi " << fmt_sig(deg(s.phi), 6) << " deg, H " << fmt_sig(s.H, 8) << ", M12 " << fmt_vec(sc.M12, 6)
           << "\n";
        os << "  delta12 " << fmt_sig(deg(s.delta12), 6) << " deg, delta34 " << fmt_sig(deg(s.delta34), 6)
           << " deg, alpha " << fmt_sig(deg(s.alpha), 6) << " deg\n";
        os << "  O12 " << fmt_vec(s.O12, 6) << ", O34 " << fmt_vec(s.O34, 6) << "\n";
        os << "  concircularity " << fmt_sig(concircularity_check(s), 3) << ", fixed-point residual "
           << fmt_sig(s.residual, 3) << "\n";
        os << "  tree length " << fmt_sig(c.tree.weighted_length, 8) << "\n";
      }
      j["candidates"].push_back(cj);
    }
    os << "best: " << r.best.label << ", length " << fmt_sig(r.best.weighted_length, 8) << "\n";
  } else {
    if (pts.size() < 4) throw Error(ErrorKind::DimensionMismatch, "need at least four terminals");
    auto topo = SteinerTopology::caterpillar(static_cast<int>(pts.size()));
    auto t = solve_steiner_topology(pts, w, a.bst, topo);
    auto f = solve_fermat(pts, w);
    j["fermat"] = to_json(f);
    j["best"] = to_json(t);
    os << "Fermat tree length: " << fmt_sig(f.objective, 8) << "\n";
    os << "caterpillar tree length: " << fmt_sig(t.weighted_length, 8) << "\n";
    os << "max balance residual: "
       << fmt_sig(t.balance_residuals.empty() ? 0.0
                                               : *std::max_element(t.balance_residuals.begin(), t.balance_residuals.end()),
                  3)
       << "\n";
  }
  if (a.out.format == "json") return emit(a.out, dump(j));
  if (a.out.format == "csv") {
    std::ostringstream cs;
    cs << "pairing,valid,length\n";
    for (const auto& c : j.value("candidates", json::array()))
      cs << c["pairing"].get<std::string>() << "," << (c["valid"].get<bool>() ? 1 : 0) << ","
         << (c.contains("tree") ? fmt_sig(c["tree"]["weighted_length"].get<double>()) : "") << "\n";
    return emit(a.out, cs.str());
  }
  emit(a.out, os.str());
}

// --------------------------------------------------------------- fermat

struct FermatArgs {
  std::string points;
  std::string weights;
  Output out;
};

void run_fermat(const FermatArgs& a) {
  Points pts = read_points(a.points);
  std::vector<double> w = a.weights.empty() ? std::vector<double>(pts.size(), 1.0) : parse_list(a.weights);
  if (w.size() != pts.size()) throw Error(ErrorKind::DimensionMismatch, "need one weight per point");
  auto s = solve_fermat(pts, w);
  json j = to_json(s);
  j["schema"] = 1;
  if (s.kind == FermatKind::Absorbed) j["kind"] = "AbsorbedAt(" + std::to_string(s.absorbed_at + 1) + ")";
  if (a.out.format == "json") return emit(a.out, dump(j));
  std::ostringstream os;
  if (a.out.format == "csv") {
    os << "kind,objective,gradient_residual";
    for (int i = 0; i < s.point.size(); ++i) os << ",x" << i + 1;
    os << "\n" << j["kind"].get<std::string>() << "," << fmt_sig(s.objective, 10) << ","
       << fmt_sig(s.gradient_residual, 3);
    for (int i = 0; i < s.point.size(); ++i) os << "," << fmt_sig(s.point(i), 10);
    os << "\n";
    return emit(a.out, os.str());
  }
  os << "kind: " << j["kind"].get<std::string>() << "\n";
  os << "point: " << fmt_vec(s.point, 10) << "\n";
  os << "objective: " << fmt_sig(s.objective, 10) << "\n";
  os << "gradient residual: " << fmt_sig(s.gradient_residual, 3) << ", iterations " << s.iterations << "\n";
  emit(a.out, os.str());
}

// --------------------------------------------------------------- invert

struct InvertArgs {
  std::string points;
  std::string point;
  double C = -1.0;
  std::string method = "volume";
  Output out;
};

void run_invert(const InvertArgs& a) {
  Points pts = read_points(a.points);
  auto pv = parse_list(a.point);
  Vec p = Eigen::Map<Vec>(pv.data(), static_cast<long>(pv.size()));
  if (p.size() != pts[0].size()) throw Error(ErrorKind::DimensionMismatch, "point dimension does not match the simplex");
  double C = a.C > 0 ? a.C : static_cast<double>(pts.size());
  InverseSolution s = a.method == "sine" ? sine_ratio_weights(pts, p, C) : invert_weights(pts, p, C);
  if (a.method == "sine") {
    auto back = solve_fermat(pts, s.weights);
    s.roundtrip_distance = (back.point - p).norm();
  }
  json j = {{"schema", 1},         {"method", a.method},           {"C", s.C},
            {"weights", s.weights}, {"volume_residual", s.residual}, {"roundtrip_distance", s.roundtrip_distance}};
  if (a.out.format == "json") return emit(a.out, dump(j));
  std::ostringstream os;
  if (a.out.format == "csv") {
    os << "i,weight\n";
    for (size_t i = 0; i < s.weights.size(); ++i) os << i + 1 << "," << fmt_sig(s.weights[i], 12) << "\n";
    return emit(a.out, os.str());
  }
  os << "weights: " << fmt_list(s.weights, 10) << " (sum " << fmt_sig(s.C, 10) << ")\n";
  os << "volume-equality residual: " << fmt_sig(s.residual, 3) << "\n";
  os << "round-trip distance: " << fmt_sig(s.roundtrip_distance, 3) << "\n";
  emit(a.out, os.str());
}

// ----------------------------------------------------------- plasticity

struct PlasticityArgs {
  std::string rays;
  double c = 1.0;
  std::string driver;
  int mutation = 0;
  double storage = 0.0;
  Output out;
};

void run_plasticity(const PlasticityArgs& a) {
  Points rays = read_points(a.rays);
  const int N = static_cast<int>(rays[0].size());
  for (auto& r : rays) {
    if (r.norm() == 0.0) throw Error(ErrorKind::DegenerateInput, "zero ray");
    r.normalize();
  }
  auto m = plasticity_general(rays, N, a.c);
  json j;
  j["schema"] = 1;
  j["N"] = N;
  j["drivers"] = m.drivers();
  j["base_ratios"] = m.base_ratios;
  j["a"] = json::array();
  for (int i = 0; i < m.a.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.a.cols(); ++k) row.push_back(m.a(i, k));
    j["a"].push_back(row);
  }
  j["b"] = to_json(m.b);
  std::ostringstream os;
  os << "N " << N << ", " << m.drivers() << " driver(s), c " << fmt_sig(a.c) << "\n";
  for (int i = 0; i <= N; ++i) {
    os << "B" << i + 1 << " = " << fmt_sig(m.b(i), 10);
    for (int k = 0; k < m.drivers(); ++k) os << " + (" << fmt_sig(m.a(i, k), 10) << ") B" << N + 2 + k;
    os << "\n";
  }
  if (!a.driver.empty()) {
    auto dv = parse_list(a.driver);
    if (static_cast<int>(dv.size()) != m.drivers()) throw Error(ErrorKind::DimensionMismatch, "one value per driver");
    Vec w = m.weights(Eigen::Map<Vec>(dv.data(), static_cast<long>(dv.size())));
    j["weights"] = to_json(w);
    os << "weights: " << fmt_vec(w, 10) << "\n";
  }
  if (a.mutation > 0) {
    Vec w = mutation_weights(m, a.mutation, a.c, a.storage);
    j["mutation"] = {{"k", a.mutation}, {"storage", a.storage}, {"weights", to_json(w)}};
    os << "mutation weights (k " << a.mutation << ", storage " << fmt_sig(a.storage) << "): " << fmt_vec(w, 10) << "\n";
  }
  if (a.out.format == "json") return emit(a.out, dump(j));
  if (a.out.format == "csv") {
    std::ostringstream cs;
    cs << "i,b";
    for (int k = 0; k < m.drivers(); ++k) cs << ",a" << k + 1;
    cs << "\n";
    for (int i = 0; i <= N; ++i) {
      cs << i + 1 << "," << fmt_sig(m.b(i), 12);
      for (int k = 0; k < m.drivers(); ++k) cs << "," << fmt_sig(m.a(i, k), 12);
      cs << "\n";
    }
    return emit(a.out, cs.str());
  }
  emit(a.out, os.str());
}

// --------------------------------------------------------------- bessel

struct BesselArgs {
  double r0 = 0.0;
  double m = 3.0;
  std::uint64_t seed = 0;
  double t = 1.0;
  double dt = 1e-3;
  std::string scheme = "implicit";
  bool no_noise = false;
  std::string rays;
  double c = 1.0;
  Output out;
};

void run_bessel(const BesselArgs& a) {
  BesselOptions o;
  o.r0 = a.r0;
  o.m = a.m;
  o.seed = a.seed;
  o.t_end = a.t;
  o.dt = a.dt;
  o.scheme = a.scheme == "euler" ? BesselScheme::EulerMaruyama : BesselScheme::DriftImplicit;
  o.noise = !a.no_noise;
  auto path = bessel_path(o);
  std::optional<BesselWeights> bw;
  if (!a.rays.empty()) {
    Points rays = read_points(a.rays);
    for (auto& r : rays) r.normalize();
    auto model = plasticity_general(rays, static_cast<int>(rays[0].size()), a.c);
    bw = bessel_plasticity(model, path, a.c);
  }
  if (a.out.format == "json") {
    json j = {{"schema", 1},       {"m", path.m},           {"seed", path.seed}, {"r_floor", path.r_floor},
              {"scheme", a.scheme}, {"times", path.times}, {"values", path.values}};
    if (bw) {
      j["weights"] = json::array();
      for (const auto& w : bw->weights) j["weights"].push_back(to_json(w));
      std::vector<bool> adm(bw->admissible.begin(), bw->admissible.end());
      j["admissible"] = adm;
    }
    return emit(a.out, dump(j));
  }
  std::ostringstream os;
  const char* sep = a.out.format == "csv" ? "," : " ";
  os << "t" << sep << "r";
  if (bw)
    for (int i = 0; i < bw->weights[0].size(); ++i) os << sep << "B" << i + 1;
  os << "\n";
  for (size_t k = 0; k < path.times.size(); ++k) {
    os << fmt_sig(path.times[k], 10) << sep << fmt_sig(path.values[k], 10);
    if (bw)
      for (int i = 0; i < bw->weights[k].size(); ++i) os << sep << fmt_sig(bw->weights[k](i), 10);
    os << "\n";
  }
  emit(a.out, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Fermat-Steiner trees over incongruent simplexes"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Realizability of every incongruent assignment of a tuple");
  c->add_option("--n", check.n, "Simplex dimension N")->check(CLI::Range(2, 8));
  auto* ct = c->add_option("--tuple", check.tuple, "Edge lengths, comma separated or a..b");
  auto* cc = c->add_option("--consecutive", check.consecutive, "Use a, a+1, ..., a+m-1")->check(CLI::PositiveNumber);
  ct->excludes(cc);
  add_output(c, check.out);

  MultitreeArgs mt;
  auto* m = app.add_subcommand("multitree", "Trees over all incongruent realizable simplexes of a tuple");
  m->add_option("--n", mt.n, "Simplex dimension N")->check(CLI::Range(2, 8));
  auto* mtt = m->add_option("--tuple", mt.tuple, "Edge lengths, comma separated or a..b");
  auto* mtc = m->add_option("--consecutive", mt.consecutive, "Use a, a+1, ..., a+m-1")->check(CLI::PositiveNumber);
  mtt->excludes(mtc);
  m->add_option("--weights", mt.weights, "Vertex weights (default all 1)");
  m->add_option("--bst", mt.bst, "Steiner edge weight")->check(CLI::PositiveNumber);
  m->add_option("--mode", mt.mode, "Tree kind")->check(CLI::IsMember({"fermat", "steiner"}));
  m->add_flag("--paper-order,!--no-paper-order", mt.paper_order, "N=3: (a12,a43,a13,a23,a24,a14) rows");
  m->add_flag("--permute-weights", mt.permute_weights, "Best tree over all weight permutations");
  m->add_option("--threads", mt.threads, "Worker threads (default FSF_THREADS or all cores)");
  add_output(m, mt.out);

  NaturalArgs nat;
  auto* n = app.add_subcommand("natural", "Max-volume assignment of a consecutive tuple and its bST bound");
  n->add_option("--n", nat.n, "Simplex dimension N")->check(CLI::Range(2, 8));
  n->add_option("--start", nat.start, "First length a")->required();
  n->add_option("--grid", nat.grid, "Grid points in (0, 2)")->check(CLI::Range(1, 1000));
  add_output(n, nat.out);

  SteinerArgs st;
  auto* s = app.add_subcommand("steiner", "Weighted Fermat-Steiner tree of given terminals");
  s->add_flag("--example-ex1", st.example, "Built-in four-terminal worked configuration");
  s->add_option("--points", st.points, "Terminal file (JSON array or one point per line)");
  s->add_option("--weights", st.weights, "Terminal weights");
  s->add_option("--bst", st.bst, "Steiner edge weight")->check(CLI::PositiveNumber);
  add_output(s, st.out);

  FermatArgs fa;
  auto* f = app.add_subcommand("fermat", "Weighted Fermat point");
  f->add_option("--points", fa.points, "Point file")->required();
  f->add_option("--weights", fa.weights, "Weights");
  add_output(f, fa.out);

  InvertArgs inv;
  auto* iv = app.add_subcommand("invert", "Weights that make a given interior point the Fermat point");
  iv->add_option("--points", inv.points, "Simplex vertex file")->required();
  iv->add_option("--point", inv.point, "Interior point, comma separated")->required();
  iv->add_option("--C", inv.C, "Weight sum (default N+1)");
  iv->add_option("--method", inv.method, "Volume or sine ratios")->check(CLI::IsMember({"volume", "sine"}));
  add_output(iv, inv.out);

  PlasticityArgs pl;
  auto* p = app.add_subcommand("plasticity", "Affine weight dependence on driver rays");
  p->add_option("--rays", pl.rays, "Ray file: N+1 base rays then drivers")->required();
  p->add_option("--c", pl.c, "Weight sum")->check(CLI::PositiveNumber);
  p->add_option("--driver", pl.driver, "Driver weights, comma separated");
  p->add_option("--mutation", pl.mutation, "Mutation split index k")->check(CLI::PositiveNumber);
  p->add_option("--storage", pl.storage, "Mutation storage term");
  add_output(p, pl.out);

  BesselArgs be;
  auto* b = app.add_subcommand("bessel", "Bessel-process path (time series)");
  b->add_option("--r0", be.r0, "Initial value")->check(CLI::NonNegativeNumber);
  b->add_option("--m", be.m, "Dimension parameter")->check(CLI::Range(2.0, 1e6));
  b->add_option("--seed", be.seed, "RNG seed")->required();
  b->add_option("--t", be.t, "End time")->check(CLI::PositiveNumber);
  b->add_option("--dt", be.dt, "Time step")->check(CLI::PositiveNumber);
  b->add_option("--scheme", be.scheme, "Integrator")->check(CLI::IsMember({"implicit", "euler"}));
  b->add_flag("--no-noise", be.no_noise, "Drift only");
  b->add_option("--rays", be.rays, "Optional ray file: emit plasticity weights along the path");
  b->add_option("--c", be.c, "Weight sum for --rays")->check(CLI::PositiveNumber);
  add_output(b, be.out, "csv");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = merge_config(app, args);
    std::vector<char*> cargs;
    for (auto& x : args) cargs.push_back(x.data());
    try {
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }
    if (*c) {
      if (check.tuple.empty() && c->count("--consecutive") == 0)
        throw Error(ErrorKind::Parse, "check needs --tuple or --consecutive");
      run_check(check, c->count("--consecutive") > 0);
    } else if (*m) {
      if (mt.tuple.empty() && m->count("--consecutive") == 0)
        throw Error(ErrorKind::Parse, "multitree needs --tuple or --consecutive");
      run_multitree(mt);
    } else if (*n) {
      run_natural(nat);
    } else if (*s) {
      if (st.example && !st.points.empty()) throw Error(ErrorKind::Parse, "--example-ex1 and --points are exclusive");
      run_steiner(st);
    } else if (*f) {
      run_fermat(fa);
    } else if (*iv) {
      run_invert(inv);
    } else if (*p) {
      run_plasticity(pl);
    } else if (*b) {
      run_bessel(be);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "fsf/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fsf {

std::string fmt_sig(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.insert(s.begin(), char('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return neg ? "-" + s : s;
}

std::string det_string(const MultitreeRow& row) {
  if (row.cm_det_exact) return int128_to_string(*row.cm_det_exact);
  return fmt_sig(row.cm_det, 10);
}

std::vector<std::string> row_edge_labels(int N, bool paper_order) {
  if (paper_order && N == 3) return {"a12", "a43", "a13", "a23", "a24", "a14"};
  std::vector<std::string> out;
  for (auto [i, j] : edge_order(N)) out.push_back("a" + std::to_string(i + 1) + std::to_string(j + 1));
  return out;
}

std::vector<double> row_edges(const MultitreeRow& row, bool paper_order) {
  if (paper_order && row.assignment.N == 3) {
    auto r = paper_order_row(row.assignment);
    return {r.begin(), r.end()};
  }
  return flatten(row.assignment.edges);
}

std::string multitree_csv(const MultitreeReport& rep, bool paper_order) {
  std::ostringstream os;
  bool first = true;
  for (const auto& l : row_edge_labels(rep.tuple.N, paper_order)) {
    os << (first ? "" : ",") << l;
    first = false;
  }
  os << ",minf,R,D\n";
  for (const auto& r : rep.rows) {
    for (double e : row_edges(r, paper_order)) os << fmt_sig(e) << ",";
    os << fmt_sig(r.length) << "," << fmt_sig(r.circumradius) << "," << det_string(r) << "\n";
  }
  return os.str();
}

std::string multitree_table(const MultitreeReport& rep, bool paper_order) {
  std::ostringstream os;
  char buf[64];
  for (const auto& l : row_edge_labels(rep.tuple.N, paper_order)) {
    std::snprintf(buf, sizeof buf, "%6s", l.c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%12s%12s%16s\n", "minf", "R", "D");
  os << buf;
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    for (double e : row_edges(r, paper_order)) {
      std::snprintf(buf, sizeof buf, "%6s", fmt_sig(e).c_str());
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%12s%12s%16s", fmt_sig(r.length).c_str(), fmt_sig(r.circumradius).c_str(),
                  det_string(r).c_str());
    os << buf;
    if (static_cast<int>(i) == rep.global_min_index) os << "  global-min";
    if (static_cast<int>(i) == rep.max_volume_index) os << "  max-volume";
    os << "\n";
  }
  return os.str();
}

nlohmann::json to_json(const Vec& v) {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

nlohmann::json to_json(const FermatSolution& s) {
  nlohmann::json j;
  j["point"] = to_json(s.point);
  j["objective"] = s.objective;
  j["kind"] = s.kind == FermatKind::Floating ? "Floating" : "AbsorbedAt";
  if (s.kind == FermatKind::Absorbed) j["absorbed_at"] = s.absorbed_at + 1;
  j["iterations"] = s.iterations;
  j["gradient_residual"] = s.gradient_residual;
  return j;
}

nlohmann::json to_json(const SteinerTree& t) {
  nlohmann::json j;
  j["label"] = t.label;
  j["weighted_length"] = t.weighted_length;
  j["degenerate"] = t.degenerate;
  j["nodes"] = nlohmann::json::array();
  for (int k = t.topology.terminals; k < static_cast<int>(t.nodes.size()); ++k) j["nodes"].push_back(to_json(t.nodes[k]));
  j["balance_residuals"] = t.balance_residuals;
  j["edges"] = t.topology.edges;
  return j;
}

nlohmann::json multitree_json(const MultitreeReport& rep, bool paper_order, const nlohmann::json& config) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = config;
  j["rows"] = nlohmann::json::array();
  auto labels = row_edge_labels(rep.tuple.N, paper_order);
  for (const auto& r : rep.rows) {
    nlohmann::json row;
    auto e = row_edges(r, paper_order);
    for (size_t k = 0; k < e.size(); ++k) row["edges"][labels[k]] = e[k];
    row["length"] = r.length;
    row["volume"] = r.volume;
    row["circumradius"] = r.circumradius;
    row["D"] = det_string(r);
    row["fermat"] = to_json(r.fermat);
    if (r.steiner) row["steiner"] = to_json(*r.steiner);
    row["weight_permutation"] = r.weight_permutation;
    j["rows"].push_back(row);
  }
  nlohmann::json summary;
  summary["global_min_index"] = rep.global_min_index;
  summary["max_volume_index"] = rep.max_volume_index;
  summary["bst_bound"] = rep.bst_bound ? nlohmann::json::array({rep.bst_bound->first, rep.bst_bound->second})
                                       : nlohmann::json(nullptr);
  j["summary"] = summary;
  return j;
}

}  // namespace fsf

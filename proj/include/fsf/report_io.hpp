#pragma once

#include "fsf/multitree.hpp"

#include <json.hpp>

#include <string>

namespace fsf {

// printf %.{sig}g formatting.
std::string fmt_sig(double v, int sig = 6);
std::string int128_to_string(__int128 v);
// Exact integer when available, else %.10g.
std::string det_string(const MultitreeRow& row);

std::vector<std::string> row_edge_labels(int N, bool paper_order);
std::vector<double> row_edges(const MultitreeRow& row, bool paper_order);

std::string multitree_csv(const MultitreeReport& rep, bool paper_order);
std::string multitree_table(const MultitreeReport& rep, bool paper_order);
nlohmann::json multitree_json(const MultitreeReport& rep, bool paper_order, const nlohmann::json& config);

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const FermatSolution& s);
nlohmann::json to_json(const SteinerTree& t);

}  // namespace fsf

#pragma once

#include <iosfwd>
#include <string>

#include "permlattice/correspond.hpp"
#include "permlattice/entropy.hpp"
#include "permlattice/graphkit.hpp"
#include "permlattice/lattice.hpp"

namespace permlattice {

// Pattern text format (bit-exact):
//   d=2 A=[(dx,dy),...] U=box(n1,n2) minus (x,y),...
// followed by one line per domain row (y ascending), cells as (dx,dy) tokens,
// holes as _. A accepts the preset tokens AL, A+, Aplus, Aoplus; emission is
// always the explicit list in stored order.
std::string pattern_to_text(const Pattern& pat);
Pattern pattern_from_text(const std::string& text);

// Graph adjacency format: "v <id> <label>" then "e <id1> <id2> [mult]".
std::string graph_to_text(const UndirectedGraph& g);
UndirectedGraph graph_from_text(const std::string& text);

std::string matching_to_text(const PerfectMatching& m);
std::string cover_to_text(const PerfectCover& c);

// CSV: header row, one row per n, footer row with the quadrature target.
std::string entropy_report_to_csv(const EntropyReport& rep);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace permlattice

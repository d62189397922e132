#pragma once

// JSON reading and writing for bodies, sequences, results, cuts and orbits.
// Floats are written with 17 significant digits.

#include "orbit.hpp"

#include <json.hpp>

#include <string>

namespace ehz {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j, int indent = 2);
std::string format_double(double x);

// { "dim", "halfspaces": [{ "normal", "height" }] } in canonical order, or
// { "vertices": [[...]] } on input.
Json body_to_json(const HPolytope& k);
HPolytope body_from_json(const Json& j);

Json sequence_to_json(const CapacitySequence& s);
CapacitySequence sequence_from_json(const Json& j);

// Adds volume and systolic ratio when volume >= 0.
Json result_to_json(const CapacityResult& r, double volume = -1.0, int half_dim = 0);
Json certificate_to_json(const Certificate& c);
Json defect_to_json(const DefectReport& d);
Json combinatorial_cut_to_json(const CombinatorialCut& c);
Json pieces_to_json(const CutPieces& p);

Json faces_to_json(const std::vector<Face>& faces);

Json orbit_to_json(const ClosedOrbit& o);
Json edge_labels_to_json(const std::vector<EdgeLabel>& labels);
Json split_to_json(const SplitResult& s);
// Orbit with its verification and edge labels on k.
Json orbit_report_to_json(const HPolytope& k, const ClosedOrbit& o);
ClosedOrbit orbit_from_json(const Json& j);

Json parse_json(const std::string& text);

}  // namespace ehz

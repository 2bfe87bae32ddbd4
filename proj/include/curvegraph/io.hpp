#pragma once

#include <string>

#include <json.hpp>

#include "curvegraph/bounds.hpp"
#include "curvegraph/curvature.hpp"
#include "curvegraph/graph.hpp"
#include "curvegraph/isoperimetry.hpp"
#include "curvegraph/spectral.hpp"

namespace curvegraph {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "curvegraph/1";

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

/// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
Json number(double x);

struct LoadedGraph {
  WeightedGraph graph;
  Json annotations = Json::object();
};

Json graph_to_json(const WeightedGraph& g, const Json& annotations = Json::object());
/// Throws Error{Parse} on malformed documents; graph validation errors propagate.
LoadedGraph graph_from_json(const Json& j);

/// Throws Error{Io} when the file cannot be read, Error{Parse} on bad JSON.
Json read_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);
LoadedGraph load_graph(const std::string& path);

/// Reads a vertex function given either as a bare array or as
/// {"values": [...]} or {"values": {"label": value, ...}}.
VertexFunction function_from_json(const Json& j, const WeightedGraph& g);

Json vertex_set_to_json(const VertexSet& s);
Json entry_to_json(const Entry& e);
Json report_to_json(const BoundsReport& r);
Json subpartition_to_json(const SubpartitionResult& r);
Json certificate_to_json(const CurvatureCertificate& c, bool with_witness);

}  // namespace curvegraph

#include "curvegraph/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "curvegraph/error.hpp"

namespace curvegraph {

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::Parse, std::string("missing field \"") + key + "\"");
  return *it;
}

double as_number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::Parse, std::string(what) + " must be a number");
  return j.get<double>();
}

std::string as_id(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorCode::Parse, "vertex ids must be strings or integers");
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json graph_to_json(const WeightedGraph& g, const Json& annotations) {
  Json j;
  j["schema"] = kSchema;
  const MeasureMode& m = g.measure_mode();
  switch (m.kind()) {
    case MeasureMode::Kind::Unit: j["measure"] = "unit"; break;
    case MeasureMode::Kind::Degree: j["measure"] = "degree"; break;
    case MeasureMode::Kind::Constant:
      j["measure"] = "constant";
      j["constant"] = m.constant_value();
      break;
    case MeasureMode::Kind::Explicit: j["measure"] = "explicit"; break;
  }
  if (!g.family().empty()) j["family"] = g.family();
  Json vertices = Json::array();
  for (std::size_t x = 0; x < g.size(); ++x) {
    vertices.push_back({{"id", g.label(x)}, {"mu", g.measure(x)}});
  }
  j["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"u", g.label(e.u)}, {"v", g.label(e.v)}, {"w", e.w}});
  }
  j["edges"] = std::move(edges);
  if (!annotations.is_null() && !annotations.empty()) j["annotations"] = annotations;
  return j;
}

LoadedGraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "graph document must be an object");
  if (auto it = j.find("schema"); it != j.end() && *it != kSchema) {
    throw Error(ErrorCode::Parse, "unsupported schema " + it->dump());
  }
  const Json& vertices = field(j, "vertices");
  const Json& edges = field(j, "edges");
  if (!vertices.is_array() || !edges.is_array()) {
    throw Error(ErrorCode::Parse, "\"vertices\" and \"edges\" must be arrays");
  }

  std::vector<std::string> labels;
  std::vector<double> mu;
  std::set<std::string> seen;
  for (const Json& v : vertices) {
    labels.push_back(as_id(field(v, "id")));
    if (!seen.insert(labels.back()).second) {
      throw Error(ErrorCode::Parse, "vertex id \"" + labels.back() + "\" appears twice");
    }
    auto m = v.find("mu");
    mu.push_back(m == v.end() ? 1.0 : as_number(*m, "mu"));
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
  auto lookup = [&](const Json& id) {
    const std::string s = as_id(id);
    auto it = index.find(s);
    if (it == index.end()) throw Error(ErrorCode::InvalidVertex, "unknown vertex \"" + s + "\"");
    return it->second;
  };
  std::vector<Edge> list;
  for (const Json& e : edges) {
    auto w = e.find("w");
    list.push_back({lookup(field(e, "u")), lookup(field(e, "v")),
                    w == e.end() ? 1.0 : as_number(*w, "w")});
  }

  const std::string kind = j.value("measure", std::string("explicit"));
  MeasureMode mode = MeasureMode::unit();
  if (kind == "explicit") {
    mode = MeasureMode::explicit_values(mu);
  } else if (kind == "constant") {
    mode = MeasureMode::constant(as_number(field(j, "constant"), "constant"));
  } else if (kind == "unit" || kind == "degree") {
    mode = MeasureMode::parse(kind);
  } else {
    throw Error(ErrorCode::Parse, "unknown measure \"" + kind + "\"");
  }
  LoadedGraph out{build_graph(labels.size(), list, mode, labels), Json::object()};
  if (auto f = j.find("family"); f != j.end() && f->is_string()) {
    out.graph.set_family(f->get<std::string>());
  }
  if (auto a = j.find("annotations"); a != j.end()) out.annotations = *a;
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

LoadedGraph load_graph(const std::string& path) { return graph_from_json(read_json(path)); }

VertexFunction function_from_json(const Json& j, const WeightedGraph& g) {
  const Json& values = j.is_object() ? field(j, "values") : j;
  VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(g.size()));
  if (values.is_array()) {
    if (values.size() != g.size()) {
      throw Error(ErrorCode::Parse, "function has " + std::to_string(values.size()) +
                                        " values, graph has " + std::to_string(g.size()));
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      f[static_cast<Eigen::Index>(i)] = as_number(values[i], "function value");
    }
    return f;
  }
  if (values.is_object()) {
    if (values.size() != g.size()) {
      throw Error(ErrorCode::Parse, "function must give a value for every vertex");
    }
    for (const auto& [label, v] : values.items()) {
      auto x = g.find(label);
      if (!x) throw Error(ErrorCode::InvalidVertex, "unknown vertex \"" + label + "\"");
      f[static_cast<Eigen::Index>(*x)] = as_number(v, "function value");
    }
    return f;
  }
  throw Error(ErrorCode::Parse, "function values must be an array or an object");
}

Json vertex_set_to_json(const VertexSet& s) { return s.members(); }

Json entry_to_json(const Entry& e) {
  Json j;
  j["name"] = e.name;
  j["tag"] = e.tag;
  j["k"] = e.k;
  j["instance"] = e.instance;
  j["lhs"] = number(e.lhs);
  j["rhs"] = number(e.rhs);
  j["slack"] = number(e.slack);
  j["status"] = to_string(e.status);
  if (!e.reason.empty()) j["reason"] = e.reason;
  Json inputs = Json::object();
  for (const auto& [key, value] : e.inputs) inputs[key] = number(value);
  j["inputs"] = std::move(inputs);
  if (!e.sets.empty()) j["sets"] = e.sets;
  return j;
}

Json report_to_json(const BoundsReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["family"] = r.family;
  j["fingerprint"] = hex64(r.fingerprint);
  j["k_max"] = r.k_max;
  j["options"] = {{"seed", r.options.seed},
                  {"tol", r.options.tol},
                  {"force", r.options.force},
                  {"budget", r.options.budget}};
  if (r.options.genus_bound) j["options"]["genus_bound"] = *r.options.genus_bound;

  Json curvature;
  curvature["min_curvature"] = number(r.curvature.min_curvature);
  curvature["nonnegative"] = r.curvature.nonnegative;
  curvature["certified_lower"] =
      r.curvature.certified_lower ? Json(number(*r.curvature.certified_lower)) : Json(nullptr);
  curvature["failing_vertices"] = r.curvature.failing_vertices;
  Json per_vertex = Json::array();
  for (double k : r.curvature.per_vertex) per_vertex.push_back(number(k));
  curvature["per_vertex"] = std::move(per_vertex);
  j["curvature"] = std::move(curvature);

  Json h2;
  h2["lower"] = number(r.h2.lower);
  h2["upper"] = number(r.h2.upper);
  h2["method"] = r.h2.method;
  Json witness = Json::array();
  for (const auto& s : r.h2.witness) witness.push_back(vertex_set_to_json(s));
  h2["witness"] = std::move(witness);
  j["h2"] = std::move(h2);

  Json entries = Json::array();
  for (const Entry& e : r.entries) entries.push_back(entry_to_json(e));
  j["entries"] = std::move(entries);
  j["summary"] = {{"pass", r.count(Status::Pass)},
                  {"fail", r.count(Status::Fail)},
                  {"report_only", r.count(Status::ReportOnly)},
                  {"skipped", r.count(Status::Skipped)}};
  return j;
}

Json subpartition_to_json(const SubpartitionResult& r) {
  Json j;
  j["k"] = r.k;
  j["mode"] = r.mode == PartitionMode::Subpartition ? "subpartition" : "partition";
  j["value"] = number(r.value);
  Json witness = Json::array();
  for (const auto& s : r.witness) witness.push_back(vertex_set_to_json(s));
  j["witness"] = std::move(witness);
  return j;
}

Json certificate_to_json(const CurvatureCertificate& c, bool with_witness) {
  Json j;
  j["vertex"] = c.vertex;
  j["n"] = number(c.n.value());
  j["K"] = number(c.value);
  j["psd_at_zero"] = c.psd_at_zero;
  if (with_witness) {
    j["witness"] = std::vector<double>(c.witness.data(), c.witness.data() + c.witness.size());
  }
  return j;
}

}  // namespace curvegraph

#include "curvegraph/cli.hpp"

#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "curvegraph/bounds.hpp"
#include "curvegraph/curvature.hpp"
#include "curvegraph/error.hpp"
#include "curvegraph/generators.hpp"
#include "curvegraph/io.hpp"
#include "curvegraph/isoperimetry.hpp"
#include "curvegraph/spectral.hpp"

namespace curvegraph {

namespace {

struct Common {
  std::string format = "table";
  std::uint64_t seed = 42;
  double tol = 1e-9;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Seed for sampled functions and sets")->capture_default_str();
  sub->add_option("--tol", c.tol, "Relative tolerance")->capture_default_str();
}

std::string fmt(double x, int precision = 10) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

// Minimal column-aligned table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        os << (i ? "  " : "");
        if (i + 1 < r.size()) {
          os << std::left << std::setw(static_cast<int>(width[i])) << r[i];
        } else {
          os << r[i];
        }
      }
      os << "\n";
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::vector<long>> parse_generators(const std::string& text) {
  std::vector<std::vector<long>> gens;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<long> g;
    std::stringstream parts(group);
    std::string part;
    while (std::getline(parts, part, ',')) {
      try {
        g.push_back(std::stol(part));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "bad generator component \"" + part + "\"");
      }
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

MeasureMode parse_measure(const std::string& text) {
  if (text == "explicit") return MeasureMode::explicit_values({});
  return MeasureMode::parse(text);
}

Dimension parse_dimension(const std::string& text) {
  if (text == "inf" || text == "infinity") return Dimension::infinite();
  try {
    std::size_t used = 0;
    const double n = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return Dimension::finite(n);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::Parse, "dimension must be a number or \"inf\", got \"" + text + "\"");
  }
}

std::size_t resolve_vertex(const WeightedGraph& g, const std::string& id) {
  if (auto x = g.find(id)) return *x;
  throw Error(ErrorCode::InvalidVertex, "unknown vertex \"" + id + "\"");
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::size_t> orders;
  std::string generators;
  double a = 1, b = 1, c = 1, A = 1, B = 1, C = 1;
  std::string measure = "unit";
  std::string output;
};

FamilyTag family_from_args(const GenerateArgs& a) {
  auto need_n = [&] {
    if (a.n == 0) throw Error(ErrorCode::InvalidParameter, a.family + " needs --n");
    return a.n;
  };
  if (a.family == "cycle") return family::Cycle{need_n()};
  if (a.family == "complete") return family::Complete{need_n()};
  if (a.family == "path") return family::Path{need_n()};
  if (a.family == "dumbbell") return family::Dumbbell{need_n()};
  if (a.family == "mimura") return family::MimuraProduct{need_n()};
  if (a.family == "hypercube") {
    if (a.d == 0) throw Error(ErrorCode::InvalidParameter, "hypercube needs --d");
    return family::Hypercube{a.d};
  }
  if (a.family == "cayley") {
    return family::AbelianCayley{a.orders, parse_generators(a.generators)};
  }
  if (a.family == "triangle") return family::Triangle{a.a, a.b, a.c, a.A, a.B, a.C};
  if (a.family == "tetrahedron") return family::Tetrahedron{a.a, a.b, a.c, a.A};
  throw Error(ErrorCode::InvalidParameter, "unknown family \"" + a.family + "\"");
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const WeightedGraph g = generate({family_from_args(a), parse_measure(a.measure)});
  const std::string text = dump(graph_to_json(g));
  if (a.output.empty() || a.output == "-") {
    out << text;
  } else {
    write_text(a.output, text);
  }
  return kExitOk;
}

// --- spectrum --------------------------------------------------------------

int cmd_spectrum(const std::string& path, std::size_t k, const Common& c, std::ostream& out) {
  const LoadedGraph lg = load_graph(path);
  const WeightedGraph& g = lg.graph;
  const SpectralDecomposition dec = decompose(g);
  const std::size_t count = k == 0 ? dec.size() : std::min(k, dec.size());
  if (c.format == "json") {
    Json j;
    j["schema"] = kSchema;
    j["N"] = g.size();
    j["Dnon"] = d_non(g);
    j["Dnor"] = d_nor(g);
    Json ev = Json::array();
    for (std::size_t i = 1; i <= count; ++i) ev.push_back(dec.lambda(i));
    j["eigenvalues"] = std::move(ev);
    j["lambda_max"] = dec.lambda(dec.size());
    out << dump(j);
  } else {
    out << "N = " << g.size() << "   Dnon = " << fmt(d_non(g)) << "   Dnor = " << fmt(d_nor(g))
        << "\n";
    Table t({"k", "lambda_k"});
    for (std::size_t i = 1; i <= count; ++i) t.add({std::to_string(i), fmt(dec.lambda(i), 15)});
    t.print(out);
  }
  return kExitOk;
}

// --- curvature -------------------------------------------------------------

struct CurvatureArgs {
  std::string path;
  std::string n = "inf";
  std::optional<double> K;
  std::string vertex;
  bool witness = false;
};

int cmd_curvature(const CurvatureArgs& a, const Common& c, std::ostream& out) {
  const LoadedGraph lg = load_graph(a.path);
  const WeightedGraph& g = lg.graph;
  const Dimension n = parse_dimension(a.n);

  std::vector<CurvatureCertificate> certs;
  if (!a.vertex.empty()) {
    certs.push_back(curvature_value(g, resolve_vertex(g, a.vertex), n));
  } else {
    certs = curvature_profile(g, n);
  }
  std::optional<GraphCdCheck> check;
  std::optional<CdCheckResult> single;
  if (a.K) {
    if (a.vertex.empty()) {
      check = cd_check_graph(g, *a.K, n, c.tol);
    } else {
      single = cd_check(g, resolve_vertex(g, a.vertex), *a.K, n, c.tol);
    }
  }
  const bool failed = (check && !check->holds) || (single && !single->holds);

  if (c.format == "json") {
    Json j;
    j["schema"] = kSchema;
    j["n"] = number(n.value());
    Json vs = Json::array();
    for (const auto& cert : certs) {
      Json v = certificate_to_json(cert, a.witness);
      v["label"] = g.label(cert.vertex);
      vs.push_back(std::move(v));
    }
    j["vertices"] = std::move(vs);
    if (a.K) {
      Json cd;
      cd["K"] = *a.K;
      cd["holds"] = !failed;
      std::vector<std::size_t> failing;
      if (check) failing = check->failing_vertices();
      if (single && !single->holds) failing.push_back(single->vertex);
      cd["failing_vertices"] = failing;
      j["cd_check"] = std::move(cd);
    }
    out << dump(j);
  } else {
    out << "n = " << (n.is_infinite() ? std::string("inf") : fmt(n.value())) << "\n";
    Table t({"vertex", "label", "K(x,n)", "CD(0,n)"});
    for (const auto& cert : certs) {
      t.add({std::to_string(cert.vertex), g.label(cert.vertex), fmt(cert.value),
             cert.psd_at_zero ? "yes" : "no"});
    }
    t.print(out);
    if (a.K) {
      out << "CD(" << fmt(*a.K) << ", " << a.n << "): " << (failed ? "FAILS" : "holds");
      if (check && failed) out << " at " << join(check->failing_vertices());
      out << "\n";
    }
  }
  return failed ? kExitFail : kExitOk;
}

// --- isoperimetry ----------------------------------------------------------

int cmd_isoperimetry(const std::string& path, std::size_t k, const std::string& mode_text,
                     double budget, const Common& c, std::ostream& out) {
  const LoadedGraph lg = load_graph(path);
  const PartitionMode mode =
      mode_text == "partition" ? PartitionMode::Partition : PartitionMode::Subpartition;
  const SubpartitionResult r = multiway_constant(lg.graph, k, mode, budget);
  if (c.format == "json") {
    Json j = subpartition_to_json(r);
    j["schema"] = kSchema;
    out << dump(j);
  } else {
    out << (mode == PartitionMode::Partition ? "partition" : "subpartition") << " constant, k = "
        << k << ": " << fmt(r.value, 15) << "\n";
    Table t({"set", "members", "mu(S)", "expansion"});
    for (std::size_t i = 0; i < r.witness.size(); ++i) {
      t.add({std::to_string(i + 1), join(r.witness[i].members()), fmt(r.witness[i].measure()),
             fmt(expansion(lg.graph, r.witness[i]))});
    }
    t.print(out);
  }
  return kExitOk;
}

// --- heat ------------------------------------------------------------------

int cmd_heat(const std::string& path, double t, const std::string& fpath, const Common& c,
             std::ostream& out) {
  const LoadedGraph lg = load_graph(path);
  const WeightedGraph& g = lg.graph;
  const SpectralDecomposition dec = decompose(g);
  VertexFunction f;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (!fpath.empty()) {
    f = function_from_json(read_json(fpath), g);
  } else {
    f.resize(static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(rng);
  }
  VertexFunction h(static_cast<Eigen::Index>(g.size()));
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = u(rng);
  const VertexFunction ptf = heat_apply(dec, f, t);
  const SemigroupResiduals r = semigroup_residuals(g, dec, f, h, t / 2.0, t);
  const bool ok = r.worst() <= 1e-8 * r.scale;

  if (c.format == "json") {
    Json j;
    j["schema"] = kSchema;
    j["t"] = t;
    j["f"] = std::vector<double>(f.data(), f.data() + f.size());
    j["P_t_f"] = std::vector<double>(ptf.data(), ptf.data() + ptf.size());
    j["residuals"] = {{"self_adjoint", r.self_adjoint}, {"commutation", r.commutation},
                      {"semigroup", r.semigroup},       {"kernel_min", r.kernel_min},
                      {"mass", r.mass},                 {"conservation", r.conservation}};
    j["residuals_ok"] = ok;
    out << dump(j);
  } else {
    out << "t = " << fmt(t) << "\n";
    Table tab({"vertex", "label", "f", "P_t f"});
    for (std::size_t x = 0; x < g.size(); ++x) {
      const auto i = static_cast<Eigen::Index>(x);
      tab.add({std::to_string(x), g.label(x), fmt(f[i]), fmt(ptf[i])});
    }
    tab.print(out);
    out << "worst semigroup residual " << fmt(r.worst(), 3) << (ok ? " (ok)" : " (TOO LARGE)")
        << "\n";
  }
  return ok ? kExitOk : kExitFail;
}

// --- product ---------------------------------------------------------------

int cmd_product(const std::string& p1, const std::string& p2, const std::string& measure_text,
                const std::string& output, const Common& c, std::ostream& out) {
  const LoadedGraph a = load_graph(p1);
  const LoadedGraph b = load_graph(p2);
  const MeasureMode measure = MeasureMode::parse(measure_text);
  WeightedGraph prod = cartesian_product(a.graph, b.graph, measure);
  prod.set_family("product(" + a.graph.family() + "," + b.graph.family() + ")");

  Json annotations = Json::object();
  const MeasureMode& m1 = a.graph.measure_mode();
  const MeasureMode& m2 = b.graph.measure_mode();
  if (m1.is_constant() && m2.is_constant() && measure.is_constant()) {
    const double K1 = summarize_curvature(a.graph).min_curvature;
    const double K2 = summarize_curvature(b.graph).min_curvature;
    const double mu12 = prod.measure(0);
    const ProductCd pred = product_cd_bound(K1, Dimension::infinite(), K2, Dimension::infinite(),
                                            a.graph.measure(0), b.graph.measure(0), mu12);
    annotations["predicted_cd"] = {{"K", number(pred.K)},
                                   {"n", number(pred.n.value())},
                                   {"factor_K", {number(K1), number(K2)}}};
  } else {
    annotations["note"] =
        "factor or product measure is not constant; no curvature prediction";
  }
  const std::string text = dump(graph_to_json(prod, annotations));
  if (output.empty() || output == "-") {
    out << text;
  } else {
    write_text(output, text);
    if (c.format == "table") {
      out << "wrote " << output << " (" << prod.size() << " vertices, " << prod.edge_count()
          << " edges)\n";
    }
  }
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const std::string& path, std::size_t k_max, bool force,
               std::optional<double> genus, double budget, const Common& c, std::ostream& out) {
  const LoadedGraph lg = load_graph(path);
  ReportOptions opt;
  opt.seed = c.seed;
  opt.tol = c.tol;
  opt.force = force;
  opt.genus_bound = genus;
  opt.budget = budget;
  const BoundsReport r = full_report(lg.graph, std::min(k_max, lg.graph.size()), opt);
  if (c.format == "json") {
    out << dump(report_to_json(r));
  } else {
    const auto& cs = r.curvature;
    out << "graph " << (r.family.empty() ? std::string("(unnamed)") : r.family) << ", N = "
        << lg.graph.size() << ", k_max = " << r.k_max << "\n";
    out << "curvature: min K(x,inf) = " << fmt(cs.min_curvature) << ", CD(0,inf) "
        << (cs.nonnegative ? "certified" : "NOT certified");
    if (!cs.failing_vertices.empty()) {
      out << ", fails at";
      for (std::size_t v : cs.failing_vertices) out << " " << lg.graph.label(v);
    }
    out << "\n";
    out << "h2 in [" << fmt(r.h2.lower) << ", " << fmt(r.h2.upper) << "] via " << r.h2.method
        << "\n\n";
    Table t({"name", "k", "#", "status", "lhs", "rhs", "slack", "note"});
    for (const Entry& e : r.entries) {
      t.add({e.name, e.k ? std::to_string(e.k) : "-", std::to_string(e.instance),
             to_string(e.status), fmt(e.lhs, 8), fmt(e.rhs, 8), fmt(e.slack, 4), e.reason});
    }
    t.print(out);
    out << "\n"
        << r.count(Status::Pass) << " pass, " << r.count(Status::Fail) << " fail, "
        << r.count(Status::ReportOnly) << " report-only, " << r.count(Status::Skipped)
        << " skipped\n";
  }
  return r.has_fail() ? kExitFail : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bakry-Emery curvature and spectral bounds for weighted graphs", "curvegraph"};
  app.require_subcommand(1);
  Common common;

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a built-in graph family as JSON");
  g->add_option("family", gen.family,
                "cycle|complete|hypercube|cayley|dumbbell|triangle|tetrahedron|path|mimura")
      ->required();
  g->add_option("--n", gen.n, "Size parameter");
  g->add_option("--d", gen.d, "Hypercube dimension");
  g->add_option("--orders", gen.orders, "Cayley group orders, e.g. 3,4")->delimiter(',');
  g->add_option("--generators", gen.generators, "Cayley generators, e.g. \"1,0;-1,0;0,1;0,-1\"");
  g->add_option("--a", gen.a);
  g->add_option("--b", gen.b);
  g->add_option("--c", gen.c);
  g->add_option("--A", gen.A);
  g->add_option("--B", gen.B);
  g->add_option("--C", gen.C);
  g->add_option("--measure", gen.measure, "unit|degree|constant:<c>|explicit")
      ->capture_default_str();
  g->add_option("-o,--output", gen.output, "Output file (stdout when omitted)");
  add_common(g, common);

  std::string path, path2, output, mode = "subpartition", product_measure = "unit", fpath;
  std::size_t k = 0, k_iso = 2, k_max = 4;
  double t = 1.0, budget = kEnumerationBudget;
  bool force = false;
  std::optional<double> genus;

  auto* sp = app.add_subcommand("spectrum", "Eigenvalues of the Laplacian");
  sp->add_option("graph", path)->required();
  sp->add_option("--k", k, "Number of eigenvalues to print (all when omitted)");
  add_common(sp, common);

  CurvatureArgs curv;
  auto* cv = app.add_subcommand("curvature", "Per-vertex curvature and CD checks");
  cv->add_option("graph", curv.path)->required();
  cv->add_option("--n", curv.n, "Dimension, a positive number or inf")->capture_default_str();
  cv->add_option("--K", curv.K, "Check CD(K,n) at every vertex");
  cv->add_option("--vertex", curv.vertex, "Restrict to one vertex id");
  cv->add_flag("--witness", curv.witness, "Include witness functions in JSON output");
  add_common(cv, common);

  auto* iso = app.add_subcommand("isoperimetry", "Exact multi-way isoperimetric constants");
  iso->add_option("graph", path)->required();
  iso->add_option("--k", k_iso)->capture_default_str();
  iso->add_option("--mode", mode)
      ->check(CLI::IsMember({"subpartition", "partition"}))
      ->capture_default_str();
  iso->add_option("--budget", budget, "Enumeration budget")->capture_default_str();
  add_common(iso, common);

  auto* ht = app.add_subcommand("heat", "Apply the heat semigroup");
  ht->add_option("graph", path)->required();
  ht->add_option("--t", t)->capture_default_str();
  ht->add_option("--f", fpath, "Function file (random when omitted)");
  add_common(ht, common);

  auto* pr = app.add_subcommand("product", "Cartesian product of two graphs");
  pr->add_option("first", path)->required();
  pr->add_option("second", path2)->required();
  pr->add_option("--measure", product_measure, "Measure of the product")->capture_default_str();
  pr->add_option("-o,--output", output, "Output file (stdout when omitted)");
  add_common(pr, common);

  auto* vf = app.add_subcommand("verify", "Evaluate every inequality and report");
  vf->add_option("graph", path)->required();
  vf->add_option("--k-max", k_max)->capture_default_str();
  vf->add_flag("--force", force, "Evaluate uncertified checks as report-only");
  vf->add_option("--genus", genus, "Upper bound on the genus, for the genus ratio entry");
  vf->add_option("--budget", budget, "Enumeration budget")->capture_default_str();
  add_common(vf, common);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("curvegraph");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  std::ostringstream buf_out, buf_err;
  int code = kExitOk;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (g->parsed()) code = cmd_generate(gen, buf_out);
    else if (sp->parsed()) code = cmd_spectrum(path, k, common, buf_out);
    else if (cv->parsed()) code = cmd_curvature(curv, common, buf_out);
    else if (iso->parsed()) code = cmd_isoperimetry(path, k_iso, mode, budget, common, buf_out);
    else if (ht->parsed()) code = cmd_heat(path, t, fpath, common, buf_out);
    else if (pr->parsed()) code = cmd_product(path, path2, product_measure, output, common, buf_out);
    else if (vf->parsed()) code = cmd_verify(path, k_max, force, genus, budget, common, buf_out);
  } catch (const CLI::ParseError& e) {
    code = app.exit(e, buf_out, buf_err) == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    buf_err << "curvegraph: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const std::exception& e) {
    buf_err << "curvegraph: " << e.what() << "\n";
    code = kExitUsage;
  }
  out << buf_out.str();
  err << buf_err.str();
  out.flush();
  return code;
}

}  // namespace curvegraph

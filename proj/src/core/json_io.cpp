#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ehz {

namespace {

void write(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      // Small records of scalars stay on one line.
      if (indent > 0 && j.size() <= 4 &&
          std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
        out += "{";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
          if (!first) out += ", ";
          first = false;
          out += Json(it.key()).dump() + ": ";
          write(it.value(), indent, depth + 1, out);
        }
        out += "}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + sep;
        write(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
      out += "[";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += flat && indent > 0 ? ", " : ",";
        if (!flat) out += nl + pad;
        first = false;
        write(e, indent, depth + 1, out);
      }
      out += flat ? "]" : nl + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

Vec to_vec(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "expected a numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::Parse, "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json from_vec(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json stats_to_json(const SearchStats& s) {
  return Json{{"nodes", s.nodes},
              {"orders_evaluated", s.orders_evaluated},
              {"pruned_pair", s.pruned_pair},
              {"pruned_adjacency", s.pruned_adjacency},
              {"pruned_bound", s.pruned_bound}};
}

Json report_to_json(const FeasibilityReport& r) {
  return Json{{"feasible", r.feasible},
              {"closing_residual", r.closing_residual},
              {"normalization_residual", r.normalization_residual},
              {"min_beta", r.min_beta},
              {"message", r.message}};
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "1e308" : "-1e308";
  if (x == 0.0) return "0.0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
}

Json body_to_json(const HPolytope& body) {
  const HPolytope k = canonical_order(body);
  Json hs = Json::array();
  for (int i = 0; i < k.num_facets(); ++i) hs.push_back(Json{{"normal", from_vec(k.normal(i))}, {"height", k.height(i)}});
  return Json{{"dim", k.dim()}, {"halfspaces", hs}};
}

HPolytope body_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "body must be a JSON object");
    const int dim = j.contains("dim") ? j.at("dim").get<int>() : -1;
    auto check_dim = [&](Eigen::Index d) {
      if (dim >= 0 && d != dim) throw Error(ErrorKind::DimensionMismatch, "body rows disagree with \"dim\"");
      if (d == 0 || d % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "body dimension must be even and positive");
    };
    if (j.contains("halfspaces")) {
      const Json& hs = j.at("halfspaces");
      if (!hs.is_array() || hs.empty()) throw Error(ErrorKind::Parse, "\"halfspaces\" must be a nonempty array");
      const Eigen::Index d = static_cast<Eigen::Index>(hs[0].at("normal").size());
      check_dim(d);
      Mat n(static_cast<Eigen::Index>(hs.size()), d);
      Vec h(static_cast<Eigen::Index>(hs.size()));
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const Vec row = to_vec(hs[i].at("normal"));
        if (row.size() != d) throw Error(ErrorKind::DimensionMismatch, "halfspace normals differ in length");
        n.row(static_cast<Eigen::Index>(i)) = row.transpose();
        h(static_cast<Eigen::Index>(i)) = hs[i].at("height").get<double>();
      }
      return remove_redundant(HPolytope(n, h)).body;
    }
    if (j.contains("vertices")) {
      const Json& vs = j.at("vertices");
      if (!vs.is_array() || vs.empty()) throw Error(ErrorKind::Parse, "\"vertices\" must be a nonempty array");
      const Eigen::Index d = static_cast<Eigen::Index>(vs[0].size());
      check_dim(d);
      Mat v(static_cast<Eigen::Index>(vs.size()), d);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vec row = to_vec(vs[i]);
        if (row.size() != d) throw Error(ErrorKind::DimensionMismatch, "vertices differ in length");
        v.row(static_cast<Eigen::Index>(i)) = row.transpose();
      }
      return facets(VPolytope(v));
    }
    throw Error(ErrorKind::Parse, "body needs \"halfspaces\" or \"vertices\"");
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed body JSON: ") + e.what());
  }
}

Json sequence_to_json(const CapacitySequence& s) {
  Json e = Json::array();
  for (const SequenceEntry& x : s.entries) e.push_back(Json{{"facet", x.facet}, {"beta", x.beta}});
  return Json{{"entries", e}, {"value", s.value}};
}

CapacitySequence sequence_from_json(const Json& j) {
  try {
    CapacitySequence s;
    const Json& e = j.is_array() ? j : j.at("entries");
    for (const Json& x : e) s.entries.push_back({x.at("facet").get<int>(), x.at("beta").get<double>()});
    if (j.is_object() && j.contains("value")) s.value = j.at("value").get<double>();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed sequence JSON: ") + e.what());
  }
}

Json result_to_json(const CapacityResult& r, double volume, int half_dim) {
  Json maxs = Json::array();
  for (const CapacitySequence& s : r.maximizers) maxs.push_back(sequence_to_json(s));
  Json fams = Json::array();
  for (const MaximizerFamily& f : r.families) {
    Json samples = Json::array();
    for (const CapacitySequence& s : f.samples) samples.push_back(sequence_to_json(s));
    fams.push_back(Json{{"order", f.order},
                        {"dimension", f.dimension},
                        {"interior", sequence_to_json(f.interior)},
                        {"samples", samples}});
  }
  Json out{{"capacity", r.capacity},
           {"optimal_value", r.optimal_value},
           {"value_upper_bound", r.value_upper_bound},
           {"gap", r.gap},
           {"certified", r.certified},
           {"max_subset", r.max_subset},
           {"complete", r.complete},
           {"engine", r.engine}};
  if (volume >= 0.0) {
    out["volume"] = volume;
    out["systolic_ratio"] = systolic_ratio(r.capacity, volume, half_dim);
  }
  out["maximizers"] = maxs;
  out["families"] = fams;
  out["stats"] = stats_to_json(r.stats);
  return out;
}

Json certificate_to_json(const Certificate& c) {
  Json out{{"capacity_upper_bound", c.capacity_upper_bound},
           {"value", c.value},
           {"exact", c.exact},
           {"report", report_to_json(c.report)}};
  if (c.exact) {
    out["exact_value"] = c.exact_value;
    out["exact_upper_bound"] = c.exact_upper_bound;
  }
  return out;
}

Json defect_to_json(const DefectReport& d) {
  return Json{{"capacity", d.capacity}, {"c1", d.c1}, {"c2", d.c2}, {"sum", d.c1 + d.c2},
              {"raw_defect", d.raw_defect}, {"defect", d.defect}, {"certified", d.certified}};
}

Json combinatorial_cut_to_json(const CombinatorialCut& c) {
  return Json{{"sequence", sequence_to_json(c.sequence)},
              {"split", c.split},
              {"coefficient", c.coefficient},
              {"a1", c.a1},
              {"a2", c.a2},
              {"h1", c.h1},
              {"h2", c.h2},
              {"match_residual", c.match_residual},
              {"route", c.route}};
}

Json pieces_to_json(const CutPieces& p) {
  return Json{{"normal", from_vec(p.spec.normal)},
              {"level", p.spec.level},
              {"k1", body_to_json(p.k1)},
              {"k2", body_to_json(p.k2)}};
}

Json faces_to_json(const std::vector<Face>& faces) {
  Json out = Json::array();
  for (const Face& f : faces) {
    Json normals = Json::array();
    for (Eigen::Index c = 0; c < f.normal_cone.cols(); ++c) normals.push_back(from_vec(f.normal_cone.col(c)));
    out.push_back(Json{{"dim", f.dim},
                       {"active", f.active},
                       {"vertices", f.vertices},
                       {"tangent_class", f.has_tangent_class ? std::string(to_string(f.tangent_class)) : "none"},
                       {"normals", normals}});
  }
  return out;
}

Json edge_labels_to_json(const std::vector<EdgeLabel>& labels) {
  Json out = Json::array();
  for (const EdgeLabel& l : labels)
    out.push_back(Json{{"kind", std::string(to_string(l.kind))}, {"active", l.active}, {"face_dim", l.face_dim}});
  return out;
}

Json split_to_json(const SplitResult& s) {
  Json out{{"ok", s.ok}, {"crossings", s.crossings}};
  if (!s.ok) {
    out["reason"] = s.reason;
    return out;
  }
  out["orbit1"] = orbit_to_json(s.orbit1);
  out["orbit2"] = orbit_to_json(s.orbit2);
  out["action_sum"] = s.orbit1.action + s.orbit2.action;
  return out;
}

Json orbit_report_to_json(const HPolytope& k, const ClosedOrbit& o) {
  const OrbitCheck chk = verify_orbit(k, o);
  Json out{{"orbit", orbit_to_json(o)}, {"verified", chk.ok}};
  if (!chk.ok) out["reason"] = chk.reason;
  if (chk.ok) out["edge_labels"] = edge_labels_to_json(classify_orbit_edges(k, o));
  return out;
}

Json orbit_to_json(const ClosedOrbit& o) {
  Json verts = Json::array();
  for (int i = 0; i < o.size(); ++i) verts.push_back(from_vec(o.vertex(i)));
  Json edges = Json::array();
  for (std::size_t i = 0; i < o.normals.size(); ++i)
    edges.push_back(Json{{"facet", i < o.facets.size() ? o.facets[i] : -1},
                         {"normal", from_vec(o.normals[i])},
                         {"time", i < o.times.size() ? o.times[i] : 0.0}});
  return Json{{"vertices", verts}, {"edges", edges}, {"action", o.action}};
}

ClosedOrbit orbit_from_json(const Json& j) {
  try {
    ClosedOrbit o;
    const Json& vs = j.at("vertices");
    if (!vs.is_array() || vs.empty()) throw Error(ErrorKind::Parse, "orbit needs vertices");
    const Eigen::Index d = static_cast<Eigen::Index>(vs[0].size());
    o.vertices.resize(static_cast<Eigen::Index>(vs.size()), d);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec row = to_vec(vs[i]);
      if (row.size() != d) throw Error(ErrorKind::DimensionMismatch, "orbit vertices differ in length");
      o.vertices.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    if (j.contains("edges")) {
      const Json& es = j.at("edges");
      if (es.size() != vs.size()) throw Error(ErrorKind::Parse, "one edge per vertex required");
      for (const Json& e : es) {
        o.facets.push_back(e.value("facet", -1));
        o.normals.push_back(to_vec(e.at("normal")));
        o.times.push_back(e.at("time").get<double>());
      }
    }
    o.action = polygon_action(o.vertices);
    return o;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed orbit JSON: ") + e.what());
  }
}

}  // namespace ehz

#include "ehz/ehz.h"

#include "body_library.hpp"
#include "json_io.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct ehz_body {
  ehz::HPolytope body;
};

struct ehz_result {
  ehz::CapacityResult result;
  int half_dim = 0;
};

struct ehz_orbit {
  ehz::ClosedOrbit orbit;
};

namespace {

thread_local std::string g_last_error;

ehz_status fail(ehz_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

ehz_status from_kind(ehz::ErrorKind k) {
  switch (k) {
    case ehz::ErrorKind::InvalidArgument: return EHZ_ERR_INVALID_ARGUMENT;
    case ehz::ErrorKind::DimensionMismatch: return EHZ_ERR_DIMENSION;
    case ehz::ErrorKind::Degenerate: return EHZ_ERR_DEGENERATE;
    case ehz::ErrorKind::Unbounded: return EHZ_ERR_UNBOUNDED;
    case ehz::ErrorKind::BudgetExceeded: return EHZ_ERR_BUDGET;
    case ehz::ErrorKind::Infeasible: return EHZ_ERR_INFEASIBLE;
    case ehz::ErrorKind::Parse: return EHZ_ERR_PARSE;
    case ehz::ErrorKind::Internal: return EHZ_ERR_INTERNAL;
  }
  return EHZ_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
ehz_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const ehz::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EHZ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EHZ_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ehz_status emit(const std::string& s, char** out) {
  *out = copy_string(s);
  return EHZ_OK;
}

#define EHZ_REQUIRE(ptr) \
  do {                   \
    if (!(ptr)) return fail(EHZ_ERR_NULL, "null argument: " #ptr); \
  } while (0)

ehz::SearchConfig config_of(const ehz_search_options* o) {
  ehz::SearchConfig cfg;
  if (!o) return cfg;
  if (o->budget <= 0) throw ehz::Error(ehz::ErrorKind::InvalidArgument, "budget must be positive");
  if (!(o->target_gap >= 0.0 && o->target_gap < 1.0))
    throw ehz::Error(ehz::ErrorKind::InvalidArgument, "target gap must lie in [0, 1)");
  if (o->max_subset < 0) throw ehz::Error(ehz::ErrorKind::InvalidArgument, "max subset must be nonnegative");
  cfg.budget = o->budget;
  cfg.target_gap = o->target_gap;
  cfg.max_subset = o->max_subset;
  cfg.threads = o->threads;
  return cfg;
}

ehz::Engine engine_of(const ehz_search_options* o) {
  return o && o->engine == EHZ_ENGINE_BRUTE ? ehz::Engine::Brute : ehz::Engine::Bnb;
}

ehz::Vec vec_of(const double* p, int n) {
  ehz::Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = p[i];
  return v;
}

ehz::CapacitySequence sequence_of(const ehz::HPolytope& k, int count, const int* facets, const double* betas) {
  if (count <= 0) throw ehz::Error(ehz::ErrorKind::InvalidArgument, "sequence must be nonempty");
  ehz::CapacitySequence s;
  for (int i = 0; i < count; ++i) {
    if (facets[i] < 0 || facets[i] >= k.num_facets())
      throw ehz::Error(ehz::ErrorKind::InvalidArgument, "facet index out of range");
    s.entries.push_back({facets[i], betas[i]});
  }
  s.value = ehz::sequence_action(k, s);
  return s;
}

ehz_status new_body(ehz::HPolytope k, ehz_body** out) {
  *out = new ehz_body{std::move(k)};
  return EHZ_OK;
}

}  // namespace

extern "C" {

const char* ehz_version(void) { return "1.0.0"; }

const char* ehz_last_error(void) { return g_last_error.c_str(); }

const char* ehz_status_string(ehz_status s) {
  switch (s) {
    case EHZ_OK: return "ok";
    case EHZ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EHZ_ERR_DIMENSION: return "dimension mismatch";
    case EHZ_ERR_DEGENERATE: return "degenerate input";
    case EHZ_ERR_UNBOUNDED: return "unbounded";
    case EHZ_ERR_BUDGET: return "budget exceeded";
    case EHZ_ERR_INFEASIBLE: return "infeasible";
    case EHZ_ERR_PARSE: return "parse error";
    case EHZ_ERR_INTERNAL: return "internal error";
    case EHZ_ERR_NULL: return "null argument";
  }
  return "unknown status";
}

void ehz_string_free(char* s) { std::free(s); }

void ehz_search_options_default(ehz_search_options* o) {
  if (!o) return;
  const ehz::SearchConfig cfg;
  o->engine = EHZ_ENGINE_BNB;
  o->budget = cfg.budget;
  o->target_gap = cfg.target_gap;
  o->max_subset = cfg.max_subset;
  o->threads = cfg.threads;
}

ehz_status ehz_body_from_halfspaces(int dim, int count, const double* normals, const double* heights,
                                    ehz_body** out) {
  EHZ_REQUIRE(normals);
  EHZ_REQUIRE(heights);
  EHZ_REQUIRE(out);
  return guard([&] {
    if (dim <= 0 || dim % 2 != 0) return fail(EHZ_ERR_DIMENSION, "dimension must be even and positive");
    if (count <= dim) return fail(EHZ_ERR_UNBOUNDED, "a bounded polytope needs more than dim facets");
    ehz::Mat n(count, dim);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < dim; ++j) n(i, j) = normals[i * dim + j];
    return new_body(ehz::remove_redundant(ehz::HPolytope(n, vec_of(heights, count))).body, out);
  });
}

ehz_status ehz_body_from_vertices(int dim, int count, const double* vertices, ehz_body** out) {
  EHZ_REQUIRE(vertices);
  EHZ_REQUIRE(out);
  return guard([&] {
    if (dim <= 0 || dim % 2 != 0) return fail(EHZ_ERR_DIMENSION, "dimension must be even and positive");
    if (count <= dim) return fail(EHZ_ERR_DEGENERATE, "a full-dimensional polytope needs more than dim vertices");
    ehz::Mat v(count, dim);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < dim; ++j) v(i, j) = vertices[i * dim + j];
    return new_body(ehz::facets(ehz::VPolytope(v)), out);
  });
}

ehz_status ehz_body_from_json(const char* json, ehz_body** out) {
  EHZ_REQUIRE(json);
  EHZ_REQUIRE(out);
  return guard([&] { return new_body(ehz::body_from_json(ehz::parse_json(json)), out); });
}

ehz_status ehz_body_named(const char* name, int dim, int sides, ehz_body** out) {
  EHZ_REQUIRE(name);
  EHZ_REQUIRE(out);
  return guard([&] {
    ehz::BodyParams p;
    if (dim > 0) p.dim = dim;
    if (sides > 0) p.sides = sides;
    return new_body(ehz::make_body(name, p), out);
  });
}

ehz_status ehz_body_list_names(char** out) {
  EHZ_REQUIRE(out);
  return guard([&] {
    std::string s;
    for (const std::string& n : ehz::body_names()) s += n + "\n";
    return emit(s, out);
  });
}

ehz_status ehz_body_copy(const ehz_body* body, ehz_body** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] { return new_body(body->body, out); });
}

void ehz_body_free(ehz_body* body) { delete body; }

ehz_status ehz_body_dim(const ehz_body* body, int* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  *out = body->body.dim();
  return EHZ_OK;
}

ehz_status ehz_body_num_facets(const ehz_body* body, int* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  *out = body->body.num_facets();
  return EHZ_OK;
}

ehz_status ehz_body_facet(const ehz_body* body, int index, double* normal, double* height) {
  EHZ_REQUIRE(body);
  if (index < 0 || index >= body->body.num_facets()) return fail(EHZ_ERR_INVALID_ARGUMENT, "facet index out of range");
  if (normal)
    for (int j = 0; j < body->body.dim(); ++j) normal[j] = body->body.normals()(index, j);
  if (height) *height = body->body.height(index);
  return EHZ_OK;
}

ehz_status ehz_body_to_json(const ehz_body* body, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] { return emit(ehz::dump(ehz::body_to_json(body->body)), out); });
}

ehz_status ehz_body_scaled(const ehz_body* body, double factor, ehz_body** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] {
    if (!(factor > 0.0)) return fail(EHZ_ERR_INVALID_ARGUMENT, "scale factor must be positive");
    return new_body(ehz::scaled(body->body, factor), out);
  });
}

ehz_status ehz_body_translated(const ehz_body* body, const double* offset, ehz_body** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(offset);
  EHZ_REQUIRE(out);
  return guard([&] { return new_body(body->body.translated(vec_of(offset, body->body.dim())), out); });
}

ehz_status ehz_body_linear_image(const ehz_body* body, const double* matrix, ehz_body** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(matrix);
  EHZ_REQUIRE(out);
  return guard([&] {
    const int d = body->body.dim();
    ehz::Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = matrix[i * d + j];
    return new_body(ehz::linear_image(body->body, m), out);
  });
}

ehz_status ehz_body_lagrangian_product(const ehz_body* q, const ehz_body* p, ehz_body** out) {
  EHZ_REQUIRE(q);
  EHZ_REQUIRE(p);
  EHZ_REQUIRE(out);
  return guard([&] { return new_body(ehz::lagrangian_product(q->body, p->body), out); });
}

ehz_status ehz_volume(const ehz_body* body, double* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = ehz::volume(body->body);
    return EHZ_OK;
  });
}

ehz_status ehz_systolic_ratio(double capacity, double volume, int half_dim, double* out) {
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = ehz::systolic_ratio(capacity, volume, half_dim);
    return EHZ_OK;
  });
}

ehz_status ehz_faces_json(const ehz_body* body, int lagrangian_only, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] {
    const auto faces = lagrangian_only ? ehz::lagrangian_faces(body->body) : ehz::face_lattice(body->body);
    return emit(ehz::dump(ehz::faces_to_json(faces)), out);
  });
}

ehz_status ehz_capacity(const ehz_body* body, const ehz_search_options* options, ehz_result** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = new ehz_result{ehz::compute_capacity(body->body, engine_of(options), config_of(options)),
                          body->body.dim() / 2};
    return EHZ_OK;
  });
}

void ehz_result_free(ehz_result* result) { delete result; }

ehz_status ehz_result_capacity(const ehz_result* r, double* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = r->result.capacity;
  return EHZ_OK;
}

ehz_status ehz_result_optimal_value(const ehz_result* r, double* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = r->result.optimal_value;
  return EHZ_OK;
}

ehz_status ehz_result_gap(const ehz_result* r, double* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = r->result.gap;
  return EHZ_OK;
}

ehz_status ehz_result_certified(const ehz_result* r, int* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = r->result.certified ? 1 : 0;
  return EHZ_OK;
}

ehz_status ehz_result_complete(const ehz_result* r, int* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = r->result.complete ? 1 : 0;
  return EHZ_OK;
}

ehz_status ehz_result_num_maximizers(const ehz_result* r, int* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = static_cast<int>(r->result.maximizers.size());
  return EHZ_OK;
}

ehz_status ehz_result_num_families(const ehz_result* r, int* out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  *out = static_cast<int>(r->result.families.size());
  return EHZ_OK;
}

ehz_status ehz_result_maximizer(const ehz_result* r, int index, int* length, int* facets, double* betas) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(length);
  if (index < 0 || index >= static_cast<int>(r->result.maximizers.size()))
    return fail(EHZ_ERR_INVALID_ARGUMENT, "maximizer index out of range");
  const auto& e = r->result.maximizers[static_cast<std::size_t>(index)].entries;
  *length = static_cast<int>(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (facets) facets[i] = e[i].facet;
    if (betas) betas[i] = e[i].beta;
  }
  return EHZ_OK;
}

ehz_status ehz_result_to_json(const ehz_result* r, double volume, char** out) {
  EHZ_REQUIRE(r);
  EHZ_REQUIRE(out);
  return guard([&] { return emit(ehz::dump(ehz::result_to_json(r->result, volume, r->half_dim)), out); });
}

ehz_status ehz_sequence_action(const ehz_body* body, int count, const int* facets, const double* betas,
                               double* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(facets);
  EHZ_REQUIRE(betas);
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = sequence_of(body->body, count, facets, betas).value;
    return EHZ_OK;
  });
}

ehz_status ehz_sequence_feasible(const ehz_body* body, int count, const int* facets, const double* betas,
                                 int* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(facets);
  EHZ_REQUIRE(betas);
  EHZ_REQUIRE(out);
  return guard([&] {
    const ehz::FeasibilityReport rep = ehz::sequence_feasible(body->body, sequence_of(body->body, count, facets, betas));
    *out = rep.feasible ? 1 : 0;
    if (!rep.feasible) g_last_error = rep.message;
    return EHZ_OK;
  });
}

ehz_status ehz_certify_json(const ehz_body* body, int count, const int* facets, const double* betas,
                            int rational, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(facets);
  EHZ_REQUIRE(betas);
  EHZ_REQUIRE(out);
  return guard([&] {
    const ehz::Certificate c = ehz::certify(body->body, sequence_of(body->body, count, facets, betas), rational != 0);
    return emit(ehz::dump(ehz::certificate_to_json(c)), out);
  });
}

ehz_status ehz_cut_level(const ehz_body* body, const double* normal, double depth, double* level) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(level);
  return guard([&] {
    *level = ehz::cut_at_depth(body->body, vec_of(normal, body->body.dim()), depth).level;
    return EHZ_OK;
  });
}

ehz_status ehz_cut(const ehz_body* body, const double* normal, double level, ehz_body** upper, ehz_body** lower) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(upper);
  EHZ_REQUIRE(lower);
  return guard([&] {
    ehz::CutPieces p = ehz::cut(body->body, {vec_of(normal, body->body.dim()), level});
    *upper = new ehz_body{std::move(p.k1)};
    *lower = new ehz_body{std::move(p.k2)};
    return EHZ_OK;
  });
}

ehz_status ehz_cut_defect(const ehz_body* body, const double* normal, double level, const ehz_search_options* options,
                      ehz_defect* out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(out);
  return guard([&] {
    const ehz::DefectReport d =
        ehz::additivity_defect(body->body, {vec_of(normal, body->body.dim()), level}, config_of(options));
    *out = {d.capacity, d.c1, d.c2, d.raw_defect, d.defect, d.certified ? 1 : 0};
    return EHZ_OK;
  });
}

ehz_status ehz_sweep_csv(const ehz_body* body, const double* normal, const double* depths, int count,
                         const ehz_search_options* options, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(depths);
  EHZ_REQUIRE(out);
  return guard([&] {
    if (count <= 0) return fail(EHZ_ERR_INVALID_ARGUMENT, "sweep needs at least one level");
    const std::vector<double> ts(depths, depths + count);
    const auto rows = ehz::sweep(body->body, vec_of(normal, body->body.dim()), ts, config_of(options));
    return emit(ehz::sweep_csv(rows), out);
  });
}

ehz_status ehz_cut_json(const ehz_body* body, const double* normal, double depth, const ehz_search_options* options,
                        int all, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(out);
  return guard([&] {
    const ehz::Vec v = vec_of(normal, body->body.dim());
    const ehz::SearchConfig cfg = config_of(options);
    const ehz::CutSpec spec = ehz::cut_at_depth(body->body, v, depth);
    const ehz::CutPieces pieces = ehz::cut(body->body, spec);
    const ehz::CombinatorialCutSearch s = ehz::find_combinatorial_cut(body->body, v, depth, cfg, all != 0);
    ehz::DefectReport d = s.defect;
    if (d.capacity == 0.0) d = ehz::additivity_defect(body->body, spec, cfg, &s.whole);
    ehz::Json cuts = ehz::Json::array();
    for (const auto& c : s.cuts) cuts.push_back(ehz::combinatorial_cut_to_json(c));
    ehz::Json j{{"depth", depth}, {"pieces", ehz::pieces_to_json(pieces)}, {"defect", ehz::defect_to_json(d)},
                {"combinatorial_cuts", cuts}};
    return emit(ehz::dump(j), out);
  });
}

ehz_status ehz_orbit_from_sequence(const ehz_body* body, int count, const int* facets, const double* betas,
                                   ehz_orbit** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(facets);
  EHZ_REQUIRE(betas);
  EHZ_REQUIRE(out);
  return guard([&] {
    ehz::LiftResult r = ehz::orbit_from_sequence(body->body, sequence_of(body->body, count, facets, betas));
    if (!r.ok) return fail(EHZ_ERR_INFEASIBLE, r.reason);
    *out = new ehz_orbit{std::move(r.orbit)};
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_from_json(const char* json, ehz_orbit** out) {
  EHZ_REQUIRE(json);
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = new ehz_orbit{ehz::orbit_from_json(ehz::parse_json(json))};
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_to_json(const ehz_orbit* orbit, char** out) {
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  return guard([&] { return emit(ehz::dump(ehz::orbit_to_json(orbit->orbit)), out); });
}

void ehz_orbit_free(ehz_orbit* orbit) { delete orbit; }

ehz_status ehz_orbit_report_json(const ehz_body* body, const ehz_orbit* orbit, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  return guard([&] { return emit(ehz::dump(ehz::orbit_report_to_json(body->body, orbit->orbit)), out); });
}

ehz_status ehz_orbit_num_vertices(const ehz_orbit* orbit, int* out) {
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  *out = orbit->orbit.size();
  return EHZ_OK;
}

ehz_status ehz_orbit_vertex(const ehz_orbit* orbit, int index, double* out) {
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  if (index < 0 || index >= orbit->orbit.size()) return fail(EHZ_ERR_INVALID_ARGUMENT, "vertex index out of range");
  for (Eigen::Index j = 0; j < orbit->orbit.vertices.cols(); ++j) out[j] = orbit->orbit.vertices(index, j);
  return EHZ_OK;
}

ehz_status ehz_orbit_action(const ehz_orbit* orbit, double* out) {
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  return guard([&] {
    *out = ehz::orbit_action(orbit->orbit);
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_verify(const ehz_body* body, const ehz_orbit* orbit, int* ok) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(ok);
  return guard([&] {
    const ehz::OrbitCheck c = ehz::verify_orbit(body->body, orbit->orbit);
    *ok = c.ok ? 1 : 0;
    if (!c.ok) g_last_error = c.reason;
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_classify_json(const ehz_body* body, const ehz_orbit* orbit, char** out) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(out);
  return guard([&] {
    return emit(ehz::dump(ehz::edge_labels_to_json(ehz::classify_orbit_edges(body->body, orbit->orbit))), out);
  });
}

ehz_status ehz_orbit_split(const ehz_body* body, const ehz_orbit* orbit, const double* normal, double level,
                           ehz_orbit** upper, ehz_orbit** lower) {
  EHZ_REQUIRE(body);
  EHZ_REQUIRE(orbit);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(upper);
  EHZ_REQUIRE(lower);
  return guard([&] {
    ehz::SplitResult s = ehz::split_orbit(body->body, orbit->orbit, {vec_of(normal, body->body.dim()), level});
    if (!s.ok) return fail(EHZ_ERR_INFEASIBLE, s.reason);
    *upper = new ehz_orbit{std::move(s.orbit1)};
    *lower = new ehz_orbit{std::move(s.orbit2)};
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_glue(const ehz_orbit* upper, const ehz_orbit* lower, const double* normal, const ehz_body* body,
                          ehz_orbit** out) {
  EHZ_REQUIRE(upper);
  EHZ_REQUIRE(lower);
  EHZ_REQUIRE(normal);
  EHZ_REQUIRE(out);
  return guard([&] {
    const int d = static_cast<int>(upper->orbit.vertices.cols());
    *out = new ehz_orbit{ehz::glue_orbits(upper->orbit, lower->orbit, vec_of(normal, d), body ? &body->body : nullptr)};
    return EHZ_OK;
  });
}

ehz_status ehz_orbit_same_cycle(const ehz_orbit* a, const ehz_orbit* b, double tol, int* out) {
  EHZ_REQUIRE(a);
  EHZ_REQUIRE(b);
  EHZ_REQUIRE(out);
  *out = ehz::same_cycle(a->orbit, b->orbit, tol) ? 1 : 0;
  return EHZ_OK;
}

}  // extern "C"

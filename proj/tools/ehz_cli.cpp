// Command-line front end over the C interface.

#include "ehz/ehz.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitUserError = 1;
constexpr int kExitUncertified = 2;

struct Failure {
  ehz_status status;
  std::string message;
};

void check(ehz_status s) {
  if (s != EHZ_OK) throw Failure{s, std::string(ehz_status_string(s)) + ": " + ehz_last_error()};
}

struct BodyDeleter {
  void operator()(ehz_body* b) const { ehz_body_free(b); }
};
struct ResultDeleter {
  void operator()(ehz_result* r) const { ehz_result_free(r); }
};
struct OrbitDeleter {
  void operator()(ehz_orbit* o) const { ehz_orbit_free(o); }
};
using Body = std::unique_ptr<ehz_body, BodyDeleter>;
using Result = std::unique_ptr<ehz_result, ResultDeleter>;
using Orbit = std::unique_ptr<ehz_orbit, OrbitDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  ehz_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string num(double x) {
  if (std::isnan(x)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{EHZ_ERR_INVALID_ARGUMENT, "not a number list: " + text};
    }
  }
  return out;
}

// a:b:n -> n evenly spaced values from a to b.
std::vector<double> parse_levels(const std::string& text) {
  const std::size_t c1 = text.find(':'), c2 = text.rfind(':');
  if (c1 == std::string::npos || c1 == c2) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "levels must read a:b:n"};
  double a = 0, b = 0;
  long n = 0;
  try {
    a = std::stod(text.substr(0, c1));
    b = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    n = std::stol(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw Failure{EHZ_ERR_INVALID_ARGUMENT, "levels must read a:b:n"};
  }
  if (n < 1) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "levels need n >= 1"};
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

struct Options {
  std::string body = "";
  std::string body_file;
  int dim = 0;
  int sides = 0;
  std::string engine = "bnb";
  int max_subset = 0;
  long long budget = 0;
  double gap = -1.0;
  int threads = 0;
  std::string normal;
  std::optional<double> level;
  std::optional<double> depth;
  std::string levels;
  std::string out;
  bool rational = false;
  bool lagrangian = false;
  bool all = false;
  std::string sequence_file;
  std::string orbit_file;
  bool split = false;
};

Body load_body(const Options& o) {
  ehz_body* b = nullptr;
  if (!o.body_file.empty()) {
    check(ehz_body_from_json(read_file(o.body_file).c_str(), &b));
  } else if (!o.body.empty()) {
    check(ehz_body_named(o.body.c_str(), o.dim, o.sides, &b));
  } else {
    throw Failure{EHZ_ERR_INVALID_ARGUMENT, "a body is required (--body or --body-file)"};
  }
  return Body(b);
}

int body_dim(const Body& b) {
  int d = 0;
  check(ehz_body_dim(b.get(), &d));
  return d;
}

ehz_search_options search_options(const Options& o) {
  ehz_search_options s;
  ehz_search_options_default(&s);
  if (o.engine == "brute") s.engine = EHZ_ENGINE_BRUTE;
  else if (o.engine == "bnb") s.engine = EHZ_ENGINE_BNB;
  else throw Failure{EHZ_ERR_INVALID_ARGUMENT, "engine must be brute or bnb"};
  if (o.budget != 0) s.budget = o.budget;
  if (o.gap >= 0.0) s.target_gap = o.gap;
  s.max_subset = o.max_subset;
  s.threads = o.threads;
  return s;
}

std::vector<double> cut_normal(const Options& o, int dim) {
  if (o.normal.empty()) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "--normal is required"};
  std::vector<double> v = parse_list(o.normal);
  if (static_cast<int>(v.size()) != dim)
    throw Failure{EHZ_ERR_DIMENSION, "--normal needs " + std::to_string(dim) + " entries"};
  return v;
}

// Depth below the support value along the normal, from --t or --level.
double cut_depth(const Options& o, const Body& b, const std::vector<double>& v) {
  if (o.depth && o.level) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "give either --t or --level"};
  if (o.depth) return *o.depth;
  if (!o.level) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "--t or --level is required"};
  double top = 0.0;
  check(ehz_cut_level(b.get(), v.data(), 0.0, &top));
  return top - *o.level;
}

struct Sequence {
  std::vector<int> facets;
  std::vector<double> betas;
};

Sequence load_sequence(const std::string& path) {
  Sequence s;
  try {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    const nlohmann::json& e = j.is_array() ? j : j.at("entries");
    for (const auto& x : e) {
      s.facets.push_back(x.at("facet").get<int>());
      s.betas.push_back(x.at("beta").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Failure{EHZ_ERR_PARSE, std::string("malformed sequence file: ") + e.what()};
  }
  return s;
}

void write_output(const Options& o, const std::string& text) {
  const std::string body = text.empty() || text.back() == '\n' ? text : text + "\n";
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "cannot write " + o.out};
  f << body;
}

int certified_code(int certified) { return certified ? kExitCertified : kExitUncertified; }

Result run_capacity(const Options& o, const Body& b) {
  const ehz_search_options s = search_options(o);
  ehz_result* r = nullptr;
  check(ehz_capacity(b.get(), &s, &r));
  return Result(r);
}

int cmd_capacity(const Options& o) {
  const Body b = load_body(o);
  const Result r = run_capacity(o, b);
  double vol = 0.0;
  check(ehz_volume(b.get(), &vol));
  char* json = nullptr;
  check(ehz_result_to_json(r.get(), vol, &json));
  std::string text = take(json);
  int n = 0;
  check(ehz_result_num_maximizers(r.get(), &n));
  if (o.rational && n > 0) {
    int len = 0;
    check(ehz_result_maximizer(r.get(), 0, &len, nullptr, nullptr));
    std::vector<int> f(static_cast<std::size_t>(len));
    std::vector<double> be(static_cast<std::size_t>(len));
    check(ehz_result_maximizer(r.get(), 0, &len, f.data(), be.data()));
    char* cert = nullptr;
    check(ehz_certify_json(b.get(), len, f.data(), be.data(), 1, &cert));
    // Append the certificate as a final member of the result object.
    std::string c = take(cert);
    std::string indented;
    for (char ch : c) {
      indented += ch;
      if (ch == '\n') indented += "  ";
    }
    text.erase(text.find_last_of('}'));
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    text += ",\n  \"certificate\": " + indented + "\n}";
  }
  write_output(o, text);
  int cert = 0;
  check(ehz_result_certified(r.get(), &cert));
  return certified_code(cert);
}

int cmd_volume(const Options& o) {
  const Body b = load_body(o);
  double vol = 0.0;
  check(ehz_volume(b.get(), &vol));
  write_output(o, "{\n  \"volume\": " + num(vol) + "\n}");
  return kExitCertified;
}

int cmd_systolic(const Options& o) {
  const Body b = load_body(o);
  const Result r = run_capacity(o, b);
  double cap = 0.0, vol = 0.0, ratio = 0.0, gap = 0.0;
  int cert = 0, complete = 0;
  check(ehz_result_capacity(r.get(), &cap));
  check(ehz_result_gap(r.get(), &gap));
  check(ehz_result_certified(r.get(), &cert));
  check(ehz_result_complete(r.get(), &complete));
  check(ehz_volume(b.get(), &vol));
  check(ehz_systolic_ratio(cap, vol, body_dim(b) / 2, &ratio));
  write_output(o, "{\n  \"capacity\": " + num(cap) + ",\n  \"volume\": " + num(vol) + ",\n  \"systolic_ratio\": " +
                      num(ratio) + ",\n  \"gap\": " + num(gap) + ",\n  \"complete\": " + (complete ? "true" : "false") +
                      ",\n  \"certified\": " + (cert ? "true" : "false") + "\n}");
  return certified_code(cert);
}

int cmd_faces(const Options& o) {
  const Body b = load_body(o);
  char* json = nullptr;
  check(ehz_faces_json(b.get(), o.lagrangian ? 1 : 0, &json));
  write_output(o, take(json));
  return kExitCertified;
}

int cmd_sweep(const Options& o) {
  const Body b = load_body(o);
  const std::vector<double> v = cut_normal(o, body_dim(b));
  if (o.levels.empty()) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "--levels a:b:n is required"};
  const std::vector<double> ts = parse_levels(o.levels);
  const ehz_search_options s = search_options(o);
  char* csv = nullptr;
  check(ehz_sweep_csv(b.get(), v.data(), ts.data(), static_cast<int>(ts.size()), &s, &csv));
  write_output(o, take(csv));
  return kExitCertified;
}

int cmd_cut(const Options& o, bool all) {
  const Body b = load_body(o);
  const std::vector<double> v = cut_normal(o, body_dim(b));
  const double t = cut_depth(o, b, v);
  const ehz_search_options s = search_options(o);
  char* json = nullptr;
  check(ehz_cut_json(b.get(), v.data(), t, &s, all ? 1 : 0, &json));
  const std::string text = take(json);
  write_output(o, text);
  const auto j = nlohmann::json::parse(text);
  return certified_code(j.at("defect").at("certified").get<bool>());
}

int cmd_certify(const Options& o) {
  const Body b = load_body(o);
  if (o.sequence_file.empty()) throw Failure{EHZ_ERR_INVALID_ARGUMENT, "--sequence-file is required"};
  const Sequence seq = load_sequence(o.sequence_file);
  char* json = nullptr;
  check(ehz_certify_json(b.get(), static_cast<int>(seq.facets.size()), seq.facets.data(), seq.betas.data(),
                         o.rational ? 1 : 0, &json));
  write_output(o, take(json));
  return kExitCertified;
}

int cmd_orbit(const Options& o) {
  const Body b = load_body(o);
  Orbit orbit;
  int code = kExitCertified;
  ehz_orbit* raw = nullptr;
  if (!o.orbit_file.empty()) {
    check(ehz_orbit_from_json(read_file(o.orbit_file).c_str(), &raw));
  } else if (!o.sequence_file.empty()) {
    const Sequence seq = load_sequence(o.sequence_file);
    check(ehz_orbit_from_sequence(b.get(), static_cast<int>(seq.facets.size()), seq.facets.data(), seq.betas.data(),
                                  &raw));
  } else {
    const Result r = run_capacity(o, b);
    int n = 0, len = 0, cert = 0;
    check(ehz_result_num_maximizers(r.get(), &n));
    check(ehz_result_certified(r.get(), &cert));
    code = certified_code(cert);
    if (n == 0) throw Failure{EHZ_ERR_INFEASIBLE, "no maximizer found"};
    check(ehz_result_maximizer(r.get(), 0, &len, nullptr, nullptr));
    std::vector<int> f(static_cast<std::size_t>(len));
    std::vector<double> be(static_cast<std::size_t>(len));
    check(ehz_result_maximizer(r.get(), 0, &len, f.data(), be.data()));
    check(ehz_orbit_from_sequence(b.get(), len, f.data(), be.data(), &raw));
  }
  orbit.reset(raw);
  if (o.split) {
    const std::vector<double> v = cut_normal(o, body_dim(b));
    const double t = cut_depth(o, b, v);
    double level = 0.0;
    check(ehz_cut_level(b.get(), v.data(), t, &level));
    ehz_orbit *up = nullptr, *down = nullptr;
    const ehz_status st = ehz_orbit_split(b.get(), orbit.get(), v.data(), level, &up, &down);
    if (st == EHZ_ERR_INFEASIBLE) {
      nlohmann::json j{{"ok", false}, {"reason", ehz_last_error()}};
      write_output(o, j.dump(2));
      return kExitUncertified;
    }
    check(st);
    Orbit o1(up), o2(down);
    double a1 = 0, a2 = 0;
    check(ehz_orbit_action(o1.get(), &a1));
    check(ehz_orbit_action(o2.get(), &a2));
    auto indent = [](const std::string& s) {
      std::string r;
      for (char ch : s) {
        r += ch;
        if (ch == '\n') r += "  ";
      }
      return r;
    };
    char *j1 = nullptr, *j2 = nullptr;
    check(ehz_orbit_to_json(o1.get(), &j1));
    check(ehz_orbit_to_json(o2.get(), &j2));
    write_output(o, "{\n  \"ok\": true,\n  \"orbit1\": " + indent(take(j1)) + ",\n  \"orbit2\": " + indent(take(j2)) +
                        ",\n  \"action_sum\": " + num(a1 + a2) + "\n}");
    return code;
  }
  char* json = nullptr;
  check(ehz_orbit_report_json(b.get(), orbit.get(), &json));
  write_output(o, take(json));
  return code;
}

int cmd_bodies(const Options& o) {
  char* names = nullptr;
  check(ehz_body_list_names(&names));
  write_output(o, take(names));
  return kExitCertified;
}

void add_body(CLI::App* c, Options& o) {
  c->add_option("--body", o.body, "library body name (see `bodies`)");
  c->add_option("--body-file", o.body_file, "body JSON file");
  c->add_option("--dim", o.dim, "dimension for simplex, cube, cross-polytope");
  c->add_option("--sides", o.sides, "sides for regular-polygon");
  c->add_option("--out", o.out, "write output to this file");
}

void add_search(CLI::App* c, Options& o) {
  c->add_option("--engine", o.engine, "brute or bnb")->check(CLI::IsMember({"brute", "bnb"}));
  c->add_option("--max-subset", o.max_subset, "largest support size searched (0: all)")->check(CLI::NonNegativeNumber);
  c->add_option("--budget", o.budget, "orders (brute) or nodes (bnb)")->check(CLI::PositiveNumber);
  c->add_option("--gap", o.gap, "target relative gap")->check(CLI::Range(0.0, 0.999999999));
  c->add_option("--threads", o.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

void add_cut(CLI::App* c, Options& o) {
  c->add_option("--normal", o.normal, "cut normal x,y,z,w");
  c->add_option("--level", o.level, "cut hyperplane <x,v> = level");
  c->add_option("--t", o.depth, "cut depth below the support value h_K(v)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EHZ capacities, cuts and closed characteristics of convex polytopes"};
  app.require_subcommand(1);
  Options o;

  auto* capacity = app.add_subcommand("capacity", "capacity, maximizers and search statistics as JSON");
  add_body(capacity, o);
  add_search(capacity, o);
  capacity->add_flag("--rational", o.rational, "certify the first maximizer in exact arithmetic");

  auto* volume = app.add_subcommand("volume", "volume as JSON");
  add_body(volume, o);

  auto* systolic = app.add_subcommand("systolic", "systolic ratio as JSON");
  add_body(systolic, o);
  add_search(systolic, o);

  auto* faces = app.add_subcommand("faces", "face lattice with symplectic classes as JSON");
  add_body(faces, o);
  faces->add_flag("--lagrangian", o.lagrangian, "only Lagrangian faces");

  auto* sweep = app.add_subcommand("sweep", "additivity defect over cut depths as CSV");
  add_body(sweep, o);
  add_search(sweep, o);
  add_cut(sweep, o);
  sweep->add_option("--levels", o.levels, "depths a:b:n");

  auto* cut = app.add_subcommand("cut", "cut pieces, defect and a combinatorial cut as JSON");
  add_body(cut, o);
  add_search(cut, o);
  add_cut(cut, o);

  auto* comb = app.add_subcommand("comb-cut", "every combinatorial cut found at one cut as JSON");
  add_body(comb, o);
  add_search(comb, o);
  add_cut(comb, o);

  auto* orbit = app.add_subcommand("orbit", "closed characteristic of a maximizer as JSON");
  add_body(orbit, o);
  add_search(orbit, o);
  add_cut(orbit, o);
  orbit->add_option("--sequence-file", o.sequence_file, "lift this sequence instead of a computed maximizer");
  orbit->add_option("--orbit-file", o.orbit_file, "verify and label this orbit");
  orbit->add_flag("--split", o.split, "split the orbit along the cut");

  auto* certify = app.add_subcommand("certify", "capacity upper bound from a feasible sequence as JSON");
  add_body(certify, o);
  certify->add_option("--sequence-file", o.sequence_file, "sequence JSON")->required();
  certify->add_flag("--rational", o.rational, "exact rational check");

  auto* bodies = app.add_subcommand("bodies", "list library bodies");
  bodies->add_option("--out", o.out, "write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUserError;
  }

  try {
    if (*capacity) return cmd_capacity(o);
    if (*volume) return cmd_volume(o);
    if (*systolic) return cmd_systolic(o);
    if (*faces) return cmd_faces(o);
    if (*sweep) return cmd_sweep(o);
    if (*cut) return cmd_cut(o, false);
    if (*comb) return cmd_cut(o, true);
    if (*orbit) return cmd_orbit(o);
    if (*certify) return cmd_certify(o);
    if (*bodies) return cmd_bodies(o);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.status == EHZ_ERR_BUDGET ? kExitUncertified : kExitUserError;
  }
  return kExitUserError;
}

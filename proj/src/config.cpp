#include "mvrelax/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mvrelax/error.hpp"
#include "mvrelax/hash.hpp"

namespace mvrelax {

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be reported.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[nodiscard]] const Json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const Json* v = get(key)) out = as<T>(*v, where(key));
  }

  [[nodiscard]] std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) throw InvalidInput("unknown-config-key", fmt::format("unknown key '{}'", where(k)));
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw InvalidInput("bad-config-value", fmt::format("{}: {}", where.empty() ? "config" : where, what));
  }

  template <typename T>
  static T as(const Json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(where, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(where, "expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(where, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(where, "expected a string");
    }
    return v.get<T>();
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<double, double> read_pair(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    Section::fail(where, "expected [a, b]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::all:
      return "all";
    case Suite::mv:
      return "mv";
    case Suite::emv:
      return "emv";
    case Suite::ibp:
      return "ibp";
    case Suite::occupation:
      return "occupation";
    case Suite::certificate:
      return "certificate";
  }
  return "unknown";
}

Suite parse_suite(std::string_view name) {
  for (Suite s : {Suite::all, Suite::mv, Suite::emv, Suite::ibp, Suite::occupation, Suite::certificate})
    if (suite_name(s) == name) return s;
  throw InvalidInput("bad-suite", fmt::format("unknown suite '{}'", name));
}

GridSpec parse_grid(std::string_view text) {
  const auto sep = text.find('x');
  GridSpec g;
  const auto parse_int = [&](std::string_view s, int& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && out > 0;
  };
  if (sep == std::string_view::npos || !parse_int(text.substr(0, sep), g.nt) || !parse_int(text.substr(sep + 1), g.nx))
    throw InvalidInput("bad-grid", fmt::format("grid '{}' is not of the form NtxNx with positive sizes", text));
  if (g.nt < 2 || g.nx < 2) throw InvalidInput("bad-grid", fmt::format("grid '{}' needs Nt, Nx >= 2", text));
  return g;
}

std::string grid_text(const GridSpec& g) { return fmt::format("{}x{}", g.nt, g.nx); }

ProblemSpec default_problem_spec() {
  ProblemSpec p;
  p.T = 0.5;
  p.f = Polynomial(0.0);
  p.y0 = Polynomial::parse("x*(1-x)");
  p.ybox = {-1.5, 1.5};
  p.zbox = {8.0, 8.0};
  return p;
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.tol = solver_tol;
  o.max_iters = solver_max_iters;
  o.rho = rho;
  o.relaxation = relaxation;
  o.anderson_memory = anderson_memory;
  o.adapt_every = adapt_every;
  o.adapt_ratio = adapt_ratio;
  return o;
}

Interval RunConfig::order_range() const {
  if (expected_order) return *expected_order;
  return solve.scheme == Scheme::implicit_euler ? Interval{0.7, 1.3} : Interval{1.7, 2.3};
}

RunConfig parse_config(const Json& j) {
  RunConfig c;
  Section root(j, "");
  if (const Json* p = root.get("problem")) {
    Section s(*p, "problem");
    s.read("T", c.problem.T);
    if (const Json* v = s.get("f")) c.problem.f = Polynomial::parse(Section::as<std::string>(*v, "problem.f"));
    if (const Json* v = s.get("y0")) c.problem.y0 = Polynomial::parse(Section::as<std::string>(*v, "problem.y0"));
    if (const Json* v = s.get("ybox")) {
      const auto [lo, hi] = read_pair(*v, "problem.ybox");
      c.problem.ybox = {lo, hi};
    }
    if (const Json* v = s.get("zbox")) {
      const auto [z0, z1] = read_pair(*v, "problem.zbox");
      c.problem.zbox = {z0, z1};
    }
    if (const Json* v = s.get("lipschitz"); v && !v->is_null())
      c.problem.lipschitz = Section::as<double>(*v, "problem.lipschitz");
    s.read("r_exponent", c.problem.r_exponent);
    s.finish();
  }
  if (const Json* v = root.get("initial_data")) {
    const auto s = Section::as<std::string>(*v, "initial_data");
    if (s == "polynomial")
      c.initial_data = InitialData::polynomial;
    else if (s == "sine")
      c.initial_data = InitialData::sine;
    else
      Section::fail("initial_data", "expected 'polynomial' or 'sine'");
  }
  if (const Json* v = root.get("field")) {
    const auto s = Section::as<std::string>(*v, "field");
    if (s == "dirac")
      c.field = FieldKind::dirac;
    else if (s == "counterexample")
      c.field = FieldKind::counterexample;
    else
      Section::fail("field", "expected 'dirac' or 'counterexample'");
  }
  if (const Json* v = root.get("grid")) c.grid = parse_grid(Section::as<std::string>(*v, "grid"));
  if (const Json* v = root.get("scheme")) c.solve.scheme = parse_scheme(Section::as<std::string>(*v, "scheme"));
  if (const Json* v = root.get("newton")) {
    Section s(*v, "newton");
    s.read("tol", c.solve.newton_tol);
    s.read("max_iter", c.solve.newton_max_iter);
    s.finish();
  }
  if (const Json* v = root.get("suite")) c.suite = parse_suite(Section::as<std::string>(*v, "suite"));
  if (const Json* v = root.get("basis")) {
    Section s(*v, "basis");
    s.read("time", c.basis_time);
    s.read("space", c.basis_space);
    s.read("state_degree", c.basis_state_degree);
    if (const Json* k = s.get("time_kind")) c.time_kind = parse_test_fn_kind(Section::as<std::string>(*k, "basis.time_kind"));
    if (const Json* k = s.get("space_kind"))
      c.space_kind = parse_test_fn_kind(Section::as<std::string>(*k, "basis.space_kind"));
    s.read("occupation_degree", c.occupation_degree);
    s.finish();
  }
  if (const Json* v = root.get("tolerances")) {
    Section s(*v, "tolerances");
    s.read("residual_constant", c.residual_constant);
    s.read("occupation_constant", c.occupation_constant);
    s.read("certificate", c.certificate_tol);
    s.finish();
  }
  if (const Json* v = root.get("relax")) {
    Section s(*v, "relax");
    if (const Json* d = s.get("degrees")) {
      if (!d->is_array() || d->empty()) Section::fail("relax.degrees", "expected a nonempty array");
      c.degrees.clear();
      for (const Json& e : *d) c.degrees.push_back(Section::as<int>(e, "relax.degrees"));
    }
    if (const Json* o = s.get("objectives")) {
      if (!o->is_object() || o->empty()) Section::fail("relax.objectives", "expected a nonempty object");
      c.objectives.clear();
      for (const auto& [id, text] : o->items())
        c.objectives.emplace_back(id, Section::as<std::string>(text, "relax.objectives." + id));
    }
    s.read("fit_boxes", c.fit_boxes);
    s.read("box_inflation", c.box_inflation);
    s.read("rescale", c.assemble.rescale);
    s.read("second_order_rows", c.assemble.second_order_rows);
    if (const Json* b = s.get("basis")) {
      const auto name = Section::as<std::string>(*b, "relax.basis");
      if (name == "legendre")
        c.assemble.basis = MomentBasis::legendre;
      else if (name == "monomial")
        c.assemble.basis = MomentBasis::monomial;
      else
        Section::fail("relax.basis", "expected 'legendre' or 'monomial'");
    }
    s.read("first_moments", c.first_moments);
    s.finish();
  }
  if (const Json* v = root.get("solver")) {
    Section s(*v, "solver");
    s.read("tol", c.solver_tol);
    s.read("max_iters", c.solver_max_iters);
    if (const Json* m = s.get("max_iters_by_degree")) {
      if (!m->is_object()) Section::fail("solver.max_iters_by_degree", "expected an object");
      c.max_iters_by_degree.clear();
      for (const auto& [key, n] : m->items()) {
        int d = 0;
        const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), d);
        if (ec != std::errc() || p != key.data() + key.size())
          Section::fail("solver.max_iters_by_degree", fmt::format("key '{}' is not a degree", key));
        c.max_iters_by_degree[d] = Section::as<int>(n, "solver.max_iters_by_degree." + key);
      }
    }
    s.read("rho", c.rho);
    s.read("relaxation", c.relaxation);
    s.read("anderson_memory", c.anderson_memory);
    s.read("adapt_every", c.adapt_every);
    s.read("adapt_ratio", c.adapt_ratio);
    s.finish();
  }
  if (const Json* v = root.get("convergence")) {
    Section s(*v, "convergence");
    if (const Json* g = s.get("grids")) {
      if (!g->is_array() || g->size() < 2) Section::fail("convergence.grids", "expected at least two grids");
      c.convergence_grids.clear();
      for (const Json& e : *g) c.convergence_grids.push_back(parse_grid(Section::as<std::string>(e, "convergence.grids")));
    }
    if (const Json* e = s.get("expected_order"); e && !e->is_null()) {
      const auto [lo, hi] = read_pair(*e, "convergence.expected_order");
      c.expected_order = Interval{lo, hi};
    }
    s.finish();
  }
  root.read("output", c.output);
  root.finish();

  if (c.degrees.empty()) Section::fail("relax.degrees", "expected at least one degree");
  for (int d : c.degrees)
    if (d < 1 || d > 5) Section::fail("relax.degrees", fmt::format("degree {} outside 1..5", d));
  if (c.basis_time < 1 || c.basis_space < 1 || c.basis_state_degree < 0 || c.occupation_degree < 0)
    Section::fail("basis", "sizes must be positive");
  if (!(c.box_inflation >= 0.0)) Section::fail("relax.box_inflation", "must be nonnegative");
  if (c.output.empty()) Section::fail("output", "must not be empty");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config-parse", fmt::format("cannot open config '{}'", path));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput("config-parse", fmt::format("{}: {}", path, e.what()));
  }
  return parse_config(j);
}

Json to_json(const RunConfig& c) {
  Json objectives = Json::object();
  for (const auto& [id, text] : c.objectives) objectives[id] = text;
  Json by_degree = Json::object();
  for (const auto& [d, n] : c.max_iters_by_degree) by_degree[std::to_string(d)] = n;
  Json grids = Json::array();
  for (const GridSpec& g : c.convergence_grids) grids.push_back(grid_text(g));
  Json problem = {{"T", c.problem.T},
                  {"f", c.problem.f.to_string()},
                  {"y0", c.problem.y0.to_string()},
                  {"ybox", {c.problem.ybox.lo, c.problem.ybox.hi}},
                  {"zbox", {c.problem.zbox.z0_max, c.problem.zbox.z1_max}},
                  {"lipschitz", nullptr},
                  {"r_exponent", c.problem.r_exponent}};
  if (c.problem.lipschitz) problem["lipschitz"] = *c.problem.lipschitz;
  Json order = nullptr;
  if (c.expected_order) order = {c.expected_order->lo, c.expected_order->hi};
  return {{"problem", problem},
          {"initial_data", c.initial_data == InitialData::sine ? "sine" : "polynomial"},
          {"field", c.field == FieldKind::counterexample ? "counterexample" : "dirac"},
          {"grid", grid_text(c.grid)},
          {"scheme", scheme_name(c.solve.scheme)},
          {"newton", {{"tol", c.solve.newton_tol}, {"max_iter", c.solve.newton_max_iter}}},
          {"suite", suite_name(c.suite)},
          {"basis",
           {{"time", c.basis_time},
            {"space", c.basis_space},
            {"state_degree", c.basis_state_degree},
            {"time_kind", test_fn_kind_name(c.time_kind)},
            {"space_kind", test_fn_kind_name(c.space_kind)},
            {"occupation_degree", c.occupation_degree}}},
          {"tolerances",
           {{"residual_constant", c.residual_constant},
            {"occupation_constant", c.occupation_constant},
            {"certificate", c.certificate_tol}}},
          {"relax",
           {{"degrees", c.degrees},
            {"objectives", objectives},
            {"fit_boxes", c.fit_boxes},
            {"box_inflation", c.box_inflation},
            {"rescale", c.assemble.rescale},
            {"second_order_rows", c.assemble.second_order_rows},
            {"basis", c.assemble.basis == MomentBasis::legendre ? "legendre" : "monomial"},
            {"first_moments", c.first_moments}}},
          {"solver",
           {{"tol", c.solver_tol},
            {"max_iters", c.solver_max_iters},
            {"max_iters_by_degree", by_degree},
            {"rho", c.rho},
            {"relaxation", c.relaxation},
            {"anderson_memory", c.anderson_memory},
            {"adapt_every", c.adapt_every},
            {"adapt_ratio", c.adapt_ratio}}},
          {"convergence", {{"grids", grids}, {"expected_order", order}}},
          {"output", c.output}};
}

std::string config_hash(const RunConfig& c) {
  Json j = to_json(c);
  j.erase("output");
  return hex_digest(fnv1a64(j.dump()));
}

}  // namespace mvrelax

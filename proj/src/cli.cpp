#include "ccc/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccc/cone.hpp"
#include "ccc/errors.hpp"
#include "ccc/models.hpp"
#include "ccc/parse.hpp"
#include "ccc/xi.hpp"

namespace ccc::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string variety;
  std::string coframe;
  std::string problem;
  std::string backend = "modp";
  std::vector<std::uint64_t> primes;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";
  // verify-identities
  int cases = 25;
  int n = 3;
  int degree = 2;
  // certify
  int validation_samples = 100;
  bool force_quadrature = false;
  // model
  std::string kind;
  std::string scale = "1/(1-x1)";
  std::string matrix;
  std::string out_dir;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string value;
  std::string detail;
};

struct RunReport {
  std::string command;
  Json config = Json::object();
  std::vector<Check> checks;
  Json result = Json::object();
  double seconds = 0.0;

  void add(std::string name, bool passed, std::string value, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(value), std::move(detail)});
  }
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  if (!j.is_string()) throw ConfigError("rational numbers must be strings or integers");
  MultiPoly p = parse_poly(j.get<std::string>(), {});
  return p.constant_term();
}

std::vector<std::string> names_from_json(const Json& j, int n) {
  if (!j.contains("variables")) return default_names(n);
  auto names = j.at("variables").get<std::vector<std::string>>();
  if (static_cast<int>(names.size()) != n) throw ConfigError("variables list does not match n");
  return names;
}

Chart chart_from_json(const Json& j, int n) {
  auto names = names_from_json(j, n);
  std::vector<Rational> base(n, Rational(0));
  if (j.contains("base_point")) {
    const auto& b = j.at("base_point");
    if (!b.is_array() || static_cast<int>(b.size()) != n) throw ConfigError("base_point needs n entries");
    for (int i = 0; i < n; ++i) base[i] = rational_from_json(b[i]);
  }
  return Chart(std::move(names), std::move(base));
}

std::vector<std::vector<std::string>> matrix_from_json(const Json& a) {
  if (!a.is_array()) throw ConfigError("A must be an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : a) {
    if (!row.is_array()) throw ConfigError("A must be an array of rows");
    std::vector<std::string> r;
    for (const auto& e : row) r.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    rows.push_back(std::move(r));
  }
  return rows;
}

// "a,b,c;d,e,f;g,h,i"
std::vector<std::vector<std::string>> matrix_from_flag(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<std::string> r;
    std::stringstream es(row);
    std::string e;
    while (std::getline(es, e, ',')) r.push_back(e);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_point(std::span<const Rational> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + to_string(p[i]);
  return s + ")";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void emit(const RunReport& r, const Options& opts, std::ostream& out) {
  std::string text;
  if (opts.format == "csv") {
    text = "check,passed,value,detail\n";
    for (const auto& c : r.checks) {
      text += csv_field(c.name) + "," + (c.passed ? "true" : "false") + "," + csv_field(c.value) + "," +
              csv_field(c.detail) + "\n";
    }
  } else {
    Json j;
    j["command"] = r.command;
    j["version"] = kVersion;
    j["config"] = r.config;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
    }
    j["checks"] = checks;
    j["passed"] = r.all_passed();
    j["result"] = r.result;
    j["timings"] = {{"seconds", r.seconds}};
    text = j.dump(2) + "\n";
  }
  if (opts.out.empty()) {
    out << text;
  } else {
    std::ofstream f(opts.out);
    if (!f) throw ConfigError("cannot write " + opts.out);
    f << text;
  }
}

Json config_echo(const Options& o, const std::string& command) {
  Json c;
  c["command"] = command;
  if (!o.variety.empty()) c["variety"] = o.variety;
  if (!o.coframe.empty()) c["coframe"] = o.coframe;
  if (!o.problem.empty()) c["problem"] = o.problem;
  c["backend"] = o.backend;
  c["primes"] = o.primes;
  c["samples"] = o.samples;
  c["seed"] = o.seed;
  c["tol"] = o.tol;
  return c;
}

XiConfig xi_config(const Options& o) {
  XiConfig cfg;
  cfg.backend = parse_eval_mode(o.backend);
  cfg.primes = o.primes;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  return cfg;
}

struct Problem {
  Hypersurface z;
  std::optional<Coframe> omega;
};

Problem load_problem(const Options& o, bool need_coframe) {
  std::string variety = o.variety, coframe = o.coframe;
  if (!o.problem.empty()) {
    Json p = read_json(o.problem);
    fs::path dir = fs::path(o.problem).parent_path();
    auto resolve = [&dir](const std::string& f) { return fs::path(f).is_absolute() ? f : (dir / f).string(); };
    if (variety.empty() && p.contains("variety")) variety = resolve(p.at("variety").get<std::string>());
    if (coframe.empty() && p.contains("coframe")) coframe = resolve(p.at("coframe").get<std::string>());
  }
  if (variety.empty()) throw ConfigError("a variety file is required (--variety or --problem)");
  Problem pr{variety_from_json(read_json(variety)), std::nullopt};
  if (need_coframe) {
    if (coframe.empty()) throw ConfigError("a coframe file is required (--coframe or --problem)");
    pr.omega = coframe_from_json(read_json(coframe));
  }
  return pr;
}

// ---------------------------------------------------------------- commands

int cmd_xi(const Options& o, RunReport& r) {
  Problem p = load_problem(o, false);
  const Hypersurface& z = p.z;
  XiConfig cfg = xi_config(o);
  int code = kPass;

  SmoothResult sm = smooth_check(z);
  std::string detail = sm.method + (sm.detail.empty() ? "" : ": " + sm.detail);
  if (sm.status == SmoothStatus::Singular) {
    detail += "; witness " + format_point(sm.witness);
    code = kRejected;
  }
  r.add("smooth", sm.status == SmoothStatus::Smooth, to_string(sm.status), detail);

  RankResult span = span_check(z, cfg);
  r.add("linear_span", span.ok, std::to_string(span.rank) + "/" + std::to_string(span.expected));
  RankResult tl = tangent_lines_nondegenerate(z, cfg);
  r.add("tangent_lines", tl.ok, std::to_string(tl.rank) + "/" + std::to_string(tl.expected));

  XiZResult res = xi_Z(z, cfg);
  r.add("xi_Z_stable", res.stable, std::to_string(res.dim));
  r.add("xi_V_contained", res.contains_xi_V, res.contains_xi_V ? "yes" : "no");
  int float_dim = res.float_dim;
  if (cfg.backend != EvalMode::Float) {
    XiConfig fc = cfg;
    fc.backend = EvalMode::Float;
    float_dim = xi_Z(z, fc).float_dim;
    r.add("float_agreement", float_dim == res.dim, std::to_string(float_dim));
  }
  r.result = {{"dim_xi_Z", res.dim},
              {"dim_xi_V", res.dim_xi_V},
              {"xi_Z_equals_xi_V", res.dim == res.dim_xi_V && res.contains_xi_V},
              {"primes", res.primes},
              {"prime_dims", res.prime_dims},
              {"float_dim", float_dim},
              {"samples", res.samples},
              {"stable", res.stable},
              {"smooth", to_string(sm.status)},
              {"span_rank", span.rank},
              {"tangent_line_rank", tl.rank},
              {"notes", res.notes}};
  if (code == kPass && !r.all_passed()) code = kFailure;
  return code;
}

int cmd_certify(const Options& o, RunReport& r) {
  Problem p = load_problem(o, true);
  XiConfig cfg = xi_config(o);
  ConeStructure cs = adapted_cone(*p.omega, p.z);
  XiZResult xz = xi_Z(p.z, cfg);
  CertifyConfig cc;
  cc.seed = o.seed;
  cc.membership_tol = o.tol;
  cc.validation_samples = o.validation_samples;
  cc.force_quadrature = o.force_quadrature;
  FlattenCertificate cert = certify(cs, xz, cc);
  r.result = certificate_to_json(cert, *p.omega);
  if (cert.characteristic) {
    r.add("characteristic_check", cert.characteristic->passed, std::to_string(cert.characteristic->max_residual),
          cert.characteristic->detail);
  }
  if (cert.verdict) r.add("conformal_closedness", cert.verdict->kind != Closedness::NotConformallyClosed,
                          to_string(cert.verdict->kind), cert.verdict->detail);
  if (cert.closure) {
    r.add("closure", cert.closure->passed, std::to_string(cert.closure->max_residual),
          cert.closure->exact ? "exact" : "sampled");
  }
  if (cert.product) {
    r.add("cone_product", cert.product->max_deviation < cc.validation_tol,
          std::to_string(cert.product->max_deviation), std::to_string(cert.product->samples) + " samples");
  }
  switch (cert.status) {
    case CertStatus::Flat:
    case CertStatus::ConformallyFlat:
      return kPass;
    case CertStatus::Rejected:
      return kRejected;
    case CertStatus::Error:
      break;
  }
  r.add(cert.stage, false, "error", cert.error);
  return cert.internal_error ? kInternalError : kFailure;
}

int cmd_verify(const Options& o, RunReport& r) {
  if (o.n < 3) throw DimensionError("verify-identities needs n >= 3");
  const std::vector<std::string> names = {"d_d_zero", "sigma_reconstruction", "sigma_Omega_pullback", "dual_relations",
                                          "geodesic_flow", "geodesic_tangency", "double_bracket"};
  std::vector<int> passed(names.size(), 0);
  Json failures = Json::array();
  const Hypersurface z = fermat_hypersurface(o.n, 4);
  for (int c = 0; c < o.cases; ++c) {
    const std::uint64_t case_seed = splitmix64(o.seed + static_cast<std::uint64_t>(c));
    Coframe omega = random_polynomial_coframe(o.n, o.degree, case_seed);
    SampleConfig sc;
    sc.seed = case_seed;
    sc.count = o.samples > 0 ? o.samples : 3;
    std::vector<bool> ok(names.size(), false);
    VValuedForm2 w = exterior_derivative(omega);
    ok[0] = true;
    for (const auto& x : exterior_derivative(w)) ok[0] = ok[0] && x.is_zero();
    VValuedForm2 rebuilt = reconstruct_exterior_derivative(structure_function(omega), omega);
    ok[1] = rebuilt.coords() == w.coords();
    ok[2] = verify_induced_structure(omega, sc).passed();
    ok[3] = verify_dual_relations(omega, sc).passed();
    ok[4] = verify_geodesic_flow(omega, sc).passed();
    ConeStructure cs = adapted_cone(omega, z);
    ok[5] = geodesic_tangency_check(cs).passed;
    ConeSampling samp;
    samp.count = sc.count;
    samp.seed = case_seed;
    samp.field = FieldTag::modp(sc.prime);
    ok[6] = double_bracket_check(cs, sample_cone(cs, samp)).passed;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (ok[i]) {
        ++passed[i];
      } else {
        failures.push_back({{"case", c}, {"identity", names[i]}});
      }
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    r.add(names[i], passed[i] == o.cases, std::to_string(passed[i]) + "/" + std::to_string(o.cases));
  }
  r.config["cases"] = o.cases;
  r.config["n"] = o.n;
  r.config["degree"] = o.degree;
  r.result = {{"cases", o.cases}, {"failures", failures}};
  return r.all_passed() ? kPass : kInternalError;
}

int cmd_model(const Options& o, RunReport& r) {
  Problem p = load_problem(o, false);
  const int n = p.z.n;
  std::optional<Coframe> omega;
  if (o.kind == "flat") {
    omega = model_flat(n);
  } else if (o.kind == "rescaled") {
    omega = model_rescaled(o.scale, n);
    r.config["scale"] = o.scale;
  } else if (o.kind == "twisted") {
    omega = o.matrix.empty() ? model_twisted_default(n) : coframe_from_strings(matrix_from_flag(o.matrix));
    if (!o.matrix.empty()) r.config["matrix"] = o.matrix;
  } else {
    throw ConfigError("model kind must be flat, rescaled or twisted");
  }
  if (omega->n() != n) throw DimensionError("model matrix does not match the variety dimension");
  Json cj = coframe_to_json(*omega, o.kind);
  Json files = Json::array();
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    write_json((dir / "variety.json").string(), variety_to_json(p.z));
    write_json((dir / "coframe.json").string(), cj);
    write_json((dir / "problem.json").string(), Json{{"variety", "variety.json"}, {"coframe", "coframe.json"}});
    for (const char* f : {"variety.json", "coframe.json", "problem.json"}) files.push_back((dir / f).string());
  }
  r.config["kind"] = o.kind;
  r.add("coframe_valid", true, o.kind);
  r.result = {{"coframe", cj}, {"files", files}};
  return kPass;
}

int cmd_selftest(const Options& o, RunReport& r) {
  const Hypersurface fermat = fermat_hypersurface(3, 4);
  for (int n = 3; n <= 6; ++n) {
    int d = xi_V(n).dim();
    r.add("xi_V_dim_n" + std::to_string(n), d == n, std::to_string(d));
  }
  XiConfig cfg;
  cfg.seed = o.seed;
  XiZResult xz = xi_Z(fermat, cfg);
  r.add("fermat_xi_Z", xz.dim == 3 && xz.stable && xz.contains_xi_V, std::to_string(xz.dim));
  XiConfig fc = cfg;
  fc.backend = EvalMode::Float;
  XiZResult xf = xi_Z(fermat, fc);
  r.add("fermat_xi_Z_float", xf.float_dim == 3, std::to_string(xf.float_dim));
  RankResult tl = tangent_lines_nondegenerate(fermat, cfg);
  r.add("fermat_tangent_lines", tl.ok && tl.rank == 3, std::to_string(tl.rank));

  ConeStructure flat = adapted_cone(model_flat(3), fermat);
  ConeStructure resc = adapted_cone(model_rescaled("1/(1-x1)", 3), fermat);
  ConeStructure tw = adapted_cone(model_twisted_default(3), fermat);
  r.add("geodesic_tangency_flat", geodesic_tangency_check(flat).passed, "gamma(F) = 0");
  r.add("geodesic_tangency_rescaled", geodesic_tangency_check(resc).passed, "gamma(F) = 0");
  r.add("geodesic_tangency_twisted", geodesic_tangency_check(tw).passed, "gamma(F) = 0");
  ConeSampling samp;
  samp.count = 10;
  samp.seed = o.seed;
  r.add("double_bracket_rescaled", double_bracket_check(resc, sample_cone(resc, samp)).passed, "exact");

  CertifyConfig cc;
  cc.seed = o.seed;
  FlattenCertificate cf = certify(flat, xz, cc);
  r.add("certify_flat", cf.status == CertStatus::Flat, to_string(cf.status));
  FlattenCertificate cr = certify(resc, xz, cc);
  const bool f_ok = cr.f && cr.f->rational && cr.f->f == parse_ratfunc("1-x1", default_names(3));
  r.add("certify_rescaled", cr.status == CertStatus::ConformallyFlat && f_ok, to_string(cr.status),
        cr.f ? cr.f->to_string(default_names(3)) : "");
  FlattenCertificate ct = certify(tw, xz, cc);
  r.add("certify_twisted", ct.status == CertStatus::Rejected && ct.stage == "characteristic_check",
        to_string(ct.status), ct.stage);
  ClosednessVerdict hv = conformal_closedness_test(model_heisenberg(3));
  r.add("heisenberg_not_conformally_closed", hv.kind == Closedness::NotConformallyClosed && hv.residual > 0,
        to_string(hv.kind), "residual " + std::to_string(hv.residual));
  r.config["seed"] = o.seed;
  return r.all_passed() ? kPass : kInternalError;
}

void add_common(CLI::App* sub, Options& o, bool needs_seed) {
  sub->add_option("--variety", o.variety, "variety JSON file");
  sub->add_option("--coframe", o.coframe, "coframe JSON file");
  sub->add_option("--problem", o.problem, "problem JSON referencing a variety and a coframe");
  sub->add_option("--backend", o.backend, "modp, float or rational")
      ->check(CLI::IsMember({"modp", "float", "rational"}));
  sub->add_option("--prime", o.primes, "prime for the modular backend (repeatable)");
  sub->add_option("--samples", o.samples, "number of sample points (0: automatic)");
  auto* seed = sub->add_option("--seed", o.seed, "random seed");
  if (needs_seed) seed->required();
  sub->add_option("--tol", o.tol, "membership / float tolerance");
  sub->add_option("--out", o.out, "write the report to this file");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

// ------------------------------------------------------------------ JSON I/O

Hypersurface variety_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    auto names = names_from_json(j, n);
    Hypersurface z(parse_poly(j.at("f").get<std::string>(), names));
    if (z.n != n) throw ConfigError("variety polynomial lives in the wrong number of variables");
    if (j.contains("degree") && j.at("degree").get<int>() != z.degree) {
      throw ConfigError("declared degree " + std::to_string(j.at("degree").get<int>()) + " but f has degree " +
                        std::to_string(z.degree));
    }
    return z;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("variety: ") + e.what());
  }
}

Json variety_to_json(const Hypersurface& z) {
  return {{"n", z.n}, {"degree", z.degree}, {"f", z.f.to_string(default_names(z.n))}};
}

Coframe coframe_from_json(const Json& j) {
  try {
    if (j.contains("model") && !j.contains("A")) {
      const std::string kind = j.at("model").get<std::string>();
      const int n = j.value("n", j.contains("variables") ? static_cast<int>(j.at("variables").size()) : 3);
      Chart chart = chart_from_json(j, n);
      if (kind == "flat") return Coframe(chart, identity_matrix(n, n));
      if (kind == "rescaled") return model_rescaled(parse_ratfunc(j.at("scale").get<std::string>(), chart.variables), chart);
      if (kind == "twisted") {
        RatMatrix a = identity_matrix(n, n);
        a(1, 2) = RatFunc::variable(n, 0);
        return Coframe(chart, std::move(a));
      }
      throw ConfigError("unknown model kind " + kind);
    }
    auto rows = matrix_from_json(j.at("A"));
    const int n = static_cast<int>(rows.size());
    return coframe_from_strings(rows, chart_from_json(j, n));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("coframe: ") + e.what());
  }
}

Json coframe_to_json(const Coframe& omega, const std::string& model) {
  const Chart& chart = omega.chart();
  Json j;
  if (!model.empty()) j["model"] = model;
  j["n"] = chart.n;
  j["variables"] = chart.variables;
  Json base = Json::array();
  for (const auto& b : chart.base_point) base.push_back(to_string(b));
  j["base_point"] = base;
  Json a = Json::array();
  for (int k = 0; k < chart.n; ++k) {
    Json row = Json::array();
    for (int c = 0; c < chart.n; ++c) row.push_back(omega.matrix()(k, c).to_string(chart.variables));
    a.push_back(row);
  }
  j["A"] = a;
  return j;
}

Json certificate_to_json(const FlattenCertificate& cert, const Coframe& omega) {
  const auto& names = omega.chart().variables;
  Json j;
  j["status"] = to_string(cert.status);
  j["stage"] = cert.stage;
  j["verdict"] = cert.verdict ? Json(to_string(cert.verdict->kind)) : Json(nullptr);
  Json xi = Json::array();
  if (cert.verdict) {
    for (const auto& x : cert.verdict->xi) xi.push_back(x.to_string(names));
  }
  j["xi"] = xi;
  Json h_terms = Json::array();
  if (cert.h && cert.h->symbolic) {
    if (!cert.h->form.rational.is_zero()) {
      h_terms.push_back({{"kind", "rational"}, {"expr", cert.h->form.rational.to_string(names)}});
    }
    for (const auto& t : cert.h->form.logs) {
      h_terms.push_back({{"kind", "log"},
                         {"coeff", to_string(t.coeff)},
                         {"arg", t.arg.to_string(names)},
                         {"arg_at_base", to_string(t.arg_at_base)}});
    }
  }
  j["h_mode"] = cert.h ? Json(cert.h->symbolic ? "symbolic" : "quadrature") : Json(nullptr);
  j["h_terms"] = h_terms;
  j["f"] = cert.f ? Json(cert.f->to_string(names)) : Json(nullptr);
  j["f_rational"] = cert.f && cert.f->rational;
  if (cert.zeta && cert.zeta->symbolic) {
    Json z = Json::array();
    for (const auto& c : cert.zeta->components) z.push_back(c.to_string(names));
    j["zeta"] = z;
  } else {
    j["zeta"] = cert.zeta ? Json("path quadrature of f omega") : Json(nullptr);
  }
  Json res;
  res["d_f_omega"] = cert.closure ? Json(cert.closure->max_residual) : Json(nullptr);
  res["d_f_omega_exact"] = cert.closure && cert.closure->exact;
  res["cone_product_deviation"] = cert.product ? Json(cert.product->max_deviation) : Json(nullptr);
  res["validation_samples"] = cert.product ? cert.product->samples : 0;
  res["two_path_discrepancy"] = cert.two_path_discrepancy;
  res["characteristic_max_residual"] = cert.characteristic ? Json(cert.characteristic->max_residual) : Json(nullptr);
  j["residuals"] = res;
  Json witness = nullptr;
  if (cert.characteristic && cert.characteristic->witness) {
    witness = {{"stage", "characteristic_check"},
               {"point", cert.characteristic->witness->point},
               {"residual", cert.characteristic->witness->residual}};
  } else if (cert.verdict && cert.verdict->kind == Closedness::NotConformallyClosed) {
    witness = {{"stage", "conformal_closedness"},
               {"point", format_point(cert.verdict->witness)},
               {"residual", cert.verdict->residual}};
  }
  j["witness"] = witness;
  j["dims"] = {{"xi_Z", cert.dim_xi_z}, {"xi_V", cert.dim_xi_v}};
  j["fully_symbolic"] = cert.fully_symbolic;
  j["notes"] = cert.notes;
  j["error"] = cert.error;
  return j;
}

// ------------------------------------------------------------------- run

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartan coframe toolkit: cone structures, Xi subspaces and flatness certificates", "ccc"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* xi = app.add_subcommand("xi", "span, tangent-line and Xi_Z computations for a variety");
  add_common(xi, o, true);
  auto* cert = app.add_subcommand("certify", "run the flatness certification pipeline");
  add_common(cert, o, true);
  cert->add_option("--validation-samples", o.validation_samples, "cone-product validation samples");
  cert->add_flag("--force-quadrature", o.force_quadrature, "integrate h by path quadrature");
  auto* verify = app.add_subcommand("verify-identities", "exact identity suite on random coframes");
  add_common(verify, o, true);
  verify->add_option("--cases", o.cases, "number of random coframes");
  verify->add_option("--n", o.n, "dimension");
  verify->add_option("--degree", o.degree, "maximal degree of the coframe entries");
  auto* model = app.add_subcommand("model", "emit flat, rescaled or twisted model problem files");
  add_common(model, o, false);
  model->add_option("kind", o.kind, "flat, rescaled or twisted")->required();
  model->add_option("--scale", o.scale, "scale function s for the rescaled model");
  model->add_option("--matrix", o.matrix, "rows of A for the twisted model, e.g. \"1,0,0;0,1,x1;0,0,1\"");
  model->add_option("--out-dir", o.out_dir, "directory for variety.json, coframe.json and problem.json");
  auto* self = app.add_subcommand("selftest", "run the shipped acceptance cases");
  add_common(self, o, false);
  o.seed = 1;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  RunReport report;
  CLI::App* sub = app.get_subcommands().front();
  report.command = sub->get_name();
  report.config = config_echo(o, report.command);
  const auto start = std::chrono::steady_clock::now();
  int code = kPass;
  try {
    if (sub == xi) code = cmd_xi(o, report);
    if (sub == cert) code = cmd_certify(o, report);
    if (sub == verify) code = cmd_verify(o, report);
    if (sub == model) code = cmd_model(o, report);
    if (sub == self) code = cmd_selftest(o, report);
  } catch (const InternalIdentityError& e) {
    err << "internal identity violation: " << e.what() << "\n";
    return kInternalError;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SingularError& e) {
    err << "singular input: " << e.what() << "\n";
    return kConfigError;
  } catch (const IndexError& e) {
    err << "input error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << "\n";
    return kConfigError;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    emit(report, o, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  return code;
}

}  // namespace ccc::cli

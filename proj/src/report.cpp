#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "errors.hpp"
#include "model_io.hpp"

namespace cksvar {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json mat_json(const Mat& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) r.push_back(A(i, j));
    rows.push_back(r);
  }
  return rows;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json roots_json(const std::vector<std::complex<double>>& roots) {
  json a = json::array();
  for (const auto& z : roots) a.push_back({{"re", z.real()}, {"im", z.imag()}, {"modulus", std::abs(z)}});
  return a;
}

json classification_json(const CaseClassification& c) {
  return {{"case", case_name(c.case_id)},
          {"config", config_name(c.config)},
          {"r_plus", c.r_plus},
          {"r_minus", c.r_minus},
          {"rank_Pi_x", c.rank_Pi_x},
          {"r", c.r},
          {"pi_plus_in_span", c.pi_plus_in_span},
          {"pi_minus_in_span", c.pi_minus_in_span},
          {"linear", c.linear},
          {"stationary", c.stationary},
          {"tolerance", c.tolerance_used},
          {"scale", c.scale},
          {"diagnostics", c.diagnostics}};
}

json dgp_json(const DgpReport& d) {
  return {{"coherent", d.coherent},
          {"wlog_signs_ok", d.wlog_signs_ok},
          {"det_plus", d.det_plus},
          {"det_minus", d.det_minus},
          {"phi_tilde_plus", d.phi_tilde_plus},
          {"phi_tilde_minus", d.phi_tilde_minus},
          {"messages", d.messages}};
}

json jsr_json(const JsrEstimate& e) {
  return {{"lower", e.lower},
          {"upper", e.upper},
          {"depth", e.depth},
          {"certified_lt_one", e.certified_lt_one},
          {"products", e.products},
          {"budget_exhausted", e.budget_exhausted},
          {"exact", e.exact},
          {"lower_by_depth", e.lower_by_depth},
          {"upper_by_depth", e.upper_by_depth}};
}

json get_or(const json& j, const char* key, json def) { return j.contains(key) ? j.at(key) : def; }

}  // namespace

std::string to_json(const CaseClassification& c) { return classification_json(c).dump(2); }

std::string to_json(const AssumptionReport& r) {
  json checks = json::object();
  for (const auto& c : r.case_specific) {
    json e = {{"pass", c.pass}, {"value", c.value}, {"detail", c.detail}};
    if (c.name.find("JSR") != std::string::npos) {
      e["lower"] = c.lower;
      e["upper"] = c.upper;
    }
    checks[c.name] = e;
  }
  json j = {{"all_ok", r.all_ok()},
            {"dgp", dgp_json(r.dgp)},
            {"classification", classification_json(r.classification)},
            {"roots_plus", roots_json(r.roots_plus)},
            {"roots_minus", roots_json(r.roots_minus)},
            {"q_plus", r.q_plus},
            {"q_minus", r.q_minus},
            {"cvar_roots_ok", r.cvar_roots_ok},
            {"deterministic_ok", r.deterministic_ok},
            {"case_specific", checks},
            {"messages", r.messages}};
  return j.dump(2);
}

std::string to_json(const JsrEstimate& e, const CompanionSet& set) {
  json j = jsr_json(e);
  j["labels"] = set.labels;
  j["dim"] = set.dim();
  return j.dump(2);
}

std::string to_json(const McReport& r, bool with_samples) {
  json res = json::array();
  for (const auto& f : r.results) {
    json e = {{"functional", functional_name(f.functional)},
              {"n", f.n},
              {"ks", f.ks},
              {"threshold", f.threshold},
              {"criterion", f.criterion},
              {"model_median", f.model_median},
              {"limit_median", f.limit_median},
              {"model_reps", f.model_sample.size()},
              {"limit_reps", f.limit_sample.size()},
              {"pass", f.pass}};
    if (with_samples) {
      e["model_sample"] = f.model_sample;
      e["limit_sample"] = f.limit_sample;
    }
    res.push_back(e);
  }
  json gr = json::array();
  for (const auto& g : r.growth)
    gr.push_back({{"series", g.series}, {"n", g.n}, {"median_ratio", g.median_ratio}, {"lo", g.lo}, {"hi", g.hi},
                  {"pass", g.pass}});
  json j = {{"label", r.label},
            {"pass", r.pass()},
            {"classification", classification_json(r.classification)},
            {"assumptions_ok", r.assumptions_ok},
            {"warnings", r.warnings},
            {"functionals", res},
            {"growth", gr},
            {"seconds_model", r.seconds_model},
            {"seconds_limit", r.seconds_limit},
            {"note", "tolerances are engineering choices; no convergence rate is implied"}};
  return j.dump(2);
}

std::string to_json(const ResidualReport& r) {
  json a = json::array();
  for (const auto& e : r.entries)
    a.push_back({{"name", e.name}, {"regime", e.regime}, {"region", e.region}, {"scaled_max", e.scaled_max},
                 {"growth_ratio", e.growth_ratio}, {"count", e.count}, {"i0", e.i0}});
  return json{{"entries", a}}.dump(2);
}

std::string canonical_to_json(const CanonicalModel& cm) {
  json j = json::parse(model_to_json_text(cm.model));
  j["P_inv"] = mat_json(cm.P_inv);
  j["Q"] = mat_json(cm.Q);
  j["phi_tilde_plus"] = cm.phi_tilde_plus;
  j["phi_tilde_minus"] = cm.phi_tilde_minus;
  return j.dump(2);
}

std::string objects_to_json(const VecmForm& v, const CaseClassification& c) {
  json j = {{"pi_plus", vec_json(v.pi_plus)},
            {"pi_minus", vec_json(v.pi_minus)},
            {"Pi_plus", mat_json(v.Pi(+1))},
            {"Pi_minus", mat_json(v.Pi(-1))}};
  try {
    if (c.config == TableConfig::CaseI) {
      Case1Objects o = projection_case1(v, c.tolerance_used);
      j["alpha"] = mat_json(o.fac.alpha);
      j["beta"] = mat_json(o.fac.beta);
      j["alpha_perp"] = mat_json(o.fac.alpha_perp);
      j["beta_perp"] = mat_json(o.fac.beta_perp);
      j["P_beta_perp"] = mat_json(o.P);
      j["kappa"] = vec_json(o.kappa);
      j["kappa1"] = o.kappa1;
    } else if (c.config == TableConfig::CaseII) {
      KinkGeometry g = kink_geometry(v, c.tolerance_used);
      j["alpha"] = mat_json(g.alpha);
      j["beta_plus"] = mat_json(g.beta_plus);
      j["beta_minus"] = mat_json(g.beta_minus);
      j["beta_perp_plus"] = mat_json(g.beta_perp_plus);
      j["beta_perp_minus"] = mat_json(g.beta_perp_minus);
      j["P_beta_perp_plus"] = mat_json(g.P_plus);
      j["P_beta_perp_minus"] = mat_json(g.P_minus);
      j["vartheta"] = vec_json(g.vartheta);
      j["mu"] = g.mu;
    }
  } catch (const Error& e) {
    j["objects_error"] = e.what();
  }
  return j.dump(2);
}

std::string examples_to_json() {
  json a = json::array();
  for (const auto& f : example_registry()) {
    json ps = json::array();
    for (const auto& p : f.params) ps.push_back({{"name", p.name}, {"default", p.def}, {"range", p.range}});
    a.push_back({{"name", f.name}, {"description", f.description}, {"params", ps}});
  }
  return a.dump(2);
}

McSpec mc_spec_from_json(const std::string& text, const CksvarModel& model) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("mc spec: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("mc spec: expected an object");
  static const std::vector<std::string> known = {"label", "expect", "n_list",  "reps", "limit_reps", "functionals",
                                                 "growth_n", "seed", "grid", "threads", "z0"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ParseError("mc spec: unknown key '" + it.key() + "'");
  McSpec s;
  s.model = model;
  try {
    s.label = get_or(j, "label", "").get<std::string>();
    if (j.contains("expect")) {
      std::string e = j.at("expect").get<std::string>();
      if (e == "i") s.expect = TableConfig::CaseI;
      else if (e == "ii") s.expect = TableConfig::CaseII;
      else throw ParseError("mc spec: expect must be \"i\" or \"ii\"");
    }
    if (j.contains("n_list")) s.n_list = j.at("n_list").get<std::vector<int>>();
    s.reps = get_or(j, "reps", s.reps).get<int>();
    s.limit_reps = get_or(j, "limit_reps", 0).get<int>();
    for (const auto& f : get_or(j, "functionals", json::array())) s.functionals.push_back(functional_from_name(f));
    s.growth_n = get_or(j, "growth_n", json::array()).get<std::vector<int>>();
    s.seed = get_or(j, "seed", s.seed).get<std::uint64_t>();
    s.grid = get_or(j, "grid", s.grid).get<int>();
    s.threads = get_or(j, "threads", 0).get<int>();
    if (j.contains("z0")) {
      auto z = j.at("z0").get<std::vector<double>>();
      s.z0 = Eigen::Map<Vec>(z.data(), static_cast<Eigen::Index>(z.size()));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("mc spec: ") + e.what());
  }
  return s;
}

ParamMap params_from_json(const std::string& text) {
  ParamMap m;
  if (text.empty()) return m;
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ParseError("params: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  return m;
}

std::string path_to_csv(const Path& path) {
  std::ostringstream os;
  os << "t,y,y_plus,y_minus";
  for (int i = 1; i < path.p; ++i) os << ",x_" << i;
  for (int i = 1; i <= path.p; ++i) os << ",u_" << i;
  os << '\n';
  for (int t = 1; t <= path.n; ++t) {
    os << t << ',' << fmt17(path.y(t - 1)) << ',' << fmt17(path.y_plus(t - 1)) << ',' << fmt17(path.y_minus(t - 1));
    for (int i = 0; i < path.p - 1; ++i) os << ',' << fmt17(path.x(i, t - 1));
    for (int i = 0; i < path.p; ++i) os << ',' << fmt17(path.innovations(i, t - 1));
    os << '\n';
  }
  return os.str();
}

Path path_from_csv(const std::string& text, int p) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ParseError("csv: missing header");
  std::vector<std::vector<double>> rows;
  const std::size_t width = 4 + (p - 1) + p;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("csv: bad number '" + cell + "'");
      }
    }
    if (r.size() != width) throw ParseError("csv: row has the wrong number of columns");
    rows.push_back(std::move(r));
  }
  Path path;
  path.n = static_cast<int>(rows.size());
  path.p = p;
  path.k = 1;
  path.y.resize(path.n);
  path.y_plus.resize(path.n);
  path.y_minus.resize(path.n);
  path.x.resize(p - 1, path.n);
  path.innovations.resize(p, path.n);
  path.init = Mat::Zero(p, 1);
  for (int t = 0; t < path.n; ++t) {
    const auto& r = rows[t];
    path.y(t) = r[1];
    path.y_plus(t) = r[2];
    path.y_minus(t) = r[3];
    for (int i = 0; i < p - 1; ++i) path.x(i, t) = r[4 + i];
    for (int i = 0; i < p; ++i) path.innovations(i, t) = r[3 + p + i];
  }
  return path;
}

std::string limit_to_csv(const LimitPath& lp) {
  std::ostringstream os;
  os << "lambda,Y";
  for (Eigen::Index i = 1; i <= lp.X.rows(); ++i) os << ",X_" << i;
  os << '\n';
  for (Eigen::Index j = 0; j < lp.Y.size(); ++j) {
    os << fmt17(lp.grid(j)) << ',' << fmt17(lp.Y(j));
    for (Eigen::Index i = 0; i < lp.X.rows(); ++i) os << ',' << fmt17(lp.X(i, j));
    os << '\n';
  }
  return os.str();
}

std::string samples_to_csv(const McReport& r) {
  std::ostringstream os;
  os << "functional,n,source,rep,value\n";
  for (const auto& f : r.results) {
    for (std::size_t i = 0; i < f.model_sample.size(); ++i)
      os << functional_name(f.functional) << ',' << f.n << ",model," << i << ',' << fmt17(f.model_sample[i]) << '\n';
    for (std::size_t i = 0; i < f.limit_sample.size(); ++i)
      os << functional_name(f.functional) << ',' << f.n << ",limit," << i << ',' << fmt17(f.limit_sample[i]) << '\n';
  }
  return os.str();
}

}  // namespace cksvar

// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "CLI11.hpp"
#include "cksvar/cksvar.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Failure {
  int code;
  std::string reason;
};

int exit_code(cksvar_status s) {
  switch (s) {
    case CKSVAR_OK: return 0;
    case CKSVAR_E_PARSE:
    case CKSVAR_E_IO:
    case CKSVAR_E_INTERNAL: return 1;
    default: return 2;
  }
}

void check(cksvar_status s) {
  if (s != CKSVAR_OK) throw Failure{exit_code(s), std::string(cksvar_status_name(s)) + ": " + cksvar_last_error()};
}

// Owns a string handed out by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { cksvar_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ModelHandle {
  cksvar_model* m = nullptr;
  ~ModelHandle() { cksvar_model_free(m); }
};

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
};

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{1, "io: cannot open " + tmp.string() + " for writing"};
    f << text;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Failure{1, "io: write failed for " + tmp.string()};
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Failure{1, "io: cannot rename onto " + path};
  }
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty())
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  else
    write_atomic(g.out, text.back() == '\n' ? text : text + "\n");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Failure{2, std::string("argument: bad number in ") + what + ": '" + cell + "'"};
    }
  }
  return v;
}

// CSV text to {"columns": [...], "rows": [[...], ...]}.
std::string csv_to_json(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  json j;
  j["columns"] = json::array();
  j["rows"] = json::array();
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    json row = json::array();
    while (std::getline(ls, cell, ',')) {
      if (header)
        j["columns"].push_back(cell);
      else
        row.push_back(std::stod(cell));
    }
    if (!header) j["rows"].push_back(row);
    header = false;
  }
  return j.dump(1);
}

struct ModelSource {
  std::string model_file;
  std::string example;
  std::map<std::string, double> named;
  std::vector<std::string> params;  // key=value

  void add(CLI::App* sub) {
    auto* grp = sub->add_option_group("model", "model source");
    auto* mf = grp->add_option("--model", model_file, "model JSON file")->check(CLI::ExistingFile);
    auto* ex = grp->add_option("--example", example, "built-in example name");
    mf->excludes(ex);
    grp->require_option(1);
    for (const char* k : {"delta", "mu", "gamma", "theta", "chi", "psi", "rho"})
      sub->add_option_function<double>(std::string("--") + k, [this, k](double v) { named[k] = v; },
                                       std::string("example parameter ") + k);
    sub->add_option_function<double>("--sigma-eta", [this](double v) { named["sigma_eta"] = v; }, "example parameter");
    sub->add_option_function<double>("--sigma-eps", [this](double v) { named["sigma_eps"] = v; }, "example parameter");
    sub->add_option("--param", params, "example parameter key=value (repeatable)");
  }

  void load(ModelHandle& h) const {
    if (!model_file.empty()) {
      if (!named.empty() || !params.empty())
        throw Failure{2, "argument: example parameters cannot be combined with --model"};
      check(cksvar_model_load(model_file.c_str(), &h.m));
      return;
    }
    json p = json::object();
    for (const auto& [k, v] : named) p[k] = v;
    for (const auto& kv : params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw Failure{2, "argument: --param expects key=value, got '" + kv + "'"};
      auto vals = parse_list(kv.substr(eq + 1), "--param");
      if (vals.size() != 1) throw Failure{2, "argument: --param expects one value"};
      p[kv.substr(0, eq)] = vals[0];
    }
    check(cksvar_model_example(example.c_str(), p.dump().c_str(), &h.m));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Censored and kinked structural VAR toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output file (written atomically)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  double tol = 0.0;
  int depth = 0;
  long long budget = 0;

  auto* cls = app.add_subcommand("classify", "classify the cointegration configuration");
  ModelSource cls_src;
  cls_src.add(cls);
  bool with_objects = false;
  cls->add_option("--tol", tol, "rank tolerance (relative)");
  cls->add_flag("--objects", with_objects, "include factors, projections and case objects");

  auto* ver = app.add_subcommand("verify", "check model assumptions");
  ModelSource ver_src;
  ver_src.add(ver);
  ver->add_option("--tol", tol, "rank tolerance (relative)");
  ver->add_option("--depth", depth, "JSR product depth");
  ver->add_option("--budget", budget, "JSR product budget");

  auto* sim = app.add_subcommand("simulate", "simulate a path (CSV)");
  ModelSource sim_src;
  sim_src.add(sim);
  int n = 1000;
  std::string init;
  sim->add_option("--n", n, "path length")->check(CLI::PositiveNumber);
  sim->add_option("--init", init, "presample: p values (repeated) or p*k values, column-major");

  auto* lim = app.add_subcommand("limit", "sample a limit process (CSV)");
  ModelSource lim_src;
  lim_src.add(lim);
  std::string which = "auto";
  int grid = 0;
  std::string z0;
  lim->add_option("--case", which, "auto, i or ii")->check(CLI::IsMember({"auto", "i", "ii"}));
  lim->add_option("--m", grid, "grid intervals")->check(CLI::PositiveNumber);
  lim->add_option("--z0", z0, "initial common-trend value, p comma-separated values");

  auto* mc = app.add_subcommand("mc", "Monte Carlo comparison of scaled paths with their limits");
  ModelSource mc_src;
  mc_src.add(mc);
  std::string n_list, functionals, growth_n, expect, spec_file, samples_out;
  int reps = 0, limit_reps = 0, threads = 0, mc_grid = 0;
  mc->add_option("--n-list", n_list, "comma-separated sample sizes");
  mc->add_option("--reps", reps, "replications (>= 100)");
  mc->add_option("--limit-reps", limit_reps, "limit-path replications (default: reps)");
  mc->add_option("--functionals", functionals, "comma-separated functional names");
  mc->add_option("--growth-n", growth_n, "comma-separated n for M(4n)/M(n) diagnostics");
  mc->add_option("--expect", expect, "expected configuration")->check(CLI::IsMember({"i", "ii"}));
  mc->add_option("--grid", mc_grid, "limit grid intervals");
  mc->add_option("--threads", threads, "worker threads (0: hardware)");
  mc->add_option("--spec", spec_file, "JSON spec; flags override its fields")->check(CLI::ExistingFile);
  mc->add_option("--samples-out", samples_out, "per-functional samples CSV (default: <out>.samples.csv)");

  auto* jsr = app.add_subcommand("jsr", "joint spectral radius bounds");
  std::string matrices;
  jsr->add_option("--matrices", matrices, "JSON matrix set file")->required()->check(CLI::ExistingFile);
  jsr->add_option("--depth", depth, "product depth");
  jsr->add_option("--budget", budget, "product budget");

  auto* exs = app.add_subcommand("examples", "list built-in examples with defaults and ranges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (cls->parsed()) {
      ModelHandle h;
      cls_src.load(h);
      LibString s;
      check(cksvar_classify(h.m, tol, &s.p));
      json j = json::parse(s.str());
      if (with_objects) {
        LibString o;
        check(cksvar_objects(h.m, tol, &o.p));
        j["objects"] = json::parse(o.str());
      }
      emit(g, j.dump(2));
    } else if (ver->parsed()) {
      ModelHandle h;
      ver_src.load(h);
      LibString s;
      int ok = 0;
      check(cksvar_verify(h.m, tol, depth, budget, &ok, &s.p));
      emit(g, s.str());
      if (!ok) {
        json j = json::parse(s.str());
        std::string why = j["messages"].empty() ? "a case-specific check failed" : j["messages"][0].get<std::string>();
        for (auto& [name, c] : j["case_specific"].items())
          if (!c["pass"].get<bool>() && j["messages"].empty()) why = name + ": " + c["detail"].get<std::string>();
        std::cerr << "assumption: " << why << "\n";
        return 2;
      }
    } else if (sim->parsed()) {
      ModelHandle h;
      sim_src.load(h);
      int p = 0, k = 0;
      check(cksvar_model_dims(h.m, &p, &k));
      std::vector<double> z;
      if (!init.empty()) {
        auto v = parse_list(init, "--init");
        if (static_cast<int>(v.size()) == p) {
          for (int j = 0; j < k; ++j) z.insert(z.end(), v.begin(), v.end());
        } else if (static_cast<int>(v.size()) == p * k) {
          z = v;
        } else {
          throw Failure{2, "argument: --init needs p or p*k values"};
        }
      }
      cksvar_path* path = nullptr;
      check(cksvar_simulate(h.m, n, g.seed, z.empty() ? nullptr : z.data(), &path));
      LibString csv;
      cksvar_status st = cksvar_path_csv(path, &csv.p);
      cksvar_path_free(path);
      check(st);
      emit(g, g.format == "json" ? csv_to_json(csv.str()) : csv.str());
    } else if (lim->parsed()) {
      ModelHandle h;
      lim_src.load(h);
      int p = 0;
      check(cksvar_model_dims(h.m, &p, nullptr));
      std::vector<double> z;
      if (!z0.empty()) {
        z = parse_list(z0, "--z0");
        if (static_cast<int>(z.size()) != p) throw Failure{2, "argument: --z0 needs p values"};
      }
      int wc = which == "i" ? 1 : which == "ii" ? 2 : 0;
      LibString csv;
      check(cksvar_limit_csv(h.m, wc, grid, g.seed, z.empty() ? nullptr : z.data(), &csv.p));
      emit(g, g.format == "json" ? csv_to_json(csv.str()) : csv.str());
    } else if (mc->parsed()) {
      ModelHandle h;
      mc_src.load(h);
      json spec = json::object();
      if (!spec_file.empty()) {
        std::ifstream f(spec_file);
        std::stringstream ss;
        ss << f.rdbuf();
        try {
          spec = json::parse(ss.str());
        } catch (const json::exception& e) {
          throw Failure{1, std::string("parse: ") + e.what()};
        }
      }
      auto ints = [](const std::string& s, const char* what) {
        std::vector<long long> out;
        for (double d : parse_list(s, what)) out.push_back(static_cast<long long>(d));
        return out;
      };
      if (!n_list.empty()) spec["n_list"] = ints(n_list, "--n-list");
      if (!growth_n.empty()) spec["growth_n"] = ints(growth_n, "--growth-n");
      if (reps) spec["reps"] = reps;
      if (limit_reps) spec["limit_reps"] = limit_reps;
      if (threads) spec["threads"] = threads;
      if (mc_grid) spec["grid"] = mc_grid;
      if (!expect.empty()) spec["expect"] = expect;
      if (!functionals.empty()) {
        json fs = json::array();
        std::stringstream ss(functionals);
        std::string f;
        while (std::getline(ss, f, ',')) fs.push_back(f);
        spec["functionals"] = fs;
      }
      if (app.get_option("--seed")->count() || !spec.contains("seed")) spec["seed"] = g.seed;
      if (!spec.contains("label")) spec["label"] = mc_src.example.empty() ? mc_src.model_file : mc_src.example;
      LibString rep, samples;
      int pass = 0;
      check(cksvar_mc(h.m, spec.dump().c_str(), &pass, &rep.p, &samples.p));
      emit(g, rep.str());
      std::string sp = samples_out.empty() && !g.out.empty() ? g.out + ".samples.csv" : samples_out;
      if (!sp.empty()) write_atomic(sp, samples.str());
    } else if (jsr->parsed()) {
      std::ifstream f(matrices);
      std::stringstream ss;
      ss << f.rdbuf();
      LibString s;
      check(cksvar_jsr(ss.str().c_str(), depth, budget, nullptr, &s.p));
      emit(g, s.str());
    } else if (exs->parsed()) {
      LibString s;
      check(cksvar_examples(&s.p));
      emit(g, s.str());
    }
  } catch (const Failure& f) {
    std::cerr << f.reason << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

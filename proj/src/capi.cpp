#include "cksvar/cksvar.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "companion.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "limit.hpp"
#include "model_io.hpp"
#include "report.hpp"
#include "simulation.hpp"

struct cksvar_model {
  cksvar::CksvarModel m;
};

struct cksvar_path {
  cksvar::Path path;
};

namespace {

thread_local std::string g_last_error;

cksvar_status fail(cksvar_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
cksvar_status guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return CKSVAR_OK;
  } catch (const cksvar::DimensionError& e) {
    return fail(CKSVAR_E_DIMENSION, e.what());
  } catch (const cksvar::DgpError& e) {
    return fail(CKSVAR_E_DGP, e.what());
  } catch (const cksvar::CaseError& e) {
    return fail(CKSVAR_E_CASE, e.what());
  } catch (const cksvar::AssumptionError& e) {
    return fail(CKSVAR_E_ASSUMPTION, e.what());
  } catch (const cksvar::NumericError& e) {
    return fail(CKSVAR_E_NUMERIC, e.what());
  } catch (const cksvar::ParseError& e) {
    return fail(CKSVAR_E_PARSE, e.what());
  } catch (const cksvar::IoError& e) {
    return fail(CKSVAR_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CKSVAR_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CKSVAR_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CKSVAR_E_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cksvar_version(void) { return "0.1.0"; }

const char* cksvar_last_error(void) { return g_last_error.c_str(); }

const char* cksvar_status_name(cksvar_status s) {
  switch (s) {
    case CKSVAR_OK: return "ok";
    case CKSVAR_E_ARGUMENT: return "argument";
    case CKSVAR_E_DIMENSION: return "dimension";
    case CKSVAR_E_DGP: return "dgp";
    case CKSVAR_E_CASE: return "case";
    case CKSVAR_E_ASSUMPTION: return "assumption";
    case CKSVAR_E_NUMERIC: return "numeric";
    case CKSVAR_E_PARSE: return "parse";
    case CKSVAR_E_IO: return "io";
    case CKSVAR_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void cksvar_string_free(char* s) { std::free(s); }

#define CKSVAR_NEED(p)                                                   \
  do {                                                                   \
    if (!(p)) return fail(CKSVAR_E_ARGUMENT, "null argument: " #p);      \
  } while (0)

cksvar_status cksvar_model_from_json(const char* json, cksvar_model** out) {
  CKSVAR_NEED(json);
  CKSVAR_NEED(out);
  *out = nullptr;
  return guard([&] { *out = new cksvar_model{cksvar::model_from_json_text(json)}; });
}

cksvar_status cksvar_model_load(const char* path, cksvar_model** out) {
  CKSVAR_NEED(path);
  CKSVAR_NEED(out);
  *out = nullptr;
  return guard([&] { *out = new cksvar_model{cksvar::load_model(path)}; });
}

cksvar_status cksvar_model_example(const char* name, const char* params_json, cksvar_model** out) {
  CKSVAR_NEED(name);
  CKSVAR_NEED(out);
  *out = nullptr;
  return guard([&] {
    cksvar::ParamMap pm = params_json ? cksvar::params_from_json(params_json) : cksvar::ParamMap{};
    *out = new cksvar_model{cksvar::build_example(name, pm)};
  });
}

cksvar_status cksvar_model_to_json(const cksvar_model* m, char** out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(out);
  *out = nullptr;
  return guard([&] { *out = dup(cksvar::model_to_json_text(m->m)); });
}

cksvar_status cksvar_model_dims(const cksvar_model* m, int* p, int* k) {
  CKSVAR_NEED(m);
  if (p) *p = m->m.p;
  if (k) *k = m->m.k;
  return CKSVAR_OK;
}

void cksvar_model_free(cksvar_model* m) { delete m; }

cksvar_status cksvar_canonical(const cksvar_model* m, char** json_out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] { *json_out = dup(cksvar::canonical_to_json(cksvar::to_canonical(m->m))); });
}

static double tol_or_default(double tol) { return tol > 0.0 ? tol : cksvar::kRankTol; }

cksvar_status cksvar_classify(const cksvar_model* m, double tol, char** json_out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] {
    auto v = cksvar::vecm_decompose(cksvar::threshold_shift(m->m));
    *json_out = dup(cksvar::to_json(cksvar::classify_case(v, tol_or_default(tol))));
  });
}

cksvar_status cksvar_objects(const cksvar_model* m, double tol, char** json_out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] {
    auto v = cksvar::vecm_decompose(cksvar::threshold_shift(m->m));
    *json_out = dup(cksvar::objects_to_json(v, cksvar::classify_case(v, tol_or_default(tol))));
  });
}

cksvar_status cksvar_verify(const cksvar_model* m, double tol, int depth, long long budget, int* all_ok,
                            char** json_out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] {
    auto rep = cksvar::verify_assumptions(m->m, tol_or_default(tol), depth > 0 ? depth : cksvar::kJsrDepth,
                                          budget > 0 ? budget : cksvar::kJsrBudget);
    if (all_ok) *all_ok = rep.all_ok() ? 1 : 0;
    *json_out = dup(cksvar::to_json(rep));
  });
}

cksvar_status cksvar_simulate(const cksvar_model* m, int n, uint64_t seed, const double* init, cksvar_path** out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(out);
  *out = nullptr;
  if (n < 1) return fail(CKSVAR_E_ARGUMENT, "n must be >= 1");
  return guard([&] {
    const auto& model = m->m;
    cksvar::Mat z = init ? cksvar::Mat(Eigen::Map<const cksvar::Mat>(init, model.p, model.k))
                         : cksvar::zero_init(model.p, model.k);
    cksvar::InnovationSpec is;
    is.Sigma = model.Sigma;
    is.seed = seed;
    *out = new cksvar_path{cksvar::simulate(model, n, is, z)};
  });
}

cksvar_status cksvar_path_length(const cksvar_path* path, int* n, int* p) {
  CKSVAR_NEED(path);
  if (n) *n = path->path.n;
  if (p) *p = path->path.p;
  return CKSVAR_OK;
}

cksvar_status cksvar_path_y(const cksvar_path* path, double* out, size_t len) {
  CKSVAR_NEED(path);
  CKSVAR_NEED(out);
  if (len < static_cast<size_t>(path->path.n)) return fail(CKSVAR_E_ARGUMENT, "output buffer too small");
  std::memcpy(out, path->path.y.data(), sizeof(double) * path->path.n);
  return CKSVAR_OK;
}

cksvar_status cksvar_path_x(const cksvar_path* path, double* out, size_t len) {
  CKSVAR_NEED(path);
  const size_t need_len = static_cast<size_t>(path->path.x.size());
  if (need_len == 0) return CKSVAR_OK;
  CKSVAR_NEED(out);
  if (len < need_len) return fail(CKSVAR_E_ARGUMENT, "output buffer too small");
  std::memcpy(out, path->path.x.data(), sizeof(double) * need_len);
  return CKSVAR_OK;
}

cksvar_status cksvar_path_csv(const cksvar_path* path, char** csv_out) {
  CKSVAR_NEED(path);
  CKSVAR_NEED(csv_out);
  *csv_out = nullptr;
  return guard([&] { *csv_out = dup(cksvar::path_to_csv(path->path)); });
}

void cksvar_path_free(cksvar_path* path) { delete path; }

cksvar_status cksvar_limit_csv(const cksvar_model* m, int which_case, int grid, uint64_t seed, const double* z0,
                               char** csv_out) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(csv_out);
  *csv_out = nullptr;
  if (which_case < 0 || which_case > 2) return fail(CKSVAR_E_ARGUMENT, "which_case must be 0, 1 or 2");
  return guard([&] {
    const auto& model = m->m;
    auto v = cksvar::vecm_decompose(cksvar::threshold_shift(model));
    int use = which_case;
    if (use == 0) {
      auto cls = cksvar::classify_case(v);
      if (cls.config == cksvar::TableConfig::CaseI) use = 1;
      else if (cls.config == cksvar::TableConfig::CaseII) use = 2;
      else throw cksvar::CaseError(std::string("no limit process for configuration ") + cksvar::config_name(cls.config));
    }
    cksvar::Vec z = z0 ? cksvar::Vec(Eigen::Map<const cksvar::Vec>(z0, model.p)) : cksvar::Vec::Zero(model.p);
    auto U = cksvar::brownian_grid(model.Sigma, grid > 0 ? grid : cksvar::kDefaultGrid, seed);
    auto lp = use == 1 ? cksvar::limit_case1(v, z, U) : cksvar::limit_case2(v, z, U);
    *csv_out = dup(cksvar::limit_to_csv(lp));
  });
}

cksvar_status cksvar_mc(const cksvar_model* m, const char* spec_json, int* pass, char** json_out, char** samples_csv) {
  CKSVAR_NEED(m);
  CKSVAR_NEED(spec_json);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  if (samples_csv) *samples_csv = nullptr;
  return guard([&] {
    auto rep = cksvar::run_mc(cksvar::mc_spec_from_json(spec_json, m->m));
    if (pass) *pass = rep.pass() ? 1 : 0;
    char* js = dup(cksvar::to_json(rep));
    if (samples_csv) {
      try {
        *samples_csv = dup(cksvar::samples_to_csv(rep));
      } catch (...) {
        std::free(js);
        throw;
      }
    }
    *json_out = js;
  });
}

cksvar_status cksvar_jsr(const char* matrices_json, int depth, long long budget, int* certified, char** json_out) {
  CKSVAR_NEED(matrices_json);
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] {
    auto set = cksvar::matrix_set_from_json_text(matrices_json);
    auto e = cksvar::jsr_bounds(set, depth > 0 ? depth : cksvar::kJsrDepth, budget > 0 ? budget : cksvar::kJsrBudget);
    if (certified) *certified = e.certified_lt_one ? 1 : 0;
    *json_out = dup(cksvar::to_json(e, set));
  });
}

cksvar_status cksvar_examples(char** json_out) {
  CKSVAR_NEED(json_out);
  *json_out = nullptr;
  return guard([&] { *json_out = dup(cksvar::examples_to_json()); });
}

}  // extern "C"

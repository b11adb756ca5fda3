#include "model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "errors.hpp"
#include "json.hpp"

namespace cksvar {

using nlohmann::json;

namespace {

double num(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

Vec vec_of(const json& j, Eigen::Index len, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  if (static_cast<Eigen::Index>(j.size()) != len)
    throw ParseError(where + ": expected " + std::to_string(len) + " entries, got " + std::to_string(j.size()));
  Vec v(len);
  for (Eigen::Index i = 0; i < len; ++i) v(i) = num(j[i], where);
  return v;
}

// Rejects ragged rows; rows/cols of -1 mean "take from the data".
Mat mat_of(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  Eigen::Index r = static_cast<Eigen::Index>(j.size());
  if (rows >= 0 && r != rows)
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  Eigen::Index c = cols;
  for (Eigen::Index i = 0; i < r; ++i) {
    if (!j[i].is_array()) throw ParseError(where + ": each row must be an array");
    Eigen::Index ci = static_cast<Eigen::Index>(j[i].size());
    if (c < 0) c = ci;
    if (ci != c) throw ParseError(where + ": ragged array (row " + std::to_string(i) + " has " + std::to_string(ci) +
                                  " entries, expected " + std::to_string(c) + ")");
  }
  if (c < 0) c = 0;
  Mat M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index q = 0; q < c; ++q) M(i, q) = num(j[i][q], where);
  return M;
}

json to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index q = 0; q < M.cols(); ++q) row.push_back(M(i, q));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

CksvarModel model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file: top level must be an object");
  static const std::set<std::string> known = {"p", "k", "b", "c", "phi0_plus", "phi0_minus", "Phi0_x",
                                              "phi_plus", "phi_minus", "Phi_x", "Sigma", "name", "description"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ParseError("model file: unknown key '" + it.key() + "'");
  for (const char* key : {"p", "k", "phi0_plus", "phi0_minus", "phi_plus", "phi_minus"})
    if (!j.contains(key)) throw ParseError(std::string("model file: missing key '") + key + "'");
  if (!j["p"].is_number_integer() || !j["k"].is_number_integer())
    throw ParseError("model file: p and k must be integers");

  CksvarModel m;
  m.p = j["p"].get<int>();
  m.k = j["k"].get<int>();
  if (m.p < 1 || m.k < 1) throw ParseError("model file: p and k must be >= 1");
  const int p = m.p, k = m.k;
  m.b = j.contains("b") ? num(j["b"], "b") : 0.0;
  m.c = j.contains("c") ? vec_of(j["c"], p, "c") : Vec::Zero(p);
  m.phi0_plus = vec_of(j["phi0_plus"], p, "phi0_plus");
  m.phi0_minus = vec_of(j["phi0_minus"], p, "phi0_minus");
  if (p > 1) {
    if (!j.contains("Phi0_x")) throw ParseError("model file: missing key 'Phi0_x'");
    m.Phi0_x = mat_of(j["Phi0_x"], p, p - 1, "Phi0_x");
  } else {
    m.Phi0_x = Mat(1, 0);
  }
  auto lag_vecs = [&](const char* key) {
    const json& a = j[key];
    if (!a.is_array() || static_cast<int>(a.size()) != k)
      throw ParseError(std::string(key) + ": expected k = " + std::to_string(k) + " lag columns");
    std::vector<Vec> out;
    for (int i = 0; i < k; ++i) out.push_back(vec_of(a[i], p, std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
  };
  m.phi_plus = lag_vecs("phi_plus");
  m.phi_minus = lag_vecs("phi_minus");
  if (p > 1) {
    if (!j.contains("Phi_x")) throw ParseError("model file: missing key 'Phi_x'");
    const json& a = j["Phi_x"];
    if (!a.is_array() || static_cast<int>(a.size()) != k) throw ParseError("Phi_x: expected k lag matrices");
    for (int i = 0; i < k; ++i) m.Phi_x.push_back(mat_of(a[i], p, p - 1, "Phi_x[" + std::to_string(i) + "]"));
  } else {
    m.Phi_x.assign(k, Mat(1, 0));
  }
  m.Sigma = j.contains("Sigma") ? mat_of(j["Sigma"], p, p, "Sigma") : Mat::Identity(p, p);
  m.check();
  return m;
}

std::string model_to_json_text(const CksvarModel& m) {
  json j;
  j["p"] = m.p;
  j["k"] = m.k;
  j["b"] = m.b;
  j["c"] = to_json(m.c);
  j["phi0_plus"] = to_json(m.phi0_plus);
  j["phi0_minus"] = to_json(m.phi0_minus);
  if (m.p > 1) j["Phi0_x"] = to_json(m.Phi0_x);
  json pp = json::array(), pm = json::array(), px = json::array();
  for (int i = 0; i < m.k; ++i) {
    pp.push_back(to_json(m.phi_plus[i]));
    pm.push_back(to_json(m.phi_minus[i]));
    px.push_back(to_json(m.Phi_x[i]));
  }
  j["phi_plus"] = pp;
  j["phi_minus"] = pm;
  if (m.p > 1) j["Phi_x"] = px;
  j["Sigma"] = to_json(m.Sigma);
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CksvarModel load_model(const std::string& path) { return model_from_json_text(read_file(path)); }

CompanionSet matrix_set_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("matrix set: ") + e.what());
  }
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("matrices")) throw ParseError("matrix set: missing key 'matrices'");
    arr = &j["matrices"];
  }
  if (!arr->is_array() || arr->empty()) throw ParseError("matrix set: expected a non-empty array of matrices");
  CompanionSet set;
  for (size_t i = 0; i < arr->size(); ++i) {
    Mat M = mat_of((*arr)[i], -1, -1, "matrices[" + std::to_string(i) + "]");
    if (M.rows() != M.cols() || M.rows() == 0) throw ParseError("matrix set: matrices must be square and non-empty");
    set.matrices.push_back(M);
    set.labels.push_back("A" + std::to_string(i));
  }
  if (j.is_object() && j.contains("labels")) {
    const json& l = j["labels"];
    if (!l.is_array() || l.size() != set.matrices.size()) throw ParseError("matrix set: labels must match matrices");
    for (size_t i = 0; i < l.size(); ++i) set.labels[i] = l[i].get<std::string>();
  }
  set.check();
  return set;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace cksvar

#ifndef QMS_JSON_IO_HPP
#define QMS_JSON_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qms/channel.hpp"
#include "qms/lindblad.hpp"
#include "qms/spinchain.hpp"
#include "qms/state.hpp"
#include "qms/types.hpp"

namespace qms {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Schemas. Complex numbers are two-element arrays [re, im]; a matrix is
// {"dim": n, "entries": [[...row...], ...]}.

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(where + ": complex numbers must be [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json matrix_to_json(const Matrix& m) {
  Json j;
  j["dim"] = m.rows();
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ValidationError(where + ": matrix JSON needs fields 'dim' and 'entries'");
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() <= 0)
    throw ValidationError(where + ".dim: must be a positive integer");
  Index n = j["dim"].get<Index>();
  const Json& rows = j["entries"];
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n)
    throw ValidationError(where + ".entries: expected " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ValidationError(where + ".entries[" + std::to_string(r) + "]: expected " +
                            std::to_string(n) + " entries");
    for (Index c = 0; c < n; ++c)
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  where + ".entries[" + std::to_string(r) + "][" +
                                      std::to_string(c) + "]");
  }
  if (!m.allFinite()) throw ValidationError(where + ": entries must be finite");
  return m;
}

inline Json channel_to_json(const CPMap& map) {
  Json j;
  j["dim"] = map.dim;
  Json kraus = Json::array();
  for (const auto& l : map.kraus) kraus.push_back(matrix_to_json(l));
  j["kraus"] = std::move(kraus);
  return j;
}

inline CPMap channel_from_json(const Json& j, const std::string& where = "channel") {
  if (!j.is_object() || !j.contains("dim") || !j.contains("kraus"))
    throw ValidationError(where + ": channel JSON needs fields 'dim' and 'kraus'");
  Index n = j["dim"].get<Index>();
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw ValidationError(where + ".kraus: must be a nonempty array of matrices");
  std::vector<Matrix> kraus;
  int i = 0;
  for (const auto& mj : j["kraus"]) {
    Matrix m = matrix_from_json(mj, where + ".kraus[" + std::to_string(i++) + "]");
    if (m.rows() != n) throw ValidationError(where + ": Kraus dimension differs from 'dim'");
    kraus.push_back(std::move(m));
  }
  return CPMap::make(std::move(kraus));
}

inline Json state_to_json(const DensityState& s) {
  Json j = matrix_to_json(s.rho);
  j["density"] = true;
  return j;
}

inline DensityState state_from_json(const Json& j, const std::string& where = "state") {
  Matrix m = matrix_from_json(j, where);
  return DensityState::make(m);
}

inline Json lindblad_to_json(const LindbladGenerator& g) {
  Json j;
  j["dim"] = g.dim;
  j["hamiltonian"] = matrix_to_json(g.hamiltonian);
  Json jumps = Json::array();
  for (const auto& l : g.jumps) jumps.push_back(matrix_to_json(l));
  j["jumps"] = std::move(jumps);
  return j;
}

inline LindbladGenerator lindblad_from_json(const Json& j,
                                            const std::string& where = "lindblad") {
  if (!j.is_object() || !j.contains("dim") || !j.contains("hamiltonian") || !j.contains("jumps"))
    throw ValidationError(where + ": needs fields 'dim', 'hamiltonian' and 'jumps'");
  Index n = j["dim"].get<Index>();
  Matrix h = matrix_from_json(j["hamiltonian"], where + ".hamiltonian");
  if (h.rows() != n) throw ValidationError(where + ": hamiltonian dimension differs from 'dim'");
  std::vector<Matrix> jumps;
  int i = 0;
  for (const auto& mj : j["jumps"]) {
    Matrix m = matrix_from_json(mj, where + ".jumps[" + std::to_string(i++) + "]");
    if (m.rows() != n) throw ValidationError(where + ": jump dimension differs from 'dim'");
    jumps.push_back(std::move(m));
  }
  return LindbladGenerator::make(h, std::move(jumps));
}

inline Json tensor_to_json(const PopescuTensor& t) {
  Json j;
  j["d"] = t.d;
  j["k"] = t.k;
  Json ops = Json::array();
  for (const auto& l : t.ops) ops.push_back(matrix_to_json(l));
  j["ops"] = std::move(ops);
  return j;
}

inline PopescuTensor tensor_from_json(const Json& j, const std::string& where = "tensor") {
  if (!j.is_object() || !j.contains("d") || !j.contains("k") || !j.contains("ops"))
    throw ValidationError(where + ": needs fields 'd', 'k' and 'ops'");
  int d = j["d"].get<int>();
  int k = j["k"].get<int>();
  if (!j["ops"].is_array() || static_cast<int>(j["ops"].size()) != d)
    throw ValidationError(where + ".ops: expected d matrices");
  std::vector<Matrix> ops;
  int i = 0;
  for (const auto& mj : j["ops"]) {
    Matrix m = matrix_from_json(mj, where + ".ops[" + std::to_string(i++) + "]");
    if (m.rows() != k) throw ValidationError(where + ": op dimension differs from 'k'");
    ops.push_back(std::move(m));
  }
  return PopescuTensor::make(std::move(ops));
}

// ---------------------------------------------------------------------------
// Deterministic serialization: fixed 2-space indentation, insertion order,
// floating-point values with up to 17 significant digits (exact round trip).

namespace detail {

inline void dump_number(double v, std::string& out) {
  if (!std::isfinite(v)) throw ValidationError("dump_json: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

inline void dump_json_rec(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        dump_json_rec(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      bool scalars = true;
      for (const auto& e : j)
        if (e.is_structured()) scalars = false;
      if (scalars) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_json_rec(e, out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_json_rec(e, out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::string:
      out += j.dump();
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case Json::value_t::number_float:
      dump_number(j.get<double>(), out);
      return;
    default:
      out += "null";
      return;
  }
}

}  // namespace detail

inline std::string dump_json(const Json& j) {
  std::string out;
  detail::dump_json_rec(j, out, 0);
  out += "\n";
  return out;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline Json parse_json(const std::string& text, const std::string& where = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

}  // namespace qms

#endif

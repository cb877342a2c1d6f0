#pragma once

// Machine-readable run records and their JSON encoding.
//
// Floating-point numbers are written with 17 significant digits so that a
// parse of the output reproduces every double bit for bit. Non-finite
// values are written as null. Parsing is strict: unknown keys, missing
// required keys and wrong types are rejected.

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hhcub/core.hpp"

namespace hhcub {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Finite doubles as numbers, everything else as null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct RunInputs {
  std::optional<std::string> expression;
  std::optional<std::vector<std::string>> corpus;
  std::array<double, 4> rect{};
  std::optional<double> lambda;
  std::optional<std::vector<double>> lambda_grid;
  std::optional<std::vector<double>> q_grid;
  double tol = 0.0;
  int max_depth = 0;
  int quad_nodes = 0;
  bool strict = false;
  std::optional<bool> certify;
  std::optional<bool> oracle;
  std::optional<int> panel_depth;
  std::optional<std::string> target;
  std::optional<double> q;
  std::optional<int> grid_n;

  bool operator==(const RunInputs&) const = default;
};

struct RunRecord {
  std::string command;
  RunInputs inputs;
  Json outputs = Json::object();
  Json timings_ms = Json::object();
  std::string version = kVersion;

  bool operator==(const RunRecord&) const = default;
};

namespace detail {

inline void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

inline void write_json(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case Json::value_t::number_float: write_number(out, j.get<double>()); break;
    case Json::value_t::string: out += j.dump(); break;
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += ',';
        first = false;
        write_json(out, e);
      }
      out += ']';
      break;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        write_json(out, v);
      }
      out += '}';
      break;
    }
    default: throw Error(ErrorCode::InvalidConfig, "unsupported JSON value");
  }
}

[[noreturn]] inline void bad_record(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "run record: " + what);
}

inline void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                      const char* where) {
  if (!obj.is_object()) bad_record(std::string(where) + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || a == k;
    if (!known) bad_record("unknown key '" + k + "' in " + where);
  }
}

inline const Json& need(const Json& obj, const char* key) {
  if (!obj.contains(key)) bad_record(std::string("missing key '") + key + "'");
  return obj.at(key);
}

inline double as_double(const Json& j, const char* key) {
  if (!j.is_number()) bad_record(std::string(key) + " must be a number");
  return j.get<double>();
}

inline std::vector<double> as_doubles(const Json& j, const char* key) {
  if (!j.is_array()) bad_record(std::string(key) + " must be an array");
  std::vector<double> out;
  for (const Json& e : j) out.push_back(as_double(e, key));
  return out;
}

inline int as_int(const Json& j, const char* key) {
  if (!j.is_number_integer()) bad_record(std::string(key) + " must be an integer");
  return j.get<int>();
}

inline bool as_bool(const Json& j, const char* key) {
  if (!j.is_boolean()) bad_record(std::string(key) + " must be a boolean");
  return j.get<bool>();
}

inline std::string as_string(const Json& j, const char* key) {
  if (!j.is_string()) bad_record(std::string(key) + " must be a string");
  return j.get<std::string>();
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace detail

/// Compact serialization; the output ends with a newline.
inline std::string serialize(const Json& j) {
  std::string out;
  detail::write_json(out, j);
  out += '\n';
  return out;
}

inline Json to_json(const RunInputs& in) {
  Json j = Json::object();
  j["expression"] = detail::optional_json(in.expression);
  if (in.corpus) j["corpus"] = *in.corpus;
  j["rect"] = in.rect;
  j["lambda"] = detail::optional_json(in.lambda);
  if (in.lambda_grid) j["lambda_grid"] = *in.lambda_grid;
  j["q_grid"] = detail::optional_json(in.q_grid);
  j["tol"] = in.tol;
  j["max_depth"] = in.max_depth;
  j["quad_nodes"] = in.quad_nodes;
  j["strict"] = in.strict;
  if (in.certify) j["certify"] = *in.certify;
  if (in.oracle) j["oracle"] = *in.oracle;
  if (in.panel_depth) j["panel_depth"] = *in.panel_depth;
  if (in.target) j["target"] = *in.target;
  if (in.q) j["q"] = *in.q;
  if (in.grid_n) j["grid_n"] = *in.grid_n;
  return j;
}

inline Json to_json(const RunRecord& r) {
  Json j = Json::object();
  j["command"] = r.command;
  j["inputs"] = to_json(r.inputs);
  j["outputs"] = r.outputs;
  j["timings_ms"] = r.timings_ms;
  j["version"] = r.version;
  return j;
}

inline std::string serialize(const RunRecord& r) { return serialize(to_json(r)); }

inline RunInputs inputs_from_json(const Json& j) {
  using namespace detail;
  only_keys(j,
            {"expression", "corpus", "rect", "lambda", "lambda_grid", "q_grid", "tol",
             "max_depth", "quad_nodes", "strict", "certify", "oracle", "panel_depth", "target",
             "q", "grid_n"},
            "inputs");
  RunInputs in;
  const Json& e = need(j, "expression");
  if (!e.is_null()) in.expression = as_string(e, "expression");
  if (j.contains("corpus")) {
    const Json& c = j.at("corpus");
    if (!c.is_array()) bad_record("corpus must be an array");
    in.corpus.emplace();
    for (const Json& s : c) in.corpus->push_back(as_string(s, "corpus"));
  }
  const std::vector<double> rect = as_doubles(need(j, "rect"), "rect");
  if (rect.size() != 4) bad_record("rect must have 4 entries");
  std::copy(rect.begin(), rect.end(), in.rect.begin());
  const Json& l = need(j, "lambda");
  if (!l.is_null()) in.lambda = as_double(l, "lambda");
  if (j.contains("lambda_grid")) in.lambda_grid = as_doubles(j.at("lambda_grid"), "lambda_grid");
  const Json& q = need(j, "q_grid");
  if (!q.is_null()) in.q_grid = as_doubles(q, "q_grid");
  in.tol = as_double(need(j, "tol"), "tol");
  in.max_depth = as_int(need(j, "max_depth"), "max_depth");
  in.quad_nodes = as_int(need(j, "quad_nodes"), "quad_nodes");
  in.strict = as_bool(need(j, "strict"), "strict");
  if (j.contains("certify")) in.certify = as_bool(j.at("certify"), "certify");
  if (j.contains("oracle")) in.oracle = as_bool(j.at("oracle"), "oracle");
  if (j.contains("panel_depth")) in.panel_depth = as_int(j.at("panel_depth"), "panel_depth");
  if (j.contains("target")) in.target = as_string(j.at("target"), "target");
  if (j.contains("q")) in.q = as_double(j.at("q"), "q");
  if (j.contains("grid_n")) in.grid_n = as_int(j.at("grid_n"), "grid_n");
  return in;
}

inline RunRecord record_from_json(const Json& j) {
  using namespace detail;
  only_keys(j, {"command", "inputs", "outputs", "timings_ms", "version"}, "record");
  RunRecord r;
  r.command = as_string(need(j, "command"), "command");
  r.inputs = inputs_from_json(need(j, "inputs"));
  r.outputs = need(j, "outputs");
  if (!r.outputs.is_object()) bad_record("outputs must be an object");
  r.timings_ms = need(j, "timings_ms");
  if (!r.timings_ms.is_object()) bad_record("timings_ms must be an object");
  for (const auto& [k, v] : r.timings_ms.items()) as_double(v, "timings_ms");
  r.version = as_string(need(j, "version"), "version");
  return r;
}

inline RunRecord parse_record(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::bad_record(e.what());
  }
  return record_from_json(j);
}

}  // namespace hhcub

#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "exppoly/classify.hpp"
#include "exppoly/ode.hpp"
#include "exppoly/oracle.hpp"

namespace exppoly::io {

using json = nlohmann::json;

// Complex numbers serialize as two-element arrays [re, im] in every schema.

inline json to_json(Cx z) { return json::array({z.real(), z.imag()}); }

inline Cx cx_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument(where + ": expected a [re, im] pair");
  return Cx(j[0].get<double>(), j[1].get<double>());
}

inline json to_json(const ExpSum& f) {
  json terms = json::array();
  for (const ExpTerm& t : f.terms) {
    json poly = json::array();
    for (const Cx& c : t.poly.coeffs) poly.push_back(to_json(c));
    terms.push_back(json{{"freq", to_json(t.freq)}, {"poly", poly}});
  }
  return json{{"terms", terms}};
}

inline ExpSum expsum_from_json(const json& j, const std::string& where = "ExpSum") {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw std::invalid_argument(where + ": expected {\"terms\": [...]}");
  std::vector<ExpTerm> raw;
  for (const json& jt : j["terms"]) {
    if (!jt.is_object() || !jt.contains("freq") || !jt.contains("poly") ||
        !jt["poly"].is_array())
      throw std::invalid_argument(where + ": term needs \"freq\" and \"poly\"");
    ExpTerm t;
    t.freq = cx_from_json(jt["freq"], where + ".freq");
    std::vector<Cx> coeffs;
    for (const json& jc : jt["poly"]) coeffs.push_back(cx_from_json(jc, where + ".poly"));
    t.poly = Poly(std::move(coeffs));
    raw.push_back(std::move(t));
  }
  return canonicalize(std::move(raw));
}

inline json to_json(const OdeSpec& spec) {
  json coeffs = json::array();
  for (const Cx& c : spec.a_coeffs) coeffs.push_back(to_json(c));
  json j{{"k", spec.k},
         {"a_coeffs", coeffs},
         {"a", to_json(spec.a)},
         {"b", to_json(spec.b)},
         {"phi", nullptr}};
  if (spec.phi) j["phi"] = to_json(*spec.phi);
  return j;
}

inline OdeSpec odespec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("OdeSpec: expected an object");
  for (const char* key : {"k", "a_coeffs", "a", "b"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("OdeSpec: missing field \"") + key + "\"");
  OdeSpec spec;
  if (!j["k"].is_number_integer()) throw std::invalid_argument("OdeSpec: k must be an integer");
  spec.k = j["k"].get<int>();
  if (!j["a_coeffs"].is_array())
    throw std::invalid_argument("OdeSpec: a_coeffs must be an array");
  for (const json& jc : j["a_coeffs"]) spec.a_coeffs.push_back(cx_from_json(jc, "OdeSpec.a_coeffs"));
  spec.a = cx_from_json(j["a"], "OdeSpec.a");
  spec.b = cx_from_json(j["b"], "OdeSpec.b");
  if (j.contains("phi") && !j["phi"].is_null()) spec.phi = cx_from_json(j["phi"], "OdeSpec.phi");
  spec.validate();
  return spec;
}

inline json to_json(const VerifyReport& r) {
  return json{{"residual_norm", r.residual_norm},
              {"scale", r.scale},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"residual", to_json(r.residual)}};
}

inline json to_json(const SolutionCandidate& c) {
  json params = json::object();
  for (const auto& [name, value] : c.params) params[name] = to_json(value);
  json residuals = json::array();
  for (const auto& [name, mag] : c.constraint_residuals)
    residuals.push_back(json{{"name", name}, {"magnitude", mag}});
  json j{{"case_tag", to_string(c.case_tag)},
         {"params", params},
         {"phi", to_json(c.phi)},
         {"verified", c.verified},
         {"constraint_residuals", residuals},
         {"f", to_json(c.f)}};
  if (c.m) j["m"] = *c.m;
  return j;
}

inline json to_json(const std::vector<SolutionCandidate>& cs) {
  json arr = json::array();
  for (const SolutionCandidate& c : cs) arr.push_back(to_json(c));
  return arr;
}

inline json to_json(const Rect& r) {
  return json{{"lo", to_json(r.lo)}, {"hi", to_json(r.hi)}};
}

inline Rect rect_from_json(const json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi"))
    throw std::invalid_argument("Rect: expected {\"lo\": [..], \"hi\": [..]}");
  Rect r{cx_from_json(j["lo"], "Rect.lo"), cx_from_json(j["hi"], "Rect.hi")};
  r.validate();
  return r;
}

inline json to_json(const ZeroReport& r) {
  json zeros = json::array();
  for (const LocatedZero& z : r.zeros)
    zeros.push_back(json{{"location", to_json(z.location)}, {"multiplicity", z.multiplicity}});
  return json{{"rect", to_json(r.rect)},
              {"total_count", r.total_count},
              {"zeros", zeros},
              {"winding_total", r.winding_total}};
}

}  // namespace exppoly::io

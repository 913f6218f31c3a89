#pragma once

// Text and JSON forms of vectors, certificates and the regression tables.

#include <string>
#include <vector>

#include <json.hpp>

#include "cobase/group_data.hpp"
#include "cobase/linear_group.hpp"

namespace cobase {

using Json = nlohmann::ordered_json;

inline Json certificate_json(const BaseCertificate& c, const Field& F) {
  Json j;
  j["group"] = c.group_ref;
  j["field"] = c.field;
  j["dim"] = c.dim;
  Json vs = Json::array();
  for (const auto& v : c.vectors) vs.push_back(format_vector(F, v));
  j["vectors"] = vs;
  j["method"] = method_name(c.method);
  j["verified"] = c.verified;
  j["order_chain"] = c.order_chain;
  Json meta = Json::object();
  for (const auto& [k, v] : c.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

inline BaseCertificate certificate_from_json(const Json& j) {
  BaseCertificate c;
  try {
    c.group_ref = j.at("group").get<std::string>();
    c.field = j.at("field").get<std::string>();
    c.dim = j.at("dim").get<int>();
    const FieldPtr F = parse_field_spec(c.field);
    for (const auto& v : j.at("vectors")) c.vectors.push_back(parse_vector(*F, v.get<std::string>(), c.dim));
    const std::string m = j.at("method").get<std::string>();
    if (m == method_name(VerifyMethod::FullEnumeration))
      c.method = VerifyMethod::FullEnumeration;
    else if (m == method_name(VerifyMethod::SchreierStabilizer))
      c.method = VerifyMethod::SchreierStabilizer;
    else
      throw Error(Errc::ParseError, "unknown method '" + m + "'");
    c.verified = j.at("verified").get<bool>();
    c.order_chain = j.at("order_chain").get<std::vector<std::uint64_t>>();
    if (j.contains("metadata"))
      for (const auto& [k, v] : j.at("metadata").items()) c.metadata[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("certificate: ") + e.what());
  }
  return c;
}

// Re-runs the verification a certificate claims against G.
inline bool recheck_certificate(const BaseCertificate& c, const MatrixGroup& G, const Options& opt = {}) {
  if (c.dim != G.n || c.field != G.F().spec_text()) return false;
  const BaseCertificate fresh = verify_base(G, c.vectors, MethodChoice::Auto, opt);
  return fresh.verified == c.verified && fresh.order_chain == c.order_chain;
}

inline Json tables_json() {
  Json t1 = Json::array();
  for (const auto& r : table1_rows())
    t1.push_back({{"group", r.group},
                  {"degree", r.degree},
                  {"max_alternating_section", r.max_alternating_section},
                  {"regular_orbits_p3", r.on_p3.text()},
                  {"regular_orbits_p4", r.on_p4.text()},
                  {"order", r.order}});
  Json t2 = Json::array();
  for (const auto& r : table2_rows()) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
      entries.push_back({{"p", e.p},
                         {"min_stabilizer", e.min_stabilizer},
                         {"min_stabilizer_order", e.min_stabilizer_order}});
    t2.push_back({{"group", r.group}, {"n", r.n}, {"bundled", r.bundled}, {"entries", entries}});
  }
  Json j;
  j["table1"] = t1;
  j["table2"] = t2;
  return j;
}

}  // namespace cobase

#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symcone/chambers.hpp"
#include "symcone/errors.hpp"
#include "symcone/models.hpp"
#include "symcone/moves.hpp"

namespace symcone {

// nlohmann::json keeps object keys sorted, which gives the canonical order.
using Json = nlohmann::json;

namespace io_detail {

inline std::string where(const std::string& field) { return field.empty() ? "document" : "field \"" + field + "\""; }

inline const Json& member(const Json& j, const std::string& key, const std::string& ctx) {
  require(j.is_object(), ErrorKind::MalformedInput, where(ctx) + " must be an object");
  auto it = j.find(key);
  require(it != j.end(), ErrorKind::MalformedInput,
          "missing " + where(ctx.empty() ? key : ctx + "." + key));
  return *it;
}

inline std::string get_string(const Json& j, const std::string& ctx) {
  require(j.is_string(), ErrorKind::MalformedInput, where(ctx) + " must be a string");
  return j.get<std::string>();
}

inline long get_int(const Json& j, const std::string& ctx) {
  require(j.is_number_integer(), ErrorKind::MalformedInput, where(ctx) + " must be an integer");
  return j.get<long>();
}

inline std::vector<std::string> get_strings(const Json& j, const std::string& ctx) {
  require(j.is_array(), ErrorKind::MalformedInput, where(ctx) + " must be an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<long> get_ints(const Json& j, const std::string& ctx) {
  require(j.is_array(), ErrorKind::MalformedInput, where(ctx) + " must be an array");
  std::vector<long> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace io_detail

inline Json rational_to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j, const std::string& ctx) {
  require(j.is_string(), ErrorKind::MalformedInput,
          io_detail::where(ctx) + ": rationals are written as \"p/q\" strings, got " + j.dump());
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::MalformedInput, io_detail::where(ctx) + ": " + e.what());
  }
}

inline Json class_to_json(const ClassVector& v) {
  Json arr = Json::array();
  for (const auto& x : v.coords()) arr.push_back(x.str());
  return arr;
}

inline ClassVector class_from_json(const Json& j, const std::string& ctx) {
  require(j.is_array(), ErrorKind::MalformedInput, io_detail::where(ctx) + " must be an array");
  ClassVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = rational_from_json(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::MalformedInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

inline Json model_to_json(const CurveModel& model) {
  const auto& lat = model.lattice();
  Json j;
  j["rank"] = lat.rank();
  j["gram"] = lat.gram();
  j["labels"] = lat.labels();
  Json curves = Json::array();
  for (const auto& c : model.curves()) {
    Json cls = Json::array();
    for (const auto& x : c.cls.coords()) cls.push_back(x.num().get_si());
    curves.push_back(Json{{"label", c.label}, {"class", cls}, {"genus", c.genus}});
  }
  j["curves"] = curves;
  if (lat.canonical_class()) j["canonical"] = class_to_json(*lat.canonical_class());
  if (lat.reference_class()) j["reference"] = class_to_json(*lat.reference_class());
  j["completeness_assumed"] = model.completeness_assumed();
  if (!model.name().empty()) j["name"] = model.name();
  if (!model.notes().empty()) j["notes"] = model.notes();
  return j;
}

inline std::shared_ptr<const CurveModel> model_from_json(const Json& j) {
  using namespace io_detail;
  require(j.is_object(), ErrorKind::MalformedInput, "model document must be a JSON object");
  const long rank = get_int(member(j, "rank", ""), "rank");
  require(rank > 0, ErrorKind::MalformedInput, "field \"rank\" must be positive");
  const Json& gj = member(j, "gram", "");
  require(gj.is_array() && static_cast<long>(gj.size()) == rank, ErrorKind::MalformedInput,
          "field \"gram\" must have rank rows");
  std::vector<std::vector<long>> gram;
  for (std::size_t i = 0; i < gj.size(); ++i) gram.push_back(get_ints(gj[i], "gram[" + std::to_string(i) + "]"));
  auto labels = get_strings(member(j, "labels", ""), "labels");
  std::optional<ClassVector> canonical, reference;
  if (j.contains("canonical")) canonical = class_from_json(j["canonical"], "canonical");
  if (j.contains("reference")) reference = class_from_json(j["reference"], "reference");
  const Json& cj = member(j, "curves", "");
  require(cj.is_array(), ErrorKind::MalformedInput, "field \"curves\" must be an array");
  std::vector<CurveData> curves;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string ctx = "curves[" + std::to_string(i) + "]";
    CurveData c;
    c.label = get_string(member(cj[i], "label", ctx), ctx + ".label");
    auto coords = get_ints(member(cj[i], "class", ctx), ctx + ".class");
    c.cls = ClassVector::from_ints(coords);
    c.genus = get_int(member(cj[i], "genus", ctx), ctx + ".genus");
    curves.push_back(std::move(c));
  }
  const Json& comp = member(j, "completeness_assumed", "");
  require(comp.is_boolean(), ErrorKind::MalformedInput, "field \"completeness_assumed\" must be a boolean");
  std::string name = j.contains("name") ? get_string(j["name"], "name") : "";
  std::vector<std::string> notes = j.contains("notes") ? get_strings(j["notes"], "notes") : std::vector<std::string>{};
  IntersectionLattice lat(std::move(gram), std::move(labels), canonical, reference);
  return std::make_shared<const CurveModel>(std::move(lat), std::move(curves), comp.get<bool>(), std::move(name),
                                            std::move(notes));
}

/// A built-in name ("kk", "kk-extended", "hesse", "e6", "ruled g k parity")
/// or the path of a model document.
inline std::shared_ptr<const CurveModel> load_model(const std::string& ref,
                                                     const std::filesystem::path& base_dir = {}) {
  if (auto m = builtin_model(ref)) return *m;
  std::filesystem::path p(ref);
  if (!std::filesystem::exists(p) && !base_dir.empty() && p.is_relative()) p = base_dir / p;
  require(std::filesystem::exists(p), ErrorKind::MalformedInput, "unknown model \"" + ref + "\"");
  return model_from_json(parse_json_text(read_file(p.string())));
}

// ---------------------------------------------------------------------------
// Certificate documents
// ---------------------------------------------------------------------------

inline Json move_to_json(const Move& m) {
  if (const auto* a = std::get_if<Inflate>(&m)) return Json{{"op", "inflate"}, {"object", a->object_id}, {"t", a->t.str()}};
  if (const auto* b = std::get_if<InflateNonneg>(&m))
    return Json{{"op", "inflate_nonneg"}, {"object", b->object_id}, {"t", b->t.str()}};
  const auto& s = std::get<SmoothAndReinstate>(m);
  return Json{{"op", "smooth"},
              {"constituents", s.constituent_ids},
              {"reinstate", s.reinstate_ids},
              {"new_id", s.new_id}};
}

inline Move move_from_json(const Json& j, const std::string& ctx) {
  using namespace io_detail;
  const std::string op = get_string(member(j, "op", ctx), ctx + ".op");
  if (op == "inflate" || op == "inflate_nonneg") {
    std::string obj = get_string(member(j, "object", ctx), ctx + ".object");
    Rational t = rational_from_json(member(j, "t", ctx), ctx + ".t");
    if (op == "inflate") return Inflate{obj, t};
    return InflateNonneg{obj, t};
  }
  require(op == "smooth", ErrorKind::MalformedInput, where(ctx + ".op") + ": unknown move \"" + op + "\"");
  return SmoothAndReinstate{get_strings(member(j, "constituents", ctx), ctx + ".constituents"),
                            get_strings(member(j, "reinstate", ctx), ctx + ".reinstate"),
                            get_string(member(j, "new_id", ctx), ctx + ".new_id")};
}

inline Json certificate_to_json(const Certificate& cert) {
  require(cert.model != nullptr, ErrorKind::Configuration, "certificate has no model");
  Json j;
  j["model"] = cert.model_ref.empty() ? model_to_json(*cert.model) : Json(cert.model_ref);
  j["base_class"] = class_to_json(cert.base_class);
  j["base_justification"] = cert.base_justification;
  j["objects"] = cert.objects;
  Json moves = Json::array();
  for (const auto& m : cert.moves) moves.push_back(move_to_json(m));
  j["moves"] = moves;
  j["target_class"] = class_to_json(cert.target_class);
  j["annotations"] = cert.annotations;
  return j;
}

inline Certificate certificate_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  using namespace io_detail;
  require(j.is_object(), ErrorKind::MalformedInput, "certificate document must be a JSON object");
  Certificate cert;
  const Json& mj = member(j, "model", "");
  if (mj.is_string()) {
    cert.model_ref = mj.get<std::string>();
    cert.model = load_model(cert.model_ref, base_dir);
  } else {
    cert.model = model_from_json(mj);
  }
  cert.base_class = class_from_json(member(j, "base_class", ""), "base_class");
  if (j.contains("base_justification")) cert.base_justification = get_string(j["base_justification"], "base_justification");
  cert.objects = get_strings(member(j, "objects", ""), "objects");
  const Json& mv = member(j, "moves", "");
  require(mv.is_array(), ErrorKind::MalformedInput, "field \"moves\" must be an array");
  for (std::size_t i = 0; i < mv.size(); ++i) cert.moves.push_back(move_from_json(mv[i], "moves[" + std::to_string(i) + "]"));
  cert.target_class = class_from_json(member(j, "target_class", ""), "target_class");
  if (j.contains("annotations")) cert.annotations = get_strings(j["annotations"], "annotations");
  return cert;
}

inline std::string emit_certificate(const Certificate& cert) { return canonical_dump(certificate_to_json(cert)); }
inline Certificate parse_certificate(const std::string& text, const std::filesystem::path& base_dir = {}) {
  return certificate_from_json(parse_json_text(text), base_dir);
}
inline std::string emit_model(const CurveModel& model) { return canonical_dump(model_to_json(model)); }
inline std::shared_ptr<const CurveModel> parse_model(const std::string& text) {
  return model_from_json(parse_json_text(text));
}

}  // namespace symcone

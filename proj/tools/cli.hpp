#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symcone/symcone.hpp"

namespace symcone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitMalformed = 2;
inline constexpr int kExitUnsupported = 3;

inline constexpr const char* kJsonSentinel = "---JSON---";

/// Coordinates ("1/2, 0, -3") or a linear combination of basis and curve
/// labels ("omega0 - 8*C1 - 21/2*D123"); "K" names the canonical class.
inline ClassVector parse_class_spec(const CurveModel& model, const std::string& spec) {
  const auto& lat = model.lattice();
  const bool has_letter = std::any_of(spec.begin(), spec.end(), [](unsigned char c) { return std::isalpha(c); });
  if (!has_letter) {
    std::string norm = spec;
    for (auto& c : norm)
      if (c == ',') c = ' ';
    std::istringstream in(norm);
    std::vector<Rational> xs;
    for (std::string tok; in >> tok;) xs.push_back(Rational::parse(tok));
    require(xs.size() == lat.rank(), ErrorKind::MalformedInput,
            "class has " + std::to_string(xs.size()) + " coordinates, model rank is " + std::to_string(lat.rank()));
    return ClassVector(std::move(xs));
  }
  ClassVector out = ClassVector::zero(lat.rank());
  std::size_t i = 0;
  auto skip = [&] {
    while (i < spec.size() && std::isspace(static_cast<unsigned char>(spec[i]))) ++i;
  };
  bool first = true;
  while (true) {
    skip();
    if (i >= spec.size()) break;
    Rational sign = 1;
    if (spec[i] == '+' || spec[i] == '-') {
      if (spec[i] == '-') sign = -1;
      ++i;
      skip();
    } else {
      require(first, ErrorKind::MalformedInput, "expected + or - at position " + std::to_string(i));
    }
    first = false;
    Rational coef = 1;
    std::size_t j = i;
    while (j < spec.size() && (std::isdigit(static_cast<unsigned char>(spec[j])) || spec[j] == '/')) ++j;
    if (j > i) {
      coef = Rational::parse(spec.substr(i, j - i));
      i = j;
      skip();
      require(i < spec.size() && spec[i] == '*', ErrorKind::MalformedInput,
              "expected '*' after coefficient at position " + std::to_string(i));
      ++i;
      skip();
    }
    j = i;
    while (j < spec.size() && !std::isspace(static_cast<unsigned char>(spec[j])) && spec[j] != '+' && spec[j] != '-' &&
           spec[j] != '*')
      ++j;
    const std::string name = spec.substr(i, j - i);
    require(!name.empty(), ErrorKind::MalformedInput, "missing label at position " + std::to_string(i));
    i = j;
    ClassVector term;
    if (auto b = lat.index_of(name))
      term = lat.basis(*b);
    else if (auto c = model.curve_index(name))
      term = model.curve(*c).cls;
    else if (name == "K")
      term = lat.require_canonical();
    else
      fail(ErrorKind::MalformedInput, "unknown label \"" + name + "\"");
    out += sign * coef * term;
  }
  return out;
}

inline std::vector<std::size_t> parse_curve_set(const CurveModel& model, const std::string& spec) {
  std::string norm = spec;
  for (auto& c : norm)
    if (c == ',') c = ' ';
  std::istringstream in(norm);
  std::vector<std::size_t> out;
  for (std::string tok; in >> tok;) {
    auto idx = model.curve_index(tok);
    require(idx.has_value(), ErrorKind::MalformedInput, "unknown curve \"" + tok + "\"");
    out.push_back(*idx);
  }
  return out;
}

inline std::string join_specs(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ",") + p;
  return s;
}

inline void trailer(std::ostream& out, const Json& j) { out << kJsonSentinel << "\n" << canonical_dump(j); }

inline std::string label_list(const CurveModel& model, const std::vector<std::size_t>& idx) {
  std::string s;
  for (auto i : idx) s += (s.empty() ? "" : ", ") + model.curve(i).label;
  return s;
}

inline int cmd_classify(const std::string& model_ref, const std::string& class_spec, std::ostream& out) {
  auto model = load_model(model_ref);
  const ClassVector a = parse_class_spec(*model, class_spec);
  const Classification c = classify(*model, a);
  const auto& g = c.descriptor.admissible_set;
  if (c.tag == ChamberTag::InteriorKahler)
    out << "interior-Kähler\n";
  else
    out << to_string(c.tag) << "; G = " << g.size() << " curves\n";
  if (!g.empty()) out << "G: " << label_list(*model, g) << "\n";
  out << "square: " << model->square(a) << "\n";
  out << "pairings:\n";
  Json pj;
  for (std::size_t i = 0; i < model->curves().size(); ++i) {
    out << "  " << model->curve(i).label << " " << c.pairings[i] << "\n";
    pj[model->curve(i).label] = c.pairings[i].str();
  }
  Json gj = Json::array();
  for (auto i : g) gj.push_back(model->curve(i).label);
  trailer(out, Json{{"tag", to_string(c.tag)}, {"admissible_set", gj}, {"pairings", pj},
                    {"square", model->square(a).str()}, {"class", class_to_json(a)}});
  return kExitOk;
}

inline int cmd_verify(const std::string& path, std::ostream& out) {
  const Certificate cert = parse_certificate(read_file(path), std::filesystem::path(path).parent_path());
  const VerificationReport r = verify_certificate(cert);
  out << "base class: " << (r.base_ok ? "Kahler" : "rejected") << ", square " << r.base_square << "\n";
  Json ledger = Json::array();
  for (const auto& m : r.ledger) {
    out << "move " << m.index << ": " << m.move << " -> " << (m.ok ? "ok" : "FAILED");
    if (m.bound) out << " (2A/h = " << *m.bound << ")";
    out << ", square " << m.square_after << "\n";
    if (!m.ok) out << "  " << m.message << "\n";
    Json areas = Json::object();
    for (const auto& [id, a] : m.areas) areas[id] = a.str();
    Json mj{{"index", m.index}, {"move", m.move}, {"ok", m.ok}, {"square_after", m.square_after.str()},
            {"class_after", class_to_json(m.class_after)}, {"areas", areas}};
    if (m.bound) mj["bound"] = m.bound->str();
    if (!m.ok) mj["message"] = m.message;
    ledger.push_back(mj);
  }
  if (r.passed)
    out << "PASS: final class equals target\n";
  else
    out << "FAIL: " << r.first_failure << "\n";
  Json j{{"passed", r.passed}, {"first_failure", r.first_failure}, {"ledger", ledger},
         {"annotations", r.annotations}, {"base_square", r.base_square.str()}};
  trailer(out, j);
  return r.passed ? kExitOk : kExitVerifyFailed;
}

inline int cmd_plan(const std::string& model_ref, const std::string& class_spec, std::ostream& out) {
  auto model = load_model(model_ref);
  const ClassVector target = parse_class_spec(*model, class_spec);
  PlanOptions opt;
  opt.model_ref = builtin_model(model_ref) ? model_ref : "";
  const PlanResult r = plan(model, target, opt);
  if (const auto* u = std::get_if<Unsupported>(&r)) {
    out << "unsupported: " << u->reason << "\n";
    return kExitUnsupported;
  }
  out << emit_certificate(std::get<Certificate>(r));
  return kExitOk;
}

inline int cmd_pair(const std::string& model_ref, const std::string& a_spec, const std::string& b_spec,
                    std::ostream& out) {
  auto model = load_model(model_ref);
  const ClassVector a = parse_class_spec(*model, a_spec);
  const ClassVector b = parse_class_spec(*model, b_spec);
  const Rational p = model->pair(a, b);
  out << p << "\n";
  trailer(out, Json{{"pairing", p.str()}});
  return kExitOk;
}

inline int cmd_reflect(const std::string& model_ref, const std::string& class_spec, const std::string& curve,
                       std::ostream& out) {
  auto model = load_model(model_ref);
  const ClassVector a = parse_class_spec(*model, class_spec);
  auto idx = model->curve_index(curve);
  require(idx.has_value(), ErrorKind::MalformedInput, "unknown curve \"" + curve + "\"");
  const ClassVector r = reflect(model->lattice(), a, model->curve(*idx).cls);
  out << "reflected: " << r.str() << "\n";
  out << "square: " << model->square(a) << " -> " << model->square(r) << "\n";
  out << "integral: " << (r.is_integral() ? "yes" : "no") << "\n";
  trailer(out, Json{{"reflected", class_to_json(r)}, {"square", model->square(r).str()}, {"integral", r.is_integral()}});
  return kExitOk;
}

inline int cmd_corner(const std::string& model_ref, const std::string& class_spec, const std::string& set,
                      const std::string& eps, std::ostream& out) {
  auto model = load_model(model_ref);
  const ClassVector a = parse_class_spec(*model, class_spec);
  const ChamberDescriptor g = make_descriptor(*model, parse_curve_set(*model, set));
  const CornerPoint cp = corner_point(*model, a, g);
  out << "corner: " << cp.point.str() << "\n";
  out << "square: " << model->square(a) << " -> " << model->square(cp.point) << "\n";
  Json shifts = Json::object();
  for (std::size_t i = 0; i < g.admissible_set.size(); ++i) {
    out << "  shift " << model->curve(g.admissible_set[i]).label << " " << cp.shifts[i] << "\n";
    shifts[model->curve(g.admissible_set[i]).label] = cp.shifts[i].str();
  }
  Json j{{"corner", class_to_json(cp.point)}, {"shifts", shifts}, {"square", model->square(cp.point).str()}};
  if (!eps.empty()) {
    const ChamberPoint ch = chamber_point(*model, cp.point, g, Rational::parse(eps));
    out << "chamber: " << ch.point.str() << " (eps = " << ch.epsilon << ")\n";
    j["chamber"] = class_to_json(ch.point);
    j["epsilon"] = ch.epsilon.str();
  }
  trailer(out, j);
  return kExitOk;
}

inline int cmd_dynkin(const std::string& model_ref, const std::string& set, std::ostream& out) {
  auto model = load_model(model_ref);
  const DualGraph g = dual_graph(*model, parse_curve_set(*model, set));
  Json comps = Json::array();
  for (const auto& comp : connected_components(g)) {
    const DualGraph sub = subgraph(g, comp);
    const DynkinType t = dynkin_classify(sub);
    const bool definite = is_negative_definite(curve_gram(*model, sub.vertices));
    out << "{" << label_list(*model, sub.vertices) << "}: " << t.str()
        << (definite ? ", negative definite" : ", not negative definite") << "\n";
    Json names = Json::array();
    for (auto i : sub.vertices) names.push_back(model->curve(i).label);
    comps.push_back(Json{{"curves", names}, {"type", t.str()}, {"negative_definite", definite}});
  }
  trailer(out, Json{{"components", comps}});
  return kExitOk;
}

inline int cmd_example(const std::vector<std::string>& args, const std::string& t_scale, std::ostream& out) {
  require(!args.empty(), ErrorKind::MalformedInput, "example needs a name: kk, kk-extended, hesse, ruled, kk-gamma0");
  const std::string& name = args[0];
  if (name == "kk-gamma0") {
    out << emit_certificate(kk_gamma0_certificate(Rational::parse(t_scale)));
    return kExitOk;
  }
  if (name == "ruled") {
    require(args.size() == 4, ErrorKind::MalformedInput, "usage: example ruled <g> <k> <parity>");
    const std::string ref = "ruled " + args[1] + " " + args[2] + " " + args[3];
    out << emit_model(**builtin_model(ref));
    return kExitOk;
  }
  require(args.size() == 1, ErrorKind::MalformedInput, "example " + name + " takes no arguments");
  auto m = builtin_model(name);
  require(m.has_value(), ErrorKind::MalformedInput, "unknown example \"" + name + "\"");
  out << emit_model(**m);
  return kExitOk;
}

/// "k:a:b;k:a:b" for g(z) = a z^k + b z^{k+1}.
inline std::vector<LocalCurveModel> parse_model_spec(const std::string& spec) {
  std::vector<LocalCurveModel> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ';');) {
    if (item.empty()) continue;
    std::stringstream is(item);
    std::string ks, as, bs;
    std::getline(is, ks, ':');
    std::getline(is, as, ':');
    std::getline(is, bs, ':');
    try {
      const int k = std::stoi(ks);
      const double a = std::stod(as);
      const double b = bs.empty() ? 0.0 : std::stod(bs);
      out.push_back(LocalCurveModel::polynomial(a, k, b == 0.0 ? std::vector<cplx>{} : std::vector<cplx>{b}));
    } catch (const std::logic_error&) {
      fail(ErrorKind::MalformedInput, "bad model spec \"" + item + "\", expected k:a:b");
    }
  }
  require(!out.empty(), ErrorKind::MalformedInput, "empty model spec");
  return out;
}

inline int cmd_perturb(const std::vector<double>& eps, const std::string& spec, std::ostream& out) {
  require(!eps.empty(), ErrorKind::MalformedInput, "perturb needs --eps");
  const auto models = parse_model_spec(spec);
  Json runs = Json::array();
  for (double e : eps) {
    const auto pts = perturbed_intersections(models, e);
    out << intersection_table(pts, e);
    Json pj = Json::array();
    for (const auto& p : pts) {
      std::ostringstream z;
      z << std::setprecision(17) << p.z.real() << "," << p.z.imag();
      pj.push_back(Json{{"model", p.model}, {"root", p.root}, {"z", z.str()}, {"sign", p.sign}});
    }
    runs.push_back(Json{{"eps", e}, {"points", pj}, {"distinct", all_distinct(pts)}});
  }
  Json j{{"runs", runs}};
  if (eps.size() >= 4) {
    const ContactStudy st = order_of_contact_study(models, eps);
    Json sj = Json::array();
    for (const auto& s : st.slopes) {
      out << "model " << s.model << ": slope ";
      if (s.slope)
        out << *s.slope << " (residual " << s.residual << ", " << s.points << " points)\n";
      else
        out << "n/a (" << s.points << " usable points)\n";
      for (const auto& n : s.notes) out << "  " << n << "\n";
      sj.push_back(Json{{"model", s.model}, {"slope", s.slope ? Json(*s.slope) : Json()}, {"points", s.points}});
    }
    j["slopes"] = sj;
  }
  trailer(out, j);
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"symplectic cone toolkit"};
  app.require_subcommand(1);
  std::string model_ref, class_spec_single, other, curve, set, eps_str, t_scale = "1", cert_path;
  std::vector<std::string> class_parts, example_args;
  std::vector<double> eps_list;
  std::string model_spec = "2:1:1";

  auto add_class = [&](CLI::App* sub) {
    sub->add_option("--model,-m", model_ref, "built-in name or model document path")->required();
    sub->add_option("--class,-c", class_parts, "coordinates p/q (repeatable) or a label expression")->required();
  };
  auto* classify_cmd = app.add_subcommand("classify", "chamber tag, admissible set and pairings of a class");
  add_class(classify_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "replay a certificate");
  verify_cmd->add_option("certificate", cert_path)->required();
  auto* plan_cmd = app.add_subcommand("plan", "search for a certificate");
  add_class(plan_cmd);
  auto* pair_cmd = app.add_subcommand("pair", "intersection pairing of two classes");
  add_class(pair_cmd);
  pair_cmd->add_option("--with", other, "second class")->required();
  auto* reflect_cmd = app.add_subcommand("reflect", "reflect a class in a curve");
  add_class(reflect_cmd);
  reflect_cmd->add_option("--curve", curve)->required();
  auto* corner_cmd = app.add_subcommand("corner", "corner point (and chamber point) for a curve set");
  add_class(corner_cmd);
  corner_cmd->add_option("--set", set, "comma-separated curve labels")->required();
  corner_cmd->add_option("--eps", eps_str, "also compute the chamber point");
  auto* dynkin_cmd = app.add_subcommand("dynkin", "Dynkin type of a curve set");
  dynkin_cmd->add_option("--model,-m", model_ref)->required();
  dynkin_cmd->add_option("--set", set)->required();
  auto* example_cmd = app.add_subcommand("example", "emit a built-in model or the kk-gamma0 certificate");
  example_cmd->add_option("name", example_args)->required();
  example_cmd->add_option("--t-scale", t_scale);
  auto* perturb_cmd = app.add_subcommand("perturb", "local perturbation experiment");
  perturb_cmd->add_option("--eps", eps_list)->required();
  perturb_cmd->add_option("--model-spec", model_spec, "k:a:b;... for a z^k + b z^(k+1)");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }

  try {
    const std::string cls = join_specs(class_parts);
    if (*classify_cmd) return cmd_classify(model_ref, cls, out);
    if (*verify_cmd) return cmd_verify(cert_path, out);
    if (*plan_cmd) return cmd_plan(model_ref, cls, out);
    if (*pair_cmd) return cmd_pair(model_ref, cls, other, out);
    if (*reflect_cmd) return cmd_reflect(model_ref, cls, curve, out);
    if (*corner_cmd) return cmd_corner(model_ref, cls, set, eps_str, out);
    if (*dynkin_cmd) return cmd_dynkin(model_ref, set, out);
    if (*example_cmd) return cmd_example(example_args, t_scale, out);
    if (*perturb_cmd) return cmd_perturb(eps_list, model_spec, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}

}  // namespace symcone::cli

#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wres/sphere.hpp"

namespace wres {

/* A coefficient table ready for serialization: the table itself, the
 * derivative basis its entries refer to, and free-form metadata.  Two
 * bases are supported and hold the same numbers (every entry has total
 * derivative order n, so the i-powers of D^a D^b collapse into the
 * global sign the ordinary-basis pairing is normalized by):
 *
 *   partials = "D":        pairing(f, h) = sum entry * D^a f D^b h
 *   partials = "ordinary":  (-1)^(n/2) pairing(f, h)
 *                           = sum entry * partial^a f partial^b h
 */
struct OutputDocument {
  BilinearForm table;
  std::string partials = "ordinary";
  std::map<std::string, std::string> meta;
};

namespace detail {

inline nlohmann::ordered_json exponents_json(const MultiIndex& m) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (int i = 0; i < m.dim(); ++i) a.push_back(m[i]);
  return a;
}

inline MultiIndex exponents_from_json(const nlohmann::ordered_json& j) {
  std::vector<int> e;
  for (const auto& v : j) e.push_back(v.get<int>());
  MultiIndex m(static_cast<int>(e.size()));
  for (size_t i = 0; i < e.size(); ++i) m = m.bump(static_cast<int>(i), e[i]);
  return m;
}

inline std::string convention_string(SphereConvention c) { return sphere_convention_name(c); }

inline SphereConvention convention_from_string(const std::string& s) {
  if (s == "mass-one") return SphereConvention::mass_one;
  if (s == "surface") return SphereConvention::surface_area;
  throw std::invalid_argument("unknown sphere convention: " + s);
}

}  // namespace detail

/* Integers of unbounded size travel as decimal strings; the small
 * structural fields (dimension, exponents, pi power) are plain JSON
 * integers.  Key order is fixed, so serialization is byte-stable. */
inline nlohmann::ordered_json to_json(const OutputDocument& doc) {
  nlohmann::ordered_json out;
  out["dim"] = doc.table.dim;
  out["convention"] = detail::convention_string(doc.table.convention);
  out["partials"] = doc.partials;
  out["pi_power"] = doc.table.pi_power;
  out["entries"] = nlohmann::ordered_json::array();
  for (const auto& [key, value] : doc.table.entries) {
    nlohmann::ordered_json e;
    e["a"] = detail::exponents_json(key.a);
    e["b"] = detail::exponents_json(key.b);
    e["num"] = value.numerator().get_str();
    e["den"] = value.denominator().get_str();
    out["entries"].push_back(std::move(e));
  }
  out["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : doc.meta) out["meta"][k] = v;
  return out;
}

inline OutputDocument document_from_json(const nlohmann::ordered_json& j) {
  OutputDocument doc;
  doc.table.dim = j.at("dim").get<int>();
  doc.table.convention = detail::convention_from_string(j.at("convention").get<std::string>());
  doc.partials = j.at("partials").get<std::string>();
  doc.table.pi_power = j.at("pi_power").get<int>();
  for (const auto& e : j.at("entries")) {
    const MultiIndex a = detail::exponents_from_json(e.at("a"));
    const MultiIndex b = detail::exponents_from_json(e.at("b"));
    const Integer num(e.at("num").get<std::string>());
    const Integer den(e.at("den").get<std::string>());
    doc.table.entries.emplace(BilinearKey{a, b}, Rational(num) / Rational(den));
  }
  if (j.contains("meta"))
    for (const auto& [k, v] : j.at("meta").items()) doc.meta[k] = v.get<std::string>();
  return doc;
}

inline std::string to_json_string(const OutputDocument& doc) { return to_json(doc).dump(2) + "\n"; }

/* Plain-text rendering: one entry per line, exponents then the value
 * (with its power of pi when the surface convention carries one). */
inline std::string render_text(const OutputDocument& doc) {
  std::ostringstream os;
  os << "dim " << doc.table.dim << ", convention " << detail::convention_string(doc.table.convention)
     << ", partials " << doc.partials << ", entries " << doc.table.entries.size() << "\n";
  for (const auto& [k, v] : doc.meta) os << "# " << k << ": " << v << "\n";
  for (const auto& [key, value] : doc.table.entries) {
    os << "a=" << key.a.to_string() << "  b=" << key.b.to_string() << "  " << value.to_string();
    if (doc.table.pi_power != 0) os << " * pi^" << doc.table.pi_power;
    os << "\n";
  }
  return os.str();
}

namespace detail {

inline std::string latex_partial(const MultiIndex& m, const std::string& op) {
  std::ostringstream os;
  for (int i = 0; i < m.dim(); ++i) {
    if (m[i] == 0) continue;
    os << "\\" << op << "_{" << (i + 1) << "}";
    if (m[i] > 1) os << "^{" << m[i] << "}";
  }
  return os.str();
}

inline std::string latex_rational(const Rational& r) {
  if (r.denominator() == 1) return r.numerator().get_str();
  const bool neg = r.sign() < 0;
  return std::string(neg ? "-" : "") + "\\tfrac{" + r.abs().numerator().get_str() + "}{" +
         r.denominator().get_str() + "}";
}

}  // namespace detail

/* LaTeX rendering: the pairing as a displayed sum, one summand per line. */
inline std::string render_latex(const OutputDocument& doc) {
  const bool ordinary = doc.partials == "ordinary";
  const std::string op = ordinary ? "partial" : "mathrm{D}";
  std::ostringstream os;
  os << "% dim " << doc.table.dim << ", convention "
     << detail::convention_string(doc.table.convention) << ", partials " << doc.partials << "\n";
  os << "\\begin{aligned}\n\\Omega" << (ordinary ? "^{\\mathrm{norm}}" : "") << "(f,h) = {}&";
  bool first = true;
  for (const auto& [key, value] : doc.table.entries) {
    std::string term = detail::latex_rational(value);
    if (doc.table.pi_power != 0) {
      term += " \\pi";
      if (doc.table.pi_power != 1) term += "^{" + std::to_string(doc.table.pi_power) + "}";
    }
    term += " \\, " + detail::latex_partial(key.a, op) + " f \\, " +
            detail::latex_partial(key.b, op) + " h";
    if (!first) os << " \\\\\n  &" << (value.sign() >= 0 ? "+ " : "");
    os << term;
    first = false;
  }
  os << "\n\\end{aligned}\n";
  return os.str();
}

}  // namespace wres

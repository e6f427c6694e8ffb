/// @file json_io.hpp
/// @brief JSON encoding of algebra and Omega elements.
///
///   {"ring": "z" | {"zmod": M}, "trunc": N, "gens": K, "weights": [...],
///    "terms": [{"coeff": "-12", "monomial": [[i, e], ...]}, ...]}
///
/// Generator indices are 1-based, matching the text syntax. Omega terms carry
/// "dx": i and "phi": "unit" | [p, e], and either a monomial coefficient
/// or "aug_scalar" for the scalar part of the A_+ coefficient.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dpalg/dpcore.hpp"
#include "dpalg/envelope.hpp"
#include "dpalg/kahler.hpp"
#include "dpalg/linalg.hpp"

namespace dpalg::json_io {

using nlohmann::json;

inline Integer parse_digits(const json& j) {
  std::string s = j.get<std::string>();
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  Integer out;
  if (s.empty() || out.set_str(s, 10) != 0) throw Error("malformed integer \"" + j.get<std::string>() + "\"");
  return out;
}

inline json ring_to_json(const RingSpec& r) {
  if (r.is_integers()) return "z";
  const Integer& m = r.modulus();
  return json{{"zmod", m.fits_slong_p() ? json(m.get_si()) : json(m.get_str())}};
}

inline RingSpec ring_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "z") return RingSpec::integers();
  if (j.is_object() && j.contains("zmod")) {
    const json& m = j.at("zmod");
    return RingSpec::integers_mod(m.is_string() ? parse_digits(m) : Integer(std::to_string(m.get<long long>())));
  }
  throw Error("ring must be \"z\" or {\"zmod\": M}");
}

inline json spec_header(const AlgebraSpec& spec) {
  return json{{"ring", ring_to_json(spec.ring())},
              {"trunc", spec.truncation()},
              {"gens", spec.generator_count()},
              {"weights", spec.weights()}};
}

inline AlgebraSpec spec_from_json(const json& j) {
  const RingSpec ring = ring_from_json(j.at("ring"));
  const unsigned n = j.at("trunc").get<unsigned>();
  if (j.contains("weights")) return AlgebraSpec(ring, j.at("weights").get<std::vector<unsigned>>(), n);
  return AlgebraSpec(ring, j.at("gens").get<unsigned>(), n);
}

inline json monomial_to_json(const DPMonomial& m) {
  json out = json::array();
  for (const auto& [gen, e] : m.factors()) out.push_back({gen + 1, e});
  return out;
}

inline DPMonomial monomial_from_json(const AlgebraSpec& spec, const json& j) {
  std::vector<unsigned> exps(spec.generator_count(), 0);
  for (const auto& f : j) {
    const unsigned i = f.at(0).get<unsigned>();
    const unsigned e = f.at(1).get<unsigned>();
    if (i < 1 || i > spec.generator_count()) throw Error("monomial: generator index out of range");
    if (e < 1) throw Error("monomial: exponent must be positive");
    exps[i - 1] += e;
  }
  return DPMonomial(std::move(exps));
}

inline std::string signed_digits(const Integer& c) { return c < 0 ? c.get_str() : "+" + c.get_str(); }


inline json to_json(const DPElement& a) {
  json out = spec_header(a.spec());
  out["terms"] = json::array();
  for (const auto& [m, c] : a.terms()) out["terms"].push_back({{"coeff", signed_digits(c)}, {"monomial", monomial_to_json(m)}});
  return out;
}

inline DPElement element_from_json(const json& j) {
  const AlgebraSpec spec = spec_from_json(j);
  DPElement out(spec);
  for (const auto& t : j.at("terms")) {
    out.add_term(monomial_from_json(spec, t.at("monomial")), parse_digits(t.at("coeff")));
  }
  return out;
}

inline json phi_to_json(const PhiMonomial& phi) {
  if (phi.is_unit()) return "unit";
  return json::array({phi.prime, phi.exponent});
}

inline PhiMonomial phi_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "unit") return PhiMonomial::unit();
  return PhiMonomial::phi(j.at(0).get<unsigned>(), j.at(1).get<unsigned>());
}

inline json to_json(const kahler::OmegaElement& w) {
  json out = spec_header(w.spec());
  out["terms"] = json::array();
  for (const auto& [gen, u] : w.terms()) {
    for (const auto& [phi, c] : u.terms()) {
      if (c.scalar_part() != 0) {
        out["terms"].push_back({{"dx", gen + 1}, {"phi", phi_to_json(phi)}, {"aug_scalar", signed_digits(c.scalar_part())}});
      }
      for (const auto& [m, coeff] : c.algebra_part().terms()) {
        out["terms"].push_back({{"dx", gen + 1},
                                {"phi", phi_to_json(phi)},
                                {"coeff", signed_digits(coeff)},
                                {"monomial", monomial_to_json(m)}});
      }
    }
  }
  return out;
}

inline kahler::OmegaElement omega_from_json(const json& j) {
  const AlgebraSpec spec = spec_from_json(j);
  kahler::OmegaElement out(spec);
  for (const auto& t : j.at("terms")) {
    const unsigned i = t.at("dx").get<unsigned>();
    if (i < 1 || i > spec.generator_count()) throw Error("omega term: dx index out of range");
    EnvelopeElement u(spec);
    if (t.contains("aug_scalar")) {
      u.add_term(phi_from_json(t.at("phi")), AugmentedElement(spec, parse_digits(t.at("aug_scalar"))));
    } else {
      const DPElement c =
          DPElement::monomial(spec, monomial_from_json(spec, t.at("monomial")), parse_digits(t.at("coeff")));
      u.add_term(phi_from_json(t.at("phi")), AugmentedElement(c, 0));
    }
    out.add_term(i - 1, u);
  }
  return out;
}

inline json to_json(const oracle::InvariantFactors& f) {
  json out = json::array();
  for (const auto& d : f.factors) out.push_back(d.fits_slong_p() ? json(d.get_si()) : json(d.get_str()));
  return out;
}

}  // namespace dpalg::json_io

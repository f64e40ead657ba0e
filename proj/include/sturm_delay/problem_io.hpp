#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sturm_delay/problem.hpp"

namespace sturm_delay {

/// Unreadable file, malformed JSON, wrong types, unknown keys, or a table
/// that cannot be constructed. Constraints expressible on the constructed
/// instance (orderings, spans, positivity) are validate_problem's business.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::set<std::string>& required,
                         const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw ParseError(where + ": unknown key \"" + item.key() + "\"");
  for (const auto& k : required)
    if (!j.contains(k)) throw ParseError(where + ": missing key \"" + k + "\"");
}

inline double number_at(const json& j, const std::string& key,
                        const std::string& where) {
  if (!j.at(key).is_number())
    throw ParseError(where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline int int_at(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer())
    throw ParseError(where + ": \"" + key + "\" must be an integer");
  return j.at(key).get<int>();
}

inline std::vector<double> number_array_at(const json& j, const std::string& key,
                                           const std::string& where) {
  if (!j.at(key).is_array())
    throw ParseError(where + ": \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number())
      throw ParseError(where + ": \"" + key + "\" must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

inline SegmentFunction parse_segment_function(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError(where + ": expected an object with a \"kind\" string");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, {"kind", "value"}, where);
    return ConstantFn{number_at(j, "value", where)};
  }
  if (kind == "poly") {
    require_keys(j, {"kind", "coeffs"}, {"kind", "coeffs"}, where);
    PolynomialFn p{number_array_at(j, "coeffs", where)};
    if (p.coeffs.empty()) throw ParseError(where + ": poly needs coefficients");
    return p;
  }
  if (kind == "sinusoid") {
    require_keys(j, {"kind", "a", "b", "c", "d"}, {"kind", "a", "b"}, where);
    SinusoidFn s;
    s.a = number_at(j, "a", where);
    s.b = number_at(j, "b", where);
    s.c = j.contains("c") ? number_at(j, "c", where) : 0.0;
    s.d = j.contains("d") ? number_at(j, "d", where) : 0.0;
    return s;
  }
  if (kind == "table") {
    require_keys(j, {"kind", "x", "f"}, {"kind", "x", "f"}, where);
    try {
      return TableFn(number_array_at(j, "x", where), number_array_at(j, "f", where));
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": unknown kind \"" + kind + "\"");
}

inline PiecewiseFunction parse_piecewise(const json& j, const std::string& where) {
  require_keys(j, {"s1", "s2", "s3"}, {"s1", "s2", "s3"}, where);
  PiecewiseFunction f;
  f.on(SegmentId::S1) = parse_segment_function(j.at("s1"), where + ".s1");
  f.on(SegmentId::S2) = parse_segment_function(j.at("s2"), where + ".s2");
  f.on(SegmentId::S3) = parse_segment_function(j.at("s3"), where + ".s3");
  return f;
}

inline NumericsConfig parse_numerics(const json& j) {
  require_keys(j,
               {"steps_per_unit_mu", "min_steps_per_segment", "root_tol", "picard_tol",
                "picard_max_iter", "quad_panels_base", "validation_samples"},
               {}, "numerics");
  NumericsConfig n;
  if (j.contains("steps_per_unit_mu"))
    n.steps_per_unit_mu = int_at(j, "steps_per_unit_mu", "numerics");
  if (j.contains("min_steps_per_segment"))
    n.min_steps_per_segment = int_at(j, "min_steps_per_segment", "numerics");
  if (j.contains("root_tol")) n.root_tol = number_at(j, "root_tol", "numerics");
  if (j.contains("picard_tol")) n.picard_tol = number_at(j, "picard_tol", "numerics");
  if (j.contains("picard_max_iter"))
    n.picard_max_iter = int_at(j, "picard_max_iter", "numerics");
  if (j.contains("quad_panels_base"))
    n.quad_panels_base = int_at(j, "quad_panels_base", "numerics");
  if (j.contains("validation_samples"))
    n.validation_samples = int_at(j, "validation_samples", "numerics");
  return n;
}

}  // namespace detail

inline ProblemSpec parse_problem(const nlohmann::json& j) {
  detail::require_keys(j, {"h1", "h2", "delta", "theta", "q", "retard", "numerics"},
                       {"h1", "h2", "delta", "theta", "q", "retard"}, "problem");
  ProblemSpec spec;
  spec.h1 = detail::number_at(j, "h1", "problem");
  spec.h2 = detail::number_at(j, "h2", "problem");
  spec.delta = detail::number_at(j, "delta", "problem");
  spec.theta = detail::number_at(j, "theta", "problem");
  spec.q = detail::parse_piecewise(j.at("q"), "q");
  spec.retard = detail::parse_piecewise(j.at("retard"), "retard");
  if (j.contains("numerics")) spec.numerics = detail::parse_numerics(j.at("numerics"));
  return spec;
}

inline ProblemSpec parse_problem_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("problem file is not valid JSON: ") + e.what());
  }
  return parse_problem(j);
}

inline ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

}  // namespace sturm_delay

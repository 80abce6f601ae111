// JSON forms of exact scalars and instances: a Rational is "p/q" (or "p"),
// a GaussianRational is {"re": ..., "im": ...}.
#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "multisum/exact.hpp"
#include "multisum/instance.hpp"

namespace multisum {

using Json = nlohmann::ordered_json;

/// Malformed instance document; the message names the line and field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const Rational& value);
Json to_json(const GaussianRational& value);
Json to_json(const ProblemInstance& inst);
/// A, C, S tables keyed "p,q", starred tables when present, Aabs, Cabs, A0, C0.
Json to_json(const Aggregates& agg);

/// Accepts "p/q", "p", or a JSON integer.
Rational rational_from_json(const Json& value, const std::string& field);
/// Accepts {"re", "im"} (im optional) or a bare rational.
GaussianRational gaussian_from_json(const Json& value, const std::string& field);

/// Parses an instance document. Structural validity is not checked here.
ProblemInstance parse_instance(const std::string& text);
ProblemInstance load_instance(const std::string& path);

}  // namespace multisum

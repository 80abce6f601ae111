#include "multisum/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace multisum {

Json to_json(const Rational& value) { return value.to_string(); }

Json to_json(const GaussianRational& value) {
  Json out = Json::object();
  out["re"] = value.re.to_string();
  out["im"] = value.im.to_string();
  return out;
}

Json to_json(const ProblemInstance& inst) {
  Json out = Json::object();
  out["m"] = inst.m;
  if (inst.n) out["n"] = *inst.n;
  out["a"] = inst.a;
  out["c"] = inst.c;
  Json x = Json::array();
  for (const auto& v : inst.x) x.push_back(to_json(v));
  out["x"] = std::move(x);
  if (inst.y) {
    Json y = Json::array();
    for (const auto& v : *inst.y) y.push_back(to_json(v));
    out["y"] = std::move(y);
  }
  return out;
}

Json to_json(const Aggregates& agg) {
  const auto table = [](auto&& entry) {
    Json out = Json::object();
    for (int p = 0; p <= 3; ++p) {
      for (int q = 0; q <= 3; ++q) out[std::to_string(p) + "," + std::to_string(q)] = to_json(entry(p, q));
    }
    return out;
  };
  Json out = Json::object();
  out["A0"] = agg.A0();
  out["C0"] = agg.C0();
  out["A"] = table([&](int p, int q) { return agg.A(p, q); });
  out["C"] = table([&](int p, int q) { return agg.C(p, q); });
  out["S"] = table([&](int p, int q) { return agg.S(p, q); });
  if (agg.has_starred()) {
    out["Astar"] = table([&](int p, int q) { return agg.Astar(p, q); });
    out["Cstar"] = table([&](int p, int q) { return agg.Cstar(p, q); });
  }
  out["Aabs"] = to_json(agg.Aabs());
  out["Cabs"] = to_json(agg.Cabs());
  return out;
}

namespace {

/// Thrown while walking the document; carries the offending field so the
/// caller can attach a line number.
struct FieldError {
  std::string field;
  std::string message;
};

std::int64_t integer_field(const Json& value, const std::string& field) {
  if (!value.is_number_integer()) throw FieldError{field, "expected an integer"};
  return value.get<std::int64_t>();
}

std::vector<std::int64_t> integer_list(const Json& doc, const std::string& field) {
  if (!doc.contains(field)) throw FieldError{field, "missing"};
  const Json& list = doc.at(field);
  if (!list.is_array()) throw FieldError{field, "expected an array"};
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(integer_field(list[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Rational rational_field(const Json& value, const std::string& field) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (!value.is_string()) throw FieldError{field, "expected a rational string \"p/q\""};
  try {
    return Rational::parse(value.get<std::string>());
  } catch (const std::exception& e) {
    throw FieldError{field, e.what()};
  }
}

GaussianRational gaussian_field(const Json& value, const std::string& field) {
  if (!value.is_object()) return GaussianRational(rational_field(value, field));
  if (!value.contains("re")) throw FieldError{field + ".re", "missing"};
  const Rational re = rational_field(value.at("re"), field + ".re");
  const Rational im = value.contains("im") ? rational_field(value.at("im"), field + ".im") : Rational();
  return {re, im};
}

std::vector<GaussianRational> weight_list(const Json& list, const std::string& field) {
  if (!list.is_array()) throw FieldError{field, "expected an array"};
  std::vector<GaussianRational> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(gaussian_field(list[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

/// Line of the first occurrence of "key" in the raw text, 1-based; 0 if absent.
std::size_t line_of_key(const std::string& text, const std::string& field) {
  const std::string key = "\"" + field.substr(0, field.find('[')) + "\"";
  const std::size_t pos = text.find(key);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

}  // namespace

Rational rational_from_json(const Json& value, const std::string& field) {
  try {
    return rational_field(value, field);
  } catch (const FieldError& e) {
    throw ParseError("field '" + e.field + "': " + e.message);
  }
}

GaussianRational gaussian_from_json(const Json& value, const std::string& field) {
  try {
    return gaussian_field(value, field);
  } catch (const FieldError& e) {
    throw ParseError("field '" + e.field + "': " + e.message);
  }
}

ProblemInstance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw FieldError{"(document)", "expected an object"};
    ProblemInstance inst;
    if (!doc.contains("m")) throw FieldError{"m", "missing"};
    inst.m = integer_field(doc.at("m"), "m");
    if (doc.contains("n") && !doc.at("n").is_null()) inst.n = integer_field(doc.at("n"), "n");
    inst.a = integer_list(doc, "a");
    inst.c = integer_list(doc, "c");
    if (!doc.contains("x")) throw FieldError{"x", "missing"};
    inst.x = weight_list(doc.at("x"), "x");
    if (doc.contains("y") && !doc.at("y").is_null()) inst.y = weight_list(doc.at("y"), "y");
    return inst;
  } catch (const FieldError& e) {
    const std::size_t line = line_of_key(text, e.field);
    std::ostringstream os;
    os << "instance";
    if (line > 0) os << " line " << line;
    os << ": field '" << e.field << "': " << e.message;
    throw ParseError(os.str());
  }
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

}  // namespace multisum

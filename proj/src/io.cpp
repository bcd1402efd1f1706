#include "icw/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "icw/errors.hpp"
#include "icw/families.hpp"

namespace icw {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw InputError(source + ": " + where + ": " + what);
}

std::string type_of(const json& j) { return j.type_name(); }

const json& field(const json& obj, const std::string& key, const std::string& source, const std::string& where) {
  if (!obj.is_object()) fail(source, where.empty() ? "document" : where, "expected an object, got " + type_of(obj));
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, where.empty() ? key : where + "." + key, "missing field");
  return *it;
}


double as_number(const json& j, const std::string& source, const std::string& where) {
  if (!j.is_number()) fail(source, where, "expected a number, got " + type_of(j));
  return j.get<double>();
}

long long as_integer(const json& j, const std::string& source, const std::string& where) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 1e15) return static_cast<long long>(v);
  }
  fail(source, where, "expected an integer, got " + (j.is_number() ? j.dump() : type_of(j)));
}

cplx as_complex(const json& j, const std::string& source, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2)
    return {as_number(j[0], source, where + "[0]"), as_number(j[1], source, where + "[1]")};
  fail(source, where, "expected a number or a [re, im] pair, got " + j.dump());
}

GroupModel model_field(const json& doc, const std::string& source) {
  const json& g = field(doc, "group", source, "");
  if (!g.is_string()) fail(source, "group", "expected a string, got " + type_of(g));
  try {
    return GroupModel::parse(g.get<std::string>());
  } catch (const std::exception& e) {
    fail(source, "group", e.what());
  }
}

/// Line and column of a byte offset (1-based).
std::pair<std::size_t, std::size_t> position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = position(text, e.byte);
    std::string msg = e.what();
    // drop the library prefix "[json.exception.parse_error.101] parse error at line L, column C: "
    if (auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON: " + msg);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json json_complex(cplx z) {
  if (z.imag() == 0.0) return json_number(z.real());
  return ordered_json::array({json_number(z.real()), json_number(z.imag())});
}

FiniteSystem system_from_json(const json& doc, const std::string& source) {
  GroupModel model = model_field(doc, source);
  const json& pts = field(doc, "points", source, "");
  long long n = as_integer(pts, source, "points");
  if (n < 1) fail(source, "points", "must be >= 1");

  const json& action = field(doc, "action", source, "");
  if (!action.is_object()) fail(source, "action", "expected an object, got " + type_of(action));
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(model.generator_count()));
  std::set<int> seen;
  for (const auto& [name, perm] : action.items()) {
    auto g = model.generator_index(name);
    if (!g) fail(source, "action." + name, "unknown generator for " + model.name());
    seen.insert(*g);
    const std::string where = "action." + name;
    if (!perm.is_array()) fail(source, where, "expected an array, got " + type_of(perm));
    if (static_cast<long long>(perm.size()) != n)
      fail(source, where, "length " + std::to_string(perm.size()) + ", expected " + std::to_string(n));
    for (std::size_t x = 0; x < perm.size(); ++x) {
      long long y = as_integer(perm[x], source, where + "[" + std::to_string(x) + "]");
      if (y < 0 || y >= n)
        fail(source, where + "[" + std::to_string(x) + "]", "image " + std::to_string(y) + " out of range 0.." +
                                                                std::to_string(n - 1));
      perms[static_cast<std::size_t>(*g)].push_back(static_cast<int>(y));
    }
  }
  for (int g = 0; g < model.generator_count(); ++g)
    if (!seen.count(g)) fail(source, "action." + model.generator_name(g), "missing permutation");

  const json& measure = field(doc, "measure", source, "");
  if (!measure.is_array()) fail(source, "measure", "expected an array, got " + type_of(measure));
  if (static_cast<long long>(measure.size()) != n)
    fail(source, "measure", "length " + std::to_string(measure.size()) + ", expected " + std::to_string(n));
  std::vector<double> mu;
  for (std::size_t x = 0; x < measure.size(); ++x)
    mu.push_back(as_number(measure[x], source, "measure[" + std::to_string(x) + "]"));

  try {
    return FiniteSystem(model, std::move(perms), std::move(mu));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

ordered_json to_json(const FiniteSystem& system) {
  ordered_json out;
  const GroupModel& model = system.model();
  out["group"] = model.name();
  out["points"] = system.points();
  ordered_json action = ordered_json::object();
  for (int g = 0; g < model.generator_count(); ++g) action[model.generator_name(g)] = system.permutation(g);
  out["action"] = action;
  out["measure"] = system.measure();
  return out;
}

FiniteUnitaryRep rep_from_json(const json& doc, const std::string& source) {
  GroupModel model = model_field(doc, source);
  long long dim = as_integer(field(doc, "dim", source, ""), source, "dim");
  if (dim < 1) fail(source, "dim", "must be >= 1");
  const json& gens = field(doc, "generators", source, "");
  if (!gens.is_object()) fail(source, "generators", "expected an object, got " + type_of(gens));
  std::vector<MatrixXc> images(static_cast<std::size_t>(model.generator_count()));
  std::vector<bool> seen(images.size(), false);
  for (const auto& [name, rows] : gens.items()) {
    const std::string where = "generators." + name;
    auto g = model.generator_index(name);
    if (!g) fail(source, where, "unknown generator for " + model.name());
    if (!rows.is_array() || static_cast<long long>(rows.size()) != dim)
      fail(source, where, "expected " + std::to_string(dim) + " rows");
    MatrixXc m(dim, dim);
    for (long long i = 0; i < dim; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      const std::string rw = where + "[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<long long>(row.size()) != dim)
        fail(source, rw, "expected " + std::to_string(dim) + " entries");
      for (long long j = 0; j < dim; ++j)
        m(i, j) = as_complex(row[static_cast<std::size_t>(j)], source, rw + "[" + std::to_string(j) + "]");
    }
    images[static_cast<std::size_t>(*g)] = std::move(m);
    seen[static_cast<std::size_t>(*g)] = true;
  }
  for (int g = 0; g < model.generator_count(); ++g)
    if (!seen[static_cast<std::size_t>(g)]) fail(source, "generators." + model.generator_name(g), "missing matrix");
  try {
    return FiniteUnitaryRep(model, std::move(images));
  } catch (const InvalidHomomorphism& e) {
    throw InputError(source + ": generators: " + e.what());
  } catch (const InputError& e) {
    throw InputError(source + ": generators: " + e.what());
  }
}

ordered_json to_json(const FiniteUnitaryRep& rep) {
  ordered_json out;
  const GroupModel& model = rep.model();
  out["group"] = model.name();
  out["dim"] = rep.dim();
  ordered_json gens = ordered_json::object();
  for (int g = 0; g < model.generator_count(); ++g) {
    const MatrixXc& u = rep.image(g);
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index j = 0; j < u.cols(); ++j) row.push_back({u(i, j).real(), u(i, j).imag()});
      rows.push_back(row);
    }
    gens[model.generator_name(g)] = rows;
  }
  out["generators"] = gens;
  return out;
}

TailCertificate certificate_from_json(const json& doc, const std::string& where) {
  const std::string source = where;
  const json& kind_j = field(doc, "kind", source, "certificate");
  if (!kind_j.is_string()) fail(source, "certificate.kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  auto num = [&](const std::string& key) {
    return as_number(field(doc, key, source, "certificate"), source, "certificate." + key);
  };
  auto integer = [&](const std::string& key) {
    long long v = as_integer(field(doc, key, source, "certificate"), source, "certificate." + key);
    if (v < 0) fail(source, "certificate." + key, "must be >= 0");
    return static_cast<int>(v);
  };
  auto flag = [&](const std::string& key) {
    auto it = doc.find(key);
    if (it == doc.end()) return false;
    if (!it->is_boolean()) fail(source, "certificate." + key, "expected a boolean");
    return it->get<bool>();
  };
  if (kind == "none") return NoCertificate{};
  if (kind == "finite_support") return FiniteSupport{integer("radius")};
  if (kind == "exp_decay") {
    ExpDecay e{num("amplitude"), num("rate"), flag("tight")};
    if (doc.contains("floor")) e.floor = num("floor");
    if (e.floor < 0 || e.floor > e.amplitude) fail(source, "certificate.floor", "must lie in [0, amplitude]");
    if (e.amplitude < 0) fail(source, "certificate.amplitude", "must be >= 0");
    if (!(e.rate > 0 && e.rate < 1)) fail(source, "certificate.rate", "must lie in (0, 1)");
    return e;
  }
  if (kind == "sphere_sup") {
    const json& b = field(doc, "bounds", source, "certificate");
    if (!b.is_array()) fail(source, "certificate.bounds", "expected an array");
    SphereSupSequence s;
    for (std::size_t k = 0; k < b.size(); ++k)
      s.bounds.push_back(as_number(b[k], source, "certificate.bounds[" + std::to_string(k) + "]"));
    s.vanishing = flag("vanishing");
    return s;
  }
  if (kind == "bounded_below") return BoundedBelow{num("floor"), integer("radius")};
  fail(source, "certificate.kind", "unknown certificate kind '" + kind + "'");
}

ordered_json to_json(const TailCertificate& cert) {
  ordered_json out;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NoCertificate>) {
          out["kind"] = "none";
        } else if constexpr (std::is_same_v<T, FiniteSupport>) {
          out["kind"] = "finite_support";
          out["radius"] = c.radius;
        } else if constexpr (std::is_same_v<T, ExpDecay>) {
          out["kind"] = "exp_decay";
          out["amplitude"] = c.amplitude;
          out["rate"] = c.rate;
          out["tight"] = c.tight;
          if (c.floor > 0) out["floor"] = c.floor;
        } else if constexpr (std::is_same_v<T, SphereSupSequence>) {
          out["kind"] = "sphere_sup";
          out["bounds"] = c.bounds;
          out["vanishing"] = c.vanishing;
        } else {
          out["kind"] = "bounded_below";
          out["floor"] = c.floor;
          out["radius"] = c.radius;
        }
      },
      cert);
  return out;
}

GroupFunction table_from_json(const json& doc, const std::string& source) {
  GroupModel model = model_field(doc, source);
  const json& values = field(doc, "values", source, "");
  if (!values.is_object()) fail(source, "values", "expected an object, got " + type_of(values));
  std::map<GroupElement, cplx> table;
  for (const auto& [word, v] : values.items()) {
    const std::string where = "values[\"" + word + "\"]";
    GroupElement s = identity(model);
    try {
      s = parse_element(model, word);
    } catch (const std::exception& e) {
      fail(source, where, e.what());
    }
    if (table.count(s)) fail(source, where, "duplicates the element " + to_string(s));
    table[s] = as_complex(v, source, where);
  }
  TailCertificate cert = NoCertificate{};
  const bool explicit_cert = doc.contains("certificate");
  if (explicit_cert) cert = certificate_from_json(doc["certificate"], source);
  std::string label = source;
  if (auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) fail(source, "label", "expected a string");
    label = it->get<std::string>();
  }
  // a table is zero off its entries, so a finite-support certificate is always sound
  if (!explicit_cert) {
    int radius = 0;
    for (const auto& [s, v] : table) radius = std::max(radius, word_length(s));
    cert = FiniteSupport{radius};
  }
  GroupFunction h = table_function(model, table, cert, label);
  // surface certificate contradictions at load time rather than mid-computation
  for (const auto& [s, v] : table) {
    try {
      check_certificate(h.tail(), h.sup_bound(), word_length(s), v, label, to_string(s));
    } catch (const CertificateViolation& e) {
      fail(source, "certificate", e.what());
    }
  }
  return h;
}

}  // namespace icw

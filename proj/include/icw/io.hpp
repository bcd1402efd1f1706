#pragma once

// JSON ingestion and serialization of systems, representations and function
// tables. Every parse error is an InputError naming the file position or the
// JSON path of the offending field.

#include "json.hpp"
#include <string>

#include "icw/dynamics.hpp"
#include "icw/function.hpp"
#include "icw/representation.hpp"

namespace icw {

using ordered_json = nlohmann::ordered_json;

/// Parses a JSON document; syntax errors report line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
nlohmann::json load_json_file(const std::string& path);

/// {"group", "points", "action": {generator: [images]}, "measure": [...]}.
FiniteSystem system_from_json(const nlohmann::json& doc, const std::string& source = "system");
ordered_json to_json(const FiniteSystem& system);

/// {"group", "dim", "generators": {name: [[[re, im], ...], ...]}}, rows first.
FiniteUnitaryRep rep_from_json(const nlohmann::json& doc, const std::string& source = "rep");
ordered_json to_json(const FiniteUnitaryRep& rep);

/// Certificate blocks: {"kind": "finite_support", "radius": R},
/// {"kind": "exp_decay", "amplitude", "rate", "tight"},
/// {"kind": "sphere_sup", "bounds": [...], "vanishing"},
/// {"kind": "bounded_below", "floor", "radius"}, {"kind": "none"}.
TailCertificate certificate_from_json(const nlohmann::json& doc, const std::string& where);
ordered_json to_json(const TailCertificate& cert);

/// {"group", "label"?, "values": {word: number | [re, im]}, "certificate": {...}}.
/// Values absent from the table are zero.
GroupFunction table_from_json(const nlohmann::json& doc, const std::string& source = "table");

/// Finite doubles as numbers; infinities and NaN as strings.
ordered_json json_number(double v);
ordered_json json_complex(cplx z);

}  // namespace icw

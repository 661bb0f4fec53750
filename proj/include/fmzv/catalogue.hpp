#pragma once

// Identity catalogue files (schema "fmzv-identities/1").
//
//   {"schema": "fmzv-identities/1",
//    "identities": [
//      {"id": "...", "level": 1,
//       "lhs": [term, ...], "rhs": [term, ...]}]}
//
// A term is {"coeff": "p/q", "index": "1,2", "color": C, "level": N} with
// "coeff", "color" and "level" optional (defaults "1", "bracket:0", the
// identity level). C is "bracket:j", "box", or an object mapping each unit
// (as a string) to a residue array or "box"; units left out are box.
// A product term is {"coeff": "p/q", "factors": [atom, ...]} where an atom
// is a term without "coeff", {"frakz": k} or {"log": N}. An empty side is 0.

#include "fmzv/relation_engine.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace fmzv {

inline constexpr const char* kCatalogueSchema = "fmzv-identities/1";

/// Parses a color spec for the given level and arity. Throws InvalidArgument.
ColorMap parse_color(const nlohmann::json& spec, unsigned level, unsigned arity);

std::vector<Identity> parse_catalogue(const nlohmann::json& doc);
std::vector<Identity> load_catalogue(const std::string& path);

/// Identities shipped with the tool.
const std::vector<Identity>& builtin_catalogue();
const std::string& builtin_catalogue_json();

/// Throws InvalidArgument when the id is unknown.
const Identity& find_identity(const std::vector<Identity>& catalogue, const std::string& id);

} // namespace fmzv

#include "fmzv/catalogue.hpp"

#include <fstream>
#include <sstream>

namespace fmzv {

namespace {

using nlohmann::json;

std::vector<unsigned> residue_array(const json& j) {
    std::vector<unsigned> out;
    for (const auto& v : j) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) throw Error(Errc::InvalidArgument, "residues must be non-negative");
        out.push_back(static_cast<unsigned>(x));
    }
    return out;
}

Index parse_index(const json& j) {
    if (j.is_string()) return Index::parse(j.get<std::string>());
    if (j.is_array()) return Index(residue_array(j));
    throw Error(Errc::InvalidArgument, "index must be a string or an array");
}

Rational parse_coeff(const json& term) {
    if (!term.contains("coeff")) return 1;
    const auto& c = term.at("coeff");
    if (c.is_string()) return parse_rational(c.get<std::string>());
    if (c.is_number_integer()) return Rational(c.get<long>());
    throw Error(Errc::InvalidArgument, "coeff must be a string \"p/q\" or an integer");
}

ZetaAtom parse_zeta_atom(const json& atom, unsigned default_level) {
    Index k = parse_index(atom.at("index"));
    const unsigned level = atom.contains("level") ? atom.at("level").get<unsigned>() : default_level;
    const json spec = atom.contains("color") ? atom.at("color") : json("bracket:0");
    ColorMap c = parse_color(spec, level, static_cast<unsigned>(k.depth()));
    return ZetaAtom{std::move(k), std::move(c)};
}

Factor parse_factor(const json& atom, unsigned level) {
    if (atom.contains("frakz")) return FrakZAtom{atom.at("frakz").get<unsigned>()};
    if (atom.contains("log")) return LogAtom{atom.at("log").get<u64>()};
    return parse_zeta_atom(atom, level);
}

ProductSum parse_side(const json& side, unsigned level) {
    ProductSum out;
    for (const auto& term : side) {
        ProductTerm t;
        t.coeff = parse_coeff(term);
        if (term.contains("factors")) {
            for (const auto& atom : term.at("factors")) t.factors.push_back(parse_factor(atom, level));
        } else {
            t.factors.push_back(parse_factor(term, level));
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

} // namespace

ColorMap parse_color(const json& spec, unsigned level, unsigned arity) {
    if (spec.is_string()) {
        const auto s = spec.get<std::string>();
        if (s == "box") return ColorMap(level, arity);
        if (s.rfind("bracket:", 0) == 0) {
            unsigned j = 0;
            try {
                j = static_cast<unsigned>(std::stoul(s.substr(8)));
            } catch (const std::exception&) {
                throw Error(Errc::InvalidArgument, "bad color spec '" + s + "'");
            }
            return ColorMap::bracket(level, arity, j);
        }
        throw Error(Errc::InvalidArgument, "unknown color spec '" + s + "'");
    }
    if (!spec.is_object()) throw Error(Errc::InvalidArgument, "color must be a string or a table object");
    ColorMap c(level, arity);
    for (const auto& [key, value] : spec.items()) {
        unsigned alpha = 0;
        try {
            alpha = static_cast<unsigned>(std::stoul(key));
        } catch (const std::exception&) {
            throw Error(Errc::InvalidArgument, "color table key '" + key + "' is not a unit");
        }
        if (value.is_string() && value.get<std::string>() == "box") {
            c.set(alpha, std::nullopt);
        } else {
            c.set(alpha, residue_array(value));
        }
    }
    return c;
}

std::vector<Identity> parse_catalogue(const json& doc) {
    if (doc.value("schema", "") != kCatalogueSchema) {
        throw Error(Errc::InvalidArgument, std::string("catalogue schema must be \"") + kCatalogueSchema + "\"");
    }
    std::vector<Identity> out;
    try {
        for (const auto& entry : doc.at("identities")) {
            const unsigned level = entry.value("level", 1u);
            out.push_back(Identity{entry.at("id").get<std::string>(), parse_side(entry.at("lhs"), level),
                                   parse_side(entry.at("rhs"), level)});
        }
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, std::string("malformed catalogue: ") + e.what());
    }
    return out;
}

std::vector<Identity> load_catalogue(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::InvalidArgument, "cannot open catalogue " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidArgument, "catalogue " + path + " is not JSON: " + e.what());
    }
    return parse_catalogue(doc);
}

const std::string& builtin_catalogue_json() {
    static const std::string text = R"({
  "schema": "fmzv-identities/1",
  "identities": [
    {"id": "example-relation", "level": 1,
     "lhs": [{"coeff": "2", "index": "1,2,3"}, {"index": "1,2,1,2"}, {"index": "1,2,2,1"}, {"index": "1,1,1,3"}],
     "rhs": []},
    {"id": "vhz-1-2", "level": 1,
     "lhs": [{"index": "1,2"}],
     "rhs": [{"coeff": "3", "factors": [{"frakz": 3}]}]},
    {"id": "vhz-2-1", "level": 1,
     "lhs": [{"index": "2,1"}],
     "rhs": [{"coeff": "-3", "factors": [{"frakz": 3}]}]},
    {"id": "reversal-1-2", "level": 1,
     "lhs": [{"index": "1,2"}],
     "rhs": [{"coeff": "-1", "index": "2,1"}]},
    {"id": "stuffle-1-1", "level": 1,
     "lhs": [{"factors": [{"index": "1"}, {"index": "1"}]}],
     "rhs": [{"coeff": "2", "index": "1,1"}, {"index": "2"}]},
    {"id": "stuffle-2-1-level3", "level": 3,
     "lhs": [{"factors": [{"index": "1,2", "color": "bracket:1"}, {"index": "1", "color": "bracket:1"}]}],
     "rhs": [{"coeff": "2", "index": "1,1,2", "color": "bracket:1"},
             {"index": "1,2,1", "color": "bracket:1"},
             {"index": "2,2", "color": "bracket:1"},
             {"index": "1,3", "color": "bracket:1"}]},
    {"id": "a-sdi-1", "level": 2,
     "lhs": [{"factors": [{"log": 2}]}],
     "rhs": [{"coeff": "-1", "index": "1", "color": "bracket:0"}]},
    {"id": "lerch-log-3", "level": 3,
     "lhs": [{"factors": [{"log": 3}]}],
     "rhs": [{"index": "1", "color": "bracket:1"}, {"coeff": "2", "index": "1", "color": "bracket:2"}]},
    {"id": "log-additivity-2-3", "level": 1,
     "lhs": [{"factors": [{"log": 6}]}],
     "rhs": [{"factors": [{"log": 2}]}, {"factors": [{"log": 3}]}]},
    {"id": "levels-2-4", "level": 4,
     "lhs": [{"index": "1", "level": 2, "color": {"1": [0]}}],
     "rhs": [{"index": "1", "color": {"1": [0], "3": [0]}}, {"index": "1", "color": {"1": [2], "3": [2]}}]},
    {"id": "level12-k3", "level": 12,
     "lhs": [{"coeff": "2", "index": "3", "color": "bracket:2"}],
     "rhs": [{"coeff": "7/96", "factors": [{"frakz": 3}]}]}
  ]
})";
    return text;
}

const std::vector<Identity>& builtin_catalogue() {
    static const std::vector<Identity> cat = parse_catalogue(json::parse(builtin_catalogue_json()));
    return cat;
}

const Identity& find_identity(const std::vector<Identity>& catalogue, const std::string& id) {
    for (const auto& i : catalogue)
        if (i.id == id) return i;
    throw Error(Errc::InvalidArgument, "no identity '" + id + "' in catalogue");
}

} // namespace fmzv

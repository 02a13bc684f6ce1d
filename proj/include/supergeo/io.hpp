#pragma once

// JSON forms of rationals, atlases, matrix cocycles, derivations and cohomology classes.
//
// Keys are emitted in sorted order (nlohmann::json objects are std::map backed) and rationals as
// canonical "p/q" strings, so dumping a value twice gives identical bytes.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "atlas.hpp"
#include "cech.hpp"
#include "families.hpp"
#include "superalg.hpp"
#include "text.hpp"

namespace supergeo {

using Json = nlohmann::json;

inline std::string to_string(const Rational& r)
{
    return r.get_str();
}

/// Accepts [+-]digits[/digits] with a nonzero denominator and returns the canonical value.
inline Rational parse_rational(const std::string& text)
{
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    const std::size_t num_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == num_start) throw parse_error("rational: expected digits", pos);
    if (pos < text.size()) {
        if (text[pos] != '/') throw parse_error("rational: unexpected character", pos);
        const std::size_t den_start = ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == den_start || pos != text.size()) throw parse_error("rational: malformed denominator", pos);
    }
    const std::string cleaned = text[0] == '+' ? text.substr(1) : text;
    Rational r(cleaned, 10);
    if (r.get_den() == 0) throw parse_error("rational: zero denominator", text.find('/'));
    r.canonicalize();
    return r;
}

inline Json to_json(const Chart& c)
{
    return Json{{"id", c.id}, {"even", c.table->even_names()}, {"odd", c.table->odd_names()}};
}

inline Json to_json(const TransitionMap& m)
{
    Json images = Json::object();
    for (std::size_t a = 0; a < m.images().size(); ++a) images[m.coordinate_name(a)] = format(m.image(a));
    return Json{{"target", m.target().id}, {"source", m.source().id}, {"images", images}};
}

inline Json to_json(const Atlas& atlas)
{
    Json charts = Json::array();
    for (const auto& c : atlas.charts) charts.push_back(to_json(c));
    Json maps = Json::array();
    for (const auto& m : atlas.maps) maps.push_back(to_json(m));
    Json triv = Json::array();
    for (const auto& c : atlas.trivialization) triv.push_back(to_string(c));
    return Json{{"family", atlas.family}, {"lambda", to_string(atlas.lambda)}, {"charts", charts}, {"maps", maps},
                {"trivialization", triv}};
}

namespace detail {

inline const Json& require(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw parse_error(std::string("json: missing key '") + key + "'", 0);
    return j.at(key);
}

inline std::vector<std::string> string_list(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_array()) throw parse_error(std::string("json: '") + key + "' must be an array", 0);
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (!s.is_string()) throw parse_error(std::string("json: '") + key + "' must hold strings", 0);
        out.push_back(s.get<std::string>());
    }
    return out;
}

inline int int_field(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_number_integer()) throw parse_error(std::string("json: '") + key + "' must be an integer", 0);
    return v.get<int>();
}

inline std::string string_field(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_string()) throw parse_error(std::string("json: '") + key + "' must be a string", 0);
    return v.get<std::string>();
}

} // namespace detail

inline Atlas atlas_from_json(const Json& j)
{
    Atlas atlas;
    atlas.family = j.contains("family") ? detail::string_field(j, "family") : "custom";
    atlas.lambda = j.contains("lambda") ? parse_rational(detail::string_field(j, "lambda")) : Rational(0);
    for (const auto& c : detail::require(j, "charts")) {
        atlas.charts.push_back(Chart{detail::int_field(c, "id"), make_table(detail::string_list(c, "even"), detail::string_list(c, "odd"))});
    }
    auto chart_by_id = [&atlas](int id) -> const Chart& {
        for (const auto& c : atlas.charts) {
            if (c.id == id) return c;
        }
        throw domain_error("json: map refers to unknown chart " + std::to_string(id));
    };
    for (const auto& m : detail::require(j, "maps")) {
        const Chart& target = chart_by_id(detail::int_field(m, "target"));
        const Chart& source = chart_by_id(detail::int_field(m, "source"));
        const Json& images = detail::require(m, "images");
        std::vector<SuperElem> out;
        const VarTable& t = *target.table;
        for (std::size_t a = 0; a < t.num_even() + t.num_odd(); ++a) {
            const std::string& name = a < t.num_even() ? t.even_names()[a] : t.odd_names()[a - t.num_even()];
            if (!images.contains(name)) throw parse_error("json: map is missing the image of '" + name + "'", 0);
            out.push_back(parse(images.at(name).get<std::string>(), source.table));
        }
        if (images.size() != out.size()) throw parse_error("json: map has images for unknown coordinates", 0);
        atlas.maps.emplace_back(target, source, std::move(out));
    }
    if (j.contains("trivialization")) {
        for (const auto& c : j.at("trivialization")) atlas.trivialization.push_back(parse_rational(c.get<std::string>()));
    }
    atlas.validate_structure();
    return atlas;
}

/// {"matrices": [{"target": i, "source": j, "entries": [[..,..],[..,..]]}, ...]} over the P^2 charts.
inline Json to_json(const MatrixCocycle& mc)
{
    Json mats = Json::array();
    for (std::size_t i = 0; i < mc.matrices.size(); ++i) {
        const ElemGrid& m = mc.matrices[i];
        Json rows = Json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format(m(r, c)));
            rows.push_back(row);
        }
        mats.push_back(Json{{"target", static_cast<int>(i)}, {"source", static_cast<int>((i + 1) % 3)}, {"entries", rows}});
    }
    return Json{{"matrices", mats}};
}

inline MatrixCocycle matrix_cocycle_from_json(const Json& j)
{
    MatrixCocycle mc;
    const Json& mats = detail::require(j, "matrices");
    if (!mats.is_array() || mats.size() != 3) throw parse_error("json: 'matrices' must list the three cyclic overlaps", 0);
    for (std::size_t i = 0; i < 3; ++i) {
        const Json& m = mats[i];
        const int target = detail::int_field(m, "target");
        const int source = detail::int_field(m, "source");
        if (target != static_cast<int>(i) || source != static_cast<int>((i + 1) % 3)) {
            throw parse_error("json: matrices must be ordered (0<-1), (1<-2), (2<-0)", 0);
        }
        const Chart src = p2_chart(source);
        const Json& rows = detail::require(m, "entries");
        if (!rows.is_array() || rows.size() != 2) throw parse_error("json: matrix must have two rows", 0);
        std::vector<SuperElem> cells;
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != 2) throw parse_error("json: matrix rows must have two entries", 0);
            for (const auto& e : row) cells.push_back(parse(e.get<std::string>(), src.table));
        }
        mc.matrices.emplace_back(src.table, 2, 2, std::move(cells));
    }
    return mc;
}

inline Json to_json(const Derivation& d)
{
    Json out = Json::object();
    const VarTable& t = *d.table;
    for (std::size_t a = 0; a < d.coeffs.size(); ++a) {
        const std::string& name = a < t.num_even() ? t.even_names()[a] : t.odd_names()[a - t.num_even()];
        if (!d.coeffs[a].is_zero()) out["d/d" + name] = format(d.coeffs[a]);
    }
    return out;
}

inline Json to_json(const CohClass& c)
{
    Json coeffs = Json::object();
    for (const auto& [m, v] : c.coeffs) coeffs[format_monomial(m)] = to_string(v);
    return Json{{"n", c.n}, {"k", c.k}, {"q", c.q}, {"coefficients", coeffs}};
}

inline CohClass coh_class_from_json(const Json& j)
{
    CohClass c;
    c.n = detail::int_field(j, "n");
    c.k = detail::int_field(j, "k");
    c.q = detail::int_field(j, "q");
    for (const auto& [key, value] : detail::require(j, "coefficients").items()) {
        c.add(parse_monomial(key, c.n), parse_rational(value.get<std::string>()));
    }
    return c;
}

inline Json to_json(const HomPoly& p)
{
    Json out = Json::object();
    for (const auto& [m, v] : p) out[format_monomial(m)] = to_string(v);
    return out;
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw parse_error(std::string("json: ") + e.what(), e.byte);
    }
}

} // namespace supergeo

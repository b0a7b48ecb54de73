#pragma once

// JSON form format:
//   {"dim": n, "degree": k, "terms": [{"idx": [i,...], "c": x}, ...]}
// with idx strictly increasing; structures additionally carry a row-major
// metric block and an orientation sign.

#include <string>

#include <nlohmann/json.hpp>

#include "ehk/g2.hpp"
#include "ehk/spin7.hpp"

namespace ehk {

nlohmann::json form_to_json(const KForm& f);
KForm form_from_json(const nlohmann::json& j);

nlohmann::json structure_to_json(const G2Structure& S);
nlohmann::json structure_to_json(const Spin7Structure& S);

// dispatches on dim/degree; returns either a G2 or a Spin(7) structure
struct ParsedStructure {
    std::optional<G2Structure> g2;
    std::optional<Spin7Structure> spin7;
};
ParsedStructure structure_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
nlohmann::json parse_json_file(const std::string& path);  // throws ParseError

// FNV-1a digest of a byte string, as fixed-width hex
std::string digest_hex(const std::string& bytes);

}  // namespace ehk

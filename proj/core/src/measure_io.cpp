#include "lclab/measure_io.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lclab {

namespace {
using nlohmann::json;
}

HalfLineMeasure measure_from_json_text(std::string_view text) {
  json j = json::parse(text);
  std::vector<Atom> atoms;
  for (const auto& a : j.value("atoms", json::array()))
    atoms.push_back(Atom{a.at("x").get<double>(), a.at("w").get<double>()});
  std::vector<Piece> pieces;
  for (const auto& p : j.value("pieces", json::array())) {
    Piece piece;
    piece.lo = p.at("a").get<double>();
    const auto& b = p.at("b");
    if (b.is_string()) {
      if (b.get<std::string>() != "inf")
        throw std::invalid_argument("piece endpoint must be a number or \"inf\"");
      piece.hi = std::numeric_limits<double>::infinity();
    } else {
      piece.hi = b.get<double>();
    }
    piece.coeffs = p.at("coeffs").get<std::vector<double>>();
    piece.rate = p.value("rate", 0.0);
    pieces.push_back(std::move(piece));
  }
  return HalfLineMeasure(std::move(atoms), std::move(pieces),
                         j.value("signed", false));
}

std::string measure_to_json_text(const HalfLineMeasure& mu, int indent) {
  json j;
  j["atoms"] = json::array();
  for (const auto& a : mu.atoms()) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
  j["pieces"] = json::array();
  for (const auto& p : mu.pieces()) {
    json piece;
    piece["a"] = p.lo;
    if (p.unbounded())
      piece["b"] = "inf";
    else
      piece["b"] = p.hi;
    piece["coeffs"] = p.coeffs;
    if (p.rate != 0.0) piece["rate"] = p.rate;
    j["pieces"].push_back(std::move(piece));
  }
  j["signed"] = mu.is_signed();
  return j.dump(indent);
}

HalfLineMeasure load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measure file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return measure_from_json_text(ss.str());
}

HalfLineMeasure resolve_measure(const std::string& name_or_path) {
  if (name_or_path.find('(') != std::string::npos)
    return parse_named_measure(name_or_path);
  if (!std::filesystem::exists(name_or_path))
    throw std::invalid_argument("measure argument '" + name_or_path +
                                "' is neither a named measure nor an existing file");
  return load_measure_file(name_or_path);
}

}  // namespace lclab

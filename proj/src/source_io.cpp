#include "malleable/source_io.hpp"

#include <fstream>
#include <sstream>

#include "malleable/errors.hpp"

namespace malleable {

namespace {

std::string where(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Scalar parse_entry(const nlohmann::json& v, const std::string& cell) {
  try {
    if (v.is_string()) return Scalar::parse(v.get<std::string>());
    if (v.is_number_integer()) return Scalar(v.get<long long>());
    if (v.is_number()) return Scalar::from_double(v.get<double>());
  } catch (const Error& e) {
    throw InputError(cell + ": " + e.what());
  }
  throw InputError(cell + ": expected a number or a \"p/q\" string");
}

}  // namespace

JointSource parse_source(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(origin + ": " + where(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
  }
  if (!doc.is_object()) throw InputError(origin + ": top level must be an object");
  for (const char* key : {"alphabet", "joint", "storage_alphabet_size"})
    if (!doc.contains(key)) throw InputError(origin + ": missing \"" + std::string(key) + "\"");

  const auto& alpha = doc["alphabet"];
  if (!alpha.is_array() || alpha.empty()) throw InputError(origin + ": \"alphabet\" must be a nonempty array");
  std::vector<std::string> alphabet;
  for (const auto& a : alpha) {
    if (!a.is_string()) throw InputError(origin + ": alphabet symbols must be strings");
    alphabet.push_back(a.get<std::string>());
  }

  const auto& rows = doc["joint"];
  if (!rows.is_array() || rows.size() != alphabet.size())
    throw InputError(origin + ": \"joint\" must have one row per alphabet symbol");
  std::vector<std::vector<Scalar>> joint;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != alphabet.size())
      throw InputError(origin + ": joint row " + std::to_string(i) + " must have " +
                       std::to_string(alphabet.size()) + " entries");
    std::vector<Scalar> row;
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      row.push_back(parse_entry(rows[i][j], origin + ": joint[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    joint.push_back(std::move(row));
  }

  const auto& storage = doc["storage_alphabet_size"];
  if (!storage.is_number_integer()) throw InputError(origin + ": \"storage_alphabet_size\" must be an integer");
  try {
    return JointSource(std::move(alphabet), std::move(joint), storage.get<int>());
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
}

JointSource load_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_source(buf.str(), path);
}

nlohmann::ordered_json source_to_json(const JointSource& src) {
  nlohmann::ordered_json j;
  j["alphabet"] = src.alphabet();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t x = 0; x < src.size(); ++x) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t y = 0; y < src.size(); ++y) {
      if (src(x, y).exact()) row.push_back(src(x, y).str());
      else row.push_back(src(x, y).to_double());
    }
    rows.push_back(std::move(row));
  }
  j["joint"] = std::move(rows);
  j["storage_alphabet_size"] = src.storage_alphabet_size();
  return j;
}

}  // namespace malleable

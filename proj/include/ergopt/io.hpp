#pragma once

// Potential files (JSON) and CSV tables.
//
// Locally constant:  {"alphabet": d, "depth": k, "terms": [{"word": "01", "coef": "1/2"}, ...]}
// Doubling grid:     {"map": "doubling", "n": N, "values": [...]}
//                    {"map": "doubling", "builtin": "sin2", "n": N}   (n optional)

#include <algorithm>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergopt/doubling.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/words.hpp"

namespace ergopt {

using PotentialFile = std::variant<LocallyConstantPotential, GridPotential>;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

class JsonReader {
 public:
  explicit JsonReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ParseError(source_ + ": at " + (path.empty() ? "/" : path) + ": " + msg);
  }

  const nlohmann::json& field(const nlohmann::json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
  }

  long long integer(const nlohmann::json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

  Rational rational(const nlohmann::json& v, const std::string& path) const {
    try {
      if (v.is_string()) return parse_rational(v.get<std::string>());
      if (v.is_number()) return parse_rational(v.dump());
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
    fail(path, "expected a number or a rational string such as \"1/2\"");
  }

  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

inline LocallyConstantPotential parse_locally_constant(const nlohmann::json& doc, const JsonReader& r) {
  const long long d = r.integer(r.field(doc, "", "alphabet"), "/alphabet");
  const long long k = r.integer(r.field(doc, "", "depth"), "/depth");
  if (d < 1 || d > 10) r.fail("/alphabet", "alphabet must be between 1 and 10");
  if (k < 1) r.fail("/depth", "depth must be at least 1");
  LocallyConstantPotential a = [&] {
    try {
      return LocallyConstantPotential(static_cast<int>(d), static_cast<int>(k));
    } catch (const BudgetExceeded& e) {
      r.fail("/depth", e.what());
    }
  }();
  const auto& terms = r.field(doc, "", "terms");
  if (!terms.is_array()) r.fail("/terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string path = "/terms/" + std::to_string(i);
    const auto& wv = r.field(terms[i], path, "word");
    if (!wv.is_string()) r.fail(path + "/word", "expected a string");
    const std::string text = wv.get<std::string>();
    if (text.empty()) r.fail(path + "/word", "empty word");
    if (text.size() > static_cast<std::size_t>(k)) r.fail(path + "/word", "word longer than depth " + std::to_string(k));
    SymbolWord w = [&] {
      try {
        return SymbolWord::parse(text, static_cast<int>(d));
      } catch (const InvalidWord& e) {
        r.fail(path + "/word", e.what());
      }
    }();
    a.add_indicator(w, r.rational(r.field(terms[i], path, "coef"), path + "/coef"));
  }
  return a;
}

inline GridPotential parse_grid(const nlohmann::json& doc, const JsonReader& r) {
  const auto& map = r.field(doc, "", "map");
  if (!map.is_string() || map.get<std::string>() != "doubling") r.fail("/map", "only \"doubling\" is supported");
  std::optional<long long> n;
  if (doc.contains("n")) {
    n = r.integer(doc["n"], "/n");
    if (*n < 4 || (*n & (*n - 1)) != 0) r.fail("/n", "grid size must be a power of 2 and at least 4");
  }
  if (doc.contains("builtin")) {
    const auto& b = doc["builtin"];
    if (!b.is_string() || b.get<std::string>() != "sin2") r.fail("/builtin", "unknown builtin (known: \"sin2\")");
    return GridPotential::sin2(n ? static_cast<std::size_t>(*n) : std::size_t{1} << 14);
  }
  const auto& values = r.field(doc, "", "values");
  if (!values.is_array()) r.fail("/values", "expected an array");
  std::vector<double> v;
  v.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number()) r.fail("/values/" + std::to_string(i), "expected a number");
    v.push_back(values[i].get<double>());
  }
  if (n && static_cast<std::size_t>(*n) != v.size()) {
    r.fail("/values", "has " + std::to_string(v.size()) + " entries but n = " + std::to_string(*n));
  }
  try {
    return GridPotential(std::move(v));
  } catch (const GridError& e) {
    r.fail("/values", e.what());
  }
}

}  // namespace detail

inline PotentialFile parse_potential(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(source + ":" + detail::line_col(text, at) + ": " + msg);
  }
  detail::JsonReader r(source);
  if (!doc.is_object()) r.fail("", "expected a JSON object");
  if (doc.contains("map")) return detail::parse_grid(doc, r);
  return detail::parse_locally_constant(doc, r);
}

inline PotentialFile load_potential(const std::string& path) { return parse_potential(read_file(path), path); }

inline LocallyConstantPotential load_locally_constant(const std::string& path) {
  auto f = load_potential(path);
  if (!std::holds_alternative<LocallyConstantPotential>(f)) {
    throw ParseError(path + ": expected a locally constant potential, found a grid potential");
  }
  return std::get<LocallyConstantPotential>(std::move(f));
}

inline nlohmann::json to_json(const LocallyConstantPotential& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : a.terms()) terms.push_back({{"word", w.to_string()}, {"coef", to_string(c)}});
  return {{"alphabet", a.alphabet()}, {"depth", a.depth()}, {"terms", terms}};
}

inline nlohmann::json to_json(const GridPotential& a) {
  if (!a.builtin().empty() && a == GridPotential::sin2(a.size())) {
    return {{"map", "doubling"}, {"builtin", a.builtin()}, {"n", a.size()}};
  }
  return {{"map", "doubling"}, {"n", a.size()}, {"values", a.values()}};
}

inline std::string serialize_potential(const PotentialFile& f) {
  return std::visit([](const auto& a) { return to_json(a).dump(2); }, f) + "\n";
}

// CSV with '.' decimals and LF line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error("CSV row width differs from header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

inline std::string format_double(double x) { return to_string(x); }

// One row per word of a table indexed by base-d word index; ordering by
// index is ordering by x.
template <Scalar T>
std::string word_table_csv(const std::vector<T>& values, int alphabet, int length) {
  CsvWriter csv({"word", "x", "value", "exact"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto w = SymbolWord::from_index(i, length, alphabet);
    csv.row({w.to_string(), format_double(to_double(word_to_real(w))), format_double(to_double(values[i])),
             to_string(values[i])});
  }
  return csv.str();
}

inline std::string grid_table_csv(const std::vector<double>& values) {
  CsvWriter csv({"index", "x", "value"});
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv.row({std::to_string(i), format_double(static_cast<double>(i) / n), format_double(values[i])});
  }
  return csv.str();
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("CSV has no column \"" + name + "\"");
    return static_cast<std::size_t>(it - header.begin());
  }
  bool has(const std::string& name) const { return std::find(header.begin(), header.end(), name) != header.end(); }
};

inline CsvTable parse_csv(const std::string& text, const std::string& source = "<csv>") {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) {
        throw ParseError(source + ":" + std::to_string(lineno) + ":1: expected " + std::to_string(t.header.size()) +
                         " cells, found " + std::to_string(cells.size()));
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.header.empty()) throw ParseError(source + ":1:1: empty CSV");
  return t;
}

}  // namespace ergopt

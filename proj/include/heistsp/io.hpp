#pragma once

// Point-set files.
//
// Text form: one point per line as "x y z"; '#' starts a comment. Leading
// "# name: ..." and "# key: value" comment lines are read back as metadata.
// JSON form (first non-blank character '{'):
//   {"name": "...", "metadata": {"key": "value"}, "points": [[x, y, z], ...]}
// Both writers emit 17 significant digits, so values round-trip exactly.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "heistsp/heisenberg.hpp"

namespace heistsp::io {

struct PointSetFile {
  std::string name;
  std::map<std::string, std::string> metadata;
  std::vector<HeisPoint> points;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline PointSetFile parse_text(const std::string& text, const std::string& source) {
  PointSetFile out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header = true;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line(text.data() + start, end - start);
    ++line_no;
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {
      const std::string_view comment = trim(line.substr(hash + 1));
      const std::size_t colon = comment.find(':');
      if (header && trim(line.substr(0, hash)).empty() && colon != std::string_view::npos) {
        const std::string key(trim(comment.substr(0, colon)));
        const std::string value(trim(comment.substr(colon + 1)));
        if (key == "name") {
          out.name = value;
        } else if (!key.empty() && key.find(' ') == std::string::npos) {
          out.metadata[key] = value;
        }
      }
      line = line.substr(0, hash);
    }

    double xyz[3];
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) break;
      std::size_t tok_end = pos;
      while (tok_end < line.size() && !std::isspace(static_cast<unsigned char>(line[tok_end]))) ++tok_end;
      if (count == 3) throw ParseError(source, line_no, pos + 1, "expected 3 coordinates, found more");
      const char* first = line.data() + pos;
      const char* last = line.data() + tok_end;
      if (*first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, xyz[count]);
      if (ec != std::errc() || ptr != last) {
        throw ParseError(source, line_no, pos + 1, "invalid number '" + std::string(line.substr(pos, tok_end - pos)) + "'");
      }
      ++count;
      pos = tok_end;
    }
    if (count == 0) continue;
    header = false;
    if (count != 3) throw ParseError(source, line_no, line.size() + 1, "expected 3 coordinates, found " + std::to_string(count));
    try {
      out.points.emplace_back(xyz[0], xyz[1], xyz[2]);
    } catch (const std::invalid_argument&) {
      throw ParseError(source, line_no, 1, "non-finite coordinate");
    }
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline PointSetFile parse_json(const std::string& text, const std::string& source) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(source, l, c, "malformed JSON");
  }
  PointSetFile out;
  auto fail = [&](const std::string& what) { throw ParseError(source, 1, 1, what); };
  if (!doc.is_object()) fail("top-level value must be an object");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("'name' must be a string");
    out.name = doc["name"].get<std::string>();
  }
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail("'metadata' must be an object");
    for (const auto& [k, v] : doc["metadata"].items()) out.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (!doc.contains("points") || !doc["points"].is_array()) fail("'points' must be an array");
  std::size_t i = 0;
  for (const auto& p : doc["points"]) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number()) {
      fail("points[" + std::to_string(i) + "] must be an array of 3 numbers");
    }
    out.points.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    ++i;
  }
  return out;
}

}  // namespace detail

inline PointSetFile parse_point_set(const std::string& text, const std::string& source = "<input>") {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return detail::parse_json(text, source);
  return detail::parse_text(text, source);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PointSetFile load_point_set(const std::string& path) { return parse_point_set(read_file(path), path); }

inline std::string to_text(const PointSetFile& f) {
  std::string out;
  if (!f.name.empty()) out += "# name: " + f.name + "\n";
  for (const auto& [k, v] : f.metadata) out += "# " + k + ": " + v + "\n";
  for (const HeisPoint& p : f.points) {
    out += format_double(p.x()) + " " + format_double(p.y()) + " " + format_double(p.z()) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const PointSetFile& f) {
  nlohmann::json doc;
  doc["name"] = f.name;
  doc["metadata"] = nlohmann::json::object();
  for (const auto& [k, v] : f.metadata) doc["metadata"][k] = v;
  doc["points"] = nlohmann::json::array();
  for (const HeisPoint& p : f.points) doc["points"].push_back({p.x(), p.y(), p.z()});
  return doc;
}

}  // namespace heistsp::io

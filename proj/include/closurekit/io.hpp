#ifndef CLOSUREKIT_IO_HPP_
#define CLOSUREKIT_IO_HPP_

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "closurekit/group.hpp"
#include "closurekit/objects.hpp"

namespace closurekit {

// Text formats. All points are 0..n-1; '#' starts a comment; blank lines are
// ignored.
//   group:     "degree n", then one generator per line, e.g. "(0 1 2)(3 4)" or "()"
//   digraph:   "n", then one "u v" arc per line
//   incidence: "points n", then "l: p1 p2 ..." per line
//   tuples:    "points n", then "t: color p1 p2 ..." per tuple

namespace detail {

struct TextLine {
  std::size_t number = 0;
  std::string text;
};

inline std::vector<TextLine> content_lines(std::string_view text) {
  std::vector<TextLine> out;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++number;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back({number, line.substr(first, last - first + 1)});
  }
  return out;
}

[[noreturn]] inline void parse_fail(const TextLine& l, const std::string& what) {
  fail(ErrorKind::parse_error, "line " + std::to_string(l.number) + ": " + what);
}

inline std::vector<std::size_t> numbers(const TextLine& l, std::string_view text) {
  std::vector<std::size_t> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_fail(l, "expected a number, got \"" + tok + "\"");
    out.push_back(v);
  }
  return out;
}

inline std::size_t header_value(const TextLine& l, std::string_view keyword) {
  std::string_view t = l.text;
  if (!keyword.empty()) {
    if (t.substr(0, keyword.size()) != keyword) parse_fail(l, "expected \"" + std::string(keyword) + " n\"");
    t.remove_prefix(keyword.size());
  }
  auto v = numbers(l, t);
  if (v.size() != 1 || v[0] == 0) parse_fail(l, "expected one positive size");
  return v[0];
}

inline Point point_in(const TextLine& l, std::size_t v, std::size_t n) {
  if (v >= n) parse_fail(l, "point " + std::to_string(v) + " outside 0.." + std::to_string(n - 1));
  return static_cast<Point>(v);
}

}  // namespace detail

inline PermGroup parse_group(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) fail(ErrorKind::parse_error, "empty group file");
  std::size_t n = detail::header_value(lines[0], "degree");
  if (n > kMaxDegree) detail::parse_fail(lines[0], "degree " + std::to_string(n) + " exceeds " + std::to_string(kMaxDegree));
  std::vector<Permutation> gens;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      gens.push_back(parse_cycles(n, lines[i].text));
    } catch (const Error& e) {
      detail::parse_fail(lines[i], e.what());
    }
  }
  return PermGroup(n, std::move(gens));
}

inline std::string format_group(const PermGroup& g) {
  std::string out = "degree " + std::to_string(g.degree()) + "\n";
  for (const Permutation& p : g.generators()) out += to_cycle_string(p) + "\n";
  return out;
}

inline Digraph parse_digraph(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) fail(ErrorKind::parse_error, "empty digraph file");
  std::size_t n = detail::header_value(lines[0], "");
  if (n > kMaxObjectPoints) detail::parse_fail(lines[0], "too many points");
  Digraph d(n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto v = detail::numbers(lines[i], lines[i].text);
    if (v.size() != 2) detail::parse_fail(lines[i], "expected \"u v\"");
    Point a = detail::point_in(lines[i], v[0], n), b = detail::point_in(lines[i], v[1], n);
    if (a == b) detail::parse_fail(lines[i], "loop at " + std::to_string(a));
    d.add_arc(a, b);
  }
  return d;
}

inline std::string format_digraph(const Digraph& d) {
  std::string out = std::to_string(d.order()) + "\n";
  for (auto [u, v] : d.arcs()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

inline IncidenceStructure parse_incidence(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) fail(ErrorKind::parse_error, "empty incidence file");
  std::size_t n = detail::header_value(lines[0], "points");
  if (n > kMaxObjectPoints) detail::parse_fail(lines[0], "too many points");
  std::vector<PointSet> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view t = lines[i].text;
    if (t.substr(0, 2) != "l:") detail::parse_fail(lines[i], "expected \"l: p1 p2 ...\"");
    PointSet l;
    for (std::size_t v : detail::numbers(lines[i], t.substr(2))) l |= PointSet{detail::point_in(lines[i], v, n)};
    if (l.empty()) detail::parse_fail(lines[i], "empty line");
    out.push_back(l);
  }
  return IncidenceStructure(n, std::move(out));
}

inline std::string format_incidence(const IncidenceStructure& s) {
  std::string out = "points " + std::to_string(s.order()) + "\n";
  for (PointSet l : s.lines()) {
    out += "l:";
    for (Point p : l.to_vector()) out += " " + std::to_string(p);
    out += "\n";
  }
  return out;
}

inline ColoredTupleSystem parse_tuple_system(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) fail(ErrorKind::parse_error, "empty tuple file");
  std::size_t n = detail::header_value(lines[0], "points");
  if (n > kMaxObjectPoints) detail::parse_fail(lines[0], "too many points");
  std::vector<ColoredTuple> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view t = lines[i].text;
    if (t.substr(0, 2) != "t:") detail::parse_fail(lines[i], "expected \"t: color p1 p2 ...\"");
    auto v = detail::numbers(lines[i], t.substr(2));
    if (v.size() < 2) detail::parse_fail(lines[i], "tuple needs a color and at least one point");
    ColoredTuple tup{{}, static_cast<int>(v[0])};
    for (std::size_t k = 1; k < v.size(); ++k) tup.points.push_back(detail::point_in(lines[i], v[k], n));
    out.push_back(std::move(tup));
  }
  try {
    return ColoredTupleSystem(n, std::move(out));
  } catch (const Error& e) {
    fail(ErrorKind::parse_error, e.what());
  }
}

inline std::string format_tuple_system(const ColoredTupleSystem& s) {
  std::string out = "points " + std::to_string(s.order()) + "\n";
  for (const ColoredTuple& t : s.tuples()) {
    out += "t: " + std::to_string(t.color);
    for (Point p : t.points) out += " " + std::to_string(p);
    out += "\n";
  }
  return out;
}

using AnyObject = std::variant<Digraph, IncidenceStructure, ColoredTupleSystem>;

// Picks the format from the header and the first body line.
inline AnyObject parse_object(std::string_view text) {
  auto lines = detail::content_lines(text);
  if (lines.empty()) fail(ErrorKind::parse_error, "empty object file");
  if (lines[0].text.rfind("points", 0) != 0) return parse_digraph(text);
  if (lines.size() > 1 && lines[1].text.rfind("t:", 0) == 0) return parse_tuple_system(text);
  return parse_incidence(text);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse_error, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace closurekit

#endif  // CLOSUREKIT_IO_HPP_

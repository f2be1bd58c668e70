#include "hexforge/io/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "hexforge/errors.hpp"

namespace hexforge {

namespace {

// Rows of numeric tokens; separators are whitespace and commas, '#' comments.
std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> toks;
    std::string cur;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) toks.push_back(cur);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

long to_long(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ": bad integer '" + s + "'");
  }
}

double to_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ": bad number '" + s + "'");
  }
}

} // namespace

std::vector<std::pair<int, int>> read_override(const std::string& path, std::ostream* warn) {
  std::vector<std::pair<int, int>> out;
  std::set<int> seen;
  for (const auto& row : read_rows(path)) {
    if (row.size() != 2)
      throw ParseError(path + ": override rows need exactly 'element patch'");
    int elem = static_cast<int>(to_long(row[0], path));
    int patch = static_cast<int>(to_long(row[1], path));
    if (!seen.insert(elem).second) {
      if (warn) *warn << "warning: duplicate override for element " << elem << ", last row wins\n";
      for (auto& p : out)
        if (p.first == elem) p.second = patch;
      continue;
    }
    out.emplace_back(elem, patch);
  }
  return out;
}

std::vector<int> read_sharp(const std::string& path, std::ostream* warn) {
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& row : read_rows(path)) {
    for (const auto& tok : row) {
      int v = static_cast<int>(to_long(tok, path));
      if (!seen.insert(v).second) {
        if (warn) *warn << "warning: duplicate sharp vertex " << v << "\n";
        continue;
      }
      out.push_back(v);
    }
  }
  return out;
}

RefineList read_refine(const std::string& path, int level, std::ostream* warn) {
  RefineList list;
  list.level = level;
  std::set<int> seen;
  for (const auto& row : read_rows(path)) {
    for (const auto& tok : row) {
      int v = static_cast<int>(to_long(tok, path));
      if (v < 0) throw InvalidRefineList(path + ": negative cell index");
      if (!seen.insert(v).second) {
        if (warn) *warn << "warning: duplicate refine index " << v << "\n";
        continue;
      }
    }
  }
  list.cells.assign(seen.begin(), seen.end());
  return list;
}

std::vector<std::pair<long, Point3>> read_corner_file(const std::string& path) {
  std::vector<std::pair<long, Point3>> out;
  for (const auto& row : read_rows(path)) {
    if (row.size() != 4) throw ParseError(path + ": corner rows need 'id x y z'");
    out.emplace_back(to_long(row[0], path),
                     Point3{to_double(row[1], path), to_double(row[2], path), to_double(row[3], path)});
  }
  return out;
}

void write_corner_file(const std::string& path, const std::vector<std::pair<long, Point3>>& corners) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  char buf[128];
  for (const auto& [id, p] : corners) {
    std::snprintf(buf, sizeof(buf), "%ld %.17g %.17g %.17g\n", id, p.x, p.y, p.z);
    out << buf;
  }
}

std::vector<std::array<long, 2>> read_edge_file(const std::string& path) {
  std::vector<std::array<long, 2>> out;
  for (const auto& row : read_rows(path)) {
    if (row.size() != 2) throw ParseError(path + ": edge rows need 2 corner ids");
    out.push_back({to_long(row[0], path), to_long(row[1], path)});
  }
  return out;
}

void write_edge_file(const std::string& path, const std::vector<std::array<long, 2>>& edges) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (const auto& e : edges) out << e[0] << "," << e[1] << "\n";
}

std::vector<std::array<long, 4>> read_face_file(const std::string& path) {
  std::vector<std::array<long, 4>> out;
  for (const auto& row : read_rows(path)) {
    if (row.size() != 4) throw ParseError(path + ": face rows need 4 corner ids");
    out.push_back({to_long(row[0], path), to_long(row[1], path), to_long(row[2], path),
                   to_long(row[3], path)});
  }
  return out;
}

void write_face_file(const std::string& path, const std::vector<std::array<long, 4>>& faces) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (const auto& f : faces) out << f[0] << "," << f[1] << "," << f[2] << "," << f[3] << "\n";
}

std::vector<std::array<long, 8>> read_cells_file(const std::string& path) {
  std::vector<std::array<long, 8>> out;
  for (const auto& row : read_rows(path)) {
    if (row.size() != 8) throw ParseError(path + ": cell rows need 8 corner ids");
    std::array<long, 8> c;
    for (int k = 0; k < 8; ++k) c[k] = to_long(row[k], path);
    out.push_back(c);
  }
  return out;
}

} // namespace hexforge

#include "hexforge/io/keyword.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hexforge/errors.hpp"

namespace hexforge {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
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
  return toks;
}

long to_long(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "' in " + what);
  }
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in " + what);
  }
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

} // namespace

KeywordDoc read_keyword(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open keyword file: " + path);

  KeywordDoc doc;
  enum class Section { None, Node, Shell, Solid, Skip } section = Section::None;
  std::string line;
  std::vector<std::string> pending;  // accumulated solid tokens across lines
  int lineno = 0;

  auto flush_solid = [&]() {
    if (pending.empty()) return;
    if (pending.size() < 10)
      throw ParseError(path + ": incomplete solid record near line " + std::to_string(lineno));
    KeywordDoc::Solid s;
    s.id = to_long(pending[0], "solid id");
    s.part = static_cast<int>(to_long(pending[1], "solid part"));
    for (int k = 0; k < 8; ++k) s.n[k] = to_long(pending[2 + k], "solid node");
    doc.solids.push_back(s);
    pending.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '$') continue;
    if (line[0] == '*') {
      flush_solid();
      std::string kw = upper(tokenize(line.substr(1)).empty() ? "" : tokenize(line.substr(1))[0]);
      if (kw == "NODE") section = Section::Node;
      else if (kw == "ELEMENT_SHELL") section = Section::Shell;
      else if (kw == "ELEMENT_SOLID") section = Section::Solid;
      else if (kw == "END") break;
      else if (kw == "KEYWORD") section = Section::None;
      else section = Section::Skip;
      continue;
    }
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    switch (section) {
      case Section::Node: {
        if (toks.size() < 4)
          throw ParseError(path + ": node record needs id and 3 coordinates, line " + std::to_string(lineno));
        doc.node_ids.push_back(to_long(toks[0], "node id"));
        doc.node_pos.push_back({to_double(toks[1], "node x"), to_double(toks[2], "node y"),
                                to_double(toks[3], "node z")});
        break;
      }
      case Section::Shell: {
        if (toks.size() < 5)
          throw ParseError(path + ": shell record needs id, part and 3+ nodes, line " + std::to_string(lineno));
        KeywordDoc::Shell sh;
        sh.id = to_long(toks[0], "shell id");
        sh.part = static_cast<int>(to_long(toks[1], "shell part"));
        int n = std::min<int>(4, static_cast<int>(toks.size()) - 2);
        for (int k = 0; k < n; ++k) sh.n[k] = to_long(toks[2 + k], "shell node");
        sh.count = n;
        if (sh.count == 4 && (sh.n[3] == 0 || sh.n[3] == sh.n[2])) sh.count = 3;
        doc.shells.push_back(sh);
        break;
      }
      case Section::Solid: {
        for (auto& t : toks) pending.push_back(std::move(t));
        if (pending.size() >= 10) flush_solid();
        break;
      }
      default:
        break;
    }
  }
  flush_solid();
  return doc;
}

void write_keyword(const std::string& path, const KeywordDoc& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write keyword file: " + path);
  char buf[160];
  out << "*KEYWORD\n";
  if (!doc.node_ids.empty()) {
    out << "*NODE\n";
    for (std::size_t i = 0; i < doc.node_ids.size(); ++i) {
      const Point3& p = doc.node_pos[i];
      std::snprintf(buf, sizeof(buf), "%8ld %25.17g %25.17g %25.17g\n", doc.node_ids[i], p.x, p.y, p.z);
      out << buf;
    }
  }
  if (!doc.shells.empty()) {
    out << "*ELEMENT_SHELL\n";
    for (const auto& sh : doc.shells) {
      if (sh.count == 3)
        std::snprintf(buf, sizeof(buf), "%8ld %8d %8ld %8ld %8ld\n", sh.id, sh.part, sh.n[0], sh.n[1], sh.n[2]);
      else
        std::snprintf(buf, sizeof(buf), "%8ld %8d %8ld %8ld %8ld %8ld\n", sh.id, sh.part, sh.n[0], sh.n[1],
                      sh.n[2], sh.n[3]);
      out << buf;
    }
  }
  if (!doc.solids.empty()) {
    out << "*ELEMENT_SOLID\n";
    for (const auto& so : doc.solids) {
      std::snprintf(buf, sizeof(buf), "%8ld %8d %8ld %8ld %8ld %8ld %8ld %8ld %8ld %8ld\n", so.id, so.part,
                    so.n[0], so.n[1], so.n[2], so.n[3], so.n[4], so.n[5], so.n[6], so.n[7]);
      out << buf;
    }
  }
  out << "*END\n";
  if (!out) throw IoError("write failed: " + path);
}

TriSurface read_keyword_tri(const std::string& path) {
  KeywordDoc doc = read_keyword(path);
  if (!doc.solids.empty())
    throw MixedElementError(path + ": surface file contains solid elements");

  TriSurface surf;
  std::unordered_map<long, int> id_map;
  id_map.reserve(doc.node_ids.size() * 2);
  surf.node_ids = doc.node_ids;
  surf.mesh.vertices = doc.node_pos;
  for (std::size_t i = 0; i < doc.node_ids.size(); ++i) {
    if (!id_map.emplace(doc.node_ids[i], static_cast<int>(i)).second)
      throw ParseError(path + ": duplicate node id " + std::to_string(doc.node_ids[i]));
  }
  auto lookup = [&](long id) {
    auto it = id_map.find(id);
    if (it == id_map.end())
      throw ParseError(path + ": shell references unknown node " + std::to_string(id));
    return it->second;
  };
  for (const auto& sh : doc.shells) {
    if (sh.count != 3)
      throw MixedElementError(path + ": quad shell in triangle surface (element " +
                              std::to_string(sh.id) + ")");
    surf.mesh.triangles.push_back({lookup(sh.n[0]), lookup(sh.n[1]), lookup(sh.n[2])});
    surf.labels.push_back(sh.part);
  }
  surf.mesh.finalize();
  return surf;
}

void write_keyword_tri(const std::string& path, const TriMesh& mesh,
                       const std::vector<int>& labels, const std::vector<long>* node_ids) {
  if (labels.size() != mesh.triangles.size())
    throw ValidationError("label count does not match triangle count");
  KeywordDoc doc;
  doc.node_pos = mesh.vertices;
  doc.node_ids.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    doc.node_ids[i] = node_ids ? (*node_ids)[i] : static_cast<long>(i) + 1;
  doc.shells.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    KeywordDoc::Shell& sh = doc.shells[t];
    sh.id = static_cast<long>(t) + 1;
    sh.part = labels[t];
    for (int k = 0; k < 3; ++k) sh.n[k] = doc.node_ids[mesh.triangles[t][k]];
    sh.count = 3;
  }
  write_keyword(path, doc);
}

} // namespace hexforge

#include "ldpnet/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ldpnet {

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", x);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::invalid_argument("bad float: " + s);
  return v;
}

std::string nested_to_json(const NestedEmpiricalMeasure& m) {
  nlohmann::json j;
  j["schema"] = "ldpnet-nested-measure-v1";
  j["graph"] = serialize_graph(*m.graph);
  auto& st = j["states"] = nlohmann::json::array();
  for (const auto& u : m.states) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : u) row.push_back(hexfloat(v));
    st.push_back(std::move(row));
  }
  return j.dump(2);
}

NestedEmpiricalMeasure nested_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "ldpnet-nested-measure-v1")
    throw std::invalid_argument("unknown measure schema");
  auto g = std::make_shared<GraphSample>(parse_graph(j.at("graph")));
  NestedEmpiricalMeasure m;
  m.graph = g;
  for (const auto& row : j.at("states")) {
    Vec u;
    for (const auto& v : row) u.push_back(parse_hexfloat(v.get<std::string>()));
    m.states.push_back(std::move(u));
  }
  if (static_cast<int>(m.states.size()) != g->size())
    throw std::invalid_argument("graph/states size mismatch");
  return m;
}

}  // namespace ldpnet

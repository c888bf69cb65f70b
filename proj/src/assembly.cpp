#include "sfrec/assembly.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sfrec/dual.hpp"

namespace sfrec {

using nlohmann::json;

double PosedPrimitive::existence() const { return sigmoid(existence_logit); }

double smooth_union(double a, double b, double beta) {
  double h = std::clamp(0.5 + 0.5 * (b - a) / beta, 0.0, 1.0);
  return b * (1.0 - h) + a * h - beta * h * (1.0 - h);
}

SmoothUnionGrad smooth_union_grad(double a, double b, double beta) {
  double raw = 0.5 + 0.5 * (b - a) / beta;
  double h = std::clamp(raw, 0.0, 1.0);
  SmoothUnionGrad g;
  g.value = b * (1.0 - h) + a * h - beta * h * (1.0 - h);
  // d/dh of the blend, nonzero only when the clamp is inactive.
  double dh = (a - b) - beta * (1.0 - 2.0 * h);
  bool open = raw > 0.0 && raw < 1.0;
  double dh_da = open ? -0.5 / beta : 0.0;
  double dh_db = open ? 0.5 / beta : 0.0;
  double dh_dbeta = open ? -0.5 * (b - a) / (beta * beta) : 0.0;
  g.da = h + dh * dh_da;
  g.db = (1.0 - h) + dh * dh_db;
  g.dbeta = -h * (1.0 - h) + dh * dh_dbeta;
  return g;
}

std::size_t Assembly::live_count() const {
  std::size_t n = 0;
  for (const auto& prim : primitives) n += prim.alive() ? 1 : 0;
  return n;
}

double Assembly::eval_field(const Vec3& p, FieldMode mode) const {
  bool any = false;
  double field = kEmptyFieldValue;
  for (const auto& prim : primitives) {
    double g;
    if (mode == FieldMode::Hard) {
      if (!prim.alive()) continue;
      g = prim.eval(p);
    } else {
      double q = prim.existence();
      g = q * prim.eval(p) + (1.0 - q);
    }
    field = any ? smooth_union(field, g, prim.blend) : g;
    any = true;
  }
  return field;
}

double Assembly::eval_field_with_q(const Vec3& p, const std::vector<double>& q) const {
  bool any = false;
  double field = kEmptyFieldValue;
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    double g = q[i] * primitives[i].eval(p) + (1.0 - q[i]);
    field = any ? smooth_union(field, g, primitives[i].blend) : g;
    any = true;
  }
  return field;
}

double Assembly::occupancy(const Vec3& p, FieldMode mode) const {
  return sigmoid(-beta_occ * eval_field(p, mode));
}

Assembly Assembly::hard_filtered() const {
  Assembly out;
  out.beta_occ = beta_occ;
  for (const auto& prim : primitives)
    if (prim.alive()) out.primitives.push_back(prim);
  return out;
}

Box3 Assembly::bounding_box_estimate() const {
  Box3 box;
  for (const auto& prim : primitives) {
    if (!prim.alive()) continue;
    const auto& th = prim.params;
    double reach = std::sqrt(th.sx * th.sx + th.sy * th.sy + th.sz * th.sz) + th.d + th.o +
                   std::fabs(th.b) * th.sz + std::fabs(th.t) * std::min(th.sx, th.sy);
    Vec3 c = prim.pose.translation;
    box.expand({c.x - reach, c.y - reach, c.z - reach});
    box.expand({c.x + reach, c.y + reach, c.z + reach});
  }
  return box;
}

namespace {

constexpr int kSchemaVersion = 1;

json params_to_json(const SuperFrustumParams& th) {
  return json{{"sx", th.sx}, {"sy", th.sy}, {"sz", th.sz}, {"r", th.r},
              {"d", th.d},   {"t", th.t},   {"b", th.b},   {"o", th.o}};
}

double require_number(const json& j, const char* path, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::runtime_error(std::string("assembly json: missing or non-numeric field ") + path +
                             "." + key);
  return j[key].get<double>();
}

}  // namespace

std::string serialize(const Assembly& z) {
  json doc;
  doc["version"] = kSchemaVersion;
  doc["beta_occ"] = z.beta_occ;
  doc["primitives"] = json::array();
  for (const auto& prim : z.primitives) {
    json p;
    p["params"] = params_to_json(prim.params);
    p["pose"] = {
        {"quat", {prim.pose.rotation.w, prim.pose.rotation.x, prim.pose.rotation.y,
                  prim.pose.rotation.z}},
        {"t", {prim.pose.translation.x, prim.pose.translation.y, prim.pose.translation.z}}};
    p["blend"] = prim.blend;
    p["existence"] = prim.existence_logit;
    doc["primitives"].push_back(p);
  }
  return doc.dump(2);
}

Assembly deserialize(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("assembly json: unknown or missing version");
  Assembly z;
  z.beta_occ = require_number(doc, "$", "beta_occ");
  if (!doc.contains("primitives") || !doc["primitives"].is_array())
    throw std::runtime_error("assembly json: missing primitives array");
  for (const auto& p : doc["primitives"]) {
    PosedPrimitive prim;
    if (!p.contains("params"))
      throw std::runtime_error("assembly json: missing primitives[].params");
    const auto& par = p["params"];
    prim.params.sx = require_number(par, "params", "sx");
    prim.params.sy = require_number(par, "params", "sy");
    prim.params.sz = require_number(par, "params", "sz");
    prim.params.r = require_number(par, "params", "r");
    prim.params.d = require_number(par, "params", "d");
    prim.params.t = require_number(par, "params", "t");
    prim.params.b = require_number(par, "params", "b");
    prim.params.o = require_number(par, "params", "o");
    if (!p.contains("pose") || !p["pose"].contains("quat") || !p["pose"].contains("t"))
      throw std::runtime_error("assembly json: missing primitives[].pose.quat or .t");
    const auto& q = p["pose"]["quat"];
    const auto& t = p["pose"]["t"];
    if (!q.is_array() || q.size() != 4 || !t.is_array() || t.size() != 3)
      throw std::runtime_error(
          "assembly json: pose.quat must be [w,x,y,z], pose.t must be [x,y,z]");
    prim.pose.rotation = {q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                          q[3].get<double>()};
    prim.pose.translation = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
    prim.blend = require_number(p, "primitives[]", "blend");
    prim.existence_logit = require_number(p, "primitives[]", "existence");
    z.primitives.push_back(prim);
  }
  return z;
}

void save_assembly(const Assembly& z, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(z) << "\n";
}

Assembly load_assembly(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace sfrec

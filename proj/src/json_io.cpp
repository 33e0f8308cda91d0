#include "curves/json_io.hpp"

#include <fstream>
#include <set>

namespace curves {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw CurveError(Errc::SchemaError, where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw CurveError(Errc::SchemaError, where + ": unknown field '" + it.key() + "'");
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw CurveError(Errc::SchemaError, where + ": missing field '" + key + "'");
  if (!j.at(key).is_number_integer()) throw CurveError(Errc::SchemaError, where + ": '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::string get_str(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw CurveError(Errc::SchemaError, where + ": missing field '" + key + "'");
  if (!j.at(key).is_string()) throw CurveError(Errc::SchemaError, where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::vector<int> get_int_array(const json& j, const std::string& key, size_t n, const std::string& where) {
  if (!j.contains(key)) throw CurveError(Errc::SchemaError, where + ": missing field '" + key + "'");
  const json& a = j.at(key);
  if (!a.is_array() || (n != 0 && a.size() != n))
    throw CurveError(Errc::SchemaError, where + ": '" + key + "' must be an array of " + std::to_string(n) + " integers");
  std::vector<int> out;
  for (const auto& v : a) {
    if (!v.is_number_integer()) throw CurveError(Errc::SchemaError, where + ": '" + key + "' must hold integers");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

json diagram_to_json(const CurveDiagram& d) {
  json j;
  j["crossings"] = json::array();
  for (const auto& c : d.crossings)
    j["crossings"].push_back({{"id", c.id}, {"slots", {c.slots[0], c.slots[1], c.slots[2], c.slots[3]}}});
  j["arcs"] = json::array();
  for (const auto& a : d.arcs) j["arcs"].push_back({{"id", a.id}, {"ends", {a.ends[0], a.ends[1]}}});
  j["basepoint"] = d.basepoint;
  j["genus"] = d.genus;
  return j;
}

CurveDiagram diagram_from_json(const json& j) {
  check_keys(j, {"crossings", "arcs", "basepoint", "genus"}, "diagram");
  CurveDiagram d;
  if (!j.contains("crossings") || !j.at("crossings").is_array())
    throw CurveError(Errc::SchemaError, "diagram: 'crossings' must be an array");
  for (const auto& cj : j.at("crossings")) {
    check_keys(cj, {"id", "slots"}, "crossing");
    Crossing c;
    c.id = get_int(cj, "id", "crossing");
    auto s = get_int_array(cj, "slots", 4, "crossing");
    std::copy(s.begin(), s.end(), c.slots.begin());
    d.crossings.push_back(c);
  }
  if (!j.contains("arcs") || !j.at("arcs").is_array())
    throw CurveError(Errc::SchemaError, "diagram: 'arcs' must be an array");
  for (const auto& aj : j.at("arcs")) {
    check_keys(aj, {"id", "ends"}, "arc");
    Arc a;
    a.id = get_int(aj, "id", "arc");
    auto e = get_int_array(aj, "ends", 2, "arc");
    a.ends = {e[0], e[1]};
    d.arcs.push_back(a);
  }
  d.basepoint = get_int(j, "basepoint", "diagram");
  d.genus = get_int(j, "genus", "diagram");
  d.sort_by_id();
  std::set<int> cids, aids;
  for (const auto& c : d.crossings)
    if (!cids.insert(c.id).second) throw CurveError(Errc::IdentifierCollision, "duplicate crossing id");
  for (const auto& a : d.arcs)
    if (!aids.insert(a.id).second) throw CurveError(Errc::IdentifierCollision, "duplicate arc id");
  return d;
}

json move_to_json(const Move& m) {
  json j;
  j["type"] = move_type_name(m.type);
  switch (m.type) {
    case MoveType::R1plus:
      j["arc"] = m.arc;
      j["side"] = m.side == KinkSide::left ? "left" : "right";
      j["new_crossing"] = m.new_crossing;
      break;
    case MoveType::R1minus: j["crossing"] = m.crossing; break;
    case MoveType::R2plus:
      j["arcs"] = {m.arcs[0], m.arcs[1]};
      j["orientation"] = m.orientation == RelOrientation::parallel ? "parallel" : "antiparallel";
      j["new_crossings"] = {m.new_crossings[0], m.new_crossings[1]};
      break;
    case MoveType::R2minus: j["crossings"] = m.crossings; break;
    case MoveType::R3:
      j["crossings"] = m.crossings;
      j["face"] = {m.face[0], m.face[1], m.face[2]};
      break;
  }
  return j;
}

Move move_from_json(const json& j) {
  std::string t = get_str(j, "type", "move");
  Move m;
  if (t == "R1+") {
    check_keys(j, {"type", "arc", "side", "new_crossing"}, "R1+ move");
    m.type = MoveType::R1plus;
    m.arc = get_int(j, "arc", "R1+");
    std::string s = get_str(j, "side", "R1+");
    if (s != "left" && s != "right") throw CurveError(Errc::SchemaError, "R1+: side must be left or right");
    m.side = s == "left" ? KinkSide::left : KinkSide::right;
    m.new_crossing = get_int(j, "new_crossing", "R1+");
  } else if (t == "R1-") {
    check_keys(j, {"type", "crossing"}, "R1- move");
    m.type = MoveType::R1minus;
    m.crossing = get_int(j, "crossing", "R1-");
  } else if (t == "R2+") {
    check_keys(j, {"type", "arcs", "orientation", "new_crossings"}, "R2+ move");
    m.type = MoveType::R2plus;
    auto a = get_int_array(j, "arcs", 2, "R2+");
    m.arcs = {a[0], a[1]};
    std::string o = get_str(j, "orientation", "R2+");
    if (o != "parallel" && o != "antiparallel")
      throw CurveError(Errc::SchemaError, "R2+: orientation must be parallel or antiparallel");
    m.orientation = o == "parallel" ? RelOrientation::parallel : RelOrientation::antiparallel;
    auto n = get_int_array(j, "new_crossings", 2, "R2+");
    m.new_crossings = {n[0], n[1]};
  } else if (t == "R2-") {
    check_keys(j, {"type", "crossings"}, "R2- move");
    m.type = MoveType::R2minus;
    auto c = get_int_array(j, "crossings", 2, "R2-");
    m.crossings.assign(c.begin(), c.end());
  } else if (t == "R3") {
    check_keys(j, {"type", "crossings", "face"}, "R3 move");
    m.type = MoveType::R3;
    auto c = get_int_array(j, "crossings", 3, "R3");
    m.crossings.assign(c.begin(), c.end());
    auto f = get_int_array(j, "face", 3, "R3");
    m.face = {f[0], f[1], f[2]};
  } else {
    throw CurveError(Errc::UnknownMoveVariant, "unknown move type '" + t + "'");
  }
  return m;
}

json script_to_json(const HomotopyScript& s) {
  json j;
  j["version"] = 1;
  j["surface"] = "plane";
  j["initial"] = diagram_to_json(s.initial);
  j["moves"] = json::array();
  for (const auto& m : s.moves) j["moves"].push_back(move_to_json(m));
  j["terminal"] = s.terminal == Terminal::curve ? "curve" : "point";
  return j;
}

HomotopyScript script_from_json(const json& j) {
  check_keys(j, {"version", "surface", "initial", "moves", "terminal"}, "script");
  if (get_int(j, "version", "script") != 1) throw CurveError(Errc::SchemaError, "script: unsupported version");
  if (get_str(j, "surface", "script") != "plane")
    throw CurveError(Errc::SchemaError, "script: only surface 'plane' is supported");
  HomotopyScript s;
  if (!j.contains("initial")) throw CurveError(Errc::SchemaError, "script: missing 'initial'");
  s.initial = diagram_from_json(j.at("initial"));
  if (!j.contains("moves") || !j.at("moves").is_array())
    throw CurveError(Errc::SchemaError, "script: 'moves' must be an array");
  for (const auto& mj : j.at("moves")) s.moves.push_back(move_from_json(mj));
  std::string t = get_str(j, "terminal", "script");
  if (t != "curve" && t != "point") throw CurveError(Errc::SchemaError, "script: terminal must be curve or point");
  s.terminal = t == "curve" ? Terminal::curve : Terminal::point;
  return s;
}

json halving_to_json(const SubcurveSelection& sel) {
  json j;
  j["path"] = json::array();
  for (const SubcurveEntry& e : sel.entries) {
    json ej;
    ej["level"] = e.level;
    if (e.crossing < 0)
      ej["crossing"] = nullptr;
    else
      ej["crossing"] = e.crossing;
    ej["side"] = e.side;
    j["path"].push_back(ej);
  }
  if (sel.outcome == SubcurveSelection::Outcome::point) {
    j["outcome"] = "point";
  } else {
    j["outcome"] = "resume_at_level";
    j["resume_level"] = sel.resume_level;
  }
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CurveError(Errc::SchemaError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CurveError(Errc::SchemaError, path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw CurveError(Errc::SchemaError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace curves

#include "lieavg/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lieavg/errors.hpp"

namespace lieavg {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of expression strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ConfigError(where + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

Rational parse_k(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>(), 1);
  if (!j.is_string()) throw ConfigError(where + " must be a \"num/den\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Config from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  Config cfg;
  SystemSpec& s = cfg.system;
  if (auto it = root.find("name"); it != root.end()) s.name = it->get<std::string>();
  const json& n = need(root, "n", "config");
  if (!n.is_number_integer() || n.get<int>() < 1) throw ConfigError("n must be a positive integer");
  s.n = n.get<int>();
  if (auto it = root.find("params"); it != root.end()) {
    if (!it->is_object()) throw ConfigError("params must be an object of numbers");
    for (const auto& [k, v] : it->items()) s.params[k] = number(v, "params." + k);
  }
  if (auto it = root.find("definitions"); it != root.end()) {
    if (!it->is_array()) throw ConfigError("definitions must be an array of {name, expr}");
    for (const auto& d : *it) {
      if (!d.is_object()) throw ConfigError("definitions must be an array of {name, expr}");
      s.definitions.emplace_back(need(d, "name", "definition").get<std::string>(),
                                 need(d, "expr", "definition").get<std::string>());
    }
  }
  s.drift = string_list(need(root, "drift", "config"), "drift");
  const json& chans = need(root, "channels", "config");
  if (!chans.is_array() || chans.empty()) throw ConfigError("channels must be a non-empty array");
  for (std::size_t i = 0; i < chans.size(); ++i) {
    const std::string where = "channels[" + std::to_string(i) + "]";
    const json& c = chans[i];
    if (!c.is_object()) throw ConfigError(where + " must be an object");
    ChannelSpec ch;
    ch.components = string_list(need(c, "components", where), where + ".components");
    ch.p = number(need(c, "p", where), where + ".p");
    ch.k = parse_k(need(c, "k", where), where + ".k");
    const json& w = need(c, "waveform", where);
    if (w.is_string()) {
      ch.waveform.expr = w.get<std::string>();
    } else if (w.is_object()) {
      ch.waveform.expr = need(w, "expr", where + ".waveform").get<std::string>();
      if (auto a = w.find("antiderivative"); a != w.end() && !a->is_null())
        ch.waveform.antiderivative = a->get<std::string>();
    } else {
      throw ConfigError(where + ".waveform must be a string or {expr, antiderivative}");
    }
    s.channels.push_back(std::move(ch));
  }
  s.omega = number(need(root, "omega", "config"), "omega");
  if (auto it = root.find("box"); it != root.end()) {
    s.box_lo = number_list(need(*it, "lo", "box"), "box.lo");
    s.box_hi = number_list(need(*it, "hi", "box"), "box.hi");
  }
  if (auto it = root.find("guard"); it != root.end() && !it->is_null()) {
    GuardSpec g;
    g.expr = need(*it, "expr", "guard").get<std::string>();
    if (auto t = it->find("threshold"); t != it->end()) g.threshold = number(*t, "guard.threshold");
    s.guard = g;
  }
  if (auto it = root.find("simulation"); it != root.end()) {
    SimulationSpec& sim = cfg.simulation;
    if (auto x = it->find("x0"); x != it->end()) sim.x0 = number_list(*x, "simulation.x0");
    if (auto t = it->find("t_final"); t != it->end()) sim.t_final = number(*t, "simulation.t_final");
    if (auto d = it->find("dt"); d != it->end()) sim.dt = number(*d, "simulation.dt");
    if (auto e = it->find("state_effort"); e != it->end()) {
      const std::string mode = e->get<std::string>();
      if (mode == "first") sim.full_state_effort = false;
      else if (mode == "full") sim.full_state_effort = true;
      else throw ConfigError("simulation.state_effort must be \"first\" or \"full\"");
    }
  }
  if (cfg.simulation.x0.empty()) cfg.simulation.x0.assign(s.n, 0.0);
  if (static_cast<int>(cfg.simulation.x0.size()) != s.n) throw ConfigError("simulation.x0 must have n entries");
  if (!(cfg.simulation.t_final > 0.0)) throw ConfigError("simulation.t_final must be positive");
  if (!(cfg.simulation.dt > 0.0)) throw ConfigError("simulation.dt must be positive");
  return cfg;
}

}  // namespace

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return from_json(root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

std::string dump_config(const Config& cfg) {
  const SystemSpec& s = cfg.system;
  json root = json::object();
  root["name"] = s.name;
  root["n"] = s.n;
  root["params"] = json::object();
  for (const auto& [k, v] : s.params) root["params"][k] = v;
  root["definitions"] = json::array();
  for (const auto& [name, expr] : s.definitions) root["definitions"].push_back({{"name", name}, {"expr", expr}});
  root["drift"] = s.drift;
  root["channels"] = json::array();
  for (const auto& ch : s.channels) {
    json w = {{"expr", ch.waveform.expr}};
    if (ch.waveform.antiderivative) w["antiderivative"] = *ch.waveform.antiderivative;
    root["channels"].push_back({{"components", ch.components}, {"p", ch.p}, {"k", ch.k.str()}, {"waveform", w}});
  }
  root["omega"] = s.omega;
  if (!s.box_lo.empty()) root["box"] = {{"lo", s.box_lo}, {"hi", s.box_hi}};
  if (s.guard) root["guard"] = {{"expr", s.guard->expr}, {"threshold", s.guard->threshold}};
  root["simulation"] = {{"x0", cfg.simulation.x0},
                        {"t_final", cfg.simulation.t_final},
                        {"dt", cfg.simulation.dt},
                        {"state_effort", cfg.simulation.full_state_effort ? "full" : "first"}};
  return root.dump(2) + "\n";
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const Config& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << dump_config(cfg);
}

}  // namespace lieavg

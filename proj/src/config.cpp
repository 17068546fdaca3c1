#include "catrep/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "catrep/csv.hpp"

namespace catrep::config {

namespace {

std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string &value, const std::string &key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw ConfigError("invalid number '" + value + "' for key '" + key + "'");
  }
}

int parse_int(const std::string &value, const std::string &key) {
  double v = parse_double(value, key);
  double r = std::round(v);
  if (std::abs(v - r) > 1e-9)
    throw ConfigError("expected an integer for key '" + key + "', got '" + value + "'");
  return static_cast<int>(r);
}

bool parse_bool(const std::string &value, const std::string &key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected a boolean for key '" + key + "', got '" + value + "'");
}

std::vector<double> parse_list(const std::string &value, const std::string &key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, key));
  }
  if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
  return out;
}

struct SweepRange {
  bool has_range = false;
  double from = 0.0, to = 0.0;
  int points = 0;
};

void apply_protocol_key(rate::ProtocolConfig &p, const std::string &key,
                        const std::string &value) {
  if (key == "variant") {
    if (value == "qm") p.variant = rate::Variant::qm;
    else if (value == "graph") p.variant = rate::Variant::graph;
    else if (value == "single_avg") p.variant = rate::Variant::single_avg;
    else throw ConfigError("unknown variant '" + value + "'");
  } else if (key == "loss_order") {
    p.code.loss_order = parse_int(value, key);
  } else if (key == "alpha") {
    p.code.alpha = parse_double(value, key);
  } else if (key == "l_total_km") {
    p.l_total_km = parse_double(value, key);
  } else if (key == "l0_km") {
    p.l0_km = parse_double(value, key);
  } else if (key == "attenuation_db_km") {
    p.attenuation_db_km = parse_double(value, key);
  } else if (key == "speed_km_s") {
    p.speed_km_s = parse_double(value, key);
  } else if (key == "t0_s") {
    p.t0_s = parse_double(value, key);
  } else if (key == "t_coh_s") {
    p.t_coh_s = parse_double(value, key);
  } else if (key == "p_m") {
    p.p_m = parse_double(value, key);
  } else if (key == "m") {
    p.m_multiplex = parse_int(value, key);
  } else if (key == "desired_residues") {
    p.desired_residues.clear();
    for (double v : parse_list(value, key))
      p.desired_residues.push_back(static_cast<int>(std::lround(v)));
  } else if (key == "usd") {
    if (value == "original") p.usd = rate::UsdConvention::original;
    else if (value == "damped") p.usd = rate::UsdConvention::damped;
    else throw ConfigError("unknown usd convention '" + value + "'");
  } else if (key == "memory") {
    if (value == "none") p.memory = rate::MemoryModel::none;
    else if (value == "depolarizing") p.memory = rate::MemoryModel::depolarizing;
    else if (value == "dephasing") p.memory = rate::MemoryModel::dephasing;
    else throw ConfigError("unknown memory model '" + value + "'");
  } else if (key == "n_sources") {
    p.n_sources = parse_double(value, key);
  } else if (key == "dsm_single_side") {
    p.dsm_single_side = parse_bool(value, key);
  } else {
    throw ConfigError("unknown key '" + key + "' in section [protocol]");
  }
}

} // namespace

LoadedConfig parse_config_text(const std::string &text, const std::string &origin) {
  LoadedConfig cfg;
  SweepRange range;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "protocol" && section != "sweep" && section != "optimize" &&
          section != "output")
        throw ConfigError("unknown section [" + section + "]");
      if (section == "sweep") cfg.has_sweep = true;
      if (section == "optimize") cfg.has_optimize = true;
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");

    if (section == "protocol") {
      apply_protocol_key(cfg.protocol, key, value);
    } else if (section == "sweep") {
      if (key == "param") cfg.sweep_param = value;
      else if (key == "from") { range.from = parse_double(value, key); range.has_range = true; }
      else if (key == "to") { range.to = parse_double(value, key); range.has_range = true; }
      else if (key == "points") { range.points = parse_int(value, key); range.has_range = true; }
      else if (key == "values") cfg.sweep_values = parse_list(value, key);
      else throw ConfigError("unknown key '" + key + "' in section [sweep]");
    } else if (section == "optimize") {
      if (key == "objective") {
        if (value == "per_channel_use") cfg.optimize.objective = explorer::Objective::per_channel_use;
        else if (value == "rate_bits") cfg.optimize.objective = explorer::Objective::rate_bits;
        else throw ConfigError("unknown objective '" + value + "'");
      } else if (key == "alpha_min") cfg.optimize.alpha_min = parse_double(value, key);
      else if (key == "alpha_max") cfg.optimize.alpha_max = parse_double(value, key);
      else if (key == "alpha_points") cfg.optimize.alpha_points = parse_int(value, key);
      else if (key == "m_min") cfg.optimize.m_min = parse_int(value, key);
      else if (key == "m_max") cfg.optimize.m_max = parse_int(value, key);
      else throw ConfigError("unknown key '" + key + "' in section [optimize]");
    } else if (section == "output") {
      if (key == "path") cfg.output_path = value;
      else throw ConfigError("unknown key '" + key + "' in section [output]");
    } else {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside of any section");
    }
  }

  if (cfg.has_sweep && cfg.sweep_values.empty()) {
    if (!range.has_range)
      throw ConfigError("section [sweep] needs either values or from/to/points");
    if (range.points < 1) throw ConfigError("sweep needs at least one point");
    cfg.sweep_values = explorer::linspace(range.from, range.to, range.points);
  }
  return cfg;
}

LoadedConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string variant_name(rate::Variant v) {
  switch (v) {
    case rate::Variant::qm: return "qm";
    case rate::Variant::graph: return "graph";
    case rate::Variant::single_avg: return "single_avg";
  }
  return "?";
}

std::string memory_name(rate::MemoryModel m) {
  switch (m) {
    case rate::MemoryModel::none: return "none";
    case rate::MemoryModel::depolarizing: return "depolarizing";
    case rate::MemoryModel::dephasing: return "dephasing";
  }
  return "?";
}

std::string usd_name(rate::UsdConvention u) {
  switch (u) {
    case rate::UsdConvention::original: return "original";
    case rate::UsdConvention::damped: return "damped";
  }
  return "?";
}

std::vector<std::pair<std::string, std::string>> effective_params(
    const rate::ProtocolConfig &c) {
  using csv::format_number;
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("variant", variant_name(c.variant));
  out.emplace_back("loss_order", std::to_string(c.code.loss_order));
  out.emplace_back("alpha", format_number(c.code.alpha));
  out.emplace_back("l_total_km", format_number(c.l_total_km));
  out.emplace_back("l0_km", format_number(c.l0_km));
  out.emplace_back("attenuation_db_km", format_number(c.attenuation_db_km));
  out.emplace_back("speed_km_s", format_number(c.speed_km_s));
  out.emplace_back("t0_s", format_number(c.t0_s));
  out.emplace_back("t_coh_s", format_number(c.t_coh_s));
  out.emplace_back("p_m", format_number(c.p_m));
  out.emplace_back("m", std::to_string(c.m_multiplex));
  {
    std::string resi;
    for (std::size_t i = 0; i < c.desired_residues.size(); ++i) {
      if (i) resi += ",";
      resi += std::to_string(c.desired_residues[i]);
    }
    out.emplace_back("desired_residues", resi);
  }
  out.emplace_back("usd", usd_name(c.usd));
  out.emplace_back("memory", memory_name(c.memory));
  out.emplace_back("n_sources", format_number(c.n_sources));
  out.emplace_back("dsm_single_side", c.dsm_single_side ? "true" : "false");
  out.emplace_back("eta_half", format_number(c.eta_half()));
  out.emplace_back("n_links", format_number(c.n_links()));
  return out;
}

} // namespace catrep::config

#include "optosqueeze/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(v)) {
    throw ConfigError("bad value for " + key + ": '" + text + "'");
  }
  return v;
}

double parse_nonnegative(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v < 0.0) {
    throw ConfigError(key + " must be nonnegative, got " + text);
  }
  return v;
}

bool parse_switch(const std::string& key, const std::string& text) {
  if (text == "on") {
    return true;
  }
  if (text == "off") {
    return false;
  }
  throw ConfigError(key + " must be on or off, got '" + text + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "omega_m_hz", "omega_a_hz", "omega_s_hz",    "g0_ratio",      "eta_ratio",
      "kappa_ratio", "gamma_ratio", "n_th",        "power_w",       "power_s_w",
      "delta_a_ratio", "delta_s_ratio", "nonlinearity", "detection"};
  return keys;
}

void apply_setting(SIInput& si, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "omega_m_hz") {
    si.omega_m_hz = parse_nonnegative(key, value);
    if (si.omega_m_hz == 0.0) {
      throw ConfigError("omega_m_hz must be positive");
    }
  } else if (key == "omega_a_hz") {
    si.omega_a_hz = parse_nonnegative(key, value);
  } else if (key == "omega_s_hz") {
    si.omega_s_hz = parse_nonnegative(key, value);
  } else if (key == "g0_ratio") {
    si.g0_ratio = parse_number(key, value);
  } else if (key == "eta_ratio") {
    si.eta_ratio = parse_nonnegative(key, value);
  } else if (key == "kappa_ratio") {
    si.kappa_ratio = parse_nonnegative(key, value);
  } else if (key == "gamma_ratio") {
    si.gamma_ratio = parse_nonnegative(key, value);
  } else if (key == "n_th") {
    si.n_th = parse_nonnegative(key, value);
  } else if (key == "power_w") {
    si.power_w = parse_nonnegative(key, value);
  } else if (key == "power_s_w") {
    si.power_s_w = parse_nonnegative(key, value);
  } else if (key == "delta_a_ratio") {
    if (value == "optimal") {
      si.delta_a_ratio.reset();
    } else {
      si.delta_a_ratio = parse_number(key, value);
    }
  } else if (key == "delta_s_ratio") {
    si.delta_s_ratio = parse_number(key, value);
  } else if (key == "nonlinearity") {
    if (value == "duffing") {
      si.nonlinearity = Nonlinearity::Duffing;
    } else if (value == "cubic") {
      si.nonlinearity = Nonlinearity::Cubic;
    } else {
      throw ConfigError("nonlinearity must be duffing or cubic, got '" + value + "'");
    }
  } else if (key == "detection") {
    si.detection = parse_switch(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

SIInput parse_config(std::istream& in, const std::string& source) {
  SIInput si;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_setting(si, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return si;
}

SIInput load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  return parse_config(in, path);
}

std::string format_value(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::vector<std::string> describe_config(const SIInput& si) {
  std::vector<std::string> out;
  const auto put = [&](const char* key, const std::string& value) {
    out.push_back(std::string(key) + " = " + value);
  };
  put("omega_m_hz", format_value(si.omega_m_hz));
  put("omega_a_hz", format_value(si.omega_a_hz));
  put("omega_s_hz", format_value(si.omega_s_hz));
  put("g0_ratio", format_value(si.g0_ratio));
  put("eta_ratio", format_value(si.eta_ratio));
  put("kappa_ratio", format_value(si.kappa_ratio));
  put("gamma_ratio", format_value(si.gamma_ratio));
  put("n_th", format_value(si.n_th));
  put("power_w", format_value(si.power_w));
  put("power_s_w", format_value(si.power_s_w));
  put("delta_a_ratio", si.delta_a_ratio ? format_value(*si.delta_a_ratio) : "optimal");
  put("delta_s_ratio", format_value(si.delta_s_ratio));
  put("nonlinearity", to_string(si.nonlinearity));
  put("detection", si.detection ? "on" : "off");
  return out;
}

}  // namespace optosqueeze

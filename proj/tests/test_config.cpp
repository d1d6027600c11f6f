#include <doctest.h>

#include <sstream>

#include "optosqueeze/config.hpp"
#include "optosqueeze/errors.hpp"

using namespace optosqueeze;

namespace {

SIInput parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test");
}

}  // namespace

TEST_CASE("config keys") {
  CHECK(config_keys().size() == 14);
  CHECK(config_keys().front() == "omega_m_hz");
}

TEST_CASE("parse a full file") {
  const SIInput si = parse(
      "# comment\n"
      "omega_m_hz = 2e6\n"
      "power_w = 1e-4   # trailing\n"
      "\n"
      "delta_a_ratio = optimal\n"
      "nonlinearity = cubic\n"
      "detection = on\n"
      "n_th = +100\n");
  CHECK(si.omega_m_hz == 2e6);
  CHECK(si.power_w == 1e-4);
  CHECK_FALSE(si.delta_a_ratio.has_value());
  CHECK(si.nonlinearity == Nonlinearity::Cubic);
  CHECK(si.detection);
  CHECK(si.n_th == 100.0);
}

TEST_CASE("later lines override") {
  const SIInput si = parse("delta_a_ratio = 2\ndelta_a_ratio = optimal\nkappa_ratio=0.2\nkappa_ratio=0.3\n");
  CHECK_FALSE(si.delta_a_ratio.has_value());
  CHECK(si.kappa_ratio == 0.3);
}

TEST_CASE("errors carry the line number") {
  try {
    parse("power_w = 1\nbogus = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("test:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("power_w = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("power_w = 1e-4x\n"), ConfigError);
  CHECK_THROWS_AS(parse("power_w = nan\n"), ConfigError);
  CHECK_THROWS_AS(parse("power_w\n"), ConfigError);
  CHECK_THROWS_AS(parse("detection = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse("nonlinearity = quintic\n"), ConfigError);
}

TEST_CASE("describe_config round trips") {
  SIInput si;
  si.power_w = 3.3e-5;
  si.delta_a_ratio = 2.418;
  si.eta_ratio = 0.1 + 0.2;
  si.detection = true;
  std::ostringstream os;
  for (const auto& line : describe_config(si)) {
    os << line << '\n';
  }
  const SIInput back = parse(os.str());
  CHECK(back.power_w == si.power_w);
  CHECK(back.delta_a_ratio == si.delta_a_ratio);
  CHECK(back.eta_ratio == si.eta_ratio);
  CHECK(back.detection == si.detection);
  CHECK(describe_config(back) == describe_config(si));
}

TEST_CASE("format_value is shortest round trip") {
  CHECK(format_value(2e6) == "2e+06");
  CHECK(format_value(0.1) == "0.1");
  CHECK(std::stod(format_value(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("load_config on a missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/optosqueeze.conf"), ConfigError);
}

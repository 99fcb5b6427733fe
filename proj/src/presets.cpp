#include "lieavg/presets.hpp"

#include "lieavg/errors.hpp"

namespace lieavg {

namespace {

WaveformSpec sine() { return {"sin(s)", "-cos(s)"}; }
WaveformSpec cosine() { return {"cos(s)", "sin(s)"}; }

ChannelSpec channel(std::vector<std::string> components, double p, Rational k, WaveformSpec w) {
  ChannelSpec c;
  c.components = std::move(components);
  c.p = p;
  c.k = k;
  c.waveform = std::move(w);
  return c;
}

// Scalar plant x' = ... with a high-pass filter state v following J.
Preset example1() {
  Preset pr;
  pr.name = "example1";
  pr.description = "Two-input ESC with a high-pass filter, p = (0.5, 0.5)";
  SystemSpec& s = pr.config.system;
  s.name = pr.name;
  s.n = 2;
  s.params = {{"H", 0.1}, {"h", 5.0}, {"a", 1.0}};
  s.definitions = {{"J", "-H*(x1-1)^4"}};
  s.drift = {"0", "h*(J-x2)"};
  s.channels.push_back(channel({"J-x2", "0"}, 0.5, {1, 1}, sine()));
  s.channels.push_back(channel({"a", "0"}, 0.5, {1, 1}, cosine()));
  s.omega = 20.0;
  s.box_lo = {-1.0, -10.0};
  s.box_hi = {5.0, 10.0};
  pr.config.simulation = {{4.0, 0.0}, 50.0, 1e-3, false};
  pr.closed_form = "z' = b0(z) + nu12 [b1,b2](z) with [b1,b2] = (-a J'(x1), 0)";
  return pr;
}

// Newton-based ESC: states (x1, d, y, z); y tracks J', z tracks J''.
SystemSpec newton_system(const std::string& name, const std::string& cost, double omega) {
  const double wy = 20.0, wz = 0.5, k = 1.0;
  SystemSpec s;
  s.name = name;
  s.n = 4;
  s.params = {{"rho", 0.3}, {"wd", 0.5}, {"wy", wy}, {"wz", wz}, {"a2", -2.0 * k * wy}, {"a3", 8.0 * k * k * wz}};
  s.definitions = {{"J", cost}};
  s.drift = {"rho*x2", "-wd*(x3+x4*x2)", "-wy*x3", "-wz*x4"};
  s.channels.push_back(channel({"1", "0", "0", "0"}, 0.51, {1, 1}, sine()));
  s.channels.push_back(channel({"0", "0", "a2*J", "0"}, 0.49, {1, 1}, cosine()));
  s.channels.push_back(channel({"0", "0", "0", "a3*J"}, 0.98, {1, 1}, {"cos(2*s)", "sin(2*s)/2"}));
  s.omega = omega;
  s.box_lo = {-2.0, -10.0, -60.0, -20.0};
  s.box_hi = {4.0, 10.0, 60.0, 20.0};
  return s;
}

Preset example2() {
  Preset pr;
  pr.name = "example2";
  pr.description = "Newton-based ESC with Hessian estimation, p = (0.51, 0.49, 0.98)";
  pr.config.system = newton_system(pr.name, "2*(x1-1)^2", 20.0);
  pr.config.simulation = {{2.0, 0.0, 0.0, 0.0}, 100.0, 1e-3, false};
  pr.closed_form = "z' = b0(z) + (0, 0, wy J'(x1), wz J''(x1)) at r = 3";
  return pr;
}

Preset example3() {
  Preset pr;
  pr.name = "example3";
  pr.description = "Four-input ESC with mixed frequencies k = (1, 1, 1/3, 3/2)";
  SystemSpec& s = pr.config.system;
  s.name = pr.name;
  s.n = 2;
  s.params = {{"H", 0.2}, {"h", 5.0}, {"a", 1.0}};
  s.definitions = {{"J", "-H*(x1-1)^4"}};
  s.drift = {"0", "h*(J-x2)"};
  s.channels.push_back(channel({"J-x2", "0"}, 0.5, {1, 1}, sine()));
  s.channels.push_back(channel({"a", "0"}, 0.5, {1, 1}, cosine()));
  s.channels.push_back(channel({"a", "0"}, 0.5, {1, 3}, sine()));
  s.channels.push_back(channel({"a", "0"}, 0.99, {3, 2}, cosine()));
  s.omega = 100.0;
  s.box_lo = {-1.0, -20.0};
  s.box_hi = {5.0, 10.0};
  pr.config.simulation = {{3.0, 0.0}, 40.0, 1e-3, false};
  return pr;
}

Preset example3_baseline() {
  Preset pr;
  pr.name = "example3_baseline";
  pr.description = "Newton-based ESC on the quartic cost of example3";
  pr.config.system = newton_system(pr.name, "H*(x1-1)^4", 100.0);
  pr.config.system.params["H"] = 0.2;
  pr.config.system.box_lo = {-2.0, -50.0, -100.0, -50.0};
  pr.config.system.box_hi = {6.0, 50.0, 100.0, 50.0};
  pr.config.simulation = {{4.0, 26.6, 0.0, 0.0}, 40.0, 1e-3, false};
  return pr;
}

std::vector<std::string> example4_field(const char* trig) {
  return {std::string(trig) + "(psi)*amp"};
}

void example4_common(SystemSpec& s) {
  s.n = 1;
  s.params = {{"H", 1.0 / 3.0}};
  s.definitions = {{"J", "H*(x1-1)^4"},
                   {"psi", "exp(J)+2*log(exp(J)-1)"},
                   {"amp", "sqrt((1-exp(-J))/(1+exp(J)))"}};
  s.drift = {"0"};
  s.omega = 100.0;
  s.box_lo = {0.0};
  s.box_hi = {3.0};
  s.guard = GuardSpec{"J", 1e-12};
}

Preset example4() {
  Preset pr;
  pr.name = "example4";
  pr.description = "Four-input ESC with p = (0.99, 0.01, 0.99, 0.01), fields defined piecewise at J = 0";
  SystemSpec& s = pr.config.system;
  s.name = pr.name;
  example4_common(s);
  s.channels.push_back(channel(example4_field("sin"), 0.99, {1, 1}, cosine()));
  s.channels.push_back(channel(example4_field("cos"), 0.01, {1, 1}, sine()));
  s.channels.push_back(channel(example4_field("sin"), 0.99, {1, 4}, cosine()));
  s.channels.push_back(channel(example4_field("cos"), 0.01, {1, 4}, sine()));
  pr.config.simulation = {{2.0}, 20.0, 1e-3, false};
  return pr;
}

Preset example4_baseline() {
  Preset pr;
  pr.name = "example4_baseline";
  pr.description = "First two inputs of example4 with p = (0.5, 0.5)";
  SystemSpec& s = pr.config.system;
  s.name = pr.name;
  example4_common(s);
  s.channels.push_back(channel(example4_field("sin"), 0.5, {1, 1}, cosine()));
  s.channels.push_back(channel(example4_field("cos"), 0.5, {1, 1}, sine()));
  pr.config.simulation = {{2.0}, 20.0, 1e-3, false};
  return pr;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"example1", "example2", "example3", "example3_baseline", "example4", "example4_baseline"};
}

Preset build_preset(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  if (name == "example3_baseline") return example3_baseline();
  if (name == "example4") return example4();
  if (name == "example4_baseline") return example4_baseline();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace lieavg

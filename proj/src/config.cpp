#include "pumptrack/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "pumptrack/csv.hpp"

namespace pumptrack {

ScenarioConfig default_config() { return ScenarioConfig{}; }

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& where,
                                  std::size_t expected) {
  std::istringstream ss(text);
  std::vector<double> out;
  double x;
  while (ss >> x) out.push_back(x);
  std::string rest;
  if (ss.clear(), ss >> rest)
    throw parse_error(where + ": trailing junk '" + rest + "'");
  if (out.size() != expected)
    throw parse_error(where + ": expected " + std::to_string(expected) +
                      " value(s), got " + std::to_string(out.size()));
  return out;
}

}  // namespace

ScenarioConfig parse_config(std::istream& is, const std::string& origin) {
  ScenarioConfig c = default_config();
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const auto b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);

    const std::size_t eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw parse_error(where + ": expected 'key = value'");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string value = line.substr(eq + 1);

    const auto one = [&] { return parse_numbers(value, where, 1)[0]; };
    Scenario& sc = c.scenario;
    if (key == "R") sc.geom.R = one();
    else if (key == "r") sc.geom.r = one();
    else if (key == "lambda") sc.geom.lambda = one();
    else if (key == "m_b") sc.params.m_b = one();
    else if (key == "m_r") sc.params.m_r = one();
    else if (key == "g_grav") sc.params.g_grav = one();
    else if (key == "T") sc.T = one();
    else if (key == "h") sc.h = one();
    else if (key == "q") {
      const auto v = parse_numbers(value, where, 4);
      sc.q = {v[0], v[1], v[2], v[3]};
    } else if (key == "x0") {
      const auto v = parse_numbers(value, where, 4);
      sc.x0 = State{v[0], v[1], v[2], v[3]};
    } else if (key == "l_min") sc.bounds.l_min = one();
    else if (key == "l_max") sc.bounds.l_max = one();
    else if (key == "u_min") sc.bounds.u_min = one();
    else if (key == "u_max") sc.bounds.u_max = one();
    else if (key == "max_iters") c.solver.max_outer = static_cast<int>(one());
    else if (key == "feas_tol") c.solver.feas_tol = one();
    else if (key == "grad_mode") {
      std::istringstream vs(value);
      std::string mode;
      vs >> mode;
      try {
        c.solver.grad_mode = grad_mode_from_string(mode);
      } catch (const std::invalid_argument& e) {
        throw parse_error(where + ": " + e.what());
      }
    } else {
      throw parse_error(where + ": unknown key '" + key + "'");
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open: " + path);
  return parse_config(is, path);
}

std::string serialize_config(const ScenarioConfig& c) {
  const Scenario& sc = c.scenario;
  std::ostringstream os;
  os << "# track shape\n";
  os << "R = " << fmt15(sc.geom.R) << "\n";
  os << "r = " << fmt15(sc.geom.r) << "\n";
  os << "lambda = " << fmt15(sc.geom.lambda) << "\n";
  os << "# masses and gravity\n";
  os << "m_b = " << fmt15(sc.params.m_b) << "\n";
  os << "m_r = " << fmt15(sc.params.m_r) << "\n";
  os << "g_grav = " << fmt15(sc.params.g_grav) << "\n";
  os << "# horizon and discretization\n";
  os << "T = " << fmt15(sc.T) << "\n";
  os << "h = " << fmt15(sc.h) << "\n";
  os << "# cost weights and initial state\n";
  os << "q = " << fmt15(sc.q[0]) << " " << fmt15(sc.q[1]) << " " << fmt15(sc.q[2]) << " "
     << fmt15(sc.q[3]) << "\n";
  os << "x0 = " << fmt15(sc.x0.phi) << " " << fmt15(sc.x0.phidot) << " "
     << fmt15(sc.x0.l) << " " << fmt15(sc.x0.ldot) << "\n";
  os << "# state and input bounds\n";
  os << "l_min = " << fmt15(sc.bounds.l_min) << "\n";
  os << "l_max = " << fmt15(sc.bounds.l_max) << "\n";
  os << "u_min = " << fmt15(sc.bounds.u_min) << "\n";
  os << "u_max = " << fmt15(sc.bounds.u_max) << "\n";
  os << "# solver\n";
  os << "max_iters = " << c.solver.max_outer << "\n";
  os << "feas_tol = " << fmt15(c.solver.feas_tol) << "\n";
  os << "grad_mode = " << to_string(c.solver.grad_mode) << "\n";
  return os.str();
}

void save_config(const ScenarioConfig& c, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << serialize_config(c);
}

void merge_bounds(ScenarioConfig& c, const Bounds& b) { c.scenario.bounds = b; }

}  // namespace pumptrack

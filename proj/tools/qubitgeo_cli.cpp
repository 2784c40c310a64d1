// qubitgeo: command-line front end for the real 1- and 2-qubit geometry engine.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or input error, 3 I/O.

#include <qubitgeo/bloch_geometry.hpp>
#include <qubitgeo/core_states.hpp>
#include <qubitgeo/gates.hpp>
#include <qubitgeo/scene.hpp>
#include <qubitgeo/server.hpp>
#include <qubitgeo/session.hpp>
#include <qubitgeo/toroid.hpp>
#include <qubitgeo/twoqubit_mapping.hpp>
#include <qubitgeo/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qubitgeo;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 12 significant digits; rounding noise below 1e-14 prints as 0.
double round12(double x) {
  if (std::abs(x) < 1e-14)
    return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

std::string tuple(std::initializer_list<double> xs) {
  std::string out = "(";
  bool first = true;
  for (double x : xs) {
    out += (first ? "" : ", ") + num(x);
    first = false;
  }
  return out + ")";
}

void round_numbers(json &j) {
  if (j.is_number_float())
    j = round12(j.get<double>());
  else if (j.is_structured())
    for (auto &child : j)
      round_numbers(child);
}

void print_json(json j) {
  round_numbers(j);
  std::cout << j.dump(2) << '\n';
}

std::vector<double> parse_reals(const std::string &text, std::size_t expected,
                                const std::string &what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw Error(ErrorCode::BadArgument, what + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.size() != expected)
    throw Error(ErrorCode::BadArgument, what + " needs " + std::to_string(expected) +
                                            " comma-separated values");
  return out;
}

TwoQubitReal parse_state(const std::string &text) {
  const auto v = parse_reals(text, 4, "--state");
  const Amplitudes4 raw{v[0], v[1], v[2], v[3]};
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  if (std::abs(norm - 1.0) > 1e-6 && norm > kZeroThreshold)
    std::cerr << "warning: state norm is " << num(norm) << "; normalizing\n";
  return normalize_phase(raw);
}

ToroidConfig load_toroid_config() {
  const char *path = std::getenv("QUBITGEO_CONFIG");
  if (!path || !*path)
    return {};
  std::ifstream in(path);
  if (!in)
    throw IoError(std::string("cannot read QUBITGEO_CONFIG file ") + path);
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw IoError(std::string("QUBITGEO_CONFIG file is not valid JSON: ") + path);
  return toroid_config_from_json(j);
}

void write_output(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text << '\n'))
    throw IoError("cannot write " + path);
}

json params_json(const ParamsOrKnot &p) {
  if (const auto *g = std::get_if<GeometricParams>(&p))
    return {{"kind", "regular"},
            {"s", g->s},
            {"r", g->r},
            {"theta1", g->theta1.value()},
            {"theta2", g->theta2.value()}};
  const auto &k = std::get<KnotDescriptor>(p);
  return {{"kind", "knot"},
          {"surface", std::string(1, symbol_of(k.surface))},
          {"xi", k.xi.value()}};
}

void print_params(const ParamsOrKnot &p) {
  if (const auto *g = std::get_if<GeometricParams>(&p)) {
    std::cout << "kind = regular\n"
              << "s = " << num(g->s) << '\n'
              << "r = " << num(g->r) << '\n'
              << "theta1 = " << num(g->theta1.value()) << '\n'
              << "theta2 = " << num(g->theta2.value()) << '\n';
  } else {
    const auto &k = std::get<KnotDescriptor>(p);
    std::cout << "kind = knot\n"
              << "surface = " << symbol_of(k.surface) << '\n'
              << "xi = " << num(k.xi.value()) << '\n';
  }
}

std::string state_text(const TwoQubitReal &chi) {
  const auto &v = chi.amplitudes();
  return tuple({v[0], v[1], v[2], v[3]});
}

json state_json(const TwoQubitReal &chi) {
  const auto &v = chi.amplitudes();
  return json::array({v[0], v[1], v[2], v[3]});
}

std::string rho_text(const DensityMatrixReal &rho) {
  return tuple({rho.p_top(), rho.c(), rho.p_bot()});
}

// Options shared by commands that take a state either as a vector or as
// (s, theta1, theta2).
struct StateOptions {
  std::string state;
  std::optional<double> s, theta1, theta2;

  void attach(CLI::App *cmd) {
    cmd->add_option("--state", state, "Amplitudes a,b,c,d of |00>,|01>,|10>,|11>");
    cmd->add_option("--s", s, "Entanglement parameter in [-1/2, 1/2]");
    cmd->add_option("--theta1", theta1, "Qubit 1 angle (radians)");
    cmd->add_option("--theta2", theta2, "Qubit 2 angle (radians)");
  }

  TwoQubitReal resolve() const {
    const bool any_params = s || theta1 || theta2;
    if (!state.empty() && any_params)
      throw Error(ErrorCode::BadArgument, "give either --state or --s/--theta1/--theta2");
    if (!state.empty())
      return parse_state(state);
    if (!any_params)
      throw Error(ErrorCode::BadArgument, "a state is required (--state or --s/--theta1/--theta2)");
    return state_from_params(s.value_or(0.0), Angle(theta1.value_or(0.0)),
                             Angle(theta2.value_or(0.0)));
  }
};

int cmd_eval(const StateOptions &opts, bool as_json) {
  const auto chi = opts.resolve();
  const auto cfg = load_toroid_config();
  const auto params = params_from_state(chi);
  const double s = entanglement_s(chi);
  const auto rho1 = reduced_density(chi, 1), rho2 = reduced_density(chi, 2);
  std::optional<Vec3> point;
  if (!is_knot(params))
    point = statepoint_3d(params, cfg);
  if (as_json) {
    json j{{"state", state_json(chi)},
           {"s", s},
           {"r", radius_from_s(s)},
           {"params", params_json(params)},
           {"rho1", to_json(rho1)},
           {"rho2", to_json(rho2)}};
    if (point)
      j["statepoint3d"] = {point->x, point->y, point->z};
    print_json(j);
    return kExitOk;
  }
  std::cout << "state = " << state_text(chi) << '\n';
  print_params(params);
  if (is_knot(params))
    std::cout << "s = " << num(s) << '\n' << "r = " << num(radius_from_s(s)) << '\n';
  std::cout << "rho1 = " << rho_text(rho1) << '\n' << "rho2 = " << rho_text(rho2) << '\n';
  if (point)
    std::cout << "statepoint3d = " << tuple({point->x, point->y, point->z}) << '\n';
  return kExitOk;
}

int cmd_map(double s, double t1, double t2, bool as_json) {
  const auto chi = state_from_params(s, Angle(t1), Angle(t2));
  if (as_json)
    print_json({{"state", state_json(chi)}});
  else
    std::cout << "state = " << state_text(chi) << '\n';
  return kExitOk;
}

int cmd_invmap(const std::string &state, bool as_json) {
  const auto params = params_from_state(parse_state(state));
  if (as_json)
    print_json(params_json(params));
  else
    print_params(params);
  return kExitOk;
}

int cmd_gate(const std::string &state, const std::string &seq, bool as_json) {
  const auto chi = apply_sequence(parse_state(state), parse_gate_sequence(seq));
  const double s = entanglement_s(chi);
  if (as_json) {
    print_json({{"state", state_json(chi)}, {"s", s}});
    return kExitOk;
  }
  std::cout << "state = " << state_text(chi) << '\n' << "s = " << num(s) << '\n';
  return kExitOk;
}

int cmd_mix(const std::vector<std::string> &points, double basis, bool as_json) {
  std::vector<WeightedDensity> parts;
  for (const auto &p : points) {
    const auto v = parse_reals(p, 3, "--point");
    parts.push_back({density_from_statepoint(BlochPoint::make(v[0], Angle(v[1]))), v[2]});
  }
  const auto rho = mix(parts);
  const auto sp = statepoint_from_density(rho);
  const auto probs = measurement_probs(rho, BasisAxis{Angle(basis)});
  if (as_json) {
    print_json({{"rho", to_json(rho)},
                {"statepoint", {{"r", sp.r}, {"theta", sp.theta.value()}}},
                {"probs", {probs.p0, probs.p1}}});
    return kExitOk;
  }
  std::cout << "rho = " << rho_text(rho) << '\n'
            << "statepoint = " << tuple({sp.r, sp.theta.value()}) << '\n'
            << "probs = " << tuple({probs.p0, probs.p1}) << '\n';
  return kExitOk;
}

int cmd_scene(const StateOptions &opts, const std::string &panel, double basis,
              int samples, const std::string &out) {
  const auto chi = opts.resolve();
  Scene scene;
  if (panel == "toroid")
    scene = toroid_scene(chi, load_toroid_config(), samples);
  else
    scene = to_scene(bloch_scene(reduced_density(chi, panel == "bloch1" ? 1 : 2),
                                 BasisAxis{Angle(basis)}));
  json j = to_json(scene);
  round_numbers(j);
  write_output(j.dump(2), out);
  return kExitOk;
}

int cmd_verify(std::size_t samples, std::uint64_t seed) {
  const auto results = verify::run_all(samples, seed);
  bool ok = true;
  std::printf("verify samples=%zu seed=%llu\n", samples,
              static_cast<unsigned long long>(seed));
  std::printf("%-20s %9s  %-20s %-9s %s\n", "suite", "cases", "max_error", "tolerance",
              "status");
  // Errors are reported raw: the rounding-noise snap would hide them.
  for (const auto &r : results) {
    ok = ok && r.passed;
    std::printf("%-20s %9zu  %-20.12g %-9.3g %s\n", r.name.c_str(), r.samples,
                r.max_error, r.tolerance,
                r.passed ? "PASS" : "FAIL");
  }
  std::printf("overall %s\n", ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_serve(const std::string &host, unsigned short port) {
  SessionRegistry registry(load_toroid_config());
  SessionServer server(registry, host, port);
  std::cerr << "qubitgeo serving on " << host << ':' << server.port() << '\n';
  server.run();
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Geometry engine for real 1- and 2-qubit states"};
  app.require_subcommand(1);

  bool as_json = false;
  StateOptions eval_opts;
  auto *eval = app.add_subcommand("eval", "Print a state and its derived quantities");
  eval_opts.attach(eval);
  eval->add_flag("--json", as_json, "JSON output");

  double map_s = 0.0, map_t1 = 0.0, map_t2 = 0.0;
  auto *map = app.add_subcommand("map", "State from (s, theta1, theta2)");
  map->add_option("--s", map_s, "Entanglement parameter")->required();
  map->add_option("--theta1", map_t1, "Qubit 1 angle")->required();
  map->add_option("--theta2", map_t2, "Qubit 2 angle")->required();
  map->add_flag("--json", as_json, "JSON output");

  std::string inv_state;
  auto *invmap = app.add_subcommand("invmap", "(s, theta1, theta2) or knot from a state");
  invmap->add_option("--state", inv_state, "Amplitudes a,b,c,d")->required();
  invmap->add_flag("--json", as_json, "JSON output");

  std::string gate_state = "1,0,0,0", gate_seq;
  auto *gate = app.add_subcommand("gate", "Apply a gate sequence");
  gate->add_option("--state", gate_state, "Amplitudes a,b,c,d (default |00>)");
  gate->add_option("--seq", gate_seq,
                   "Comma-separated tokens: X1 X2 Z1 Z2 H1 H2 CNOT12 CNOT21 CZ SWAP")
      ->required();
  gate->add_flag("--json", as_json, "JSON output");

  std::vector<std::string> mix_points;
  double mix_basis = 0.0;
  auto *mixcmd = app.add_subcommand("mix", "Mix weighted one-qubit statepoints");
  mixcmd->add_option("--point", mix_points, "r,theta,weight (repeatable)")->required();
  mixcmd->add_option("--basis", mix_basis, "Measurement axis angle for probabilities");
  mixcmd->add_flag("--json", as_json, "JSON output");

  StateOptions scene_opts;
  std::string panel = "toroid", scene_out;
  double scene_basis = 0.0;
  int scene_samples = kDefaultKnotSamples;
  auto *scene = app.add_subcommand("scene", "Emit Scene JSON");
  scene_opts.attach(scene);
  scene->add_option("--panel", panel, "toroid, bloch1 or bloch2")
      ->check(CLI::IsMember({"toroid", "bloch1", "bloch2"}));
  scene->add_option("--basis", scene_basis, "Basis axis angle for Bloch panels");
  scene->add_option("--samples", scene_samples, "Knot polyline samples")
      ->check(CLI::Range(kMinKnotSamples, 1 << 20));
  scene->add_option("--out", scene_out, "Output file (default stdout)");

  std::size_t verify_samples = 100000;
  std::uint64_t verify_seed = 42;
  auto *verifycmd = app.add_subcommand("verify", "Run the property-oracle suites");
  verifycmd->add_option("--samples", verify_samples, "Samples per suite")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  verifycmd->add_option("--seed", verify_seed, "Generator seed");

  std::string host = "127.0.0.1";
  unsigned short port = 8080;
  auto *serve = app.add_subcommand("serve", "Run the session service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval)
      return cmd_eval(eval_opts, as_json);
    if (*map)
      return cmd_map(map_s, map_t1, map_t2, as_json);
    if (*invmap)
      return cmd_invmap(inv_state, as_json);
    if (*gate)
      return cmd_gate(gate_state, gate_seq, as_json);
    if (*mixcmd)
      return cmd_mix(mix_points, mix_basis, as_json);
    if (*scene)
      return cmd_scene(scene_opts, panel, scene_basis, scene_samples, scene_out);
    if (*verifycmd)
      return cmd_verify(verify_samples, verify_seed);
    if (*serve)
      return cmd_serve(host, port);
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const boost::system::system_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

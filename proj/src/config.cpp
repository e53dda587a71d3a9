#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlmh/error.hpp"
#include "nlmh/io.hpp"

namespace nlmh {

namespace {

using nlohmann::json;

std::string extension_name(Extension e) {
  return e == Extension::Reject ? "reject" : "quadratic_extend";
}

std::string coupling_name(CouplingForm c) {
  return c == CouplingForm::MuGradC ? "mu_grad_c" : "minus_c_grad_mu";
}

std::string recipe_name(InitRecipe r) {
  return r == InitRecipe::TaylorGreenMix ? "taylor_green_mix" : "random_separated";
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"grid", {"n"}},
      {"time", {"dt", "t_end", "stabilization", "record_every"}},
      {"potential", {"theta", "theta0", "safeguard_delta", "extension"}},
      {"kernel", {"epsilon", "profile"}},
      {"model", {"coupling"}},
      {"init", {"recipe", "seed", "mean_c", "amplitude", "velocity_amplitude", "delta0"}},
  };
  return s;
}

template <class T>
void read_key(const json& section, const std::string& sec, const std::string& key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "key '" + sec + "." + key + "': " + e.what());
  }
}

int line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "config root must be an object");
  for (const auto& [sec, body] : doc.items()) {
    const auto it = schema().find(sec);
    if (it == schema().end()) throw Error(ErrorCode::ParseError, "unknown section '" + sec + "'");
    if (!body.is_object())
      throw Error(ErrorCode::ParseError, "section '" + sec + "' must be an object");
    for (const auto& [key, value] : body.items())
      if (!it->second.contains(key))
        throw Error(ErrorCode::ParseError, "unknown key '" + sec + "." + key + "'");
  }
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& {
    return doc.contains(name) ? doc.at(name) : empty;
  };

  RunConfig cfg;
  SimConfig& sim = cfg.sim;
  int n = 128;
  read_key(section("grid"), "grid", "n", n);
  try {
    sim.grid = Grid(n);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("grid.n: ") + e.what());
  }

  const json& time = section("time");
  read_key(time, "time", "dt", sim.dt);
  read_key(time, "time", "t_end", sim.t_end);
  read_key(time, "time", "record_every", sim.record_every);

  const json& pot = section("potential");
  read_key(pot, "potential", "theta", sim.potential.theta);
  read_key(pot, "potential", "theta0", sim.potential.theta0);
  read_key(pot, "potential", "safeguard_delta", sim.potential.safeguard_delta);
  std::string ext = extension_name(sim.potential.extension);
  read_key(pot, "potential", "extension", ext);
  if (ext == "reject")
    sim.potential.extension = Extension::Reject;
  else if (ext == "quadratic_extend")
    sim.potential.extension = Extension::QuadraticExtend;
  else
    throw Error(ErrorCode::ParseError, "key 'potential.extension': unknown value '" + ext + "'");

  // The stabilization constant follows theta0 unless set explicitly.
  sim.stabilization = sim.potential.theta0;
  read_key(time, "time", "stabilization", sim.stabilization);

  const json& ker = section("kernel");
  read_key(ker, "kernel", "epsilon", sim.epsilon);
  std::string profile = sim.kernel_profile.name;
  read_key(ker, "kernel", "profile", profile);
  try {
    sim.kernel_profile = KernelProfile::by_name(profile);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("key 'kernel.profile': ") + e.what());
  }

  std::string coupling = coupling_name(sim.coupling);
  read_key(section("model"), "model", "coupling", coupling);
  if (coupling == "mu_grad_c")
    sim.coupling = CouplingForm::MuGradC;
  else if (coupling == "minus_c_grad_mu")
    sim.coupling = CouplingForm::MinusCGradMu;
  else
    throw Error(ErrorCode::ParseError, "key 'model.coupling': unknown value '" + coupling + "'");

  const json& init = section("init");
  std::string recipe = recipe_name(cfg.init.recipe);
  read_key(init, "init", "recipe", recipe);
  if (recipe == "taylor_green_mix")
    cfg.init.recipe = InitRecipe::TaylorGreenMix;
  else if (recipe == "random_separated")
    cfg.init.recipe = InitRecipe::RandomSeparated;
  else
    throw Error(ErrorCode::ParseError, "key 'init.recipe': unknown value '" + recipe + "'");
  read_key(init, "init", "seed", cfg.init.seed);
  read_key(init, "init", "mean_c", cfg.init.mean_c);
  read_key(init, "init", "amplitude", cfg.init.amplitude);
  read_key(init, "init", "velocity_amplitude", cfg.init.velocity_amplitude);
  read_key(init, "init", "delta0", cfg.init.delta0);

  try {
    sim.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
  if (!(std::abs(cfg.init.mean_c) + cfg.init.amplitude <= 1.0 - cfg.init.delta0))
    throw Error(ErrorCode::ValidationError,
                "init: |mean_c| + amplitude must not exceed 1 - delta0");
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }))
    return from_json(json::object());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("resolved_config")) return from_json(doc.at("resolved_config"));
  return from_json(doc);
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  const SimConfig& s = cfg.sim;
  nlohmann::ordered_json j;
  j["grid"]["n"] = s.grid.n();
  j["time"]["dt"] = s.dt;
  j["time"]["t_end"] = s.t_end;
  j["time"]["stabilization"] = s.stabilization;
  j["time"]["record_every"] = s.record_every;
  j["potential"]["theta"] = s.potential.theta;
  j["potential"]["theta0"] = s.potential.theta0;
  j["potential"]["safeguard_delta"] = s.potential.safeguard_delta;
  j["potential"]["extension"] = extension_name(s.potential.extension);
  j["kernel"]["epsilon"] = s.epsilon;
  j["kernel"]["profile"] = s.kernel_profile.name;
  j["model"]["coupling"] = coupling_name(s.coupling);
  j["init"]["recipe"] = recipe_name(cfg.init.recipe);
  j["init"]["seed"] = cfg.init.seed;
  j["init"]["mean_c"] = cfg.init.mean_c;
  j["init"]["amplitude"] = cfg.init.amplitude;
  j["init"]["velocity_amplitude"] = cfg.init.velocity_amplitude;
  j["init"]["delta0"] = cfg.init.delta0;
  return j;
}

}  // namespace nlmh

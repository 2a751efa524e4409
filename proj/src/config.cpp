#include "reactwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "reactwave/constants.hpp"

namespace reactwave {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

enum class Dim { length, inv_length, mass, energy, temperature, frequency,
                 time, velocity };

struct Unit {
  const char* name;
  Dim dim;
  double to_si;
};

constexpr Unit kUnits[] = {
    {"angstrom", Dim::length, 1e-10}, {"nm", Dim::length, 1e-9},
    {"um", Dim::length, 1e-6},        {"mm", Dim::length, 1e-3},
    {"m", Dim::length, 1.0},
    {"1/angstrom", Dim::inv_length, 1e10}, {"1/nm", Dim::inv_length, 1e9},
    {"1/m", Dim::inv_length, 1.0},
    {"kg", Dim::mass, 1.0}, {"amu", Dim::mass, constants::amu},
    {"J", Dim::energy, 1.0}, {"eV", Dim::energy, 1.602176634e-19},
    {"uK", Dim::energy, 1e-6 * constants::k_boltzmann},
    {"K", Dim::temperature, 1.0}, {"mK", Dim::temperature, 1e-3},
    {"uK", Dim::temperature, 1e-6}, {"nK", Dim::temperature, 1e-9},
    {"Hz", Dim::frequency, 1.0}, {"kHz", Dim::frequency, 1e3},
    {"MHz", Dim::frequency, 1e6}, {"THz", Dim::frequency, 1e12},
    {"s", Dim::time, 1.0}, {"ms", Dim::time, 1e-3}, {"us", Dim::time, 1e-6},
    {"ns", Dim::time, 1e-9},
    {"m/s", Dim::velocity, 1.0}, {"mm/s", Dim::velocity, 1e-3},
    {"um/s", Dim::velocity, 1e-6},
};

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::length: return "length";
    case Dim::inv_length: return "inverse length";
    case Dim::mass: return "mass";
    case Dim::energy: return "energy";
    case Dim::temperature: return "temperature";
    case Dim::frequency: return "frequency";
    case Dim::time: return "time";
    case Dim::velocity: return "velocity";
  }
  return "?";
}

struct ParseContext {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw validation_error(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

double parse_number(const ParseContext& ctx, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) ctx.fail("malformed number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    ctx.fail("malformed number '" + tok + "'");
  }
}

// "0.917 angstrom" -> SI double of the expected dimension
double parse_quantity(const ParseContext& ctx, const std::string& value, Dim dim) {
  const auto sp = value.find_first_of(" \t");
  if (sp == std::string::npos)
    ctx.fail("dimensioned value '" + value + "' needs a unit (" +
             dim_name(dim) + ")");
  const std::string num = trim(value.substr(0, sp));
  const std::string unit = trim(value.substr(sp + 1));
  bool name_known = false;
  for (const Unit& u : kUnits) {
    if (unit == u.name) {
      if (u.dim == dim) return parse_number(ctx, num) * u.to_si;
      name_known = true;
    }
  }
  if (name_known)
    ctx.fail("unit '" + unit + "' is not a " + dim_name(dim) + " unit");
  ctx.fail("unknown unit '" + unit + "'");
}

double parse_bare(const ParseContext& ctx, const std::string& value) {
  if (value.find_first_of(" \t") != std::string::npos)
    ctx.fail("dimensionless value '" + value + "' must not carry a unit");
  return parse_number(ctx, value);
}

long parse_integer(const ParseContext& ctx, const std::string& value) {
  const double v = parse_bare(ctx, value);
  if (v != std::floor(v)) ctx.fail("expected an integer, got '" + value + "'");
  return long(v);
}

std::string format_si(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  ParseContext ctx{origin, 0};
  std::set<std::string> seen;

  using Handler = std::function<void(const std::string&)>;
  std::map<std::string, Handler> handlers;

  auto quantity = [&](double& slot, Dim dim) {
    return [&slot, dim, &ctx](const std::string& v) {
      slot = parse_quantity(ctx, v, dim);
    };
  };
  auto bare = [&](double& slot) {
    return [&slot, &ctx](const std::string& v) { slot = parse_bare(ctx, v); };
  };

  // reaction block
  handlers["reaction.m_a"] = quantity(cfg.masses.m_a, Dim::mass);
  handlers["reaction.m_b"] = quantity(cfg.masses.m_b, Dim::mass);
  handlers["reaction.m_c"] = quantity(cfg.masses.m_c, Dim::mass);
  handlers["reaction.delta"] = bare(cfg.sato_delta);
  for (auto [prefix, spec] : {std::pair{"reaction.ab.", &cfg.ab},
                              std::pair{"reaction.bc.", &cfg.bc},
                              std::pair{"reaction.ac.", &cfg.ac}}) {
    handlers[std::string(prefix) + "d"] =
        quantity(spec->dissociation_energy, Dim::energy);
    handlers[std::string(prefix) + "beta"] =
        quantity(spec->beta_morse, Dim::inv_length);
    handlers[std::string(prefix) + "q0"] =
        quantity(spec->equilibrium_distance, Dim::length);
  }

  // simulator block
  handlers["simulator.m_tilde"] = quantity(cfg.m_tilde, Dim::mass);
  handlers["simulator.l"] = [&](const std::string& v) {
    cfg.l = parse_bare(ctx, v);
  };
  handlers["simulator.target_nu"] = [&](const std::string& v) {
    cfg.target_nu_tilde = parse_quantity(ctx, v, Dim::frequency);
  };
  handlers["simulator.target_channel"] = [&](const std::string& v) {
    const long c = parse_integer(ctx, v);
    if (c != 1 && c != 2) ctx.fail("target_channel must be 1 or 2");
    cfg.target_channel = int(c);
  };
  handlers["simulator.temperature"] = quantity(cfg.temperature, Dim::temperature);

  // grid block
  handlers["grid.q1_min"] = quantity(cfg.grid_q1_min, Dim::length);
  handlers["grid.q1_max"] = quantity(cfg.grid_q1_max, Dim::length);
  handlers["grid.q2_min"] = quantity(cfg.grid_q2_min, Dim::length);
  handlers["grid.q2_max"] = quantity(cfg.grid_q2_max, Dim::length);
  handlers["grid.n1"] = [&](const std::string& v) {
    cfg.grid_n1 = std::size_t(parse_integer(ctx, v));
  };
  handlers["grid.n2"] = [&](const std::string& v) {
    cfg.grid_n2 = std::size_t(parse_integer(ctx, v));
  };

  // packet block
  handlers["packet.channel"] = [&](const std::string& v) {
    if (v == "reactant") cfg.packet.channel = Channel::reactant;
    else if (v == "product") cfg.packet.channel = Channel::product;
    else ctx.fail("packet.channel must be reactant or product");
  };
  handlers["packet.center"] = quantity(cfg.packet.center, Dim::length);
  handlers["packet.sigma"] = quantity(cfg.packet.sigma, Dim::length);
  handlers["packet.velocity"] = [&](const std::string& v) {
    if (v == "auto") cfg.packet_velocity_auto = true;
    else cfg.packet.velocity = parse_quantity(ctx, v, Dim::velocity);
  };
  handlers["packet.n"] = [&](const std::string& v) {
    const long n = parse_integer(ctx, v);
    if (n < 0) ctx.fail("packet.n must be >= 0");
    cfg.packet.n_transverse = int(n);
  };

  // cap block
  handlers["cap.width"] = quantity(cfg.cap.width, Dim::length);
  handlers["cap.strength"] = quantity(cfg.cap.strength, Dim::energy);
  handlers["cap.power"] = [&](const std::string& v) {
    cfg.cap.power = int(parse_integer(ctx, v));
  };
  handlers["cap.halfwidth"] = quantity(cfg.cap.channel_halfwidth, Dim::length);

  // schedule block
  handlers["schedule.dt"] = [&](const std::string& v) {
    if (v == "auto") cfg.dt_auto = true;
    else cfg.schedule.dt = parse_quantity(ctx, v, Dim::time);
  };
  handlers["schedule.n_steps"] = [&](const std::string& v) {
    cfg.schedule.n_steps = parse_integer(ctx, v);
  };
  handlers["schedule.stride"] = [&](const std::string& v) {
    cfg.schedule.snapshot_stride = parse_integer(ctx, v);
  };

  // analysis block
  handlers["analysis.reactant_line"] = quantity(cfg.reactant_line_q1, Dim::length);
  handlers["analysis.product_line"] = quantity(cfg.product_line_eta, Dim::length);
  handlers["analysis.basis"] = [&](const std::string& v) {
    if (v == "harmonic") cfg.basis.kind = VibBasis::harmonic;
    else if (v == "morse") cfg.basis.kind = VibBasis::morse;
    else ctx.fail("analysis.basis must be harmonic or morse");
  };
  handlers["analysis.n_max"] = [&](const std::string& v) {
    const long n = parse_integer(ctx, v);
    if (n < 0) ctx.fail("analysis.n_max must be >= 0");
    cfg.basis.n_states = int(n) + 1;  // states 0..n_max
  };
  handlers["analysis.flux_stride"] = [&](const std::string& v) {
    cfg.flux_stride = parse_integer(ctx, v);
  };
  handlers["analysis.probe_halfwidth"] =
      quantity(cfg.probe_halfwidth, Dim::length);

  // output block
  handlers["output.dir"] = [&](const std::string& v) { cfg.output_dir = v; };

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++ctx.line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) ctx.fail("empty value for '" + key + "'");
    const auto it = handlers.find(key);
    if (it == handlers.end()) ctx.fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) ctx.fail("duplicate key '" + key + "'");
    it->second(value);
  }

  auto block_seen = [&](const char* prefix) {
    const std::string p = std::string(prefix) + ".";
    for (const auto& k : seen)
      if (k.rfind(p, 0) == 0) return true;
    return false;
  };
  auto need = [&](const char* key) {
    if (!seen.count(key))
      throw validation_error(origin + ": missing required key '" +
                             std::string(key) + "'");
  };

  cfg.has_reaction = block_seen("reaction");
  cfg.has_simulator = block_seen("simulator");
  cfg.has_grid = block_seen("grid");
  cfg.has_packet = block_seen("packet");
  cfg.has_cap = block_seen("cap");
  cfg.has_schedule = block_seen("schedule");
  cfg.has_analysis = block_seen("analysis");

  if (cfg.has_reaction) {
    for (const char* k : {"reaction.m_a", "reaction.m_b", "reaction.m_c",
                          "reaction.delta", "reaction.ab.d", "reaction.ab.beta",
                          "reaction.ab.q0", "reaction.bc.d", "reaction.bc.beta",
                          "reaction.bc.q0", "reaction.ac.d", "reaction.ac.beta",
                          "reaction.ac.q0"})
      need(k);
    // reduced masses follow from the mass triple
    cfg.ab.reduced_mass =
        cfg.masses.m_a * cfg.masses.m_b / (cfg.masses.m_a + cfg.masses.m_b);
    cfg.bc.reduced_mass =
        cfg.masses.m_b * cfg.masses.m_c / (cfg.masses.m_b + cfg.masses.m_c);
    cfg.ac.reduced_mass =
        cfg.masses.m_a * cfg.masses.m_c / (cfg.masses.m_a + cfg.masses.m_c);
    cfg.surface();  // validates
  }
  if (cfg.has_simulator) {
    need("simulator.m_tilde");
    if (cfg.l && cfg.target_nu_tilde)
      throw validation_error(origin +
                             ": give simulator.l or simulator.target_nu, not both");
    if (!cfg.l && !cfg.target_nu_tilde)
      throw validation_error(origin +
                             ": one of simulator.l / simulator.target_nu required");
  }
  if (cfg.has_grid)
    for (const char* k : {"grid.q1_max", "grid.q2_max", "grid.n1", "grid.n2"})
      need(k);
  if (cfg.has_packet)
    for (const char* k : {"packet.center", "packet.sigma"}) need(k);
  if (cfg.has_packet && !seen.count("packet.velocity"))
    cfg.packet_velocity_auto = true;
  if (cfg.has_cap)
    for (const char* k : {"cap.width", "cap.strength", "cap.halfwidth"}) need(k);
  if (cfg.has_schedule) {
    need("schedule.n_steps");
    if (!seen.count("schedule.dt")) cfg.dt_auto = true;
  }
  if (cfg.has_analysis)
    for (const char* k : {"analysis.reactant_line", "analysis.product_line"})
      need(k);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

LepsSurface RunConfig::surface() const {
  return {ab, bc, ac, sato_delta};
}

ScalingParams RunConfig::scaling() const {
  if (l) return {m_tilde, *l};
  if (!target_nu_tilde)
    throw validation_error("config: neither l nor target frequency given");
  return {m_tilde,
          solve_l(*target_nu_tilde, target_channel, surface(), masses, m_tilde)};
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  auto kv = [&](const char* key, const std::string& v) {
    os << key << " = " << v << "\n";
  };
  if (has_reaction) {
    kv("reaction.m_a", format_si(masses.m_a) + " kg");
    kv("reaction.m_b", format_si(masses.m_b) + " kg");
    kv("reaction.m_c", format_si(masses.m_c) + " kg");
    kv("reaction.delta", format_si(sato_delta));
    const std::pair<const char*, const DiatomSpec*> pairs[] = {
        {"ab", &ab}, {"bc", &bc}, {"ac", &ac}};
    for (auto [name, d] : pairs) {
      kv((std::string("reaction.") + name + ".d").c_str(),
         format_si(d->dissociation_energy) + " J");
      kv((std::string("reaction.") + name + ".beta").c_str(),
         format_si(d->beta_morse) + " 1/m");
      kv((std::string("reaction.") + name + ".q0").c_str(),
         format_si(d->equilibrium_distance) + " m");
    }
  }
  if (has_simulator) {
    kv("simulator.m_tilde", format_si(m_tilde) + " kg");
    if (l) kv("simulator.l", format_si(*l));
    if (target_nu_tilde) {
      kv("simulator.target_nu", format_si(*target_nu_tilde) + " Hz");
      kv("simulator.target_channel", std::to_string(target_channel));
    }
    kv("simulator.temperature", format_si(temperature) + " K");
  }
  if (has_grid) {
    kv("grid.q1_min", format_si(grid_q1_min) + " m");
    kv("grid.q1_max", format_si(grid_q1_max) + " m");
    kv("grid.q2_min", format_si(grid_q2_min) + " m");
    kv("grid.q2_max", format_si(grid_q2_max) + " m");
    kv("grid.n1", std::to_string(grid_n1));
    kv("grid.n2", std::to_string(grid_n2));
  }
  if (has_packet) {
    kv("packet.channel",
       packet.channel == Channel::reactant ? "reactant" : "product");
    kv("packet.center", format_si(packet.center) + " m");
    kv("packet.sigma", format_si(packet.sigma) + " m");
    if (packet_velocity_auto) kv("packet.velocity", "auto");
    else kv("packet.velocity", format_si(packet.velocity) + " m/s");
    kv("packet.n", std::to_string(packet.n_transverse));
  }
  if (has_cap) {
    kv("cap.width", format_si(cap.width) + " m");
    kv("cap.strength", format_si(cap.strength) + " J");
    kv("cap.power", std::to_string(cap.power));
    kv("cap.halfwidth", format_si(cap.channel_halfwidth) + " m");
  }
  if (has_schedule) {
    if (dt_auto) kv("schedule.dt", "auto");
    else kv("schedule.dt", format_si(schedule.dt) + " s");
    kv("schedule.n_steps", std::to_string(schedule.n_steps));
    kv("schedule.stride", std::to_string(schedule.snapshot_stride));
  }
  if (has_analysis) {
    kv("analysis.reactant_line", format_si(reactant_line_q1) + " m");
    kv("analysis.product_line", format_si(product_line_eta) + " m");
    kv("analysis.basis", basis.kind == VibBasis::harmonic ? "harmonic" : "morse");
    kv("analysis.n_max", std::to_string(basis.n_states - 1));
    kv("analysis.flux_stride", std::to_string(flux_stride));
    if (probe_halfwidth > 0)
      kv("analysis.probe_halfwidth", format_si(probe_halfwidth) + " m");
  }
  if (!output_dir.empty()) kv("output.dir", output_dir);
  return os.str();
}

void require_blocks(const RunConfig& config,
                    std::initializer_list<const char*> blocks) {
  for (const char* b : blocks) {
    const std::string name = b;
    const bool ok = (name == "reaction" && config.has_reaction) ||
                    (name == "simulator" && config.has_simulator) ||
                    (name == "grid" && config.has_grid) ||
                    (name == "packet" && config.has_packet) ||
                    (name == "cap" && config.has_cap) ||
                    (name == "schedule" && config.has_schedule) ||
                    (name == "analysis" && config.has_analysis);
    if (!ok)
      throw validation_error("config: missing required block '" + name + "'");
  }
}

}  // namespace reactwave

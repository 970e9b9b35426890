#pragma once

// Run configuration read from a single JSON document. Command-line flags
// override the corresponding fields after parsing.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pointscatter/pointscatter.hpp"

namespace pointscatter::cli {

/// Raised for malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Task { convert, bound_states, critical, resonances, scatter, figure, limit, nonrel_check };

inline constexpr std::array<std::pair<Task, const char *>, 8> task_names{{
    {Task::convert, "convert"},
    {Task::bound_states, "bound-states"},
    {Task::critical, "critical"},
    {Task::resonances, "resonances"},
    {Task::scatter, "scatter"},
    {Task::figure, "figure"},
    {Task::limit, "limit"},
    {Task::nonrel_check, "nonrel-check"},
}};

inline Task parse_task(const std::string &s) {
  for (const auto &[t, name] : task_names)
    if (s == name)
      return t;
  throw ConfigError("unknown task '" + s + "'");
}

enum class Format { csv, json };

inline Format parse_format(const std::string &s) {
  if (s == "csv")
    return Format::csv;
  if (s == "json")
    return Format::json;
  throw ConfigError("unknown format '" + s + "' (csv or json)");
}

/// One of the three ways to describe the pair of interactions.
struct InteractionSpec {
  enum class Form { none, strengths, lambda, special_case } form = Form::none;
  // strengths / lambda: either two points (general parity) or one base point
  // plus an even/odd construction.
  Parity parity = Parity::general;
  std::vector<PhysicalStrengths> strengths;
  std::vector<std::array<double, 5>> lambdas; // phi, a, b, c, d
  SpecialCaseId special;
};

struct EnergyGrid {
  double min = 0.0, max = 0.0; // 0: defaults (m(1+1e-6), 6m)
  std::size_t count = 1000;
  bool include_negative = false;
};

struct RunConfig {
  Task task = Task::bound_states;
  double mass = 2.0;
  double separation = 1.0;
  bool mass_set = false, separation_set = false;
  InteractionSpec interaction;

  std::size_t grid = 4096;
  std::optional<double> tol;
  bool cross_validate = true;
  EnergyGrid energies;
  std::optional<ComplexRegion> region;
  std::size_t seeds_nx = 64, seeds_ny = 32;
  std::vector<double> strengths_scan; // nonrel-check ladder
  Tolerances tolerances = default_tolerances;

  int figure = 0;
  std::string out;
  Format format = Format::csv;
  bool format_set = false;
};

namespace detail {

inline double number(const nlohmann::json &j, const char *key) {
  const auto it = j.find(key);
  if (it == j.end())
    return 0.0;
  if (it->is_string()) {
    const std::string s = it->get<std::string>();
    if (s == "inf" || s == "+inf")
      return INFINITY;
    if (s == "-inf")
      return -INFINITY;
    throw ConfigError(std::string("field '") + key + "' must be a number");
  }
  if (!it->is_number())
    throw ConfigError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

inline PhysicalStrengths read_strengths(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("strengths entry must be an object with B, A0, A1, W");
  for (const auto &[k, v] : j.items())
    if (k != "B" && k != "A0" && k != "A1" && k != "W")
      throw ConfigError("unknown strength field '" + k + "'");
  try {
    return PhysicalStrengths::make(number(j, "B"), number(j, "A0"), number(j, "A1"),
                                   number(j, "W"));
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
}

inline std::array<double, 5> read_lambda(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("lambda entry must be an object with phi, a, b, c, d");
  for (const char *k : {"a", "d"})
    if (!j.contains(k))
      throw ConfigError(std::string("lambda entry needs '") + k + "'");
  return {number(j, "phi"), number(j, "a"), number(j, "b"), number(j, "c"), number(j, "d")};
}

inline Parity read_parity(const nlohmann::json &j) {
  const std::string p = j.value("parity", std::string("general"));
  if (p == "even")
    return Parity::even;
  if (p == "odd")
    return Parity::odd;
  if (p == "general")
    return Parity::general;
  throw ConfigError("parity must be even, odd or general");
}

inline void read_interaction(const nlohmann::json &j, InteractionSpec &spec) {
  if (!j.is_object())
    throw ConfigError("'interaction' must be an object");
  const int forms = int(j.contains("strengths")) + int(j.contains("lambda")) +
                    int(j.contains("case"));
  if (forms != 1)
    throw ConfigError("interaction needs exactly one of 'strengths', 'lambda' or 'case'");
  spec.parity = read_parity(j);

  const auto points = [&](const nlohmann::json &v, auto &&read, auto &out) {
    if (v.is_array()) {
      if (spec.parity != Parity::general || v.size() != 2)
        throw ConfigError("a list of points needs exactly two entries and parity 'general'");
      for (const auto &e : v)
        out.push_back(read(e));
    } else {
      if (spec.parity == Parity::general)
        throw ConfigError("a single base point needs parity 'even' or 'odd'");
      out.push_back(read(v));
    }
  };

  if (j.contains("strengths")) {
    spec.form = InteractionSpec::Form::strengths;
    points(j["strengths"], read_strengths, spec.strengths);
  } else if (j.contains("lambda")) {
    spec.form = InteractionSpec::Form::lambda;
    points(j["lambda"], read_lambda, spec.lambdas);
  } else {
    spec.form = InteractionSpec::Form::special_case;
    if (!j["case"].is_string())
      throw ConfigError("'case' must be a string such as \"even/equal-mixture\"");
    try {
      const auto [p, k] = parse_case(j["case"].get<std::string>());
      spec.special.parity = p;
      spec.special.kind = k;
    } catch (const Error &e) {
      throw ConfigError(e.what());
    }
    if (!j.contains("strength"))
      throw ConfigError("special case needs 'strength'");
    spec.special.strength = number(j, "strength");
    if (!std::isfinite(spec.special.strength))
      throw ConfigError("special-case strength must be finite");
  }
}

inline void read_tolerances(const nlohmann::json &j, Tolerances &t) {
  const std::array<std::pair<const char *, double Tolerances::*>, 10> fields{{
      {"algebraic", &Tolerances::algebraic},
      {"round_trip", &Tolerances::round_trip},
      {"threshold_residual", &Tolerances::threshold_residual},
      {"bound_residual", &Tolerances::bound_residual},
      {"closed_form", &Tolerances::closed_form},
      {"phase_guard", &Tolerances::phase_guard},
      {"pole_residual", &Tolerances::pole_residual},
      {"pole_dedupe", &Tolerances::pole_dedupe},
      {"locus", &Tolerances::locus},
      {"near_singular", &Tolerances::near_singular},
  }};
  for (const auto &[key, value] : j.items()) {
    bool known = false;
    for (const auto &[name, member] : fields) {
      if (key == name) {
        known = true;
        if (!value.is_number() || !(value.get<double>() > 0.0))
          throw ConfigError("tolerance '" + key + "' must be a positive number");
        t.*member = value.get<double>();
      }
    }
    if (!known)
      throw ConfigError("unknown tolerance '" + key + "'");
  }
}

inline std::size_t count_field(const nlohmann::json &j, const char *key, std::size_t fallback) {
  if (!j.contains(key))
    return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 1)
    throw ConfigError(std::string("'") + key + "' must be a positive integer");
  return j[key].get<std::size_t>();
}

inline void read_scan(const nlohmann::json &j, RunConfig &cfg) {
  if (!j.is_object())
    throw ConfigError("'scan' must be an object");
  cfg.grid = count_field(j, "grid", cfg.grid);
  if (j.contains("tol")) {
    const double t = number(j, "tol");
    if (!(t > 0.0))
      throw ConfigError("'scan.tol' must be positive");
    cfg.tol = t;
  }
  cfg.cross_validate = j.value("cross_validate", cfg.cross_validate);
  if (j.contains("energies")) {
    const auto &e = j["energies"];
    cfg.energies.min = number(e, "min");
    cfg.energies.max = number(e, "max");
    cfg.energies.count = count_field(e, "count", cfg.energies.count);
    cfg.energies.include_negative = e.value("include_negative", false);
  }
  if (j.contains("region")) {
    const auto &r = j["region"];
    ComplexRegion reg;
    reg.re_min = number(r, "re_min");
    reg.re_max = number(r, "re_max");
    reg.im_min = number(r, "im_min");
    reg.im_max = number(r, "im_max");
    cfg.region = reg;
  }
  if (j.contains("seeds")) {
    cfg.seeds_nx = count_field(j["seeds"], "nx", cfg.seeds_nx);
    cfg.seeds_ny = count_field(j["seeds"], "ny", cfg.seeds_ny);
  }
  if (j.contains("strengths")) {
    if (!j["strengths"].is_array())
      throw ConfigError("'scan.strengths' must be a list of numbers");
    for (const auto &v : j["strengths"]) {
      if (!v.is_number())
        throw ConfigError("'scan.strengths' must be a list of numbers");
      cfg.strengths_scan.push_back(v.get<double>());
    }
  }
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  static const std::array<const char *, 9> known{
      "task", "mass", "separation", "interaction", "scan", "tolerances", "figure", "output",
      "comment"};
  for (const auto &[k, v] : j.items())
    if (std::find_if(known.begin(), known.end(), [&](const char *s) { return k == s; }) ==
        known.end())
      throw ConfigError("unknown config field '" + k + "'");

  if (j.contains("task")) {
    if (!j["task"].is_string())
      throw ConfigError("'task' must be a string");
    cfg.task = parse_task(j["task"].get<std::string>());
  }
  if (j.contains("mass")) {
    cfg.mass = detail::number(j, "mass");
    cfg.mass_set = true;
  }
  if (j.contains("separation")) {
    cfg.separation = detail::number(j, "separation");
    cfg.separation_set = true;
  }
  if (!(cfg.mass > 0.0) || !std::isfinite(cfg.mass))
    throw ConfigError("'mass' must be a positive number");
  if (!(cfg.separation >= 0.0) || !std::isfinite(cfg.separation))
    throw ConfigError("'separation' must be a non-negative number");
  if (j.contains("interaction"))
    detail::read_interaction(j["interaction"], cfg.interaction);
  if (j.contains("scan"))
    detail::read_scan(j["scan"], cfg);
  if (j.contains("tolerances"))
    detail::read_tolerances(j["tolerances"], cfg.tolerances);
  if (j.contains("figure")) {
    if (!j["figure"].is_number_integer())
      throw ConfigError("'figure' must be an integer");
    cfg.figure = j["figure"].get<int>();
  }
  if (j.contains("output")) {
    const auto &o = j["output"];
    if (o.contains("path"))
      cfg.out = o["path"].get<std::string>();
    if (o.contains("format")) {
      cfg.format = parse_format(o["format"].get<std::string>());
      cfg.format_set = true;
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config has the wrong shape: ") + e.what());
  }
}

/// The arrangement described by the interaction block. Impermeable
/// strengths surface as Error(ImpermeableInteraction).
inline Arrangement build_arrangement(const RunConfig &cfg) {
  const auto &in = cfg.interaction;
  const double m = cfg.mass, l = cfg.separation;
  const auto to_lambda = [&](std::size_t i) {
    if (in.form == InteractionSpec::Form::strengths)
      return strengths_to_lambda(in.strengths[i], cfg.tolerances);
    const auto &p = in.lambdas[i];
    return LambdaParams::make(p[0], p[1], p[2], p[3], p[4], cfg.tolerances);
  };
  switch (in.form) {
  case InteractionSpec::Form::none:
    throw ConfigError("this task needs an 'interaction' block");
  case InteractionSpec::Form::special_case:
    return instantiate(in.special, m, l);
  case InteractionSpec::Form::strengths:
  case InteractionSpec::Form::lambda:
    if (in.parity == Parity::even)
      return make_even_arrangement(to_lambda(0), m, l);
    if (in.parity == Parity::odd)
      return make_odd_arrangement(to_lambda(0), m, l);
    return Arrangement::make(to_lambda(0), to_lambda(1), m, l, Parity::general);
  }
  throw ConfigError("unreachable interaction form");
}

} // namespace pointscatter::cli

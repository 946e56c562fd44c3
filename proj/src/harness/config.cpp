#include "gevrey/harness/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gevrey/coefficients/coefficient_model.hpp"
#include "gevrey/qmc/lattice.hpp"

namespace gevrey::harness {

namespace {

using Error = std::optional<std::string>;

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kNames{{
    {Experiment::kGlStudy, "gl-study"},
    {Experiment::kQmcStudy, "qmc-study"},
    {Experiment::kMcStudy, "mc-study"},
    {Experiment::kTruncStudy, "trunc-study"},
    {Experiment::kChecks, "checks"},
    {Experiment::kSolveEvp, "solve-evp"},
    {Experiment::kCbc, "cbc"},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    v = v.substr(1, v.size() - 2);
  return std::string(v);
}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <class T>
Error parse_uint(std::string_view text, T& out, T lo, T hi, std::string_view key) {
  const std::string v = unquote(text);
  T tmp{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), tmp);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    return std::string(key) + ": expected a nonnegative integer, got '" + v + "'";
  if (tmp < lo || tmp > hi) {
    std::string msg = std::string(key) + " must be >= " + std::to_string(lo);
    if (hi != std::numeric_limits<T>::max()) msg += " and <= " + std::to_string(hi);
    return msg + ", got " + v;
  }
  out = tmp;
  return std::nullopt;
}

Error parse_real(std::string_view text, double& out, std::string_view key) {
  const std::string v = unquote(text);
  double tmp = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), tmp);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(tmp))
    return std::string(key) + ": expected a real number, got '" + v + "'";
  out = tmp;
  return std::nullopt;
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      parts.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !parts.empty()) parts.emplace_back(trim(cur));
  return parts;
}

// "1,2,5" or "3..8" or a mix such as "1,2,4..6".
Error parse_size_list(std::string_view text, std::vector<std::size_t>& out, std::string_view key) {
  std::vector<std::size_t> vals;
  for (const auto& part : split_list(unquote(text))) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      std::size_t x = 0;
      if (auto e = parse_uint<std::size_t>(part, x, 0, std::numeric_limits<std::size_t>::max(), key)) return e;
      vals.push_back(x);
    } else {
      std::size_t a = 0, b = 0;
      if (auto e = parse_uint<std::size_t>(part.substr(0, dots), a, 0, std::numeric_limits<std::size_t>::max(), key))
        return e;
      if (auto e = parse_uint<std::size_t>(part.substr(dots + 2), b, 0, std::numeric_limits<std::size_t>::max(), key))
        return e;
      if (b < a || b - a > 100000) return std::string(key) + ": bad range '" + part + "'";
      for (std::size_t x = a; x <= b; ++x) vals.push_back(x);
    }
  }
  out = std::move(vals);
  return std::nullopt;
}

Error parse_real_list(std::string_view text, std::vector<double>& out, std::string_view key) {
  std::vector<double> vals;
  for (const auto& part : split_list(unquote(text))) {
    double x = 0.0;
    if (auto e = parse_real(part, x, key)) return e;
    vals.push_back(x);
  }
  out = std::move(vals);
  return std::nullopt;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>)
      s += format_real(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

struct KeySpec {
  std::string_view name;
  std::vector<Experiment> experiments;
  std::function<Error(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();

const std::vector<Experiment> kSolving{Experiment::kGlStudy,   Experiment::kQmcStudy, Experiment::kMcStudy,
                                       Experiment::kTruncStudy, Experiment::kChecks,   Experiment::kSolveEvp};
const std::vector<Experiment> kSampling{Experiment::kQmcStudy, Experiment::kMcStudy, Experiment::kTruncStudy};
const std::vector<Experiment> kWeighted{Experiment::kQmcStudy, Experiment::kMcStudy, Experiment::kTruncStudy,
                                        Experiment::kCbc};
const std::vector<Experiment> kPlotting{Experiment::kGlStudy, Experiment::kQmcStudy, Experiment::kMcStudy,
                                        Experiment::kTruncStudy};
const std::vector<Experiment> kAllButSolve{Experiment::kGlStudy, Experiment::kQmcStudy, Experiment::kMcStudy,
                                           Experiment::kTruncStudy, Experiment::kChecks, Experiment::kCbc};

KeySpec size_key(std::string_view name, std::vector<Experiment> ex, std::size_t RunConfig::*field, std::size_t lo,
                 std::size_t hi = kMax) {
  return {name, std::move(ex),
          [=](RunConfig& c, std::string_view v) { return parse_uint<std::size_t>(v, c.*field, lo, hi, name); },
          [=](const RunConfig& c) { return std::to_string(c.*field); }};
}

KeySpec string_key(std::string_view name, std::vector<Experiment> ex, std::string RunConfig::*field,
                   std::vector<std::string> allowed = {}) {
  return {name, std::move(ex),
          [=](RunConfig& c, std::string_view v) -> Error {
            std::string s = unquote(v);
            if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
              std::string msg = std::string(name) + ": expected one of";
              for (const auto& a : allowed) msg += " " + a;
              return msg + ", got '" + s + "'";
            }
            c.*field = std::move(s);
            return std::nullopt;
          },
          [=](const RunConfig& c) { return quote(c.*field); }};
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    t.push_back({"model", kSolving,
                 [](RunConfig& c, std::string_view v) -> Error {
                   const std::string s = unquote(v);
                   static const std::vector<std::string> known{"gl-analytic", "gl-gevrey3", "qmc-analytic",
                                                               "qmc-gevrey2", "constant",   "custom"};
                   if (std::find(known.begin(), known.end(), s) == known.end())
                     return "model: unknown model '" + s +
                            "' (gl-analytic, gl-gevrey3, qmc-analytic, qmc-gevrey2, constant, custom)";
                   c.model = s;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return quote(c.model); }});
    t.push_back(string_key("custom_file", kSolving, &RunConfig::custom_file));
    t.push_back(size_key("m", kSolving, &RunConfig::m, 2, 4096));
    t.push_back(string_key("solver", kSolving, &RunConfig::solver, {"cholesky", "pcg"}));
    t.push_back({"tol", kSolving,
                 [](RunConfig& c, std::string_view v) -> Error {
                   double x = 0.0;
                   if (auto e = parse_real(v, x, "tol")) return e;
                   if (!(x > 0.0 && x < 1.0)) return "tol must lie in (0, 1), got " + unquote(v);
                   c.tol = x;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return format_real(c.tol); }});
    t.push_back(size_key("max_iter", kSolving, &RunConfig::max_iter, 1));

    t.push_back(size_key("n_min", {Experiment::kGlStudy}, &RunConfig::n_min, 1, 512));
    t.push_back(size_key("n_max", {Experiment::kGlStudy, Experiment::kChecks}, &RunConfig::n_max, 1, 512));
    t.push_back(size_key("n_star", {Experiment::kGlStudy}, &RunConfig::n_star, 2, 512));
    t.push_back(size_key("fit_min", {Experiment::kGlStudy}, &RunConfig::fit_min, 1, 512));
    t.push_back(size_key("fit_max", {Experiment::kGlStudy}, &RunConfig::fit_max, 1, 512));

    t.push_back(size_key("s", kWeighted, &RunConfig::s, 1, 100000));
    t.push_back({"levels", {Experiment::kQmcStudy, Experiment::kMcStudy},
                 [](RunConfig& c, std::string_view v) -> Error {
                   const std::string s = unquote(v);
                   const auto dots = s.find("..");
                   std::size_t a = 0, b = 0;
                   if (dots == std::string::npos) return "levels: expected m1..m2 (exponents of 2), got '" + s + "'";
                   if (auto e = parse_uint<std::size_t>(std::string_view(s).substr(0, dots), a, 1, 30, "levels"))
                     return e;
                   if (auto e = parse_uint<std::size_t>(std::string_view(s).substr(dots + 2), b, 1, 30, "levels"))
                     return e;
                   if (b < a) return "levels: m1 must not exceed m2, got '" + s + "'";
                   c.level_min = a;
                   c.level_max = b;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::to_string(c.level_min) + ".." + std::to_string(c.level_max); }});
    t.push_back(size_key("shifts", kSampling, &RunConfig::shifts, 1, 100000));
    t.push_back(size_key("mc_replicates", {Experiment::kQmcStudy, Experiment::kMcStudy}, &RunConfig::mc_replicates, 1,
                         100000));
    t.push_back({"seed", kSampling,
                 [](RunConfig& c, std::string_view v) {
                   return parse_uint<std::uint64_t>(v, c.seed, 0, std::numeric_limits<std::uint64_t>::max(), "seed");
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"delta", kWeighted,
                 [](RunConfig& c, std::string_view v) -> Error {
                   if (unquote(v) == "auto") {
                     c.delta.reset();
                     return std::nullopt;
                   }
                   double x = 0.0;
                   if (auto e = parse_real(v, x, "delta")) return e;
                   if (!(x >= 1.0)) return "delta must be >= 1, got " + unquote(v);
                   c.delta = x;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return c.delta ? format_real(*c.delta) : std::string("auto"); }});
    t.push_back({"theta", kWeighted,
                 [](RunConfig& c, std::string_view v) -> Error {
                   double x = 0.0;
                   if (auto e = parse_real(v, x, "theta")) return e;
                   if (!(x >= 0.5 + 1e-6 && x <= 1.0)) return "theta must lie in (1/2, 1], got " + unquote(v);
                   c.theta = x;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return format_real(c.theta); }});
    t.push_back({"beta", kWeighted,
                 [](RunConfig& c, std::string_view v) -> Error {
                   const std::string s = unquote(v);
                   try {
                     qmc::parse_beta_rule(s, 1);
                   } catch (const ValidationError& e) {
                     return std::string("beta: ") + e.what();
                   }
                   c.beta = s;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return quote(c.beta); }});
    t.push_back(string_key("vector_in", {Experiment::kQmcStudy, Experiment::kMcStudy}, &RunConfig::vector_in));
    t.push_back(string_key("vector_out", {Experiment::kQmcStudy}, &RunConfig::vector_out));
    t.push_back({"s_list", {Experiment::kTruncStudy},
                 [](RunConfig& c, std::string_view v) -> Error {
                   std::vector<std::size_t> vals;
                   if (auto e = parse_size_list(v, vals, "s_list")) return e;
                   if (vals.empty()) return std::string("s_list must not be empty");
                   for (std::size_t i = 0; i < vals.size(); ++i) {
                     if (vals[i] == 0) return std::string("s_list entries must be >= 1");
                     if (i > 0 && vals[i] <= vals[i - 1]) return std::string("s_list must be strictly ascending");
                   }
                   c.s_list = std::move(vals);
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return join(c.s_list); }});
    t.push_back(size_key("s_ref", {Experiment::kTruncStudy}, &RunConfig::s_ref, 2, 100000));
    t.push_back({"n", {Experiment::kTruncStudy, Experiment::kCbc},
                 [](RunConfig& c, std::string_view v) -> Error {
                   std::uint64_t x = 0;
                   if (auto e = parse_uint<std::uint64_t>(v, x, 2, std::uint64_t{1} << 30, "n")) return e;
                   if (!qmc::is_power_of_two(x)) return "n must be a power of two, got " + unquote(v);
                   c.n = x;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::to_string(c.n); }});

    t.push_back(string_key("check", {Experiment::kChecks}, &RunConfig::check, {"combinatorics", "gevrey"}));
    t.push_back(size_key("nu_max", {Experiment::kChecks}, &RunConfig::nu_max, 0, 16));
    t.push_back(size_key("dim_max", {Experiment::kChecks}, &RunConfig::dim_max, 1, 8));
    t.push_back(size_key("K", {Experiment::kChecks}, &RunConfig::K, 1, 200));
    t.push_back(size_key("quad_n", {Experiment::kChecks}, &RunConfig::quad_n, 1, 512));
    t.push_back({"deltas", {Experiment::kChecks},
                 [](RunConfig& c, std::string_view v) -> Error {
                   std::vector<double> vals;
                   if (auto e = parse_real_list(v, vals, "deltas")) return e;
                   if (vals.empty()) return std::string("deltas must not be empty");
                   for (double d : vals)
                     if (!(d >= 1.0)) return std::string("deltas entries must be >= 1");
                   c.deltas = std::move(vals);
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return join(c.deltas); }});
    t.push_back(size_key("max_order", {Experiment::kChecks}, &RunConfig::max_order, 0, 6));
    t.push_back({"fd_step", {Experiment::kChecks},
                 [](RunConfig& c, std::string_view v) -> Error {
                   double x = 0.0;
                   if (auto e = parse_real(v, x, "fd_step")) return e;
                   if (!(x > 0.0 && x < 1.0)) return "fd_step must lie in (0, 1), got " + unquote(v);
                   c.fd_step = x;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return format_real(c.fd_step); }});

    t.push_back({"y", {Experiment::kSolveEvp},
                 [](RunConfig& c, std::string_view v) { return parse_real_list(v, c.y, "y"); },
                 [](const RunConfig& c) { return join(c.y); }});
    t.push_back({"second", {Experiment::kSolveEvp},
                 [](RunConfig& c, std::string_view v) -> Error {
                   const std::string s = unquote(v);
                   if (s == "true" || s == "yes" || s == "1") {
                     c.second = true;
                   } else if (s == "false" || s == "no" || s == "0") {
                     c.second = false;
                   } else {
                     return "second: expected true or false, got '" + s + "'";
                   }
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::string(c.second ? "true" : "false"); }});
    t.push_back(string_key("matrix_out", {Experiment::kSolveEvp}, &RunConfig::matrix_out));
    t.push_back(string_key("eigvec_out", {Experiment::kSolveEvp}, &RunConfig::eigvec_out));

    t.push_back(string_key("out", kAllButSolve, &RunConfig::out));
    t.push_back(string_key("svg", kPlotting, &RunConfig::svg));
    return t;
  }();
  return table;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : key_table())
    if (k.name == name) return &k;
  return nullptr;
}

bool accepts(const KeySpec& k, Experiment e) {
  return std::find(k.experiments.begin(), k.experiments.end(), e) != k.experiments.end();
}

std::string at_line(const std::map<std::string, std::size_t>& lines, const std::string& key) {
  const auto it = lines.find(key);
  return it == lines.end() ? std::string() : "line " + std::to_string(it->second) + ": ";
}

void cross_check(const RunConfig& c, const std::map<std::string, std::size_t>& lines,
                 std::vector<std::string>& errors) {
  const auto add = [&](const std::string& key, const std::string& msg) { errors.push_back(at_line(lines, key) + msg); };
  const bool solving = std::find(kSolving.begin(), kSolving.end(), c.experiment) != kSolving.end();
  const bool needs_model = solving && !(c.experiment == Experiment::kChecks && c.check == "combinatorics");
  if (needs_model && c.model == "custom" && c.custom_file.empty())
    add("model", "model = custom needs custom_file");
  switch (c.experiment) {
    case Experiment::kGlStudy:
      if (c.n_min > c.n_max) add("n_min", "n_min must not exceed n_max");
      if (c.n_max >= c.n_star) add("n_max", "n_max must be < n_star = " + std::to_string(c.n_star));
      if (c.fit_min > c.fit_max) add("fit_min", "fit_min must not exceed fit_max");
      break;
    case Experiment::kQmcStudy:
    case Experiment::kMcStudy:
      break;
    case Experiment::kTruncStudy:
      if (c.s_list.empty()) add("s_list", "s_list must not be empty");
      else if (c.s_ref <= c.s_list.back())
        add("s_ref", "s_ref must exceed max(s_list) = " + std::to_string(c.s_list.back()));
      break;
    case Experiment::kChecks:
      if (c.check == "gevrey" && c.quad_n < 2 * c.K)
        add("quad_n", "quad_n must be >= 2K = " + std::to_string(2 * c.K));
      if (c.check == "combinatorics" && c.n_max < 2) add("n_max", "n_max must be >= 2 for checks combinatorics");
      break;
    case Experiment::kSolveEvp:
      break;
    case Experiment::kCbc:
      if (!c.delta) add("delta", "cbc needs an explicit delta");
      break;
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : ValidationError([&] {
        std::string all = "invalid configuration:";
        for (const auto& m : messages) all += "\n  " + m;
        return all;
      }()),
      messages_(std::move(messages)) {}

std::string_view experiment_name(Experiment e) {
  for (const auto& [k, v] : kNames)
    if (k == e) return v;
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [k, v] : kNames)
    if (v == name) return k;
  throw ValidationError("unknown experiment '" + std::string(name) + "'");
}

RunConfig default_config(Experiment e) {
  RunConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::kGlStudy:
      c.model = "gl-analytic";
      c.m = 64;
      break;
    case Experiment::kQmcStudy:
      c.model = "qmc-analytic";
      c.m = 32;
      break;
    case Experiment::kMcStudy:
      c.model = "qmc-analytic";
      c.m = 32;
      c.mc_replicates = 32;
      break;
    case Experiment::kTruncStudy:
      c.model = "qmc-analytic";
      c.m = 32;
      c.s_list = {1, 2, 3, 4, 6, 8};
      c.shifts = 4;
      break;
    case Experiment::kChecks:
      c.model = "gl-analytic";
      c.m = 32;
      c.n_max = 60;
      break;
    case Experiment::kSolveEvp:
      c.model = "constant";
      c.m = 64;
      break;
    case Experiment::kCbc:
      c.delta = 1.0;
      break;
  }
  return c;
}

std::vector<RunConfig> parse_config_set(std::string_view text) {
  std::vector<RunConfig> out;
  std::vector<std::string> errors;
  std::map<std::string, std::size_t> lines;
  std::optional<std::size_t> section_line;
  bool section_ok = false;

  const auto finish = [&] {
    if (section_line && section_ok) {
      cross_check(out.back(), lines, errors);
    }
  };

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";

    // Strip comments outside quotes.
    std::string line;
    bool in_quote = false;
    for (char ch : raw) {
      if (ch == '"') in_quote = !in_quote;
      if (!in_quote && (ch == '#' || ch == ';')) break;
      line.push_back(ch);
    }
    const std::string_view body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      finish();
      lines.clear();
      section_line = lineno;
      section_ok = false;
      if (body.back() != ']') {
        errors.push_back(where + "malformed section header '" + std::string(body) + "'");
        continue;
      }
      const std::string name(trim(body.substr(1, body.size() - 2)));
      try {
        out.push_back(default_config(parse_experiment(name)));
        section_ok = true;
      } catch (const ValidationError&) {
        errors.push_back(where + "unknown experiment section [" + name + "]");
      }
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back(where + "expected 'key = value', got '" + std::string(body) + "'");
      continue;
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (!section_line) {
      errors.push_back(where + "key '" + key + "' appears before any [section]");
      continue;
    }
    if (!section_ok) continue;
    RunConfig& cfg = out.back();
    const KeySpec* spec = find_key(key);
    if (!spec || !accepts(*spec, cfg.experiment)) {
      errors.push_back(where + "unknown key '" + key + "' for [" + std::string(experiment_name(cfg.experiment)) + "]");
      continue;
    }
    if (const auto it = lines.find(key); it != lines.end()) {
      errors.push_back(where + "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) +
                       ", again on line " + std::to_string(lineno) + ")");
      continue;
    }
    lines[key] = lineno;
    if (auto e = spec->set(cfg, value)) errors.push_back(where + *e);
  }
  finish();
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return out;
}

RunConfig parse_config(std::string_view text) {
  auto all = parse_config_set(text);
  if (all.size() != 1)
    throw ConfigError({"expected exactly one [section], found " + std::to_string(all.size())});
  return std::move(all.front());
}

RunConfig load_config(const std::filesystem::path& path, Experiment e) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::vector<RunConfig> all;
  try {
    all = parse_config_set(ss.str());
  } catch (const ConfigError& err) {
    std::vector<std::string> msgs;
    for (const auto& m : err.messages()) msgs.push_back(path.string() + ": " + m);
    throw ConfigError(std::move(msgs));
  }
  for (auto& c : all)
    if (c.experiment == e) return c;
  throw ValidationError(path.string() + ": no [" + std::string(experiment_name(e)) + "] section");
}

void apply_override(RunConfig& cfg, std::string_view key, std::string_view value) {
  const KeySpec* spec = find_key(key);
  if (!spec || !accepts(*spec, cfg.experiment))
    throw ConfigError({"unknown key '" + std::string(key) + "' for " + std::string(experiment_name(cfg.experiment))});
  if (auto e = spec->set(cfg, value)) throw ConfigError({*e});
}

void validate(const RunConfig& cfg) {
  std::vector<std::string> errors;
  cross_check(cfg, {}, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

std::vector<std::string> keys_for(Experiment e) {
  std::vector<std::string> keys;
  for (const auto& k : key_table())
    if (accepts(k, e)) keys.emplace_back(k.name);
  return keys;
}

std::string serialize(const RunConfig& cfg) {
  std::string s = "[" + std::string(experiment_name(cfg.experiment)) + "]\n";
  for (const auto& k : key_table())
    if (accepts(k, cfg.experiment)) s += std::string(k.name) + " = " + k.get(cfg) + "\n";
  return s;
}

}  // namespace gevrey::harness

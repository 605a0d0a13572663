#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "afpk/errors.hpp"

namespace afpk::tool {
namespace {

struct KindInfo {
  Kind kind;
  const char* name;
  std::vector<std::string> keys;
};

const std::vector<KindInfo>& kinds() {
  static const std::vector<KindInfo> k = {
      {Kind::KernelTable, "kernel-table", {"points", "route", "tolerance", "extent"}},
      {Kind::VerifyBounds, "verify-bounds", {"points", "dilations", "convention", "drift_limit"}},
      {Kind::MassScan, "mass-scan", {"times", "tolerance", "drift_limit"}},
      {Kind::Solve, "solve", {"case", "tolerance", "write_fields"}},
      {Kind::Residual, "residual", {"case", "tolerance"}},
      {Kind::McCompare, "mc-compare", {"paths", "tolerance", "dump_samples", "bins"}},
      {Kind::Norms, "norms", {"gammas", "p", "q", "field"}},
      {Kind::TraceProbe, "trace-probe", {"gamma", "dilations", "drift_limit"}},
      {Kind::BmoProbe, "bmo-probe", {"levels", "samples", "drift_limit"}},
      {Kind::RegularityProbe, "regularity-probe", {"forcings", "dilations", "p", "q", "drift_limit"}},
  };
  return k;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x)) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t positive_size(const std::string& key, const std::string& v) {
  const long long n = to_int(key, v);
  if (n < 1) throw ConfigError(key + ": must be >= 1");
  return static_cast<std::size_t>(n);
}

}  // namespace

const char* kind_name(Kind k) {
  for (const auto& i : kinds())
    if (i.kind == k) return i.name;
  return "?";
}

const std::vector<std::string>& kind_keys(Kind k) {
  for (const auto& i : kinds())
    if (i.kind == k) return i.keys;
  throw ConfigError("unknown experiment kind");
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string format_shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OperatorSpec ExperimentConfig::spec() const {
  std::vector<Block> b;
  for (const auto& bc : blocks) b.push_back(Block{bc.dim, BernsteinSpec(bc.drift, bc.terms)});
  return OperatorSpec(std::move(b));
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  const double v = it == params.end() ? fallback : to_double("experiment." + key, it->second);
  used_[key] = format_shortest(v);
  return v;
}

std::size_t ExperimentConfig::param_size(const std::string& key, std::size_t fallback) const {
  const auto it = params.find(key);
  const std::size_t v = it == params.end() ? fallback : positive_size("experiment." + key, it->second);
  used_[key] = std::to_string(v);
  return v;
}

std::string ExperimentConfig::param_text(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  const std::string v = it == params.end() ? fallback : it->second;
  used_[key] = v;
  return v;
}

std::vector<double> ExperimentConfig::param_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = params.find(key);
  std::vector<double> v;
  if (it == params.end()) {
    v = fallback;
  } else {
    for (const auto& s : split(it->second, ',')) v.push_back(to_double("experiment." + key, s));
    if (v.empty()) throw ConfigError("experiment." + key + ": empty list");
  }
  std::string text;
  for (std::size_t i = 0; i < v.size(); ++i) text += (i ? ", " : "") + format_shortest(v[i]);
  used_[key] = text;
  return v;
}

std::string ExperimentConfig::effective() const {
  std::map<std::string, std::string> kv;
  kv["operator.ell"] = std::to_string(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = "operator.block" + std::to_string(i + 1) + ".";
    kv[p + "dim"] = std::to_string(blocks[i].dim);
    kv[p + "drift"] = format_shortest(blocks[i].drift);
    std::string terms;
    for (std::size_t j = 0; j < blocks[i].terms.size(); ++j)
      terms += (j ? ", " : "") + format_shortest(blocks[i].terms[j].coef) + ":" + format_shortest(blocks[i].terms[j].beta);
    kv[p + "terms"] = terms;
  }
  kv["time.alpha"] = format_shortest(alpha);
  kv["time.beta"] = format_shortest(beta);
  kv["time.T"] = format_shortest(T);
  kv["time.nt"] = std::to_string(nt);
  auto join_sizes = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, double>)
        s += format_shortest(v[i]);
      else
        s += std::to_string(v[i]);
    }
    return s.empty() ? std::string("default") : s;
  };
  kv["grid.size"] = join_sizes(grid_size);
  kv["grid.half_width"] = join_sizes(grid_half_width);
  kv["experiment.kind"] = kind_name(kind);
  for (const auto& [k, v] : params) kv["experiment." + k] = v;
  for (const auto& [k, v] : used_) kv["experiment." + k] = v;
  kv["output.directory"] = directory.string();
  kv["output.seed"] = std::to_string(seed);
  kv["output.threads"] = std::to_string(threads);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'section.key = value'");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key " + key);
  }

  ExperimentConfig c;
  std::set<std::string> consumed;
  auto take = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    consumed.insert(key);
    return &it->second;
  };

  const std::string* ell = take("operator.ell");
  if (!ell) throw ConfigError("operator.ell is required");
  const std::size_t nblocks = positive_size("operator.ell", *ell);
  for (std::size_t i = 0; i < nblocks; ++i) {
    const std::string p = "operator.block" + std::to_string(i + 1) + ".";
    BlockConfig b;
    if (const auto* v = take(p + "dim")) {
      const long long d = to_int(p + "dim", *v);
      if (d < 1 || d > 3) throw ConfigError(p + "dim: must be 1, 2 or 3");
      b.dim = static_cast<int>(d);
    }
    if (const auto* v = take(p + "drift")) b.drift = to_double(p + "drift", *v);
    if (const auto* v = take(p + "terms")) {
      for (const auto& term : split(*v, ',')) {
        const auto colon = term.find(':');
        if (colon == std::string::npos) throw ConfigError(p + "terms: expected coef:exponent pairs");
        b.terms.push_back({to_double(p + "terms", trim(term.substr(0, colon))),
                           to_double(p + "terms", trim(term.substr(colon + 1)))});
      }
    }
    c.blocks.push_back(b);
  }

  if (const auto* v = take("time.alpha")) c.alpha = to_double("time.alpha", *v);
  c.beta = c.alpha;
  if (const auto* v = take("time.beta")) c.beta = to_double("time.beta", *v);
  if (const auto* v = take("time.T")) c.T = to_double("time.T", *v);
  if (const auto* v = take("time.nt")) c.nt = positive_size("time.nt", *v);

  if (const auto* v = take("grid.size"))
    for (const auto& s : split(*v, ',')) c.grid_size.push_back(positive_size("grid.size", s));
  if (const auto* v = take("grid.half_width"))
    for (const auto& s : split(*v, ',')) c.grid_half_width.push_back(to_double("grid.half_width", s));

  const std::string* kind = take("experiment.kind");
  if (!kind) throw ConfigError("experiment.kind is required");
  const auto it = std::find_if(kinds().begin(), kinds().end(), [&](const KindInfo& k) { return *kind == k.name; });
  if (it == kinds().end()) throw ConfigError("experiment.kind: unknown kind '" + *kind + "'");
  c.kind = it->kind;
  for (const auto& key : it->keys)
    if (const auto* v = take("experiment." + key)) c.params[key] = *v;

  if (const auto* v = take("output.directory")) c.directory = *v;
  if (const auto* v = take("output.seed")) {
    const long long s = to_int("output.seed", *v);
    if (s < 0) throw ConfigError("output.seed: must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto* v = take("output.threads")) {
    const long long n = to_int("output.threads", *v);
    if (n < 0) throw ConfigError("output.threads: must be >= 0");
    c.threads = static_cast<unsigned>(n);
  }

  for (const auto& [k, v] : kv)
    if (!consumed.count(k)) throw ConfigError("unknown key " + k);

  // semantic checks that need no computation
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("time.alpha must lie in (0,1]");
  if (!(c.T > 0.0)) throw ConfigError("time.T must be positive");
  try {
    const OperatorSpec s = c.spec();
    const std::size_t axes = static_cast<std::size_t>(s.total_dim());
    if (!c.grid_size.empty() && c.grid_size.size() != 1 && c.grid_size.size() != axes)
      throw ConfigError("grid.size: give one size or one per axis");
    if (!c.grid_half_width.empty() && c.grid_half_width.size() != 1 && c.grid_half_width.size() != axes)
      throw ConfigError("grid.half_width: give one value or one per axis");
    for (std::size_t n : c.grid_size)
      if (!is_power_of_two(n) || n < 2) throw ConfigError("grid.size: sizes must be powers of two");
    for (double h : c.grid_half_width)
      if (!(h > 0.0)) throw ConfigError("grid.half_width must be positive");
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("operator: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace afpk::tool

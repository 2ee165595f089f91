#include "gorma/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gorma/optimizer.hpp"
#include "gorma/simulator.hpp"

namespace gorma {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry, std::less<>> entries;
};

constexpr std::string_view kSections[] = {"scenario", "system", "group.1", "group.2", "sweep"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Reader {
 public:
  Reader(std::string_view text, std::string source) : source_(std::move(source)) { parse(text); }

  [[noreturn]] void fail(int line, const std::string& field, const std::string& message) const {
    throw ConfigError(source_, line, field, message);
  }

  const Section* section(std::string_view name) const {
    auto it = sections_.find(std::string(name));
    return it == sections_.end() ? nullptr : &it->second;
  }

  void check_keys(std::string_view name, std::initializer_list<std::string_view> allowed) const {
    const Section* s = section(name);
    if (!s) return;
    for (const auto& [key, entry] : s->entries) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(entry.line, std::string(name) + "." + key, "unknown key");
      }
    }
  }

  const Entry* find(std::string_view sec, std::string_view key) const {
    const Section* s = section(sec);
    if (!s) return nullptr;
    auto it = s->entries.find(key);
    return it == s->entries.end() ? nullptr : &it->second;
  }

  double real(std::string_view sec, std::string_view key, double fallback) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    return parse_real(*e, field(sec, key));
  }

  std::int64_t integer(std::string_view sec, std::string_view key, std::int64_t fallback) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    return parse_integer(*e, field(sec, key));
  }

  bool boolean(std::string_view sec, std::string_view key, bool fallback) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(e->line, field(sec, key), "expected true or false, got '" + e->value + "'");
  }

  double parse_real(const Entry& e, const std::string& name) const { return parse_real(e.value, e.line, name); }

  double parse_real(std::string_view text, int line, const std::string& name) const {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
      fail(line, name, "expected a finite number, got '" + std::string(text) + "'");
    }
    return v;
  }

  std::int64_t parse_integer(const Entry& e, const std::string& name) const {
    std::int64_t v = 0;
    const auto* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail(e.line, name, "expected an integer, got '" + e.value + "'");
    return v;
  }

  static std::string field(std::string_view sec, std::string_view key) {
    return std::string(sec) + "." + std::string(key);
  }

  const std::string& source() const { return source_; }

 private:
  void parse(std::string_view text) {
    Section* current = nullptr;
    std::string current_name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
      ++line_no;

      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string_view line = trim(raw);
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "", "unterminated section header");
        const std::string name(trim(line.substr(1, line.size() - 2)));
        if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
          fail(line_no, name, "unknown section");
        }
        if (sections_.count(name)) fail(line_no, name, "duplicate section");
        current = &sections_[name];
        current->line = line_no;
        current_name = name;
        continue;
      }

      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "", "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) fail(line_no, "", "missing key before '='");
      if (!current) fail(line_no, key, "key outside of any section");
      if (value.empty()) fail(line_no, current_name + "." + key, "missing value");
      if (!current->entries.emplace(key, Entry{value, line_no}).second) {
        fail(line_no, current_name + "." + key, "duplicate key");
      }
    }
  }

  std::string source_;
  std::map<std::string, Section> sections_;
};

int line_of(const Reader& r, std::string_view sec, std::string_view key) {
  if (const Entry* e = r.find(sec, key)) return e->line;
  if (const Section* s = r.section(sec)) return s->line;
  return 0;
}

bool is_integral(double v) { return std::floor(v) == v; }

std::int64_t as_count(double v, const char* what) {
  if (!is_integral(v) || v < 1) throw std::invalid_argument(std::string(what) + " must be a positive integer");
  return static_cast<std::int64_t>(v);
}

SweepSpec read_sweep(const Reader& r) {
  SweepSpec sweep;
  const Section* s = r.section("sweep");
  sweep.line = s->line;
  const Entry* var = r.find("sweep", "variable");
  if (!var) r.fail(s->line, "sweep.variable", "missing sweep variable");
  sweep.variable = var->value;
  sweep.line = var->line;

  const Entry* values = r.find("sweep", "values");
  const Entry* from = r.find("sweep", "from");
  if (values && from) r.fail(from->line, "sweep.from", "give either values or from/to, not both");
  if (values) {
    std::string text = values->value;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::string token;
    while (in >> token) sweep.values.push_back(r.parse_real(token, values->line, "sweep.values"));
  } else if (from) {
    const Entry* to = r.find("sweep", "to");
    if (!to) r.fail(from->line, "sweep.to", "from requires to");
    const double lo = r.parse_real(*from, "sweep.from");
    const double hi = r.parse_real(*to, "sweep.to");
    const double step = r.real("sweep", "step", 1.0);
    if (!(step > 0)) r.fail(line_of(r, "sweep", "step"), "sweep.step", "step must be > 0");
    for (std::int64_t i = 0;; ++i) {
      const double v = lo + static_cast<double>(i) * step;
      if (v > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
      sweep.values.push_back(v);
    }
  } else {
    r.fail(s->line, "sweep.values", "missing values or from/to");
  }
  if (sweep.values.empty()) r.fail(sweep.line, "sweep.values", "empty sweep range");
  return sweep;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + (field.empty() ? "" : field + ": ") + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::OneHopSweep: return "one-hop-sweep";
    case Mode::TwoGroupSweep: return "two-group-sweep";
    case Mode::Optimize: return "optimize";
    case Mode::Capacity: return "capacity";
    case Mode::Energy: return "energy";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::OneHopSweep, Mode::TwoGroupSweep, Mode::Optimize, Mode::Capacity, Mode::Energy}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::vector<std::string_view> sweep_variables(Mode mode, bool has_groups) {
  switch (mode) {
    case Mode::OneHopSweep: return {"copies", "n_nodes", "channel_error"};
    case Mode::Energy: return {"copies"};
    case Mode::TwoGroupSweep: return {"retrans", "retrans_1", "retrans_2", "m_1", "m_2"};
    case Mode::Optimize:
      if (has_groups) return {"m_1", "m_2", "q_1", "q_2"};
      return {"n_nodes", "channel_error"};
    case Mode::Capacity: return {"q_1"};
  }
  return {};
}

SweepPoint point_at(const ScenarioConfig& config, double value) {
  SweepPoint p{config.params, config.copies, config.groups, config.retrans};
  if (!config.sweep) return p;
  const std::string& var = config.sweep->variable;

  auto group_index = [&](char suffix) -> std::size_t {
    const std::size_t k = static_cast<std::size_t>(suffix - '1');
    if (k >= p.groups.size()) throw std::invalid_argument("sweep variable refers to a missing group");
    return k;
  };

  if (var == "copies") {
    p.copies = as_count(value, "copies");
  } else if (var == "n_nodes") {
    p.params = p.params.with_n_nodes(as_count(value, "n_nodes"));
  } else if (var == "channel_error") {
    p.params = p.params.with_channel_error(value);
  } else if (var == "retrans") {
    for (auto& r : p.retrans) r = as_count(value, "retrans");
  } else if (var == "retrans_1" || var == "retrans_2") {
    p.retrans[group_index(var.back())] = as_count(value, "retrans");
  } else if (var == "m_1" || var == "m_2") {
    const std::size_t k = group_index(var.back());
    p.groups[k] = p.groups[k].with_m(as_count(value, "m"));
  } else if (var == "q_1" || var == "q_2") {
    const std::size_t k = group_index(var.back());
    p.groups[k] = p.groups[k].with_q_min(value);
  } else {
    throw std::invalid_argument("unknown sweep variable '" + var + "'");
  }
  return p;
}

void validate(const ScenarioConfig& config) {
  auto fail = [&](int line, const std::string& field, const std::string& msg) {
    throw ConfigError(config.source, line, field, msg);
  };
  if (!config.sweep) fail(0, "sweep", "a [sweep] section is required for mode " + std::string(to_string(config.mode)));
  const SweepSpec& sweep = *config.sweep;
  if (sweep.values.empty()) fail(sweep.line, "sweep.values", "empty sweep range");

  const bool has_groups = !config.groups.empty();
  const auto allowed = sweep_variables(config.mode, has_groups);
  if (std::find(allowed.begin(), allowed.end(), sweep.variable) == allowed.end()) {
    std::string list;
    for (auto v : allowed) list += (list.empty() ? "" : ", ") + std::string(v);
    fail(sweep.line, "sweep.variable",
         "'" + sweep.variable + "' is not valid for mode " + std::string(to_string(config.mode)) + " (use " + list + ")");
  }

  switch (config.mode) {
    case Mode::TwoGroupSweep:
      if (!has_groups) fail(0, "group.1", "mode two-group-sweep needs at least one [group.N] section");
      break;
    case Mode::Capacity:
      if (config.groups.size() != 2) fail(0, "group.2", "mode capacity needs [group.1] and [group.2]");
      break;
    case Mode::Optimize:
      if (has_groups && config.groups.size() != 2) fail(0, "group.2", "two-group optimization needs two groups");
      break;
    default:
      break;
  }

  for (double v : sweep.values) {
    try {
      const SweepPoint p = point_at(config, v);
      switch (config.mode) {
        case Mode::OneHopSweep:
        case Mode::Energy:
          if (p.copies > p.params.max_copies()) throw std::invalid_argument("copies exceeds floor(period / packet_time)");
          break;
        case Mode::TwoGroupSweep: {
          std::vector<GroupLoad> loads;
          for (std::size_t k = 0; k < p.groups.size(); ++k) {
            if (p.retrans[k] > retrans_cap(p.params, p.groups[k])) {
              throw std::invalid_argument("retrans exceeds floor(t / packet_time)");
            }
            loads.push_back({p.groups[k], p.retrans[k]});
          }
          if (config.simulate && !config.horizon_ms && !common_horizon(loads)) {
            throw std::invalid_argument("group periods have no small common multiple; set scenario.horizon_ms");
          }
          break;
        }
        case Mode::Optimize:
          if (has_groups) (void)compute_bounds(p.params, p.groups);
          break;
        case Mode::Capacity:
          break;
      }
    } catch (const std::invalid_argument& e) {
      std::ostringstream msg;
      msg << "value " << v << ": " << e.what();
      fail(sweep.line, "sweep." + sweep.variable, msg.str());
    }
  }
}

ScenarioConfig parse_config(std::string_view text, std::string source) {
  Reader r(text, source);
  r.check_keys("scenario", {"mode", "periods", "seed", "output", "threads", "simulate", "sibling_collisions",
                            "horizon_ms", "m_ceiling"});
  r.check_keys("system", {"n_nodes", "period_ms", "packet_time_ms", "carrier_sense_ms", "channel_error",
                          "energy_per_copy_j", "copies", "bandwidth_mbps"});
  r.check_keys("group.1", {"m", "q_min", "t_ms", "retrans"});
  r.check_keys("group.2", {"m", "q_min", "t_ms", "retrans"});
  r.check_keys("sweep", {"variable", "values", "from", "to", "step"});

  ScenarioConfig c;
  c.source = source;

  const Entry* mode = r.find("scenario", "mode");
  if (!mode) r.fail(line_of(r, "scenario", "mode"), "scenario.mode", "missing mode");
  const auto parsed = parse_mode(mode->value);
  if (!parsed) r.fail(mode->line, "scenario.mode", "unknown mode '" + mode->value + "'");
  c.mode = *parsed;

  auto check = [&](bool ok, std::string_view sec, std::string_view key, const std::string& msg) {
    if (!ok) r.fail(line_of(r, sec, key), Reader::field(sec, key), msg);
  };

  c.periods = r.integer("scenario", "periods", c.periods);
  check(c.periods >= 1, "scenario", "periods", "must be >= 1");
  const std::int64_t seed = r.integer("scenario", "seed", static_cast<std::int64_t>(c.seed));
  check(seed >= 0, "scenario", "seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  if (const Entry* out = r.find("scenario", "output")) c.output_path = out->value;
  const std::int64_t threads = r.integer("scenario", "threads", 0);
  check(threads >= 0, "scenario", "threads", "must be >= 0");
  c.threads = static_cast<unsigned>(threads);
  c.simulate = r.boolean("scenario", "simulate", c.simulate);
  c.sibling_collisions = r.boolean("scenario", "sibling_collisions", c.sibling_collisions);
  if (r.find("scenario", "horizon_ms")) {
    c.horizon_ms = r.real("scenario", "horizon_ms", 0.0);
    check(*c.horizon_ms > 0, "scenario", "horizon_ms", "must be > 0");
  }
  c.m_ceiling = r.integer("scenario", "m_ceiling", c.m_ceiling);
  check(c.m_ceiling >= 1, "scenario", "m_ceiling", "must be >= 1");

  const std::int64_t n = r.integer("system", "n_nodes", c.params.n_nodes());
  const double period = r.real("system", "period_ms", c.params.period_ms());
  const double tp = r.real("system", "packet_time_ms", c.params.packet_time_ms());
  const double tau = r.real("system", "carrier_sense_ms", 0.0);
  const double err = r.real("system", "channel_error", 0.0);
  const double energy = r.real("system", "energy_per_copy_j", kDefaultEnergyPerCopyJ);
  check(n >= 1, "system", "n_nodes", "must be >= 1");
  check(period > 0, "system", "period_ms", "must be > 0");
  check(tp > 0, "system", "packet_time_ms", "must be > 0");
  check(tp < period, "system", "packet_time_ms", "must be smaller than period_ms");
  check(tau >= 0, "system", "carrier_sense_ms", "must be >= 0");
  check(err >= 0 && err <= 1, "system", "channel_error", "must lie in [0, 1]");
  check(energy > 0, "system", "energy_per_copy_j", "must be > 0");
  if (r.find("system", "bandwidth_mbps")) {
    check(r.real("system", "bandwidth_mbps", 0.0) > 0, "system", "bandwidth_mbps", "must be > 0");
  }
  c.params = SystemParams(n, period, tp, tau, err, energy);
  c.copies = r.integer("system", "copies", 1);
  check(c.copies >= 1, "system", "copies", "must be >= 1");
  check(c.copies <= c.params.max_copies(), "system", "copies", "exceeds floor(period_ms / packet_time_ms)");

  if (r.section("group.2") && !r.section("group.1")) r.fail(line_of(r, "group.2", "m"), "group.2", "group.2 without group.1");
  for (std::string_view sec : {std::string_view("group.1"), std::string_view("group.2")}) {
    if (!r.section(sec)) continue;
    for (std::string_view key : {"m", "q_min", "t_ms"}) {
      check(r.find(sec, key) != nullptr, sec, key, "missing");
    }
    const std::int64_t m = r.integer(sec, "m", 1);
    const double q = r.real(sec, "q_min", 0.5);
    const double t = r.real(sec, "t_ms", 1.0);
    const std::int64_t retrans = r.integer(sec, "retrans", 1);
    check(m >= 1, sec, "m", "must be >= 1");
    check(q > 0 && q < 1, sec, "q_min", "must lie in (0, 1)");
    check(t > 0, sec, "t_ms", "must be > 0");
    check(retrans >= 1, sec, "retrans", "must be >= 1");
    c.groups.emplace_back(m, q, t);
    c.retrans.push_back(retrans);
  }

  if (r.section("sweep")) c.sweep = read_sweep(r);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace gorma

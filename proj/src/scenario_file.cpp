#include "pkco/scenario_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pkco {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario",
       {"name", "cycle_period", "num_cycles", "seed", "mode", "guard_window",
        "master_in_collision_domain", "nominal_frequency", "tolerance", "window"}},
      {"node", {"initial_offset", "offset_noise_variance", "skew_ppm"}},
      {"kappa", {"mean", "variance", "floor"}},
      {"eta", {"mean", "variance", "floor"}},
      {"controller", {"alpha", "slot_reference", "feedforward", "estimator_kappa"}},
  };
  return keys;
}

struct SectionKind {
  std::string kind;  // scenario, node, kappa, eta, controller
  std::optional<std::uint32_t> node_id;
};

std::optional<SectionKind> classify(std::string_view name) {
  if (name == "scenario") return SectionKind{"scenario", std::nullopt};
  if (!name.starts_with("node.")) return std::nullopt;
  std::string_view rest = name.substr(5);
  const auto dot = rest.find('.');
  const std::string_view id_text = rest.substr(0, dot);
  std::uint32_t id = 0;
  const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
  if (ec != std::errc() || ptr != id_text.data() + id_text.size() || id_text.empty()) {
    return std::nullopt;
  }
  if (dot == std::string_view::npos) return SectionKind{"node", id};
  const std::string_view sub = rest.substr(dot + 1);
  if (sub == "kappa" || sub == "eta" || sub == "controller") {
    return SectionKind{std::string(sub), id};
  }
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field,
                         const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) +
                         ": " + (field.empty() ? std::string() : field + ": ") + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

const ScenarioFile::Entry* ScenarioFile::Section::find(std::string_view key) const {
  for (const auto& [k, e] : entries) {
    if (k == key) return &e;
  }
  return nullptr;
}

ScenarioFile ScenarioFile::parse(std::string_view text, std::string source) {
  ScenarioFile file;
  file.source_ = std::move(source);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty() || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(file.source_, line_no, "", "unterminated section header");
      }
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!classify(name)) {
        throw ConfigError(file.source_, line_no, name, "unknown section");
      }
      if (file.find_section(name)) {
        throw ConfigError(file.source_, line_no, name, "duplicate section");
      }
      file.sections_.push_back(Section{name, line_no, {}});
      current = &file.sections_.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(file.source_, line_no, "", "expected 'key = value'");
    }
    if (current == nullptr) {
      throw ConfigError(file.source_, line_no, "", "key outside of any section");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    const std::string field = current->name + "." + key;
    const auto kind = classify(current->name);
    if (!known_keys().at(kind->kind).contains(key)) {
      throw ConfigError(file.source_, line_no, field, "unknown key");
    }
    if (current->find(key)) {
      throw ConfigError(file.source_, line_no, field, "duplicate key");
    }
    if (value.empty()) throw ConfigError(file.source_, line_no, field, "empty value");
    current->entries.emplace_back(key, Entry{value, line_no});
  }
  return file;
}

ScenarioFile ScenarioFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

const ScenarioFile::Section* ScenarioFile::find_section(std::string_view name) const {
  for (const Section& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<std::uint32_t> ScenarioFile::node_ids() const {
  std::set<std::uint32_t> ids;
  for (const Section& s : sections_) {
    if (const auto kind = classify(s.name); kind && kind->node_id) ids.insert(*kind->node_id);
  }
  return {ids.begin(), ids.end()};
}

void ScenarioFile::set(const std::string& section, const std::string& key,
                       std::string value) {
  const auto kind = classify(section);
  if (!kind || !known_keys().at(kind->kind).contains(key)) {
    throw ConfigError(source_, 0, section + "." + key, "unknown setting");
  }
  auto it = std::find_if(sections_.begin(), sections_.end(),
                         [&](const Section& s) { return s.name == section; });
  if (it == sections_.end()) {
    sections_.push_back(Section{section, 0, {}});
    it = std::prev(sections_.end());
  }
  for (auto& [k, e] : it->entries) {
    if (k == key) {
      e.value = std::move(value);
      return;
    }
  }
  it->entries.emplace_back(key, Entry{std::move(value), 0});
}

void ScenarioFile::apply_override(const std::string& param, const std::string& value) {
  if (param == "seed") {
    set("scenario", "seed", value);
    return;
  }
  std::string sub;
  std::string key;
  if (param == "alpha") {
    sub = "controller";
    key = "alpha";
  } else if (param == "t_d") {
    sub = "controller";
    key = "slot_reference";
  } else if (param == "kappa_mean") {
    sub = "kappa";
    key = "mean";
  } else if (param == "eta_mean") {
    sub = "eta";
    key = "mean";
  } else {
    throw ConfigError(source_, 0, param,
                      "unknown sweep parameter (alpha, kappa_mean, eta_mean, t_d, seed)");
  }
  for (const std::uint32_t id : node_ids()) {
    set("node." + std::to_string(id) + "." + sub, key, value);
  }
}

void ScenarioFile::fail_at_field(const std::string& field,
                                 const std::string& message) const {
  int line = 0;
  const auto dot = field.rfind('.');
  if (const Section* whole = find_section(field)) {
    line = whole->line;
  } else if (dot != std::string::npos) {
    if (const Section* s = find_section(field.substr(0, dot))) {
      const Entry* e = s->find(field.substr(dot + 1));
      line = e ? e->line : s->line;
    }
  }
  throw ConfigError(source_, line, field, message);
}

namespace {

// Typed access to one section with field-precise errors.
class Reader {
 public:
  Reader(const ScenarioFile& file, const ScenarioFile::Section* section,
         std::string name)
      : file_(file), section_(section), name_(std::move(name)) {}

  const ScenarioFile::Entry* entry(std::string_view key) const {
    return section_ ? section_->find(key) : nullptr;
  }

  double number(std::string_view key, double fallback) const {
    const auto* e = entry(key);
    if (!e) return fallback;
    std::string_view text = e->value;
    if (text.starts_with('+')) text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(key, *e, "expected a decimal number, got '" + e->value + "'");
    }
    return v;
  }

  std::uint64_t unsigned_int(std::string_view key, std::uint64_t fallback) const {
    const auto* e = entry(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
      fail(key, *e, "expected an unsigned integer, got '" + e->value + "'");
    }
    return v;
  }

  bool boolean(std::string_view key, bool fallback) const {
    const auto* e = entry(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(key, *e, "expected true or false, got '" + e->value + "'");
  }

  std::string text(std::string_view key, std::string fallback) const {
    const auto* e = entry(key);
    return e ? e->value : fallback;
  }

  [[noreturn]] void fail(std::string_view key, const ScenarioFile::Entry& e,
                         const std::string& message) const {
    throw ConfigError(file_.source(), e.line, name_ + "." + std::string(key), message);
  }

 private:
  const ScenarioFile& file_;
  const ScenarioFile::Section* section_;
  std::string name_;
};

}  // namespace

ScenarioConfig ScenarioFile::build(bool strict) const {
  const Reader sc(*this, find_section("scenario"), "scenario");
  ScenarioConfig s;
  s.name = sc.text("name", "scenario");
  s.cycle_period = sc.number("cycle_period", 1.0);
  s.num_cycles = sc.unsigned_int("num_cycles", 100);
  s.seed = sc.unsigned_int("seed", 1);
  s.guard_window = sc.number("guard_window", 1e-3);
  s.master_in_collision_domain = sc.boolean("master_in_collision_domain", false);
  const std::string mode = sc.text("mode", "continuous");
  if (mode == "continuous") {
    s.mode = Representation::continuous;
  } else if (mode == "ticks") {
    s.mode = Representation::ticks;
  } else {
    sc.fail("mode", *sc.entry("mode"), "expected \"continuous\" or \"ticks\"");
  }
  const double f0 = sc.number("nominal_frequency", 32768.0);
  if (!(f0 > 0.0)) fail_at_field("scenario.nominal_frequency", "must be > 0");
  if (!(s.cycle_period > 0.0)) fail_at_field("scenario.cycle_period", "must be > 0");
  const auto cycle_ticks = static_cast<std::int64_t>(std::llround(s.cycle_period * f0));
  if (s.mode == Representation::ticks &&
      std::abs(static_cast<double>(cycle_ticks) / f0 - s.cycle_period) >
          1e-12 * s.cycle_period) {
    fail_at_field("scenario.cycle_period",
                  "tick mode needs a whole number of ticks per cycle");
  }

  for (const std::uint32_t id : node_ids()) {
    const std::string base = "node." + std::to_string(id);
    const Reader node(*this, find_section(base), base);
    const Reader kappa(*this, find_section(base + ".kappa"), base + ".kappa");
    const Reader eta(*this, find_section(base + ".eta"), base + ".eta");
    const Reader ctl(*this, find_section(base + ".controller"), base + ".controller");

    NodeConfig n;
    n.node_id = id;
    n.clock = ClockParams::from_frequency(f0, std::max<std::int64_t>(cycle_ticks, 1));
    n.clock.threshold = s.cycle_period;
    n.clock.offset_noise_variance = node.number("offset_noise_variance", 0.0);
    n.clock.skew_ppm = node.number("skew_ppm", 0.0);
    n.initial_offset = node.number("initial_offset", 0.0);
    n.kappa = DelayModel{kappa.number("mean", 0.0), kappa.number("variance", 0.0),
                         kappa.number("floor", 0.0)};
    n.eta = DelayModel{eta.number("mean", 0.0), eta.number("variance", 0.0),
                       eta.number("floor", 0.0)};
    n.controller.alpha = ctl.number("alpha", 0.5);
    n.controller.slot_reference = ctl.number("slot_reference", 0.0);
    n.controller.estimator_kappa = ctl.number("estimator_kappa", n.kappa.mean);
    const std::string ff = ctl.text("feedforward", "off");
    if (ff == "off") {
      n.controller.feedforward_enabled = false;
    } else if (ff == "auto") {
      n.controller.feedforward_enabled = true;
      n.controller.feedforward =
          feedforward_term(n.controller.alpha, n.kappa.mean, n.eta.mean);
    } else {
      n.controller.feedforward_enabled = true;
      n.controller.feedforward_fixed = true;
      n.controller.feedforward = ctl.number("feedforward", 0.0);
    }
    if (strict && !is_stable_gain(n.controller.alpha)) {
      fail_at_field(base + ".controller.alpha",
                    "gain outside (0, 2) rejected in strict mode");
    }
    s.nodes.push_back(n);
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon == std::string::npos) throw ConfigError(source_, 0, "", what);
    fail_at_field(what.substr(0, colon), what.substr(colon + 2));
  }
  return s;
}

AnalysisSettings ScenarioFile::analysis_settings() const {
  const Reader sc(*this, find_section("scenario"), "scenario");
  AnalysisSettings a;
  if (sc.entry("tolerance")) {
    a.tolerance = sc.number("tolerance", 0.0);
    if (!(*a.tolerance > 0.0)) fail_at_field("scenario.tolerance", "must be > 0");
  }
  a.window = static_cast<std::size_t>(sc.unsigned_int("window", 200));
  if (a.window == 0) fail_at_field("scenario.window", "must be >= 1");
  return a;
}

std::string ScenarioFile::to_text() const {
  std::ostringstream out;
  bool first = true;
  for (const Section& s : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << s.name << "]\n";
    for (const auto& [k, e] : s.entries) out << k << " = " << e.value << '\n';
  }
  return out.str();
}

}  // namespace pkco

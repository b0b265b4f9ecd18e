#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pkco/netsim.hpp"

namespace pkco {

/// Configuration problem tied to a file position when one is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field,
              const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }  ///< 0 when not tied to a line
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

/// Analysis parameters carried in the [scenario] section.
struct AnalysisSettings {
  std::optional<Seconds> tolerance;  ///< empty: per-node default
  std::size_t window = 200;
};

/**
 * Scenario description in sectioned key = value form:
 *
 *   [scenario]            name, cycle_period, num_cycles, seed, mode,
 *                         guard_window, master_in_collision_domain,
 *                         nominal_frequency, tolerance, window
 *   [node.N]              initial_offset, offset_noise_variance, skew_ppm
 *   [node.N.kappa]        mean, variance, floor
 *   [node.N.eta]          mean, variance, floor
 *   [node.N.controller]   alpha, slot_reference, feedforward, estimator_kappa
 *
 * `feedforward` is `off`, `auto` (alpha * kappa_mean + eta_mean) or a number
 * of seconds. Values are kept as written so the file can be re-emitted
 * verbatim for reproduction.
 */
class ScenarioFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };
  struct Section {
    std::string name;
    int line = 0;
    std::vector<std::pair<std::string, Entry>> entries;

    const Entry* find(std::string_view key) const;
  };

  static ScenarioFile parse(std::string_view text, std::string source = "<memory>");
  static ScenarioFile load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  const std::vector<Section>& sections() const { return sections_; }

  /// Node ids in ascending order.
  std::vector<std::uint32_t> node_ids() const;

  /// Sets (or adds) a key; the section is created when missing.
  void set(const std::string& section, const std::string& key, std::string value);

  /// Sweep parameter override: alpha, kappa_mean, eta_mean, t_d or seed.
  /// Applies to every node. Throws ConfigError for an unknown parameter.
  void apply_override(const std::string& param, const std::string& value);

  /// Validated scenario. With `strict`, gains outside (0, 2) are errors.
  ScenarioConfig build(bool strict = false) const;

  AnalysisSettings analysis_settings() const;

  /// Canonical text; parse(to_text()) reproduces the same scenario.
  std::string to_text() const;

 private:
  const Section* find_section(std::string_view name) const;
  [[noreturn]] void fail_at_field(const std::string& field,
                                  const std::string& message) const;

  std::string source_;
  std::vector<Section> sections_;
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace pkco

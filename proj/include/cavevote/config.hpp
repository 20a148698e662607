#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cavevote/experiments.hpp"

namespace cavevote {

/// Flat key/value settings. A value is a scalar or a bracketed array; string
/// quotes are stripped. The accepted syntax is a subset of TOML:
///
///   seed = 42
///   p0 = [0, 0.4, 1]
///   counts = "lead 10 16"
using Settings = std::map<std::string, std::vector<std::string>>;

Settings parse_settings(std::istream& in);
Settings load_settings(const std::string& path);

/// Parses a count rule: "lead MIN MAX", "fixed C1 C2 ...", or "composition MIN".
/// `parties` is a comma-separated party list.
CountRule parse_count_rule(const std::string& text, const std::string& parties);

/// Applies every recognised key to `config`; unknown keys are an error.
///
/// Keys: seed, l, k, p0, h, elections, parties, counts, V, duration, cutoff,
/// tick, concentration, strategies, stick_target, assortment, workers.
void apply_settings(SweepConfig& config, const Settings& settings);

/// Settings text reproducing `config` (used for run headers).
std::string describe_settings(const SweepConfig& config);

}  // namespace cavevote

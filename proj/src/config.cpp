#include "cavevote/config.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace cavevote {

namespace {

std::string trim(std::string s) {
    const auto ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

std::string unquote(std::string s) {
    s = trim(std::move(s));
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
    return s;
}

// Strips a trailing '#' comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream s(text);
    while (std::getline(s, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::string& scalar(const Settings& s, const std::string& key) {
    const auto& v = s.at(key);
    if (v.size() != 1) throw std::invalid_argument("setting '" + key + "' expects a single value");
    return v.front();
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty()) throw std::invalid_argument("setting '" + key + "': expected a number, got '" + v + "'");
    return d;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    std::uint64_t u = 0;
    try {
        u = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty() || v.front() == '-')
        throw std::invalid_argument("setting '" + key + "': expected a non-negative integer, got '" + v + "'");
    return u;
}

std::vector<double> to_doubles(const std::string& key, const std::vector<std::string>& vs) {
    std::vector<double> out;
    for (const auto& v : vs) out.push_back(to_double(key, v));
    return out;
}

}  // namespace

Settings parse_settings(std::istream& in) {
    Settings out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty() || line.front() == '[') continue;  // blank, comment, or table header
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("settings line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::vector<std::string> values;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') throw std::invalid_argument("settings line " + std::to_string(lineno) + ": unterminated array");
            for (auto& item : split(value.substr(1, value.size() - 2), ',')) values.push_back(unquote(item));
        } else {
            values.push_back(unquote(value));
        }
        out[key] = std::move(values);
    }
    return out;
}

Settings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_settings(in);
}

CountRule parse_count_rule(const std::string& text, const std::string& parties) {
    std::istringstream s(text);
    std::string kind;
    s >> kind;
    std::vector<std::size_t> nums;
    std::string tok;
    while (s >> tok) nums.push_back(to_unsigned("counts", tok));
    auto names = split(parties, ',');
    if (kind == "lead" && nums.size() == 2) return CountRule::lead_range(names, nums[0], nums[1]);
    if (kind == "fixed" && !nums.empty()) return CountRule::fixed_counts(names, nums);
    if (kind == "composition" && nums.size() == 1) return CountRule::composition(names, nums[0]);
    throw std::invalid_argument("count rule '" + text + "' must be 'lead MIN MAX', 'fixed C...' or 'composition MIN'");
}

void apply_settings(SweepConfig& config, const Settings& settings) {
    std::string parties;
    for (std::size_t i = 0; i < config.count_rules.front().parties.size(); ++i)
        parties += (i ? "," : "") + config.count_rules.front().parties[i];
    if (settings.count("parties")) {
        const auto& v = settings.at("parties");
        parties.clear();
        for (std::size_t i = 0; i < v.size(); ++i) parties += (i ? "," : "") + v[i];
        for (auto& rule : config.count_rules) rule.parties = split(parties, ',');
    }
    for (const auto& [key, values] : settings) {
        if (key == "parties") continue;
        if (values.empty()) throw std::invalid_argument("setting '" + key + "' has no value");
        if (key == "seed") config.seed = to_unsigned(key, scalar(settings, key));
        else if (key == "l") config.clique_count = to_unsigned(key, scalar(settings, key));
        else if (key == "k") config.clique_size = to_unsigned(key, scalar(settings, key));
        else if (key == "p0") config.p0_grid = to_doubles(key, values);
        else if (key == "h") config.h_grid = to_doubles(key, values);
        else if (key == "elections") config.elections_per_cell = to_unsigned(key, scalar(settings, key));
        else if (key == "counts") {
            config.count_rules.clear();
            for (const auto& v : values) config.count_rules.push_back(parse_count_rule(v, parties));
        } else if (key == "V") config.election.victory_threshold = to_double(key, scalar(settings, key));
        else if (key == "duration") config.election.duration = to_double(key, scalar(settings, key));
        else if (key == "cutoff") config.election.early_cutoff = to_double(key, scalar(settings, key));
        else if (key == "tick") config.election.tick = to_double(key, scalar(settings, key));
        else if (key == "concentration") config.behavior.concentration = to_double(key, scalar(settings, key));
        else if (key == "strategies") {
            const auto concentration = config.behavior.concentration;
            config.behavior = BehaviorDistribution::from_samples_csv(scalar(settings, key));
            config.behavior.concentration = concentration;
        } else if (key == "stick_target") {
            const auto& v = scalar(settings, key);
            if (v == "current") config.election.stick_target = StickTarget::Current;
            else if (v == "assigned") config.election.stick_target = StickTarget::Assigned;
            else throw std::invalid_argument("stick_target must be 'current' or 'assigned'");
        } else if (key == "assortment") config.assortment = parse_assortment_convention(scalar(settings, key));
        else if (key == "workers") config.workers = to_unsigned(key, scalar(settings, key));
        else throw std::invalid_argument("unknown setting '" + key + "'");
    }
}

std::string describe_settings(const SweepConfig& config) {
    std::ostringstream s;
    auto list = [&](const std::vector<double>& v) {
        s << '[';
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << format_double(v[i]);
        s << "]\n";
    };
    s << "seed = " << config.seed << '\n';
    s << "l = " << config.clique_count << "\nk = " << config.clique_size << '\n';
    s << "p0 = ";
    list(config.p0_grid);
    s << "h = ";
    list(config.h_grid);
    s << "elections = " << config.elections_per_cell << '\n';
    s << "cells = " << config.cell_count() << "\ntotal_elections = " << config.cell_count() * config.elections_per_cell
      << '\n';
    for (const auto& r : config.count_rules) s << "counts = \"" << r.describe() << "\"\n";
    s << "V = " << format_double(config.election.victory_threshold) << '\n';
    s << "duration = " << format_double(config.election.duration) << "\ncutoff = "
      << format_double(config.election.early_cutoff) << "\ntick = " << format_double(config.election.tick) << '\n';
    s << "concentration = " << format_double(config.behavior.concentration) << '\n';
    s << "empirical_strategies = " << (config.behavior.empirical ? "true" : "false") << '\n';
    s << "stick_target = \"" << (config.election.stick_target == StickTarget::Current ? "current" : "assigned") << "\"\n";
    s << "assortment = \"" << to_string(config.assortment) << "\"\n";
    return s.str();
}

}  // namespace cavevote

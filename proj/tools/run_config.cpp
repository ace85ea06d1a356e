#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <lsprt/lsprt.hpp>
#include <lsprt/text_util.hpp>

namespace lsprt::cli {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

} // namespace

OptionSet::OptionSet(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "Flat key = value config file or a previous run's manifest.json");
    unrecorded_.push_back("config");
}

CLI::Option* OptionSet::record(const std::string& key, CLI::Option* option, std::function<std::string()> value) {
    entries_.push_back({key, option, std::move(value)});
    return option;
}

CLI::Option* OptionSet::add(const std::string& key, std::string& var, const std::string& help) {
    return record(key, app_->add_option("--" + key, var, help)->capture_default_str(), [&var] { return var; });
}

CLI::Option* OptionSet::add(const std::string& key, double& var, const std::string& help) {
    return record(key, app_->add_option("--" + key, var, help)->capture_default_str(),
                  [&var] { return format_double(var); });
}

CLI::Option* OptionSet::flag(const std::string& key, bool& var, const std::string& help) {
    return record(key, app_->add_flag("--" + key, var, help), [&var] { return var ? "true" : "false"; });
}

bool OptionSet::recorded(const std::string& key) const {
    return std::find(unrecorded_.begin(), unrecorded_.end(), key) == unrecorded_.end();
}

bool OptionSet::given(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e.option->count() > 0;
    return false;
}

void OptionSet::finalize(const std::vector<std::string>& required) {
    if (!config_path_.empty()) {
        for (const auto& [key, value] : read_config_file(config_path_)) {
            auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
            if (it == entries_.end())
                throw ConfigError("unknown key '" + key + "' in " + config_path_ + " for command " + app_->get_name());
            if (it->option->count() > 0) continue;
            try {
                it->option->add_result(value);
                it->option->run_callback();
            } catch (const CLI::Error& e) {
                throw ConfigError("bad value for '" + key + "' in " + config_path_ + ": " + e.what());
            }
        }
    }
    for (const auto& key : required)
        if (!given(key)) throw ConfigError(app_->get_name() + ": --" + key + " is required");
}

std::string OptionSet::config_text() const {
    std::ostringstream out;
    out << "# lsprt " << kVersion << " " << app_->get_name() << "\n";
    for (const auto& e : entries_)
        if (recorded(e.key)) out << e.key << " = " << e.value() << "\n";
    return out.str();
}

json OptionSet::config_json() const {
    json doc = json::object();
    for (const auto& e : entries_)
        if (recorded(e.key)) doc[e.key] = e.value();
    return doc;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    if (path.extension() == ".json") {
        const json doc = read_json(path);
        if (!doc.contains("config") || !doc["config"].is_object())
            throw ConfigError(path.string() + " has no \"config\" object");
        for (const auto& [key, value] : doc["config"].items()) {
            if (!value.is_string()) throw ConfigError(path.string() + ": config value of '" + key + "' is not a string");
            out.emplace_back(key, value.get<std::string>());
        }
        return out;
    }
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, unquote(trim(line.substr(eq + 1))));
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : parse_string_list(text)) {
        const auto v = parse_double(item);
        if (!v) throw ConfigError("--" + key + ": '" + item + "' is not a number");
        out.push_back(*v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : parse_string_list(text)) {
        const auto v = parse_int(item);
        if (!v) throw ConfigError("--" + key + ": '" + item + "' is not an integer");
        out.push_back(static_cast<int>(*v));
    }
    return out;
}

void write_run_record(const std::filesystem::path& out_dir, const std::string& command,
                      const OptionSet& options, json inputs, const std::vector<std::string>& outputs) {
    json manifest;
    manifest["tool"] = "lsprt";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["config"] = options.config_json();
    manifest["inputs"] = std::move(inputs);
    manifest["outputs"] = outputs;
    write_json(manifest, out_dir / "manifest.json");
    write_text(options.config_text(), out_dir / "run.cfg");
}

} // namespace lsprt::cli

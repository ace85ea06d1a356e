#pragma once

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <lsprt/error.hpp>
#include <lsprt/io.hpp>

namespace lsprt::cli {

// Raised by commands whose solver stopped on a budget rather than a
// convergence test.
class NonConvergence : public Error {
public:
    using Error::Error;
};

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kConfig = 2,
    kInfeasible = 3,
    kNonConvergence = 4,
    kData = 5,
    kDimension = 6,
};

// Options of one subcommand. Every option is a `--key value` flag whose key
// is also accepted in the flat config file, so a run can be written back out
// as a config that reproduces it.
class OptionSet {
public:
    explicit OptionSet(CLI::App* app);

    CLI::Option* add(const std::string& key, std::string& var, const std::string& help);
    CLI::Option* add(const std::string& key, double& var, const std::string& help);
    template <std::integral T>
    CLI::Option* add(const std::string& key, T& var, const std::string& help) {
        return record(key, app_->add_option("--" + key, var, help)->capture_default_str(),
                      [&var] { return std::to_string(var); });
    }
    CLI::Option* flag(const std::string& key, bool& var, const std::string& help);

    // Keys not recorded in run configs or manifests (they do not change
    // outputs).
    void exclude_from_record(const std::string& key) { unrecorded_.push_back(key); }

    // Fills every option not given on the command line from the config file
    // named by --config, then checks that each required key is set.
    void finalize(const std::vector<std::string>& required);

    bool given(const std::string& key) const;

    // key = value lines for every recorded option, in registration order.
    std::string config_text() const;
    json config_json() const;

    CLI::App* app() const { return app_; }
    const std::string& config_path() const { return config_path_; }

private:
    struct Entry {
        std::string key;
        CLI::Option* option;
        std::function<std::string()> value;
    };

    CLI::Option* record(const std::string& key, CLI::Option* option, std::function<std::string()> value);
    bool recorded(const std::string& key) const;

    CLI::App* app_;
    std::string config_path_;
    std::vector<Entry> entries_;
    std::vector<std::string> unrecorded_;
};

// Reads `key = value` lines ('#' starts a comment). A JSON manifest written
// by a previous run is also accepted; its "config" object is used.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

std::vector<double> parse_double_list(const std::string& text, const std::string& key);
std::vector<int> parse_int_list(const std::string& text, const std::string& key);
std::vector<std::string> parse_string_list(const std::string& text);

// Writes manifest.json and run.cfg into out_dir.
void write_run_record(const std::filesystem::path& out_dir, const std::string& command,
                      const OptionSet& options, json inputs, const std::vector<std::string>& outputs);

} // namespace lsprt::cli

#pragma once

#include <memory>
#include <vector>

#include <CLI11.hpp>

namespace lsprt::cli {

class Command {
public:
    virtual ~Command() = default;
    virtual CLI::App* app() const = 0;
    // Applies the config file, validates and executes. Throws lsprt::Error
    // subclasses on failure.
    virtual void run() = 0;
};

std::vector<std::unique_ptr<Command>> make_commands(CLI::App& root);

} // namespace lsprt::cli

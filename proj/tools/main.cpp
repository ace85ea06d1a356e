#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <lsprt/lsprt.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

const char* kExitCodes =
    "Exit codes: 0 success, 1 other failure, 2 configuration error, 3 infeasible program,\n"
    "4 solver did not converge, 5 input/output or data error, 6 dimension mismatch.";

int report(const char* kind, const std::exception& e, int code) {
    std::cerr << "lsprt: " << kind << ": " << e.what() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    using namespace lsprt::cli;
    CLI::App app{"Learned sequential probability ratio tests"};
    app.set_version_flag("--version", lsprt::kVersion);
    app.footer(kExitCodes);
    app.require_subcommand(1);
    auto commands = make_commands(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        for (auto& cmd : commands)
            if (cmd->app()->parsed()) cmd->run();
    } catch (const lsprt::ConfigError& e) {
        return report("configuration error", e, kConfig);
    } catch (const lsprt::InfeasibleError& e) {
        return report("infeasible", e, kInfeasible);
    } catch (const lsprt::DomainError& e) {
        return report("infeasible", e, kInfeasible);
    } catch (const NonConvergence& e) {
        return report("not converged", e, kNonConvergence);
    } catch (const lsprt::DimensionMismatch& e) {
        return report("dimension mismatch", e, kDimension);
    } catch (const lsprt::DataError& e) {
        return report("data error", e, kData);
    } catch (const std::filesystem::filesystem_error& e) {
        return report("i/o error", e, kData);
    } catch (const lsprt::json::exception& e) {
        return report("malformed json", e, kData);
    } catch (const std::exception& e) {
        return report("error", e, kOther);
    }
    return kOk;
}

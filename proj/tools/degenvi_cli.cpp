#include "degenvi/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Degenerate elliptic VE/VI solver and regularity harness"};
    app.require_subcommand(1);
    std::string config_path, out_dir, suite;
    long long seed = -1;
    int refine = -1;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve-ve", "solve the variational equation"},
        {"solve-vi", "solve the obstacle problem"},
        {"price", "perpetual American option on a strip"},
        {"geometry", "distances, inclusion radii, volumes and ratios"},
        {"verify", "run a verification suite"},
        {"schema", "print the config JSON schema"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        if (name == "schema") continue;
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed for sampled checks")->check(CLI::NonNegativeNumber);
        sub->add_option("--refine", refine, "mesh doublings for convergence studies")->check(CLI::Range(0, 4));
        if (name == "verify") sub->add_option("--suite", suite, "regularity|geometry|spaces|solver");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "schema") {
        std::cout << degenvi::config_schema().dump(2) << '\n';
        return 0;
    }

    try {
        nlohmann::json doc = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw degenvi::Error(degenvi::Errc::IoError, "cannot open config " + config_path);
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw degenvi::Error(degenvi::Errc::ConfigError, std::string("malformed JSON: ") + e.what());
            }
            if (!doc.is_object()) throw degenvi::Error(degenvi::Errc::ConfigError, "config must be a JSON object");
        }
        if (doc.contains("command") && doc["command"] != command) {
            throw degenvi::Error(degenvi::Errc::ConfigError, "config command does not match the subcommand");
        }
        doc["command"] = command;
        if (!out_dir.empty()) doc["output"] = out_dir;
        if (seed >= 0) doc["seed"] = seed;
        if (refine >= 0) doc["refine"] = refine;
        if (!suite.empty()) doc["suite"] = suite;
        const degenvi::RunConfig cfg = degenvi::parse_config(doc);
        return degenvi::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "magphon/config.hpp"
#include "magphon/errors.hpp"
#include "magphon/presets.hpp"
#include "magphon/run.hpp"

namespace {

void print_presets() {
    for (const auto& p : magphon::preset_registry()) {
        std::cout << p.name << "  [" << magphon::to_string(p.settings.command) << "]  " << p.summary << '\n';
    }
}

void print_keys() {
    const magphon::Settings defaults;
    for (const auto key : magphon::settings_keys()) {
        std::cout << key << " = " << magphon::get_setting(defaults, key) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated magnon-phonon simulator"};
    app.set_version_flag("--version", "magphon 0.1.0");

    std::string command;
    std::string preset;
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
    unsigned jobs = 1;
    std::string formats = "csv,json";
    bool list_presets = false;
    bool list_keys = false;

    app.add_option("command", command, "self-energy | coupling | spectrum | surface | find-ep | encircle "
                                       "(defaults to the preset's command)");
    app.add_option("--preset", preset, "Figure preset (see --list-presets)");
    app.add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "Override one key: --set key=value (repeatable)");
    app.add_option("--out", out, "Output directory");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", formats, "Comma list of csv, json");
    app.add_flag("--list-presets", list_presets, "Print the preset registry and exit");
    app.add_flag("--list-keys", list_keys, "Print every configuration key with its default and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        magphon::write_error_record(std::cerr, "config", e.what(), "command line");
        return magphon::kExitConfigError;
    }

    if (list_presets) {
        print_presets();
        return magphon::kExitOk;
    }
    if (list_keys) {
        print_keys();
        return magphon::kExitOk;
    }

    magphon::RunSpec spec;
    try {
        if (!command.empty()) spec.command = magphon::command_from_string(command);
        if (!preset.empty()) spec.preset = preset;
        if (!config.empty()) spec.config_path = config;
        for (const auto& s : sets) spec.overrides.push_back(magphon::parse_override(s));
        spec.output = out;
        spec.jobs = jobs;
        magphon::set_formats(spec, formats);
    } catch (const magphon::ConfigError& e) {
        magphon::write_error_record(std::cerr, "config", e.what(), e.field());
        return magphon::kExitConfigError;
    }
    return magphon::run(spec, std::cerr);
}

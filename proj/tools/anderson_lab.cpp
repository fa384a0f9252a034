// anderson-lab: run configured experiments and summarize their CSV output.

#include "anderson/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Multi-particle Anderson localization lab"};
    app.require_subcommand(1);

    std::string config_path;
    int workers = 0;
    bool strict = false;
    std::string output;
    auto* run_cmd = app.add_subcommand("run", "run the experiment described by a JSON config");
    run_cmd->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--strict-params", strict, "enforce every scale-parameter constraint");
    run_cmd->add_option("-o,--output", output, "result CSV path (overrides the config)");

    std::vector<std::string> files;
    std::string out_dir;
    auto* report_cmd = app.add_subcommand("report", "summarize result files against acceptance thresholds");
    report_cmd->add_option("files", files, "result CSV files")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--out", out_dir, "directory for summary.csv and plot data");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto config = anderson::load_config(config_path);
            if (workers > 0)
                config.workers = workers;
            if (strict)
                config.strict_params = true;
            if (!output.empty())
                config.output = output;
            if (config.output.empty())
                throw anderson::ConfigError("no output path: set 'output' in the config or pass --output");
            const auto rec = anderson::run(config);
            std::cout << rec.kind << ": " << rec.rows.size() << " rows -> " << config.output << "\n"
                      << "content_id " << rec.content_id << "\n";
            for (auto it = rec.summary.begin(); it != rec.summary.end(); ++it)
                std::cout << "  " << it.key() << " = " << it.value().dump() << "\n";
            for (const auto& n : rec.notes)
                std::cout << "  note: " << n << "\n";
        } else {
            std::vector<std::filesystem::path> paths(files.begin(), files.end());
            const auto lines = anderson::report(paths, out_dir);
            int failed = 0;
            for (const auto& l : lines) {
                std::cout << (l.pass ? "PASS " : "FAIL ") << l.file << " " << l.metric << " = "
                          << anderson::format_double(l.value) << "  [" << l.criterion << "]\n";
                failed += !l.pass;
            }
            return failed ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "anderson-lab: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

#include <CLI11.hpp>

#include "rrgen/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Data-driven robust residual generation and fixed-point fault detection"};
    app.require_subcommand(1);

    rrgen::cli::CommonOptions opts;
    std::uint64_t seed_flag = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "configuration JSON")->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", seed_flag, "seed override (wins over the config)")
            ->each([&](const std::string&) { opts.seed = seed_flag; });
    };

    CLI::App* identify = app.add_subcommand("identify", "estimate predictor coefficients from an I/O CSV");
    CLI::App* detect = app.add_subcommand("detect", "run the windowed residual detector over an I/O CSV");
    CLI::App* sweep = app.add_subcommand("sweep", "false-alarm-rate and estimation-error studies");
    CLI::App* fx = app.add_subcommand("fx", "fixed-point format proposal and quantized detector run");
    for (CLI::App* sub : {identify, detect, sweep, fx}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    if (identify->parsed()) return rrgen::cli::cmd_identify(opts);
    if (detect->parsed()) return rrgen::cli::cmd_detect(opts);
    if (sweep->parsed()) return rrgen::cli::cmd_sweep(opts);
    return rrgen::cli::cmd_fx(opts);
}

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "stlf/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Short-term load forecasting with SARIMA-GARCH models"};
    app.require_subcommand(1);

    stlf::cli::RunConfig cfg;
    std::string criterion = "bic";
    std::string innovation;
    std::string level_correction = "off";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input_path, "CSV with header timestamp,load");
        sub->add_option("--spec", cfg.model_spec_path, "model spec, candidate list or fitted-model JSON");
        sub->add_option("--holdout", cfg.holdout, "returns held out at the end of the sample");
        sub->add_option("--horizon", cfg.horizon, "forecast horizon in hours")->capture_default_str();
        sub->add_option("--coverage", cfg.coverage, "prediction interval coverage")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        sub->add_option("--output", cfg.output_path, "output file (forecast: path prefix)");
        sub->add_option("--criterion", criterion, "selection criterion")
            ->check(CLI::IsMember({"aic", "bic"}))
            ->capture_default_str();
        sub->add_option("--innovation", innovation, "override the innovation family")
            ->check(CLI::IsMember({"normal", "skew_normal", "student_t"}));
        sub->add_option("--level-correction", level_correction, "lognormal mean correction of level forecasts")
            ->check(CLI::IsMember({"on", "off"}))
            ->capture_default_str();
    };

    for (auto [name, help] : {std::pair{"diagnose", "ADF and McLeod-Li tests on levels and log-returns"},
                              std::pair{"fit", "fit one model spec by maximum likelihood"},
                              std::pair{"select", "fit candidate specs and keep the best by AIC/BIC"},
                              std::pair{"forecast", "forecast levels with prediction intervals"},
                              std::pair{"evaluate", "score forecasts against actual loads"},
                              std::pair{"simulate", "write a simulated load series from spec and params"}}) {
        auto* sub = app.add_subcommand(name, help);
        common(sub);
        std::string n = name;
        if (n == "diagnose") sub->add_option("--lags", cfg.lags, "McLeod-Li lags")->capture_default_str();
        if (n == "evaluate")
            sub->add_option("--forecast", cfg.forecast_paths, "forecast CSV, optionally name=path (repeatable)");
        if (n == "simulate") sub->add_option("--length", cfg.length, "number of returns")->capture_default_str();
        sub->callback([&cfg, n] { cfg.command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : stlf::cli::kUsage;
    }

    cfg.criterion = criterion == "aic" ? stlf::Criterion::Aic : stlf::Criterion::Bic;
    if (!innovation.empty()) cfg.innovation = stlf::parse_family(innovation);
    cfg.level_correction = level_correction == "on";
    return stlf::cli::run(cfg);
}

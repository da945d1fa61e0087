#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kappax/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitUndefined = 3;

int exit_code_for(const kappax::Error& error) {
    switch (error.code()) {
        case kappax::ErrorCode::UndefinedKappa:
        case kappax::ErrorCode::AllReplicatesDegenerate:
            return kExitUndefined;
        default:
            return kExitValidation;
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("KAPPAX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric KAPPAX_SEED\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kappax - agreement statistics for multi-label rating data"};
    app.require_subcommand(1);

    kappax::RunConfig config;
    std::string format = "table";
    int bootstrap_replicates = 0;
    std::uint64_t seed = default_seed();
    bool seed_given = false;
    double confidence = 0.95;
    int threads = 1;

    auto add_method = [&](kappax::Method method, const std::string& description) {
        CLI::App* cmd = app.add_subcommand(kappax::method_name(method), description);
        cmd->add_option("--ratings", config.ratings_path, "selection events CSV")->required();
        cmd->add_option("--roster", config.roster_path,
                        "participation CSV; omitted means everyone rated everything");
        cmd->add_option("--categories", config.categories_path,
                        "declared category list, one id per line");
        if (method == kappax::Method::Generalized) {
            cmd->add_option("--hierarchy", config.hierarchy_path,
                            "availability rules JSON");
            cmd->add_option("--weights", config.weights_path, "category weights JSON");
            cmd->add_option("--bootstrap", bootstrap_replicates,
                            "bootstrap replicates for a confidence interval");
            cmd->add_option("--seed", seed, "bootstrap seed (default: KAPPAX_SEED or 0)")
                ->each([&](const std::string&) { seed_given = true; });
            cmd->add_option("--confidence", confidence, "interval confidence, in (0, 1)");
            cmd->add_option("--threads", threads, "worker threads for the bootstrap");
        }
        if (method == kappax::Method::Rank) {
            cmd->add_option("--rankings", config.rankings_path,
                            "ordered rankings CSV; omitted treats selections as one tie group");
        }
        cmd->add_option("--format", format, "output format: table or json")
            ->check(CLI::IsMember({"table", "json"}));
        cmd->callback([&, method] { config.method = method; });
        return cmd;
    };

    add_method(kappax::Method::Generalized,
               "weighted multi-label kappa with optional hierarchy and bootstrap");
    add_method(kappax::Method::Fleiss, "classic fixed-rater, mutually exclusive kappa");
    add_method(kappax::Method::CohenAveraged, "mean of per-category two-rater kappas");
    add_method(kappax::Method::CohenPooled, "two-rater kappa from averaged Po and Pe");
    add_method(kappax::Method::Mezzich, "proportional-overlap kappa");
    add_method(kappax::Method::Icc, "chance-corrected intraclass-correlation kappa");
    add_method(kappax::Method::Rank, "chance-corrected rank-correlation kappa");

    std::string report_path;
    CLI::App* verify = app.add_subcommand("verify", "recompute a JSON report and compare");
    verify->add_option("report", report_path, "path to a report produced with --format json")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (verify->parsed()) {
            if (auto mismatch = kappax::verify_report(report_path)) {
                std::cerr << "verification failed: " << *mismatch << "\n";
                return kExitValidation;
            }
            std::cout << "report verified: every value reproduced\n";
            return kExitOk;
        }

        (void)seed_given;
        if (bootstrap_replicates > 0) {
            kappax::BootstrapConfig boot;
            boot.replicates = bootstrap_replicates;
            boot.seed = seed;
            boot.confidence = confidence;
            boot.threads = threads;
            config.bootstrap = boot;
        }
        config.format = format == "json" ? kappax::OutputFormat::Json
                                         : kappax::OutputFormat::Table;

        const kappax::RunResult result = kappax::run(config);
        std::cout << result.rendered;
        if (!result.report.overall) {
            std::cerr << "overall kappa is undefined for this data\n";
            return kExitUndefined;
        }
        return kExitOk;
    } catch (const kappax::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

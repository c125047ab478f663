// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "polya/io.hpp"
#include "polya/moments.hpp"
#include "polya/rng.hpp"
#include "polya/simplex.hpp"
#include "polya/urn.hpp"
#include "polya/verify.hpp"
#include "polya/version.hpp"

namespace {

// Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 resource or I/O error.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitResource = 3;

enum class OutputFormat { Exact, Decimal };
enum class OracleMethod { Enumerate, Partition };

struct MomentsOptions {
    int m = 1;
    int d_max = 25;
    polya::Recurrence recurrence = polya::Recurrence::TwoTerm;
    OutputFormat format = OutputFormat::Exact;
    std::string out_dir;
};

struct SimulateOptions {
    int d_min = 1;
    int d_max = 25;
    long long n = 1000;
    int samples = 10000;
    double gamma = 1.0;
    std::uint64_t seed = 1;
    std::vector<double> quantiles{0.05, 0.2, 0.8, 0.95};
    int workers = 0;
    std::string out_dir = ".";
};

struct OracleOptions {
    int d = 2;
    long long n = 4;
    int m = 1;
    OracleMethod method = OracleMethod::Enumerate;
};

struct VerifyOptions {
    polya::VerifyLevel level = polya::VerifyLevel::Quick;
};

std::string render(const polya::Rational& value, OutputFormat format) {
    return format == OutputFormat::Exact ? polya::to_fraction_string(value)
                                         : polya::to_decimal_string(value);
}

int run_moments(const MomentsOptions& opt, const std::string& command_echo) {
    const auto start = std::chrono::steady_clock::now();
    polya::MomentTable table(opt.recurrence);
    table.get(opt.m, opt.d_max);
    std::ostringstream body;
    for (int d = 1; d <= opt.d_max; ++d)
        body << d << ' ' << render(table.get(opt.m, d), opt.format) << '\n';
    if (opt.out_dir.empty()) {
        std::cout << body.str();
        return kExitOk;
    }
    std::filesystem::create_directories(opt.out_dir);
    const std::string stem = "moments_m" + std::to_string(opt.m);
    const auto path = std::filesystem::path(opt.out_dir) / (stem + ".data");
    std::ofstream out(path);
    if (!out) throw polya::io_error("cannot open " + path.string());
    out << body.str();
    if (!out.flush()) throw polya::io_error("failed writing " + path.string());

    polya::RunManifest manifest;
    manifest.add("command", command_echo);
    manifest.add("tool", std::string(polya::kToolName) + " " + polya::kToolVersion);
    manifest.add("m", std::to_string(opt.m));
    manifest.add("d_max", std::to_string(opt.d_max));
    manifest.add("recurrence", polya::to_string(opt.recurrence));
    manifest.add("format", opt.format == OutputFormat::Exact ? "exact" : "decimal");
    manifest.add("files", stem + ".data");
    manifest.add("wall_time_s", polya::format_number(std::chrono::duration<double>(
                                    std::chrono::steady_clock::now() - start)
                                    .count()));
    const auto manifest_path = std::filesystem::path(opt.out_dir) / (stem + ".manifest");
    polya::write_manifest(manifest_path, manifest);
    std::cout << path.string() << '\n' << manifest_path.string() << '\n';
    return kExitOk;
}

std::string quantile_tag(double q) {
    const double percent = q * 100.0;
    char buf[32];
    if (std::abs(percent - std::round(percent)) < 1e-9)
        std::snprintf(buf, sizeof buf, "%02.0f", percent);
    else
        std::snprintf(buf, sizeof buf, "%g", percent);
    return buf;
}

int run_simulate(const SimulateOptions& opt, const std::string& command_echo) {
    const auto start = std::chrono::steady_clock::now();
    if (opt.d_min < 1 || opt.d_max < opt.d_min)
        throw std::domain_error("need 1 <= d <= d-max");

    polya::PlotSeries mean_series{"sim_mean", {}};
    std::vector<polya::PlotSeries> quantile_series;
    quantile_series.reserve(opt.quantiles.size());
    for (double q : opt.quantiles)
        quantile_series.push_back({"sim_q" + quantile_tag(q), {}});

    for (int d = opt.d_min; d <= opt.d_max; ++d) {
        polya::SimConfig config;
        config.d = d;
        config.n = opt.n;
        config.gamma = opt.gamma;
        config.samples = opt.samples;
        // every d gets its own replicate stream family
        config.seed = polya::derive_stream_seed(opt.seed, static_cast<std::uint64_t>(d));
        config.quantiles = opt.quantiles;
        const polya::SampleSummary summary = polya::simulate_batch(config, opt.workers);
        mean_series.points.emplace_back(d, summary.mean);
        for (std::size_t i = 0; i < summary.quantile_values.size(); ++i)
            quantile_series[i].points.emplace_back(d, summary.quantile_values[i].second);
    }

    polya::PlotSeries exact_series{"asymp_exact", {}};
    for (int d = opt.d_min; d <= opt.d_max; ++d)
        exact_series.points.emplace_back(d, polya::to_double(polya::mean_fraction(d)));

    std::filesystem::create_directories(opt.out_dir);
    const std::filesystem::path dir(opt.out_dir);
    const std::string stem = "herding_sim_" + std::to_string(opt.n);
    std::vector<std::string> written;

    auto emit = [&](const std::string& name, const polya::PlotSeries& series) {
        polya::write_series(dir / name, series);
        written.push_back(name);
    };
    emit(stem + ".data", mean_series);
    for (std::size_t i = 0; i < quantile_series.size(); ++i)
        emit(stem + "_q" + quantile_tag(opt.quantiles[i]) + ".data", quantile_series[i]);
    emit("herding_asymp_exact_" + std::to_string(opt.d_max) + ".data", exact_series);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    polya::RunManifest manifest;
    manifest.add("command", command_echo);
    manifest.add("tool", std::string(polya::kToolName) + " " + polya::kToolVersion);
    manifest.add("generator", polya::kGeneratorId);
    manifest.add("seed_mix", polya::kSeedMixId);
    manifest.add("d_min", std::to_string(opt.d_min));
    manifest.add("d_max", std::to_string(opt.d_max));
    manifest.add("n", std::to_string(opt.n));
    manifest.add("samples", std::to_string(opt.samples));
    manifest.add("gamma", polya::format_number(opt.gamma));
    manifest.add("seed", std::to_string(opt.seed));
    {
        std::ostringstream qs;
        for (std::size_t i = 0; i < opt.quantiles.size(); ++i)
            qs << (i ? "," : "") << polya::format_number(opt.quantiles[i]);
        manifest.add("quantiles", qs.str());
    }
    manifest.add("workers", std::to_string(opt.workers));
    {
        std::ostringstream fs;
        for (std::size_t i = 0; i < written.size(); ++i) fs << (i ? "," : "") << written[i];
        manifest.add("files", fs.str());
    }
    manifest.add("wall_time_s", polya::format_number(wall));
    const std::string manifest_name = stem + ".manifest";
    polya::write_manifest(dir / manifest_name, manifest);
    written.push_back(manifest_name);

    for (const auto& name : written) std::cout << (dir / name).string() << '\n';
    return kExitOk;
}

int run_oracle(const OracleOptions& opt) {
    const polya::Rational value = opt.method == OracleMethod::Enumerate
                                      ? polya::exact_finite_moment(opt.d, opt.n, opt.m)
                                      : polya::partition_finite_moment(opt.d, opt.n, opt.m);
    std::cout << polya::to_fraction_string(value) << ' '
              << polya::to_decimal_string(value) << '\n';
    return kExitOk;
}

int run_verify(const VerifyOptions& opt) {
    const auto results = polya::run_verification(opt.level);
    for (const auto& r : results)
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    const bool ok = polya::all_passed(results);
    std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact limiting moments and Monte Carlo simulation of the heaviest bin "
                 "of a critical Polya urn"};
    app.set_version_flag("--version",
                         std::string(polya::kToolName) + " " + polya::kToolVersion);
    app.require_subcommand(1);

    const std::map<std::string, polya::Recurrence> recurrence_names{
        {"multi-term", polya::Recurrence::MultiTerm},
        {"two-term", polya::Recurrence::TwoTerm},
        {"iterated-sum", polya::Recurrence::IteratedSum}};
    const std::map<std::string, OutputFormat> format_names{
        {"exact", OutputFormat::Exact}, {"decimal", OutputFormat::Decimal}};
    const std::map<std::string, OracleMethod> method_names{
        {"enumerate", OracleMethod::Enumerate}, {"partition", OracleMethod::Partition}};
    const std::map<std::string, polya::VerifyLevel> level_names{
        {"quick", polya::VerifyLevel::Quick}, {"full", polya::VerifyLevel::Full}};

    MomentsOptions moments_opt;
    auto* moments = app.add_subcommand("moments", "print a table of limiting moments");
    moments->add_option("--m", moments_opt.m, "moment order")->required()
        ->check(CLI::NonNegativeNumber);
    moments->add_option("--d-max", moments_opt.d_max, "largest bin count")
        ->check(CLI::PositiveNumber);
    moments->add_option("--recurrence", moments_opt.recurrence, "recurrence to use")
        ->transform(CLI::CheckedTransformer(recurrence_names, CLI::ignore_case));
    moments->add_option("--format", moments_opt.format, "exact p/q or decimal")
        ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
    moments->add_option("--out-dir", moments_opt.out_dir,
                        "write moments_m<m>.data here instead of stdout");

    SimulateOptions sim_opt;
    auto* simulate =
        app.add_subcommand("simulate", "simulate heaviest-bin fractions over a d grid "
                                       "and emit plot data files");
    simulate->add_option("--d", sim_opt.d_min, "first bin count of the grid")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--d-max", sim_opt.d_max, "last bin count of the grid")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--n", sim_opt.n, "total balls per realization")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--samples", sim_opt.samples, "replicates per d")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--gamma", sim_opt.gamma, "attachment exponent (>= 0)");
    simulate->add_option("--seed", sim_opt.seed, "root seed");
    simulate->add_option("--quantiles", sim_opt.quantiles, "quantile levels in (0,1)")
        ->delimiter(',');
    simulate->add_option("--workers", sim_opt.workers, "worker threads (0 = auto)");
    simulate->add_option("--out-dir", sim_opt.out_dir, "output directory");

    OracleOptions oracle_opt;
    auto* oracle = app.add_subcommand(
        "oracle", "exact finite-n moment of the heaviest-bin fraction");
    oracle->add_option("--d", oracle_opt.d, "bins")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--n", oracle_opt.n, "total balls")->required()
        ->check(CLI::PositiveNumber);
    oracle->add_option("--m", oracle_opt.m, "moment order")->required()
        ->check(CLI::NonNegativeNumber);
    oracle->add_option("--method", oracle_opt.method, "enumerate or partition")
        ->transform(CLI::CheckedTransformer(method_names, CLI::ignore_case));

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "run the consistency checks");
    verify->add_option("--level", verify_opt.level, "quick or full")
        ->transform(CLI::CheckedTransformer(level_names, CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::ostringstream command_echo;
    for (int i = 0; i < argc; ++i) command_echo << (i ? " " : "") << argv[i];

    try {
        if (*moments) return run_moments(moments_opt, command_echo.str());
        if (*simulate) return run_simulate(sim_opt, command_echo.str());
        if (*oracle) return run_oracle(oracle_opt);
        if (*verify) return run_verify(verify_opt);
    } catch (const polya::resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const polya::io_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return kExitResource;
    }
    return kExitUsage;
}

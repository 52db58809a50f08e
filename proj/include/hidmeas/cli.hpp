// Copyright 2026 The hidmeas Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Batch command-line front end. Exit codes: 0 pass, 1 statistical failure,
// 2 usage, configuration or I/O error.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hidmeas/experiments.hpp"
#include "hidmeas/hilbert.hpp"
#include "hidmeas/simplex.hpp"

namespace hidmeas::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Hand-entered amplitudes and kappa values are renormalized when their norm
/// (resp. sum) is within this distance of 1 and rejected otherwise.
inline constexpr double kInputNormTolerance = 1e-4;

enum class Subcommand { born_check, simplex_model, pushforward_check, pci_sweep, lemma_constant, ipm_oracle_check };

inline const char* subcommand_name(Subcommand s)
{
    switch (s) {
    case Subcommand::born_check: return "born-check";
    case Subcommand::simplex_model: return "simplex-model";
    case Subcommand::pushforward_check: return "pushforward-check";
    case Subcommand::pci_sweep: return "pci-sweep";
    case Subcommand::lemma_constant: return "lemma-constant";
    case Subcommand::ipm_oracle_check: return "ipm-oracle-check";
    }
    return "?";
}

struct RunConfig
{
    Subcommand subcommand = Subcommand::born_check;
    std::optional<std::size_t> n;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    std::optional<StateVector> q;
    std::optional<StatisticalState> kappa;
    std::size_t bins = 50;
    std::size_t pairs = 1000;
    std::size_t segment_samples = 50;
    std::size_t models = 100;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::string format = "json";
    unsigned shards = 1;
    bool self_test = false;
    bool no_timing = false;
};

struct ParseResult
{
    std::optional<RunConfig> config; // empty when the process should exit
    int exit_code = kExitPass;
    std::string message;
};

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) {
        parts.push_back(trim(part));
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

inline double parse_real(const std::string& text, const std::string& flag)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size() || !std::isfinite(value)) {
        throw UsageError(flag + ": malformed number '" + text + "'");
    }
    return value;
}

} // namespace detail

/// "re,im;re,im;..." -> unit StateVector.
inline StateVector parse_amplitudes(const std::string& text)
{
    std::vector<Complex> amplitudes;
    for (const std::string& pair : detail::split(text, ';')) {
        const auto parts = detail::split(pair, ',');
        if (parts.size() != 2) {
            throw UsageError("--q: malformed complex literal '" + pair + "' (expected re,im)");
        }
        amplitudes.emplace_back(detail::parse_real(parts[0], "--q"), detail::parse_real(parts[1], "--q"));
    }
    if (amplitudes.empty()) {
        throw UsageError("--q: no amplitudes given");
    }
    double norm2 = 0.0;
    for (const Complex& c : amplitudes) {
        norm2 += std::norm(c);
    }
    if (!(std::abs(std::sqrt(norm2) - 1.0) <= kInputNormTolerance)) {
        throw UsageError("--q: amplitudes have norm " + std::to_string(std::sqrt(norm2)) +
                         ", expected 1 within 1e-4");
    }
    return StateVector::normalized(std::move(amplitudes));
}

/// "k1,k2,..." -> statistical state.
inline StatisticalState parse_kappa(const std::string& text)
{
    std::vector<double> coords;
    for (const std::string& part : detail::split(text, ',')) {
        const double v = detail::parse_real(part, "--kappa");
        if (v < 0.0) {
            throw UsageError("--kappa: entries must be non-negative");
        }
        coords.push_back(v);
    }
    double sum = 0.0;
    for (double v : coords) {
        sum += v;
    }
    if (coords.empty() || !(std::abs(sum - 1.0) <= kInputNormTolerance)) {
        throw UsageError("--kappa: entries sum to " + std::to_string(sum) + ", expected 1 within 1e-4");
    }
    for (double& v : coords) {
        v /= sum;
    }
    return StatisticalState{SimplexPoint(std::move(coords))};
}

inline ParseResult parse_args(const std::vector<std::string>& args)
{
    CLI::App app{"Hidden-measurement model: Born rule and measure verification experiments", "hidmeas"};
    app.require_subcommand(1);

    RunConfig config;
    std::size_t n = 0;
    std::string q_text;
    std::string kappa_text;
    std::string out_path;
    double tol = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "64-bit master seed")->capture_default_str();
        sub->add_option("--out", out_path, "Report path (default: standard output)");
        sub->add_option("--format", config.format, "Report format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        config.shards = default_shard_count();
        sub->add_option("--shards", config.shards, "Worker shards (results are fixed per shard count)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_flag("--no-timing", config.no_timing, "Write duration_ms as 0 so reports are byte-reproducible");
    };
    auto add_n = [&](CLI::App* sub, const char* help) {
        return sub->add_option("--n", n, help)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20, "INT >= 1"));
    };
    auto* born = app.add_subcommand("born-check", "Outcome frequencies of i(q, a) over uniform apparatus states");
    add_n(born, "Dimension (required unless --q is given)");
    born->add_option("--q", q_text, "Entity state as re,im;re,im;... (default: seeded-random)");
    born->add_option("--samples", config.samples, "Sample count N [default: 1000000]")->check(CLI::PositiveNumber);
    born->add_option("--tol", tol, "Sigma multiplier of the binomial bound [default: 4]");
    add_common(born);

    auto* simplex = app.add_subcommand("simplex-model", "Classification of uniform simplex points against kappa");
    add_n(simplex, "Dimension (required unless --kappa is given)");
    simplex->add_option("--kappa", kappa_text, "Statistical state as k1,k2,... (default: seeded-random)");
    simplex->add_option("--samples", config.samples, "Sample count N [default: 1000000]")->check(CLI::PositiveNumber);
    simplex->add_option("--tol", tol, "Sigma multiplier of the binomial bound [default: 4]");
    add_common(simplex);

    auto* push = app.add_subcommand("pushforward-check", "Chi-square of tau(uniform sphere) over interior boxes");
    add_n(push, "Dimension, 2..8")->required();
    push->add_option("--samples", config.samples, "Sample count N [default: 1000000]")->check(CLI::PositiveNumber);
    push->add_option("--bins", config.bins, "Minimum number of interior boxes")->capture_default_str();
    push->add_option("--tol", tol, "Significance level alpha, 0.01 or 0.001 [default: 0.001]");
    push->add_flag("--self-test", config.self_test, "Use the biased real-sphere sampler (must fail)");
    add_common(push);

    auto* pci = app.add_subcommand("pci-sweep", "Consistent-interaction check over random (q, a) pairs");
    add_n(pci, "Dimension")->required();
    pci->add_option("--pairs", config.pairs, "Number of (q, a) pairs")->capture_default_str();
    pci->add_option("--segment-samples", config.segment_samples, "Samples per segment")->capture_default_str();
    pci->add_flag("--self-test", config.self_test, "Swap the outcomes of two cells (must report violations)");
    add_common(pci);

    auto* lemma = app.add_subcommand("lemma-constant", "Sphere/simplex measure ratio against 2 pi^n / sqrt(n)");
    add_n(lemma, "Dimension, 1..20")->required();
    lemma->add_option("--tol", tol, "Relative tolerance [default: 1e-12]");
    add_common(lemma);

    auto* ipm = app.add_subcommand("ipm-oracle-check", "Monte Carlo interactive probability vs exact enumeration");
    ipm->add_option("--samples", config.samples, "Samples per model [default: 100000]")->check(CLI::PositiveNumber);
    ipm->add_option("--models", config.models, "Number of random finite models")->capture_default_str();
    ipm->add_option("--tol", tol, "Sigma multiplier [default: 4]");
    add_common(ipm);

    std::vector<const char*> argv;
    argv.push_back("hidmeas");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }

    ParseResult result;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        result.message = (app.get_subcommands().empty() ? &app : app.get_subcommands().front())->help();
        return result;
    } catch (const CLI::CallForAllHelp&) {
        result.message = app.help("", CLI::AppFormatMode::All);
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_code = kExitUsage;
        result.message = std::string(e.what()) + "\nRun with --help for usage.";
        return result;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        const auto given = [&](const char* flag) {
            const CLI::Option* option = sub->get_option_no_throw(flag);
            return option != nullptr && option->count() > 0;
        };
        if (given("--n")) {
            config.n = n;
        }
        if (given("--tol")) {
            config.tol = tol;
        }
        if (given("--out")) {
            config.out = out_path;
        }
        if (name == "born-check") {
            config.subcommand = Subcommand::born_check;
            if (given("--q")) {
                config.q = parse_amplitudes(q_text);
                if (config.n && *config.n != config.q->dimension()) {
                    throw UsageError("--q: " + std::to_string(config.q->dimension()) +
                                     " amplitudes given but --n is " + std::to_string(*config.n));
                }
                config.n = config.q->dimension();
            }
            if (!config.n) {
                throw UsageError("born-check: --n or --q is required");
            }
        } else if (name == "simplex-model") {
            config.subcommand = Subcommand::simplex_model;
            if (given("--kappa")) {
                config.kappa = parse_kappa(kappa_text);
                if (config.n && *config.n != config.kappa->dimension()) {
                    throw UsageError("--kappa: dimension does not match --n");
                }
                config.n = config.kappa->dimension();
            }
            if (!config.n) {
                throw UsageError("simplex-model: --n or --kappa is required");
            }
        } else if (name == "pushforward-check") {
            config.subcommand = Subcommand::pushforward_check;
            if (config.tol && *config.tol != 0.01 && *config.tol != 0.001) {
                throw UsageError("--tol: alpha must be 0.01 or 0.001");
            }
        } else if (name == "pci-sweep") {
            config.subcommand = Subcommand::pci_sweep;
        } else if (name == "lemma-constant") {
            config.subcommand = Subcommand::lemma_constant;
        } else {
            config.subcommand = Subcommand::ipm_oracle_check;
            if (!given("--samples")) {
                config.samples = 100'000;
            }
        }
        if (config.tol && !(*config.tol > 0.0)) {
            throw UsageError("--tol: must be positive");
        }
    } catch (const std::exception& e) {
        result.exit_code = kExitUsage;
        result.message = e.what();
        return result;
    }
    result.config = std::move(config);
    return result;
}

inline ExperimentReport execute(const RunConfig& config)
{
    const std::size_t n = config.n.value_or(0);
    switch (config.subcommand) {
    case Subcommand::born_check: {
        BornCheckConfig c;
        c.n = n;
        c.q = config.q;
        c.samples = config.samples;
        c.seed = config.seed;
        c.shards = config.shards;
        c.sigmas = config.tol.value_or(kDefaultSigmas);
        return run_born_check(c);
    }
    case Subcommand::simplex_model: {
        SimplexModelConfig c;
        c.n = n;
        c.kappa = config.kappa;
        c.samples = config.samples;
        c.seed = config.seed;
        c.shards = config.shards;
        c.sigmas = config.tol.value_or(kDefaultSigmas);
        return run_simplex_model(c);
    }
    case Subcommand::pushforward_check: {
        PushforwardConfig c;
        c.n = n;
        c.samples = config.samples;
        c.bins = config.bins;
        c.seed = config.seed;
        c.shards = config.shards;
        c.alpha = config.tol.value_or(0.001);
        c.source = config.self_test ? PushforwardSource::real_sphere : PushforwardSource::uniform_sphere;
        return run_pushforward_check(c);
    }
    case Subcommand::pci_sweep: {
        PciSweepConfig c;
        c.n = n;
        c.pairs = config.pairs;
        c.samples_per_segment = config.segment_samples;
        c.seed = config.seed;
        c.shards = config.shards;
        c.mutated = config.self_test;
        return run_pci_sweep(c);
    }
    case Subcommand::lemma_constant:
        return run_lemma_constant(n, config.tol.value_or(kLemmaTolerance));
    case Subcommand::ipm_oracle_check: {
        IpmOracleConfig c;
        c.models = config.models;
        c.samples = config.samples;
        c.seed = config.seed;
        c.shards = config.shards;
        c.sigmas = config.tol.value_or(kDefaultSigmas);
        return run_ipm_oracle_check(c);
    }
    }
    throw std::logic_error("unknown subcommand");
}

/// Runs the experiment and writes the report to config.out or `out`; a
/// one-line summary goes to `err`.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    ExperimentReport report;
    try {
        report = execute(config);
    } catch (const std::exception& e) {
        err << subcommand_name(config.subcommand) << ": " << e.what() << '\n';
        return kExitUsage;
    }
    if (config.no_timing) {
        report.duration_ms = 0.0;
    }
    const std::string text = config.format == "csv" ? to_csv(report) : to_json(report);
    if (config.out) {
        std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
        file << text;
        file.close();
        if (!file) {
            err << "cannot write report to '" << *config.out << "'\n";
            return kExitUsage;
        }
    } else {
        out << text;
        out.flush();
    }
    err << report.experiment << ": " << (report.pass ? "PASS" : "FAIL");
    if (config.subcommand == Subcommand::lemma_constant) {
        err << "  lhs = " << hidmeas::detail::format_number(report.statistics["lhs"].get<double>())
            << "  rhs = " << hidmeas::detail::format_number(report.statistics["rhs"].get<double>());
    }
    err << '\n';
    return report.pass ? kExitPass : kExitFail;
}

/// parse_args + run.
inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const ParseResult parsed = parse_args(args);
    if (!parsed.config) {
        (parsed.exit_code == kExitPass ? out : err) << parsed.message << '\n';
        return parsed.exit_code;
    }
    return run(*parsed.config, out, err);
}

} // namespace hidmeas::cli

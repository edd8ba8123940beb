#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ctx/bundle.hpp"
#include "ctx/errors.hpp"
#include "ctx/io.hpp"
#include "ctx/possibilistic.hpp"
#include "ctx/quantum.hpp"
#include "ctx/sampling.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_weak = 10;
constexpr int exit_logical = 11;
constexpr int exit_strong = 12;
constexpr int exit_uncolorable = 13;

struct OutputOptions {
    std::string path; // empty = stdout
    bool quiet = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& options) {
    cmd->add_option("--output", options.path, "Write the result to this file instead of stdout");
    cmd->add_flag("--quiet", options.quiet, "Suppress the stderr summary");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ctx::ParseError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const OutputOptions& options, const std::string& text) {
    if (options.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(options.path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + options.path + "'");
    out << text;
}

ctx::EmpiricalModel load_valid_model(const std::string& path) {
    const auto model = ctx::parse_model(read_file(path));
    const auto violations = ctx::validate_model(model);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid model: " << to_string(v) << "\n";
        throw ctx::ParseError("'" + path + "' is not a valid model");
    }
    return model;
}

int level_exit_code(ctx::ContextualityLevel level) {
    switch (level) {
        case ctx::ContextualityLevel::NonContextual: return exit_ok;
        case ctx::ContextualityLevel::Weak: return exit_weak;
        case ctx::ContextualityLevel::Logical: return exit_logical;
        case ctx::ContextualityLevel::Strong: return exit_strong;
    }
    return exit_invalid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contextuality toolkit: classify empirical models, check hidden-variable "
                 "feasibility, compile quantum realizations, draw bundle diagrams, sample "
                 "the referee game and test Kochen-Specker colorability"};
    app.require_subcommand(1);

    std::string classify_path;
    OutputOptions classify_out;
    auto* classify_cmd = app.add_subcommand("classify", "Classify a model file");
    classify_cmd->add_option("file", classify_path, "Model file")->required();
    add_output_options(classify_cmd, classify_out);

    std::string hidden_path;
    OutputOptions hidden_out;
    auto* hidden_cmd =
        app.add_subcommand("hidden", "Emit the hidden-distribution feasibility certificate");
    hidden_cmd->add_option("file", hidden_path, "Model file")->required();
    add_output_options(hidden_cmd, hidden_out);

    std::string bundle_path;
    std::string bundle_format = "dot";
    OutputOptions bundle_out;
    auto* bundle_cmd = app.add_subcommand("bundle", "Emit the bundle diagram as a graph");
    bundle_cmd->add_option("file", bundle_path, "Model file")->required();
    bundle_cmd->add_option("--format", bundle_format, "Output format (dot)")
        ->check(CLI::IsMember({"dot"}));
    add_output_options(bundle_cmd, bundle_out);

    std::string sample_path;
    std::uint64_t sample_rounds = 0;
    std::uint64_t sample_seed = 0;
    std::string sample_weights;
    OutputOptions sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "Simulate rounds of the referee game");
    sample_cmd->add_option("file", sample_path, "Model file")->required();
    sample_cmd->add_option("--rounds", sample_rounds, "Number of rounds")->required();
    sample_cmd->add_option("--seed", sample_seed, "Generator seed (default 0)");
    sample_cmd->add_option("--weights", sample_weights,
                           "Context weights file (default uniform)");
    add_output_options(sample_cmd, sample_out);

    std::string quantum_path;
    OutputOptions quantum_out;
    auto* quantum_cmd =
        app.add_subcommand("quantum", "Compile a quantum realization into a model file");
    quantum_cmd->add_option("file", quantum_path, "Realization file")->required();
    add_output_options(quantum_cmd, quantum_out);

    std::string ks_path;
    OutputOptions ks_out;
    auto* ks_cmd = app.add_subcommand("ks", "Test a vector configuration for colorability");
    ks_cmd->add_option("file", ks_path, "Vector configuration file")->required();
    add_output_options(ks_cmd, ks_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify_cmd->parsed()) {
            const auto model = load_valid_model(classify_path);
            const auto classification = ctx::classify(model);
            write_output(classify_out, ctx::serialize_classification(classification));
            if (!classify_out.quiet) {
                std::cerr << "level=" << ctx::to_string(classification.level)
                          << " signalling=" << (classification.signalling ? "true" : "false")
                          << "\n";
            }
            return level_exit_code(classification.level);
        }
        if (hidden_cmd->parsed()) {
            const auto model = load_valid_model(hidden_path);
            const auto certificate = ctx::check_hidden_distribution(model);
            write_output(hidden_out, ctx::serialize_certificate(certificate));
            if (!hidden_out.quiet) {
                std::cerr << (certificate.feasible ? "feasible" : "infeasible") << "\n";
            }
            return exit_ok;
        }
        if (bundle_cmd->parsed()) {
            const auto model = load_valid_model(bundle_path);
            write_output(bundle_out, ctx::to_dot(ctx::build_bundle_graph(model)));
            return exit_ok;
        }
        if (sample_cmd->parsed()) {
            const auto model = load_valid_model(sample_path);
            ctx::SamplingConfig config;
            if (sample_weights.empty()) {
                config = ctx::uniform_sampling_config(model.scenario, sample_rounds, sample_seed);
            } else {
                config.rounds = sample_rounds;
                config.seed = sample_seed;
                config.context_weights =
                    ctx::parse_context_weights(read_file(sample_weights), model.scenario);
            }
            const auto result = ctx::run_sampling(model, config);
            write_output(sample_out, ctx::serialize_sampling(model, config, result));
            if (!sample_out.quiet) {
                std::cerr << "rounds=" << config.rounds << " seed=" << config.seed
                          << " max_abs_deviation=" << result.max_abs_deviation << "\n";
            }
            return exit_ok;
        }
        if (quantum_cmd->parsed()) {
            const auto realization = ctx::parse_realization(read_file(quantum_path));
            const auto violations = ctx::validate_realization(realization);
            if (!violations.empty()) {
                for (const auto& v : violations) {
                    std::cerr << "invalid realization: " << to_string(v) << "\n";
                }
                return exit_invalid;
            }
            const auto model = ctx::realization_to_model(realization);
            write_output(quantum_out, ctx::serialize_model(model));
            return exit_ok;
        }
        if (ks_cmd->parsed()) {
            const auto configuration = ctx::parse_configuration(read_file(ks_path));
            const auto coloring = ctx::ks_colorable(configuration);
            write_output(ks_out, ctx::serialize_ks_coloring(coloring));
            if (!ks_out.quiet) {
                std::cerr << (coloring.colorable ? "colorable" : "uncolorable") << "\n";
            }
            return coloring.colorable ? exit_ok : exit_uncolorable;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}

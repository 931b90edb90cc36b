// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

// unicomp: compress, analyze, verify-bound and bench subcommands.
//
// Exit codes: 0 ok, 1 invariant violation, 2 usage or config conflict,
// 3 malformed input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unicomp/io.hpp"
#include "unicomp/pipeline.hpp"
#include "unicomp/verify.hpp"

namespace {

using namespace unicomp;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

struct PipelineFlags {
    std::optional<double> ratio;
    std::optional<std::size_t> token_max;
    bool automatic = false;
    double uf = 0.005;
    double uc = 0.2;
    TokenOrder order = TokenOrder::ids;
    bool no_fuse = false;
    FgfVariant fgf = FgfVariant::fusion;
    AllocVariant alloc = AllocVariant::softmax;

    void add_to(CLI::App& cmd) {
        // Conflicts among these three are reported by CompressionConfig::validate.
        cmd.add_option("--ratio", ratio, "retained ratio in (0, 1] of the original T*N tokens");
        cmd.add_option("--token-max", token_max, "total token limit including boundary markers");
        cmd.add_flag("--auto", automatic, "no retention target; thresholds decide the ratio");
        cmd.add_option("--uf", uf, "frame uniqueness threshold")->capture_default_str();
        cmd.add_option("--uc", uc, "token uniqueness threshold")->capture_default_str();
        cmd.add_option("--order", order, "retained token order")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, TokenOrder>{{"ids", TokenOrder::ids}, {"uniqueness", TokenOrder::uniqueness}}));
        cmd.add_flag("--no-fuse", no_fuse, "disable neighbour fusion");
        cmd.add_option("--fgf", fgf, "frame group representative")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, FgfVariant>{{"fusion", FgfVariant::fusion}, {"first", FgfVariant::first_frame}}));
        cmd.add_option("--alloc", alloc, "token allocation")
            ->transform(CLI::CheckedTransformer(std::map<std::string, AllocVariant>{
                {"softmax", AllocVariant::softmax}, {"uniform", AllocVariant::uniform}}));
    }

    CompressionConfig to_config() const {
        CompressionConfig c;
        c.frame_threshold = uf;
        c.token_threshold = uc;
        c.retain_ratio = ratio;
        c.token_max = token_max;
        c.mode = automatic ? CompressionMode::automatic : CompressionMode::budgeted;
        c.order = order;
        c.fuse = !no_fuse;
        c.fgf_variant = fgf;
        c.alloc_variant = alloc;
        return c;
    }
};

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << doc.dump(2) << '\n';
}

std::vector<std::vector<double>> read_attention(const std::string& path, const VideoTensor& video) {
    const VideoTensor scores = io::read_container_file(path);
    if (scores.dim() != 1 || scores.frame_count() != video.frame_count() ||
        scores.tokens_per_frame() != video.tokens_per_frame()) {
        throw FormatError("attention scores container must have shape T x N x 1 matching the input");
    }
    std::vector<std::vector<double>> out;
    for (const TokenMatrix& f : scores.frames) {
        out.emplace_back(f.values().begin(), f.values().end());
    }
    return out;
}

int run_compress(const std::string& input, const std::string& output, const std::string& report_path,
                 const CompressionConfig& config) {
    config.validate();
    const VideoTensor video = io::read_container_file(input);
    const CompressedVideo result = compress(video, config);
    io::write_container_file(output, io::retained_tokens_as_video(result));
    write_json(output + ".json", io::write_sidecar(result));
    write_json(report_path, io::write_report(result.report));
    return 0;
}

int run_analyze(const std::vector<std::string>& inputs, const std::string& report_path, const CompressionConfig& config,
                const std::string& attention_path) {
    config.validate();
    nlohmann::json reports = nlohmann::json::array();
    for (const std::string& path : inputs) {
        const VideoTensor video = io::read_container_file(path);
        std::vector<std::vector<double>> attention;
        if (!attention_path.empty()) {
            attention = read_attention(attention_path, video);
        }
        nlohmann::json entry = io::write_report(analyze(video, config, attention));
        if (inputs.size() > 1) {
            entry = {{"input", path}, {"report", entry}};
        }
        reports.push_back(entry);
    }
    const nlohmann::json doc = inputs.size() == 1 ? reports.front() : nlohmann::json{{"reports", reports}};
    if (report_path.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        write_json(report_path, doc);
    }
    return 0;
}

void print_tally(const verify::InvariantTally& t) {
    std::printf("%-18s checks=%zu violations=%zu worst=%.3e\n", t.name.c_str(), t.checks, t.violations, t.worst);
}

int run_verify_bound(const std::string& input, const verify::BoundSuiteOptions& options) {
    std::vector<TokenMatrix> frames;
    if (!input.empty()) {
        frames = io::read_container_file(input).frames;
    }
    const verify::BoundSuiteResult result = verify::run_bound_suite(options, frames);
    std::printf("verify-bound trials=%zu max_n=%zu max_d=%zu seed=%llu extra_frames=%zu\n", options.trials,
                options.max_n, options.max_d, static_cast<unsigned long long>(options.seed), frames.size());
    print_tally(result.nearest_identity);
    print_tally(result.step2_inequality);
    print_tally(result.monotone_bound);
    std::printf("softmax-above-min-bound %zu/%zu (reported, not asserted)\n", result.softmax_above_min_bound,
                result.softmax_checks);
    if (!result.ok()) {
        for (const auto* t : {&result.nearest_identity, &result.step2_inequality, &result.monotone_bound}) {
            if (t->violations > 0) {
                std::printf("counterexample %s %s\n", t->name.c_str(), t->counterexample.c_str());
            }
        }
        std::printf("FAIL\n");
        return kExitViolation;
    }
    std::printf("OK\n");
    return 0;
}

int run_bench(const verify::SdcBenchOptions& options) {
    if (options.budget < 1 || options.budget > options.tokens) {
        throw ConfigError("--kt must lie in [1, --n]");
    }
    const verify::SdcBenchResult r = verify::bench_sdc(options);
    std::printf("bench n=%zu d=%zu kt=%zu uc=%g repeat=%zu seed=%llu\n", options.tokens, options.dims, options.budget,
                options.token_threshold, options.repeat, static_cast<unsigned long long>(options.seed));
    std::printf("reference_median_ms %.4f\n", r.reference_median_ms);
    std::printf("parallel_median_ms %.4f\n", r.parallel_median_ms);
    std::printf("speedup %.2f\n", r.speedup);
    std::printf("mismatches %zu\n", r.mismatches);
    return r.mismatches == 0 ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-uniqueness video token compression"};
    app.require_subcommand(1);

    PipelineFlags compress_flags;
    std::string compress_input;
    std::string compress_output;
    std::string compress_report;
    auto* compress_cmd = app.add_subcommand("compress", "compress a UCTK container");
    compress_cmd->add_option("--input", compress_input, "input UCTK container")->required();
    compress_cmd->add_option("--output", compress_output, "output UCTK container (sidecar at OUTPUT.json)")
        ->required();
    compress_cmd->add_option("--report", compress_report, "report JSON path")->required();
    compress_flags.add_to(*compress_cmd);

    PipelineFlags analyze_flags;
    std::vector<std::string> analyze_inputs;
    std::string analyze_report;
    std::string analyze_attention;
    Selector selector = Selector::sdc;
    std::uint64_t analyze_seed = 0;
    auto* analyze_cmd = app.add_subcommand("analyze", "dry-run metrics for one or more containers");
    analyze_cmd->add_option("--input", analyze_inputs, "input UCTK container(s)")->required();
    analyze_cmd->add_option("--report", analyze_report, "report JSON path (default: stdout)");
    analyze_cmd->add_option("--selector", selector, "per-group token selector")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Selector>{{"sdc", Selector::sdc},
                                                                            {"unique-topk", Selector::unique_topk},
                                                                            {"attn-topk", Selector::attn_topk},
                                                                            {"random", Selector::random}}));
    analyze_cmd->add_option("--attn-scores", analyze_attention, "T x N x 1 UCTK container for attn-topk");
    analyze_cmd->add_option("--seed", analyze_seed, "seed for the random selector");
    analyze_flags.add_to(*analyze_cmd);

    verify::BoundSuiteOptions bound_options;
    std::string bound_input;
    auto* verify_cmd = app.add_subcommand("verify-bound", "randomized reconstruction-bound invariant suite");
    verify_cmd->add_option("--input", bound_input, "optional UCTK container whose frames are checked too");
    verify_cmd->add_option("--trials", bound_options.trials, "random trials")->capture_default_str();
    verify_cmd->add_option("--max-n", bound_options.max_n, "largest token count")->capture_default_str();
    verify_cmd->add_option("--max-d", bound_options.max_d, "largest feature dim")->capture_default_str();
    verify_cmd->add_option("--seed", bound_options.seed, "random seed")->capture_default_str();

    verify::SdcBenchOptions bench_options;
    auto* bench_cmd = app.add_subcommand("bench", "reference vs matrix SDC timing on one core");
    bench_cmd->add_option("--n", bench_options.tokens, "tokens per frame")->capture_default_str();
    bench_cmd->add_option("--d", bench_options.dims, "feature dims")->capture_default_str();
    bench_cmd->add_option("--kt", bench_options.budget, "token budget")->capture_default_str();
    bench_cmd->add_option("--uc", bench_options.token_threshold, "token uniqueness threshold")->capture_default_str();
    bench_cmd->add_option("--repeat", bench_options.repeat, "repeats (median reported)")->capture_default_str();
    bench_cmd->add_option("--seed", bench_options.seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    try {
        if (*compress_cmd) {
            return run_compress(compress_input, compress_output, compress_report, compress_flags.to_config());
        }
        if (*analyze_cmd) {
            CompressionConfig config = analyze_flags.to_config();
            config.selector = selector;
            config.seed = analyze_seed;
            return run_analyze(analyze_inputs, analyze_report, config, analyze_attention);
        }
        if (*verify_cmd) {
            return run_verify_bound(bound_input, bound_options);
        }
        return run_bench(bench_options);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const DegenerateError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
}

// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#include "unicomp/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace unicomp::io {

namespace {

constexpr char kMagic[4] = {'U', 'C', 'T', 'K'};
constexpr std::uint16_t kFlagKeys = 0x1;

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
    out.push_back(static_cast<std::byte>(v & 0xFF));
    out.push_back(static_cast<std::byte>(v >> 8));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::byte>((v >> shift) & 0xFF));
    }
}

std::uint16_t get_u16(std::span<const std::byte> b, std::size_t at) {
    return static_cast<std::uint16_t>(std::to_integer<unsigned>(b[at]) | (std::to_integer<unsigned>(b[at + 1]) << 8));
}

std::uint32_t get_u32(std::span<const std::byte> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | std::to_integer<std::uint32_t>(b[at + static_cast<std::size_t>(i)]);
    }
    return v;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw FormatError(std::string(what) + " does not fit in u32");
    }
    return static_cast<std::uint32_t>(v);
}

void put_frames(std::vector<std::byte>& out, const std::vector<TokenMatrix>& frames) {
    for (const TokenMatrix& f : frames) {
        for (float v : f.values()) {
            put_u32(out, std::bit_cast<std::uint32_t>(v));
        }
    }
}

std::vector<TokenMatrix> get_frames(std::span<const std::byte> bytes, std::size_t& at, std::size_t t_count,
                                    std::size_t n, std::size_t d) {
    std::vector<TokenMatrix> frames;
    frames.reserve(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        std::vector<float> values(n * d);
        for (float& v : values) {
            v = std::bit_cast<float>(get_u32(bytes, at));
            if (!std::isfinite(v)) {
                throw FormatError("non-finite payload value at byte offset " + std::to_string(at));
            }
            at += 4;
        }
        frames.emplace_back(n, d, std::move(values));
    }
    return frames;
}

}  // namespace

std::vector<std::byte> write_container(const VideoTensor& video) {
    video.validate();
    const bool has_keys = video.keys.has_value();
    std::vector<std::byte> out;
    out.reserve(kHeaderSize + 4 * video.frame_count() * video.tokens_per_frame() * (video.dim() + video.key_dim()));
    for (char c : kMagic) {
        out.push_back(static_cast<std::byte>(c));
    }
    put_u16(out, kContainerVersion);
    put_u16(out, has_keys ? kFlagKeys : 0);
    put_u32(out, checked_u32(video.frame_count(), "T"));
    put_u32(out, checked_u32(video.tokens_per_frame(), "N"));
    put_u32(out, checked_u32(video.dim(), "d"));
    put_u32(out, checked_u32(has_keys ? video.key_dim() : 0, "d_k"));
    put_frames(out, video.frames);
    if (has_keys) {
        put_frames(out, *video.keys);
    }
    return out;
}

VideoTensor read_container(std::span<const std::byte> bytes) {
    if (bytes.size() < kHeaderSize) {
        throw FormatError("container truncated: header needs " + std::to_string(kHeaderSize) + " bytes, got " +
                          std::to_string(bytes.size()));
    }
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw FormatError("bad magic: expected \"UCTK\"");
    }
    const std::uint16_t version = get_u16(bytes, 4);
    if (version != kContainerVersion) {
        throw FormatError("unsupported container version " + std::to_string(version) + " (expected " +
                          std::to_string(kContainerVersion) + ")");
    }
    const std::uint16_t flags = get_u16(bytes, 6);
    if ((flags & ~kFlagKeys) != 0) {
        throw FormatError("unknown container flag bits in " + std::to_string(flags));
    }
    const bool has_keys = (flags & kFlagKeys) != 0;
    const std::uint64_t t_count = get_u32(bytes, 8);
    const std::uint64_t n = get_u32(bytes, 12);
    const std::uint64_t d = get_u32(bytes, 16);
    const std::uint64_t dk = get_u32(bytes, 20);
    if (t_count == 0 || n == 0 || d == 0) {
        throw FormatError("container dimensions must be nonzero (T=" + std::to_string(t_count) +
                          ", N=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
    }
    if (has_keys && dk == 0) {
        throw FormatError("keys flag set but d_k is 0");
    }
    if (!has_keys && dk != 0) {
        throw FormatError("d_k is " + std::to_string(dk) + " but keys flag is clear");
    }
    const std::uint64_t frame_values = t_count * n;
    if (frame_values / n != t_count) {
        throw FormatError("container dimensions overflow");
    }
    const auto payload_bytes = [&](std::uint64_t dims) -> std::uint64_t {
        const std::uint64_t values = frame_values * dims;
        if (dims != 0 && values / dims != frame_values) {
            throw FormatError("container dimensions overflow");
        }
        if (values > std::numeric_limits<std::uint64_t>::max() / 4) {
            throw FormatError("container dimensions overflow");
        }
        return values * 4;
    };
    const std::uint64_t expected = kHeaderSize + payload_bytes(d) + (has_keys ? payload_bytes(dk) : 0);
    if (bytes.size() != expected) {
        throw FormatError("payload length mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
    }

    VideoTensor video;
    std::size_t at = kHeaderSize;
    video.frames = get_frames(bytes, at, t_count, n, d);
    if (has_keys) {
        video.keys = get_frames(bytes, at, t_count, n, dk);
    }
    return video;
}

VideoTensor read_container_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_container(std::as_bytes(std::span<const char>(raw)));
}

void write_container_file(const std::filesystem::path& path, const VideoTensor& video) {
    const std::vector<std::byte> bytes = write_container(video);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("short write to " + path.string());
    }
}

double round_sig6(double value) {
    if (value == 0.0 || !std::isfinite(value)) {
        return value;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return std::strtod(buf, nullptr);
}

nlohmann::json write_report(const CompressionReport& report) {
    using nlohmann::json;
    const CompressionConfig& c = report.config;
    json config = {
        {"mode", to_string(c.mode)},
        {"uf", round_sig6(c.frame_threshold)},
        {"uc", round_sig6(c.token_threshold)},
        {"retain_ratio", c.retain_ratio ? json(round_sig6(*c.retain_ratio)) : json(nullptr)},
        {"token_max", c.token_max ? json(*c.token_max) : json(nullptr)},
        {"order", to_string(c.order)},
        {"fuse", c.fuse},
        {"fgf", to_string(c.fgf_variant)},
        {"alloc", to_string(c.alloc_variant)},
        {"selector", to_string(c.selector)},
    };

    json groups = json::array();
    for (const GroupReport& g : report.groups) {
        groups.push_back({
            {"range", {g.range.begin, g.range.end}},
            {"initial_budget", g.initial_budget},
            {"budget", g.budget},
            {"retained", g.retained},
            {"fused", g.fused},
            {"dropped", g.dropped},
            {"reruns", g.reruns},
            {"bound", round_sig6(g.bound)},
            {"error", round_sig6(g.error)},
        });
    }

    json totals = {
        {"groups", report.groups.size()},
        {"frames", report.frames},
        {"tokens_per_frame", report.tokens_per_frame},
        {"original_tokens", report.original_tokens()},
        {"token_max", report.token_max},
        {"retained", report.retained},
        {"markers", report.markers},
        {"emitted", report.emitted},
        {"retained_ratio", round_sig6(report.retained_ratio)},
        {"waste_redistributed", report.waste_redistributed},
        {"surplus_redistributed", report.surplus_redistributed},
        {"surplus_unused", report.surplus_unused},
        {"bypassed", report.bypassed},
        {"bounds_renormalized", report.bounds_renormalized},
    };

    json timings = {
        {"fgf", round_sig6(report.timings.fgf_ms)},
        {"alloc", round_sig6(report.timings.alloc_ms)},
        {"sdc", round_sig6(report.timings.sdc_ms)},
        {"total", round_sig6(report.timings.total_ms)},
    };

    return {{"config", config}, {"groups", groups}, {"totals", totals}, {"timings_ms", timings}};
}

nlohmann::json write_sidecar(const CompressedVideo& video) {
    using nlohmann::json;
    json groups = json::array();
    std::size_t offset = 0;
    for (std::size_t g = 0; g < video.frames.size(); ++g) {
        const CompressedFrame& f = video.frames[g];
        const FrameRange& range = video.grouping.groups[g];
        groups.push_back({
            {"range", {range.begin, range.end}},
            {"token_offset", offset},
            {"count", f.retained()},
            {"retained_ids", f.retained_ids},
            {"redundancy_map", f.redundancy_map},
        });
        offset += f.retained();
    }
    return {{"groups", groups}, {"markers", video.markers}, {"tokens", offset}};
}

VideoTensor retained_tokens_as_video(const CompressedVideo& video) {
    std::size_t rows = 0;
    std::size_t dims = 0;
    for (const CompressedFrame& f : video.frames) {
        rows += f.retained();
        dims = f.retained_features.cols();
    }
    TokenMatrix all(rows, dims);
    std::size_t r = 0;
    for (const CompressedFrame& f : video.frames) {
        for (std::size_t i = 0; i < f.retained(); ++i, ++r) {
            const auto src = f.retained_features.row(i);
            std::copy(src.begin(), src.end(), all.row(r).begin());
        }
    }
    VideoTensor out;
    out.frames.push_back(std::move(all));
    return out;
}

}  // namespace unicomp::io

// Copyright 2026 The UniComp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "unicomp/pipeline.hpp"
#include "unicomp/tensor.hpp"

namespace unicomp::io {

/*
 * UCTK tensor container, all integers little-endian:
 *
 *   offset  size  field
 *   0       4     magic "UCTK"
 *   4       2     version (u16) = 1
 *   6       2     flags (u16); bit 0 = keys section present, other bits must be 0
 *   8       4     T  (u32) frames
 *   12      4     N  (u32) tokens per frame
 *   16      4     d  (u32) feature dims
 *   20      4     d_k (u32) key dims, 0 when no keys section
 *   24      ...   frames: T*N*d f32, frame-major, token rows, dim columns
 *           ...   keys (if flagged): T*N*d_k f32, same layout
 *
 * Nothing may follow the last payload byte.
 */
inline constexpr std::uint16_t kContainerVersion = 1;
inline constexpr std::size_t kHeaderSize = 24;

std::vector<std::byte> write_container(const VideoTensor& video);
VideoTensor read_container(std::span<const std::byte> bytes);

VideoTensor read_container_file(const std::filesystem::path& path);
void write_container_file(const std::filesystem::path& path, const VideoTensor& video);

/**
 * @brief Report as JSON: {config, groups, totals, timings_ms}.
 *
 * Object keys come out sorted and every floating-point value is rounded to 6
 * significant digits, so the document is stable for fixed inputs apart from
 * timings_ms.
 */
nlohmann::json write_report(const CompressionReport& report);

/// Grouping, per-group retained ids and marker positions for a compressed video.
nlohmann::json write_sidecar(const CompressedVideo& video);

/// Concatenates every group's retained features (group order) into a single-frame container.
VideoTensor retained_tokens_as_video(const CompressedVideo& video);

/// Rounds to 6 significant digits.
double round_sig6(double value);

}  // namespace unicomp::io

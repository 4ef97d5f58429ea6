#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "avbench/manifest.hpp"

namespace avbench {

struct IngestOptions {
  /// Read frame counts and fps from MP4 headers.
  bool probe_frames = false;
};

/// Directory adapter for FakeAVCeleb:
///
///   <root>/RealVideo-RealAudio/.../idNNNNN/<clip>.mp4
///   <root>/RealVideo-FakeAudio/.../idNNNNN/<clip>.mp4
///   <root>/FakeVideo-RealAudio/<method>/.../idNNNNN/<clip>.mp4
///   <root>/FakeVideo-FakeAudio/<method>/.../idNNNNN/<clip>.mp4
///
/// <method> is one of wav2lip, faceswap, fsgan, faceswap-wav2lip,
/// fsgan-wav2lip; category names match case-insensitively with '-'/'_'
/// ignored. A sibling <clip>.wav becomes the audio path. sample_id is the
/// root-relative path without extension.
Manifest ingest_fakeavceleb(const std::filesystem::path& root, const IngestOptions& options = {});

/// Annotation-table adapter for DeepSpeak v1. Each metadata CSV provides
/// (case-insensitive headers, first listed spelling is canonical):
///   path | video_path | file        video file relative to root
///   split | phase                    dataset-provided train/test designation
///   identity | source_identity | source
///   video_method | method            empty/real/none or a taxonomy method
///   audio | audio_method             empty/real/none, fake/cloned or a method
/// optionally sample_id, audio_path, n_frames, fps. When `metadata` is empty
/// <root>/metadata.csv and <root>/annotations/*.csv are used.
Manifest ingest_deepspeak(const std::filesystem::path& root,
                          std::span<const std::filesystem::path> metadata,
                          const IngestOptions& options = {});

}  // namespace avbench

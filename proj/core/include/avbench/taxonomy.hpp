#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avbench {

enum class Modality { video, audio };
enum class Family { lip_synthesis, face_animation };

std::string_view to_string(Family family) noexcept;
std::optional<Family> parse_family(std::string_view text);

inline constexpr std::string_view kFakeAvCeleb = "fakeavceleb";
inline constexpr std::string_view kDeepSpeak = "deepspeak_v1";

/// Accepts "favc"/"fakeavceleb" and "deepspeak"/"deepspeak_v1"; other ids
/// are returned unchanged.
std::string canonical_dataset_id(std::string_view text);

struct MethodInfo {
  std::string name;
  Modality modality = Modality::video;
  std::optional<Family> family;     // video methods only
  std::vector<std::string> aliases;  // lower-case folder / annotation spellings

  friend bool operator==(const MethodInfo&, const MethodInfo&) = default;
};

/// One manipulation combination: a set of video methods plus an optional
/// audio method. The empty combo is a real sample.
struct Combo {
  std::vector<std::string> video_methods;  // kept in taxonomy order
  std::optional<std::string> audio_method;

  bool is_real() const noexcept { return video_methods.empty() && !audio_method; }
  bool has_video_method(std::string_view name) const;
  auto operator<=>(const Combo&) const = default;
};

class Taxonomy {
 public:
  std::string dataset;
  std::vector<MethodInfo> video_methods;
  std::vector<MethodInfo> audio_methods;
  /// Fake combinations the dataset actually contains.
  std::vector<Combo> combos;
  /// Held-out categories of the literature leave-one-out protocol, if any.
  std::vector<Combo> established_categories;
  /// Audio fakes only co-occur with lip-synthesis video.
  bool audio_requires_lip_synthesis = false;

  static Taxonomy fakeavceleb();
  static Taxonomy deepspeak();
  /// Built-in taxonomy for a known dataset id; throws unknown_method otherwise.
  static Taxonomy builtin(std::string_view dataset);

  const MethodInfo* find_video(std::string_view name) const;
  const MethodInfo* find_audio(std::string_view name) const;
  /// Case-insensitive match on name or alias.
  const MethodInfo* resolve_video(std::string_view text) const;
  const MethodInfo* resolve_audio(std::string_view text) const;

  std::optional<Family> family_of(std::string_view video_method) const;
  bool combo_in_family(const Combo& combo, Family family) const;
  bool contains(const Combo& combo) const;

  /// Sorts video methods into taxonomy order (face animation before lip
  /// synthesis, then declaration order) so labels are canonical.
  Combo canonicalize(Combo combo) const;

  /// e.g. "FaceSwap+Wav2Lip+fakeAudio", "realVideo+fakeAudio", "real".
  std::string label(const Combo& combo) const;
  /// Inverse of label(); also understands short forms such as "W2L+rA",
  /// "rV+fA" or "FS+fA". Returns nullopt when nothing matches a combo.
  std::optional<Combo> parse_combo(std::string_view text) const;

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  int video_rank(std::string_view name) const;
};

}  // namespace avbench

#include "avbench/taxonomy.hpp"

#include <algorithm>
#include <cctype>

#include "avbench/error.hpp"

namespace avbench {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view text) {
  auto b = text.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(" \t");
  return std::string(text.substr(b, e - b + 1));
}

MethodInfo video(std::string name, Family family, std::vector<std::string> aliases) {
  return MethodInfo{std::move(name), Modality::video, family, std::move(aliases)};
}

MethodInfo audio(std::string name, std::vector<std::string> aliases) {
  return MethodInfo{std::move(name), Modality::audio, std::nullopt, std::move(aliases)};
}

const MethodInfo* resolve(const std::vector<MethodInfo>& methods, std::string_view text) {
  const std::string key = lower(trim(text));
  for (const auto& m : methods) {
    if (lower(m.name) == key) return &m;
    if (std::find(m.aliases.begin(), m.aliases.end(), key) != m.aliases.end()) return &m;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  return family == Family::lip_synthesis ? "LipSynthesis" : "FaceAnimation";
}

std::optional<Family> parse_family(std::string_view text) {
  const std::string key = lower(text);
  if (key == "lipsynthesis" || key == "lip_synthesis" || key == "lip-synthesis" || key == "lip") {
    return Family::lip_synthesis;
  }
  if (key == "faceanimation" || key == "face_animation" || key == "face-animation" || key == "face") {
    return Family::face_animation;
  }
  return std::nullopt;
}

std::string canonical_dataset_id(std::string_view text) {
  const std::string key = lower(text);
  if (key == "favc" || key == "fakeavceleb") return std::string(kFakeAvCeleb);
  if (key == "deepspeak" || key == "deepspeak_v1" || key == "deepspeakv1" || key == "ds") {
    return std::string(kDeepSpeak);
  }
  return std::string(text);
}

bool Combo::has_video_method(std::string_view name) const {
  return std::find(video_methods.begin(), video_methods.end(), name) != video_methods.end();
}

Taxonomy Taxonomy::fakeavceleb() {
  Taxonomy t;
  t.dataset = std::string(kFakeAvCeleb);
  t.video_methods = {
      video("FaceSwap", Family::face_animation, {"faceswap", "fs", "face_swap", "face-swap"}),
      video("FSGAN", Family::face_animation, {"fsgan", "fs-gan", "fs_gan"}),
      video("Wav2Lip", Family::lip_synthesis, {"wav2lip", "w2l", "wavtolip"}),
  };
  t.audio_methods = {audio("SV2TTS", {"sv2tts", "rtvc"})};
  const std::string a = "SV2TTS";
  t.combos = {
      Combo{{}, a},
      Combo{{"Wav2Lip"}, std::nullopt},
      Combo{{"FaceSwap"}, std::nullopt},
      Combo{{"FSGAN"}, std::nullopt},
      Combo{{"Wav2Lip"}, a},
      Combo{{"FaceSwap", "Wav2Lip"}, a},
      Combo{{"FSGAN", "Wav2Lip"}, a},
  };
  t.established_categories = {
      Combo{{}, a},
      Combo{{"Wav2Lip"}, std::nullopt},
      Combo{{"FaceSwap", "Wav2Lip"}, a},
      Combo{{"FSGAN", "Wav2Lip"}, a},
      Combo{{"Wav2Lip"}, a},
  };
  return t;
}

Taxonomy Taxonomy::deepspeak() {
  Taxonomy t;
  t.dataset = std::string(kDeepSpeak);
  t.video_methods = {
      video("FaceFusion", Family::face_animation, {"facefusion", "ff", "face_fusion"}),
      video("FaceFusionGAN", Family::face_animation,
            {"facefusion_gan", "facefusiongan", "facefusion-gan", "facefusion+gan", "ffg"}),
      video("FaceFusionLive", Family::face_animation,
            {"facefusion_live", "facefusionlive", "facefusion-live", "ffl"}),
      video("Wav2Lip", Family::lip_synthesis, {"wav2lip", "w2l", "wavtolip"}),
      video("Retalking", Family::lip_synthesis,
            {"retalking", "video_retalking", "videoretalking", "video-retalking", "rt"}),
  };
  t.audio_methods = {audio("ElevenLabs", {"elevenlabs", "11labs", "eleven_labs"})};
  const std::string a = "ElevenLabs";
  t.combos = {
      Combo{{"Wav2Lip"}, std::nullopt},   Combo{{"Wav2Lip"}, a},
      Combo{{"Retalking"}, std::nullopt}, Combo{{"Retalking"}, a},
      Combo{{"FaceFusion"}, std::nullopt},
      Combo{{"FaceFusionGAN"}, std::nullopt},
      Combo{{"FaceFusionLive"}, std::nullopt},
  };
  t.audio_requires_lip_synthesis = true;
  return t;
}

Taxonomy Taxonomy::builtin(std::string_view dataset) {
  const std::string id = canonical_dataset_id(dataset);
  if (id == kFakeAvCeleb) return fakeavceleb();
  if (id == kDeepSpeak) return deepspeak();
  throw Error(Errc::unknown_method, "no built-in taxonomy for dataset '" + std::string(dataset) + "'");
}

const MethodInfo* Taxonomy::find_video(std::string_view name) const {
  for (const auto& m : video_methods) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const MethodInfo* Taxonomy::find_audio(std::string_view name) const {
  for (const auto& m : audio_methods) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const MethodInfo* Taxonomy::resolve_video(std::string_view text) const {
  return resolve(video_methods, text);
}

const MethodInfo* Taxonomy::resolve_audio(std::string_view text) const {
  return resolve(audio_methods, text);
}

std::optional<Family> Taxonomy::family_of(std::string_view video_method) const {
  const MethodInfo* m = find_video(video_method);
  return m ? m->family : std::nullopt;
}

bool Taxonomy::combo_in_family(const Combo& combo, Family family) const {
  return std::any_of(combo.video_methods.begin(), combo.video_methods.end(),
                     [&](const std::string& v) { return family_of(v) == family; });
}

bool Taxonomy::contains(const Combo& combo) const {
  return std::find(combos.begin(), combos.end(), combo) != combos.end();
}

int Taxonomy::video_rank(std::string_view name) const {
  for (std::size_t i = 0; i < video_methods.size(); ++i) {
    if (video_methods[i].name == name) {
      const bool face = video_methods[i].family == Family::face_animation;
      return static_cast<int>(i) + (face ? 0 : 1000);
    }
  }
  return 1 << 20;
}

Combo Taxonomy::canonicalize(Combo combo) const {
  std::stable_sort(combo.video_methods.begin(), combo.video_methods.end(),
                   [&](const std::string& a, const std::string& b) {
                     const int ra = video_rank(a), rb = video_rank(b);
                     return ra != rb ? ra < rb : a < b;
                   });
  combo.video_methods.erase(std::unique(combo.video_methods.begin(), combo.video_methods.end()),
                            combo.video_methods.end());
  return combo;
}

std::string Taxonomy::label(const Combo& combo) const {
  if (combo.is_real()) return "real";
  std::string out;
  if (combo.video_methods.empty()) {
    out = "realVideo";
  } else {
    for (std::size_t i = 0; i < combo.video_methods.size(); ++i) {
      if (i) out += '+';
      out += combo.video_methods[i];
    }
  }
  if (!combo.audio_method) {
    out += "+realAudio";
  } else if (audio_methods.size() == 1 && audio_methods[0].name == *combo.audio_method) {
    out += "+fakeAudio";
  } else {
    out += "+fakeAudio(" + *combo.audio_method + ")";
  }
  return out;
}

std::optional<Combo> Taxonomy::parse_combo(std::string_view text) const {
  const std::string key = lower(trim(text));
  if (key == "real") return Combo{};
  Combo parsed;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t next = key.find('+', pos);
    if (next == std::string::npos) next = key.size();
    std::string token = trim(std::string_view(key).substr(pos, next - pos));
    pos = next + 1;
    if (token.empty()) {
      if (next == key.size()) break;
      continue;
    }
    if (token == "realvideo" || token == "rv") continue;
    if (token == "realaudio" || token == "ra") {
      continue;
    }
    if (token == "fakeaudio" || token == "fa") {
      if (audio_methods.size() != 1) return std::nullopt;
      parsed.audio_method = audio_methods[0].name;
      continue;
    }
    if (token.rfind("fakeaudio(", 0) == 0 && token.back() == ')') {
      const MethodInfo* m = resolve_audio(token.substr(10, token.size() - 11));
      if (!m) return std::nullopt;
      parsed.audio_method = m->name;
      continue;
    }
    if (const MethodInfo* m = resolve_video(token)) {
      parsed.video_methods.push_back(m->name);
      continue;
    }
    if (const MethodInfo* m = resolve_audio(token)) {
      parsed.audio_method = m->name;
      continue;
    }
    return std::nullopt;
  }
  parsed = canonicalize(std::move(parsed));
  if (parsed.is_real()) return std::nullopt;
  if (contains(parsed)) return parsed;
  // Short forms such as "FS+fA" name the distinguishing method only; accept
  // them when exactly one dataset combo extends the parsed one.
  std::optional<Combo> match;
  for (const Combo& c : combos) {
    if (c.audio_method != parsed.audio_method) continue;
    const bool superset = std::all_of(parsed.video_methods.begin(), parsed.video_methods.end(),
                                      [&](const std::string& v) { return c.has_video_method(v); });
    if (!superset) continue;
    if (match) return std::nullopt;
    match = c;
  }
  return match;
}

}  // namespace avbench

/* Copyright 2026 The cvd Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cvd/launder.h"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "cvd/error.h"
#include "cvd/random.h"
#include "cvd/text.h"

extern char** environ;

namespace cvd {
namespace {

namespace fs = std::filesystem;

constexpr long kMaxAlignLag = 4096;
constexpr size_t kAlignWindow = 16000;

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string Substitute(std::string cmd, const std::string& in,
                       const std::string& out, int bitrate) {
  const std::map<std::string, std::string> values = {
      {"{in}", ShellQuote(in)},
      {"{out}", ShellQuote(out)},
      {"{bitrate}", std::to_string(bitrate)}};
  std::string result;
  for (size_t i = 0; i < cmd.size();) {
    bool replaced = false;
    for (const auto& [key, value] : values) {
      if (cmd.compare(i, key.size(), key) == 0) {
        result += value;
        i += key.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) result.push_back(cmd[i++]);
  }
  return result;
}

std::string ProgramName(const std::string& cmd) {
  const auto t = Trim(cmd);
  return std::string(t.substr(0, t.find_first_of(" \t")));
}

bool ProgramAvailable(const std::string& program) {
  if (program.empty()) return false;
  if (program.find('/') != std::string::npos) {
    return ::access(program.c_str(), X_OK) == 0;
  }
  const char* path = std::getenv("PATH");
  if (!path) return false;
  for (auto dir : Split(path, ':')) {
    const fs::path candidate = fs::path(dir.empty() ? "." : std::string(dir)) / program;
    if (::access(candidate.c_str(), X_OK) == 0 && fs::is_regular_file(candidate)) {
      return true;
    }
  }
  return false;
}

void CheckAvailable(const std::string& cmd, std::string_view role) {
  if (Trim(cmd).empty()) {
    throw Error(ErrorCode::kEncoderUnavailable,
                fmt::format("no {} command configured", role));
  }
  if (!ProgramAvailable(ProgramName(cmd))) {
    throw Error(ErrorCode::kEncoderUnavailable,
                fmt::format("{} program not found for command '{}'", role, cmd));
  }
}

void RunShell(const std::string& cmd, const fs::path& stderr_path,
              std::string_view role) {
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 2, stderr_path.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::string sh = "/bin/sh", dash_c = "-c", body = cmd;
  char* argv[] = {sh.data(), dash_c.data(), body.data(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw Error(ErrorCode::kEncoderUnavailable,
                fmt::format("could not start /bin/sh for {}", role));
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) {
      throw Error(ErrorCode::kEncoderFailed, fmt::format("{}: waitpid failed", role));
    }
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    std::string err;
    try {
      err = std::string(Trim(ReadFile(stderr_path.string())));
    } catch (const Error&) {
    }
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    throw Error(ErrorCode::kEncoderFailed,
                fmt::format("{} exited with status {}: {}", role, code, err));
  }
}

// Removes the per-invocation directory on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& parent) {
    fs::path base = parent.empty() ? fs::temp_directory_path() : fs::path(parent);
    fs::create_directories(base);
    std::string templ = (base / "cvd-transcode-XXXXXX").string();
    if (!::mkdtemp(templ.data())) {
      throw Error(ErrorCode::kIoError, "cannot create temporary directory in " +
                                           base.string());
    }
    path_ = templ;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string KindKey(LabelKind k) { return k == LabelKind::kReal ? "real" : "synthetic"; }

}  // namespace

DatasetManifest AssignLaundering(const DatasetManifest& manifest, uint64_t seed) {
  std::map<std::pair<int, int>, std::vector<size_t>> strata;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    if (e.split == DataSplit::kUnassigned) {
      throw Error(ErrorCode::kSplitMissing, "clip " + e.clip_id + " has no split");
    }
    strata[{int(e.label.kind), int(e.split)}].push_back(i);
  }
  DatasetManifest out = manifest;
  for (const auto& [key, idx] : strata) {
    auto order = idx;
    Rng rng(DeriveSeed(seed, fmt::format("launder:{}:{}",
                                         KindKey(LabelKind(key.first)),
                                         ToString(DataSplit(key.second)))));
    rng.Shuffle(order);
    const size_t base = order.size() / 4, rem = order.size() % 4;
    size_t k = 0;
    for (int c = 0; c < 4; ++c) {
      const size_t count = base + (size_t(c) < rem ? 1 : 0);
      for (size_t j = 0; j < count; ++j, ++k) {
        auto& e = out.entries[order[k]];
        Rng params(DeriveSeed(seed, "launder-params:" + e.clip_id));
        const double snr = params.Uniform(kMinLaunderSnrDb, kMaxLaunderSnrDb);
        const int kbps = kLaunderBitrates[params.UniformIndex(kLaunderBitrates.size())];
        switch (LaunderKind(c)) {
          case LaunderKind::kNone: e.laundering = LaunderingSpec::None(); break;
          case LaunderKind::kNoise: e.laundering = LaunderingSpec::Noise(snr); break;
          case LaunderKind::kTranscode:
            e.laundering = LaunderingSpec::Transcode(kbps);
            break;
          case LaunderKind::kBoth: e.laundering = LaunderingSpec::Both(snr, kbps); break;
        }
      }
    }
  }
  return out;
}

NoiseResult AddNoise(const AudioClip& clip, double snr_db, uint64_t seed,
                     ClipPolicy policy) {
  double power = 0.0;
  for (double v : clip.samples) power += v * v;
  if (clip.samples.empty() || power == 0.0) {
    throw Error(ErrorCode::kZeroPowerSignal,
                "clip " + clip.clip_id + " has zero power");
  }
  power /= double(clip.samples.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  NoiseResult out{clip, 0};
  Rng rng(seed);
  for (double& v : out.clip.samples) {
    v += sigma * rng.Normal();
    if (policy == ClipPolicy::kClamp && (v > 1.0 || v < -1.0)) {
      v = std::clamp(v, -1.0, 1.0);
      ++out.clipped;
    }
  }
  return out;
}

EncoderConfig ApplyEncoderEnv(EncoderConfig config) {
  if (const char* v = std::getenv(kEncoderEnv); v && *v) config.encode_cmd = v;
  if (const char* v = std::getenv(kDecoderEnv); v && *v) config.decode_cmd = v;
  return config;
}

long AlignmentLag(std::span<const double> reference,
                  std::span<const double> decoded, long max_lag) {
  const size_t n = std::min(reference.size(), kAlignWindow);
  long best_lag = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (long a = 0; a <= max_lag; ++a) {
    for (long lag : {a, -a}) {
      if (a == 0 && lag != 0) continue;
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const long j = long(i) + lag;
        if (j < 0 || size_t(j) >= decoded.size()) continue;
        acc += reference[i] * decoded[size_t(j)];
      }
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
  }
  return best_lag;
}

AudioClip Transcode(const AudioClip& clip, int bitrate_kbps,
                    const EncoderConfig& encoder) {
  CheckAvailable(encoder.encode_cmd, "encoder");
  CheckAvailable(encoder.decode_cmd, "decoder");
  TempDir dir(encoder.temp_dir);
  const fs::path wav_in = dir.path() / "input.wav";
  const fs::path coded = dir.path() / "coded.m4a";
  const fs::path wav_out = dir.path() / "decoded.wav";
  WriteWavFile(wav_in.string(), clip, SampleFormat::kFloat32);
  RunShell(Substitute(encoder.encode_cmd, wav_in.string(), coded.string(),
                      bitrate_kbps),
           dir.path() / "encode.err", "encoder");
  RunShell(Substitute(encoder.decode_cmd, coded.string(), wav_out.string(),
                      bitrate_kbps),
           dir.path() / "decode.err", "decoder");
  AudioClip decoded = ReadWavFile(wav_out.string());
  if (decoded.sample_rate_hz != clip.sample_rate_hz) {
    decoded = Resample(decoded, clip.sample_rate_hz);
  }
  const long lag = AlignmentLag(clip.samples, decoded.samples,
                                std::min<long>(kMaxAlignLag, long(clip.samples.size())));
  AudioClip aligned = clip;
  for (size_t i = 0; i < aligned.samples.size(); ++i) {
    const long j = long(i) + lag;
    aligned.samples[i] =
        j >= 0 && size_t(j) < decoded.samples.size() ? decoded.samples[size_t(j)] : 0.0;
  }
  return NormalizeAmplitude(aligned).clip;
}

NoiseResult LaunderClip(const AudioClip& clip, const LaunderingSpec& spec,
                        uint64_t seed, const EncoderConfig& encoder,
                        ClipPolicy policy) {
  switch (spec.kind) {
    case LaunderKind::kNone: return {clip, 0};
    case LaunderKind::kNoise: return AddNoise(clip, spec.snr_db, seed, policy);
    case LaunderKind::kTranscode:
      return {Transcode(clip, spec.bitrate_kbps, encoder), 0};
    case LaunderKind::kBoth:
      return AddNoise(Transcode(clip, spec.bitrate_kbps, encoder), spec.snr_db,
                      seed, policy);
  }
  return {clip, 0};
}

uint64_t LaunderSeed(uint64_t run_seed, std::string_view clip_id) {
  return DeriveSeed(run_seed, "noise:" + std::string(clip_id));
}

}  // namespace cvd

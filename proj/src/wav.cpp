#include "wav.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dsp.h"
#include "error.h"

namespace ulcnet {

namespace {

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

std::vector<float> read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
    fail(ErrorCode::kFormat, path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  size_t data_off = 0, data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    char id[4];
    std::memcpy(id, raw.data() + pos, 4);
    uint32_t len = read_u32(raw.data() + pos + 4);
    pos += 8;
    if (pos + len > raw.size())
      fail(ErrorCode::kFormat, path + ": truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) fail(ErrorCode::kFormat, path + ": short fmt chunk");
      const uint8_t* f = raw.data() + pos;
      uint16_t format = read_u16(f);
      uint16_t channels = read_u16(f + 2);
      uint32_t rate = read_u32(f + 4);
      uint16_t bits = read_u16(f + 14);
      if (format != 1)
        fail(ErrorCode::kFormat,
             path + ": only PCM is supported (format tag " +
                 std::to_string(format) + ")");
      if (channels != 1)
        fail(ErrorCode::kFormat, path + ": only mono is supported (" +
                                     std::to_string(channels) + " channels)");
      if (rate != static_cast<uint32_t>(kSampleRate))
        fail(ErrorCode::kFormat,
             path + ": sample rate is " + std::to_string(rate) + " Hz, need " +
                 std::to_string(kSampleRate) + " Hz (resample first)");
      if (bits != 16)
        fail(ErrorCode::kFormat, path + ": only 16-bit samples are supported (" +
                                     std::to_string(bits) + " bits)");
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = pos;
      data_len = len;
    }
    pos += len + (len & 1);  // chunks are word-aligned
  }
  if (!have_fmt) fail(ErrorCode::kFormat, path + ": missing fmt chunk");
  if (data_off == 0) fail(ErrorCode::kFormat, path + ": missing data chunk");

  std::vector<float> samples(data_len / 2);
  for (size_t i = 0; i < samples.size(); ++i) {
    int16_t v = static_cast<int16_t>(read_u16(raw.data() + data_off + 2 * i));
    samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return samples;
}

void write_wav(const std::string& path, const std::vector<float>& samples) {
  std::string out;
  const uint32_t data_len = static_cast<uint32_t>(samples.size() * 2);
  out.reserve(44 + data_len);
  out += "RIFF";
  put_u32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, kSampleRate);
  put_u32(out, kSampleRate * 2);  // byte rate
  put_u16(out, 2);                // block align
  put_u16(out, 16);               // bits per sample
  out += "data";
  put_u32(out, data_len);
  for (float s : samples) {
    long v = std::lround(static_cast<double>(s) * 32768.0);
    if (v > 32767) v = 32767;
    if (v < -32768) v = -32768;
    put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot create " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace ulcnet

#include "weights_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.h"

namespace ulcnet {

namespace {

constexpr char kMagic[4] = {'U', 'L', 'C', 'W'};
constexpr uint16_t kVersion = 1;

class Reader {
 public:
  Reader(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::kIo, "cannot open " + path);
    buf_.assign((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  }

  const uint8_t* take(size_t n, const char* what) {
    if (pos_ + n > buf_.size())
      fail(ErrorCode::kFormat,
           path_ + ": truncated while reading " + std::string(what));
    const uint8_t* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }

  uint16_t u16(const char* what) {
    const uint8_t* p = take(2, what);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }

  uint32_t u32(const char* what) {
    const uint8_t* p = take(4, what);
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
  }

  bool done() const { return pos_ == buf_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<uint8_t> buf_;
  size_t pos_ = 0;
};

struct TensorRecord {
  std::string name;
  std::vector<int> dims;
  size_t count = 0;
  const uint8_t* payload = nullptr;
};

uint32_t read_header(Reader& r) {
  const uint8_t* magic = r.take(4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorCode::kFormat, r.path() + ": not a weight file (bad magic)");
  uint16_t version = r.u16("version");
  if (version != kVersion)
    fail(ErrorCode::kFormat, r.path() + ": unsupported version " +
                                 std::to_string(version));
  return r.u32("tensor count");
}

TensorRecord read_tensor(Reader& r) {
  TensorRecord rec;
  uint16_t name_len = r.u16("tensor name length");
  const uint8_t* name = r.take(name_len, "tensor name");
  rec.name.assign(reinterpret_cast<const char*>(name), name_len);
  uint8_t rank = *r.take(1, "tensor rank");
  if (rank == 0 || rank > 8)
    fail(ErrorCode::kFormat,
         r.path() + ": " + rec.name + " has implausible rank " +
             std::to_string(rank));
  rec.count = 1;
  for (int i = 0; i < rank; ++i) {
    uint32_t d = r.u32("tensor dims");
    rec.dims.push_back(static_cast<int>(d));
    rec.count *= d;
    if (rec.count > (1u << 30))
      fail(ErrorCode::kFormat,
           r.path() + ": " + rec.name + " has implausible size");
  }
  rec.payload = r.take(rec.count * 4, ("data of " + rec.name).c_str());
  return rec;
}

}  // namespace

void save_weights(const std::string& path, const ModelWeights& w) {
  std::string out;
  uint32_t count = 0;
  visit_tensors(w, [&](const std::string&, const std::vector<int>&,
                       const float*, size_t, double) { ++count; });
  auto put_u16 = [&](uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
  };
  auto put_u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  out.append(kMagic, 4);
  put_u16(kVersion);
  put_u32(count);
  visit_tensors(w, [&](const std::string& name, const std::vector<int>& dims,
                       const float* data, size_t n, double) {
    put_u16(static_cast<uint16_t>(name.size()));
    out += name;
    out.push_back(static_cast<char>(dims.size()));
    for (int d : dims) put_u32(static_cast<uint32_t>(d));
    out.append(reinterpret_cast<const char*>(data), n * 4);
  });

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kIo, "cannot create " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::kIo, "write failed for " + path);
}

ModelWeights load_weights(const std::string& path, const ModelConfig& cfg) {
  Reader r(path);
  uint32_t count = read_header(r);

  ModelWeights w = make_zero_weights(cfg);
  uint32_t expected = 0;
  visit_tensors(w, [&](const std::string&, const std::vector<int>&, float*,
                       size_t, double) { ++expected; });
  if (count != expected)
    fail(ErrorCode::kFormat, path + ": holds " + std::to_string(count) +
                                 " tensors, expected " +
                                 std::to_string(expected));

  visit_tensors(w, [&](const std::string& name, const std::vector<int>& dims,
                       float* data, size_t n, double) {
    TensorRecord rec = read_tensor(r);
    if (rec.name != name)
      fail(ErrorCode::kFormat,
           path + ": found tensor '" + rec.name + "' where '" + name +
               "' was expected");
    if (rec.dims != dims || rec.count != n) {
      auto shape = [](const std::vector<int>& d) {
        std::string s;
        for (size_t k = 0; k < d.size(); ++k)
          s += (k ? "x" : "") + std::to_string(d[k]);
        return s;
      };
      fail(ErrorCode::kFormat, path + ": " + name + " has shape " +
                                   shape(rec.dims) + ", expected " +
                                   shape(dims));
    }
    std::memcpy(data, rec.payload, n * 4);
  });
  if (!r.done())
    fail(ErrorCode::kFormat, path + ": trailing bytes after last tensor");
  return w;
}

std::string inspect_weights(const std::string& path) {
  Reader r(path);
  uint32_t count = read_header(r);
  std::ostringstream os;
  os << path << ": version " << kVersion << ", " << count << " tensors\n";
  uint64_t total = 0;
  for (uint32_t i = 0; i < count; ++i) {
    TensorRecord rec = read_tensor(r);
    os << "  " << rec.name << "  [";
    for (size_t k = 0; k < rec.dims.size(); ++k)
      os << (k ? "x" : "") << rec.dims[k];
    os << "]  " << rec.count << " values\n";
    total += rec.count;
  }
  if (!r.done())
    fail(ErrorCode::kFormat, path + ": trailing bytes after last tensor");
  os << "  total: " << total << " values (" << total * 4 << " bytes)\n";
  return os.str();
}

}  // namespace ulcnet

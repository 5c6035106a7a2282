#pragma once

#include <stdexcept>
#include <string>

namespace ulcnet {

// Error categories mirrored 1:1 by the C API status codes.
enum class ErrorCode {
  kInvalidArg = 1,
  kIo = 2,         // file missing / unreadable / unwritable
  kFormat = 3,     // malformed or unsupported file content
  kConfig = 4,     // inconsistent configuration or weight set
  kDimension = 5,  // tensor/buffer shape mismatch
  kContract = 6,   // API called outside its contract (e.g. wrong chunk size)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ulcnet

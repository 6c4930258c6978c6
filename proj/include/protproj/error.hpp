// Error type shared by every protproj module.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace protproj {

enum class ErrorCode {
  MalformedXml,
  NoAtomSites,
  EmptyStructure,
  UnknownAminoAcid,
  EmptyProjection,
  UnknownResidueReference,
  OutputNotWritable,
  AllInputsFailed,
  TooFewEntries,
  InvalidArgument,
  InvalidManifest,
  Io,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace protproj

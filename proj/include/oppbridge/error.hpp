#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oppbridge {

enum class Errc {
  UnterminatedQuote,
  MissingArgument,
  PathEscape,
  NoMakemakeOptions,
  DeepIncludesUnsupported,
  ExecutableNotImportable,
  NotFound,
  NoVersion,
  DanglingDependency,
  Cycle,
  InvalidValue,
  InvalidManifest,
  Io,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UnterminatedQuote: return "UnterminatedQuote";
    case Errc::MissingArgument: return "MissingArgument";
    case Errc::PathEscape: return "PathEscape";
    case Errc::NoMakemakeOptions: return "NoMakemakeOptions";
    case Errc::DeepIncludesUnsupported: return "DeepIncludesUnsupported";
    case Errc::ExecutableNotImportable: return "ExecutableNotImportable";
    case Errc::NotFound: return "NotFound";
    case Errc::NoVersion: return "NoVersion";
    case Errc::DanglingDependency: return "DanglingDependency";
    case Errc::Cycle: return "Cycle";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::InvalidManifest: return "InvalidManifest";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Exception type thrown by every fallible operation of the toolchain.
///
/// `subjects()` carries the names the error is about: the project for a
/// deep-includes refusal, the offending flag for a missing argument, or the
/// full cycle path (first element repeated at the end) for `Errc::Cycle`.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::vector<std::string> subjects = {})
      : std::runtime_error(std::move(message)),
        code_(code),
        subjects_(std::move(subjects)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& subjects() const noexcept { return subjects_; }

 private:
  Errc code_;
  std::vector<std::string> subjects_;
};

}  // namespace oppbridge

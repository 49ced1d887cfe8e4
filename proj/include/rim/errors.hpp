#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rim {

/// Failure categories raised by the numerical modules. Every one of these is a
/// physics-domain error; configuration problems use ConfigError instead.
enum class Errc {
  DimensionMismatch,
  DegenerateMetric,
  SpacelikeVelocity,
  NegativeEvenRadicand,
  NullVelocity,
  SingularTensorTerm,
  NotOneTime,
  SingularReducedHessian,
  GaugeViolation,
  SpacelikeSegment,
  NegativeRadicand,
  OutOfDomain,
  FormMismatch,
  Unsupported,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Malformed or inconsistent run configuration. Carries the offending key and
/// source line (0 when the problem is not tied to a single line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& what)
      : std::runtime_error(format(key, line, what)), key_(key), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& what) {
    std::string out = "config error";
    if (!key.empty()) out += " at key '" + key + "'";
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    return out + ": " + what;
  }

  std::string key_;
  int line_;
};

inline std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateMetric: return "DegenerateMetric";
    case Errc::SpacelikeVelocity: return "SpacelikeVelocity";
    case Errc::NegativeEvenRadicand: return "NegativeEvenRadicand";
    case Errc::NullVelocity: return "NullVelocity";
    case Errc::SingularTensorTerm: return "SingularTensorTerm";
    case Errc::NotOneTime: return "NotOneTime";
    case Errc::SingularReducedHessian: return "SingularReducedHessian";
    case Errc::GaugeViolation: return "GaugeViolation";
    case Errc::SpacelikeSegment: return "SpacelikeSegment";
    case Errc::NegativeRadicand: return "NegativeRadicand";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::FormMismatch: return "FormMismatch";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

inline void require_dim(long got, long expected, const char* what) {
  if (got != expected) {
    throw Error(Errc::DimensionMismatch, std::string(what) + ": expected dimension " +
                                             std::to_string(expected) + ", got " +
                                             std::to_string(got));
  }
}

}  // namespace rim

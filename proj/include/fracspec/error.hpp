#ifndef FRACSPEC_ERROR_HPP
#define FRACSPEC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracspec {

/// Failure categories shared by every module.
enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NoConvergence,
  NotPositiveDefinite,
  IllConditioned,
  BadAlpha,
  CoefficientBoundViolated,
  NegativeTime,
  UnderResolvedTime,
  IncommensurateShift,
  NegativeParameter,
  NotAccretive,
  QuadratureNotConverged,
  DegenerateFit,
};

inline std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::NotHermitian: return "NotHermitian";
  case ErrorKind::NoConvergence: return "NoConvergence";
  case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorKind::IllConditioned: return "IllConditioned";
  case ErrorKind::BadAlpha: return "BadAlpha";
  case ErrorKind::CoefficientBoundViolated: return "CoefficientBoundViolated";
  case ErrorKind::NegativeTime: return "NegativeTime";
  case ErrorKind::UnderResolvedTime: return "UnderResolvedTime";
  case ErrorKind::IncommensurateShift: return "IncommensurateShift";
  case ErrorKind::NegativeParameter: return "NegativeParameter";
  case ErrorKind::NotAccretive: return "NotAccretive";
  case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
  case ErrorKind::DegenerateFit: return "DegenerateFit";
  }
  return "Unknown";
}

class error : public std::runtime_error {
public:
  error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace fracspec

#endif // FRACSPEC_ERROR_HPP

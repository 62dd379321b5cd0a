#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropedwards {

enum class Errc {
  insufficient_precision,
  not_a_square,
  degenerate_params,
  undefined_delta,
  polar_point,
  unknown_coefficient_valuation,
  no_cycle,
  exceptional_parameter,
  offset_mismatch,
  underdetermined_fit,
  incomplete_fundamental_domain,
  not_smooth,
  disagreement_bug,
  parse_error,
  schema_mismatch,
  invalid_argument,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::insufficient_precision: return "InsufficientPrecision";
    case Errc::not_a_square: return "NotASquare";
    case Errc::degenerate_params: return "DegenerateParams";
    case Errc::undefined_delta: return "UndefinedDelta";
    case Errc::polar_point: return "PolarPoint";
    case Errc::unknown_coefficient_valuation: return "UnknownCoefficientValuation";
    case Errc::no_cycle: return "NoCycle";
    case Errc::exceptional_parameter: return "ExceptionalParameter";
    case Errc::offset_mismatch: return "OffsetMismatch";
    case Errc::underdetermined_fit: return "UnderdeterminedFit";
    case Errc::incomplete_fundamental_domain: return "IncompleteFundamentalDomain";
    case Errc::not_smooth: return "NotSmooth";
    case Errc::disagreement_bug: return "DisagreementBug";
    case Errc::parse_error: return "ParseError";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tropedwards

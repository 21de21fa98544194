#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagrep/io.hpp"

namespace lagrep {

inline constexpr const char* kReportSchema = "lagrep-report/1";

/// Settings shared by the report commands.
struct ReportOptions {
  int jet_bound = kDefaultJetBound;
  std::uint32_t triple_order = 2;
  unsigned rden_bound = 2;
  /// "A1", "A2" or empty for both (transform defaults to A2).
  std::string op;
  /// Density for recursion / conservation; empty means the default.
  std::string density;
  /// Matrix JSON tried as R when the built-in strategies fail.
  std::optional<Json> r_candidate;
  /// Rational point for the signature of G.
  std::vector<std::string> point{"0", "1", "3"};
  /// Compare with the fixture's "expected" block when present.
  bool compare_expected = false;
};

/// Deterministic JSON report plus a short human summary.
struct Report {
  Json json;
  bool pass = false;
  std::vector<std::string> summary;
};

/// Each takes a system (or operator) JSON document. Malformed input throws
/// InputError, exceeded bounds BoundError; certification failures are
/// reported through pass = false.
Report transform_report(const Json& input, const ReportOptions& o = {});
Report derive_report(const Json& input, const ReportOptions& o = {});
Report check_report(const Json& input, const ReportOptions& o = {});
Report curvature_report(const Json& input, const ReportOptions& o = {});
Report recursion_report(const Json& input, const ReportOptions& o = {});
Report conservation_report(const Json& input, const ReportOptions& o = {});

}  // namespace lagrep

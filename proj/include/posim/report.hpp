#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace posim {

// Assembled result of one CLI comparison: the headline value plus whatever
// context the measure produced. The `has_*` flags gate the optional blocks;
// emission order is fixed so identical inputs print byte-identical reports.
struct SimilarityReport {
  std::string measure;  // key of the headline line, e.g. "nmi"
  double value = 0;
  bool integer_valued = false;  // distances print without decimals

  bool has_information = false;
  double i_total = 0;
  double h_kappa = 0;
  double h_mu = 0;

  bool has_combinatorial_null = false;
  double expected_I = 0;
  long long null_terms = 0;

  bool has_empirical_null = false;
  double null_mean = 0;
  double null_stderr = 0;
  int null_samples = 0;
  std::string null_model;
  long long links = 0;

  bool has_extension_count = false;
  long long extensions_enumerated = 0;

  bool has_self_defect = false;
  double self_defect = 0;  // 1 - naive(kappa, kappa), the naive measure's identity gap
};

namespace detail {

inline std::string fmt_f12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

}  // namespace detail

inline void write_report_kv(std::ostream& os, const SimilarityReport& r) {
  if (r.integer_valued)
    os << r.measure << '=' << static_cast<long long>(r.value) << '\n';
  else
    os << r.measure << '=' << detail::fmt_f12(r.value) << '\n';
  if (r.has_information) {
    os << "i=" << detail::fmt_f12(r.i_total) << '\n';
    os << "h_kappa=" << detail::fmt_f12(r.h_kappa) << '\n';
    os << "h_mu=" << detail::fmt_f12(r.h_mu) << '\n';
  }
  if (r.has_combinatorial_null) {
    os << "expected_i=" << detail::fmt_f12(r.expected_I) << '\n';
    os << "null_terms=" << r.null_terms << '\n';
  }
  if (r.has_empirical_null) {
    os << "null_mean=" << detail::fmt_f12(r.null_mean) << '\n';
    os << "null_stderr=" << detail::fmt_f12(r.null_stderr) << '\n';
    os << "null_samples=" << r.null_samples << '\n';
    os << "null_model=" << r.null_model << '\n';
    os << "links=" << r.links << '\n';
  }
  if (r.has_extension_count) os << "extensions=" << r.extensions_enumerated << '\n';
  if (r.has_self_defect) os << "self_defect=" << detail::fmt_f12(r.self_defect) << '\n';
}

}  // namespace posim

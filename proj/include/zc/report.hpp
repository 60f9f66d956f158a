#pragma once
// Rectangular result tables and the artifact writers shared by the CLI and
// the acceptance harness. All numeric cells must be produced through
// util::fmt_double so identical runs serialize to identical bytes.

#include <string>
#include <vector>

#include <json.hpp>

#include "zc/inject.hpp"
#include "zc/spectrum.hpp"

namespace zc::report {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Header line plus one line per row, comma-separated, '\n' terminated.
  std::string to_csv() const;
  // JSON array of row objects; cells that parse as finite numbers are written
  // unquoted (they come from fmt_double, so they are valid JSON literals).
  std::string to_json() const;
  // Dispatch on format name "csv" or "json".
  std::string render(const std::string& format) const;
};

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

const char* model_name(spectrum::Model m);

// Long-form spectrum rows: model, beta_re, beta_im, n, replica, log_mean.
Table spectrum_table(const std::vector<spectrum::SpectrumEstimate>& ests);

// Per-beta summary: slope, bootstrap CI half-width, intercept.
nlohmann::json spectrum_summary(const std::vector<spectrum::SpectrumEstimate>& ests);

// Long-form blow-up rows: replica, k, y_abs, running_max. `k_lo` drops the
// ladder head when the user asked for a sub-range; running_max stays the
// normalized running maximum that the exceedance thresholds refer to.
Table inject_table(const std::vector<inject::BlowupSeries>& series, int k_lo);

// Exceedance table rows: threshold, hits, total, fraction, wilson_lo, wilson_hi.
Table exceedance_table(const std::vector<inject::ExceedanceRow>& rows);

}  // namespace zc::report

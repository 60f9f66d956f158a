#include "zc/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zc/util.hpp"

namespace zc::report {

namespace {

// True when the cell is a complete finite-number literal, i.e. safe to embed
// in JSON unquoted.
bool is_json_number(const std::string& s) {
  if (s.empty()) return false;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last && std::isfinite(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw std::invalid_argument("Table: row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

std::string Table::to_json() const {
  // Hand-rolled so numeric cells keep the exact fmt_double spelling.
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != columns.size())
      throw std::invalid_argument("Table: row width does not match header");
    out += r ? ",\n {" : "\n {";
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ", ";
      out += '"';
      out += json_escape(columns[c]);
      out += "\": ";
      if (is_json_number(row[c])) {
        out += row[c];
      } else {
        out += '"';
        out += json_escape(row[c]);
        out += '"';
      }
    }
    out += '}';
  }
  out += "\n]\n";
  return out;
}

std::string Table::render(const std::string& format) const {
  if (format == "csv") return to_csv();
  if (format == "json") return to_json();
  throw std::invalid_argument("unknown table format: " + format);
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!os) throw std::runtime_error("short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* model_name(spectrum::Model m) {
  switch (m) {
    case spectrum::Model::euler: return "euler";
    case spectrum::Model::disc: return "disc";
    case spectrum::Model::rem: return "rem";
  }
  return "?";
}

Table spectrum_table(const std::vector<spectrum::SpectrumEstimate>& ests) {
  Table t;
  t.columns = {"model", "beta_re", "beta_im", "n", "replica", "log_mean"};
  for (const auto& e : ests) {
    for (std::size_t si = 0; si < e.scales.size(); ++si) {
      for (std::size_t rep = 0; rep < e.log_integrals[si].size(); ++rep) {
        t.rows.push_back({model_name(e.model), util::fmt_double(e.beta.real()),
                          util::fmt_double(e.beta.imag()), std::to_string(e.scales[si]),
                          std::to_string(rep), util::fmt_double(e.log_integrals[si][rep])});
      }
    }
  }
  return t;
}

nlohmann::json spectrum_summary(const std::vector<spectrum::SpectrumEstimate>& ests) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : ests) {
    nlohmann::json j;
    j["model"] = model_name(e.model);
    j["beta_re"] = e.beta.real();
    j["beta_im"] = e.beta.imag();
    j["beta_reduced"] = e.beta_reduced;
    j["scales"] = e.scales;
    j["replicas"] = e.replicas;
    j["slope"] = e.slope;
    j["intercept"] = e.intercept;
    j["ci_halfwidth"] = e.ci_halfwidth;
    j["predicted"] = spectrum::theoretical_f(e.beta);
    j["warnings"] = e.warnings;
    arr.push_back(std::move(j));
  }
  return arr;
}

Table inject_table(const std::vector<inject::BlowupSeries>& series, int k_lo) {
  Table t;
  t.columns = {"replica", "k", "y_abs", "running_max"};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.stage.size(); ++i) {
      if (s.stage[i] < k_lo) continue;
      t.rows.push_back({std::to_string(s.replica), std::to_string(s.stage[i]),
                        util::fmt_double(s.y_raw[i]), util::fmt_double(s.running_max_norm[i])});
    }
  }
  return t;
}

Table exceedance_table(const std::vector<inject::ExceedanceRow>& rows) {
  Table t;
  t.columns = {"threshold", "hits", "total", "fraction", "wilson_lo", "wilson_hi"};
  for (const auto& r : rows) {
    t.rows.push_back({util::fmt_double(r.threshold), std::to_string(r.hits),
                      std::to_string(r.total), util::fmt_double(r.fraction),
                      util::fmt_double(r.wilson_lo), util::fmt_double(r.wilson_hi)});
  }
  return t;
}

}  // namespace zc::report

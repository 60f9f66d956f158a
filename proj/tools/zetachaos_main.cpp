// zetachaos: command-line front end for the random zeta field / disc chaos
// laboratory. Subcommands sample fields, estimate integral-means spectra,
// probe the branching ladders and run the self-check suites. Exit codes:
// 0 success, 1 check failure, 2 usage or configuration error, 3 capacity.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zc/discchaos.hpp"
#include "zc/eulerfield.hpp"
#include "zc/inject.hpp"
#include "zc/primes.hpp"
#include "zc/quadrature.hpp"
#include "zc/report.hpp"
#include "zc/runconfig.hpp"
#include "zc/specfun.hpp"
#include "zc/spectrum.hpp"
#include "zc/stats.hpp"
#include "zc/util.hpp"
#include "zc/version.hpp"
#include "zc/workers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using zc::util::fmt_double;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  std::string out_dir = ".";
  std::string format = "csv";
};

// ---------------------------------------------------------------------------
// small parsers and path helpers

double parse_full_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

// Accepts "a", "bi", "a+bi", "a-bi", with "i"/"+i"/"-i" meaning unit imaginary.
std::complex<double> parse_complex_token(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c) != 0; }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s.back() != 'i') return {parse_full_double(s), 0.0};
  std::string body = s.substr(0, s.size() - 1);
  // Split at the last +/- that is not an exponent sign and not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
      split = i;
  }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_full_double(t);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_full_double(body.substr(0, split)), imag_of(body.substr(split))};
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

std::vector<std::complex<double>> parse_betas(const std::string& s) {
  std::vector<std::complex<double>> out;
  for (const auto& tok : split_on(s, ',')) out.push_back(parse_complex_token(tok));
  if (out.empty()) throw std::invalid_argument("no beta values in '" + s + "'");
  return out;
}

int parse_full_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

// Accepts "4..12" (inclusive range) or "4,6,8" (explicit list).
std::vector<int> parse_int_range(const std::string& s) {
  std::vector<int> out;
  const std::size_t dots = s.find("..");
  if (dots != std::string::npos) {
    const int lo = parse_full_int(s.substr(0, dots));
    const int hi = parse_full_int(s.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("descending range '" + s + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
  } else {
    for (const auto& tok : split_on(s, ',')) out.push_back(parse_full_int(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty range '" + s + "'");
  return out;
}

std::string join_path(const std::string& out_dir, const std::string& name) {
  if (!name.empty() && name.front() == '/') return name;
  return (fs::path(out_dir) / name).string();
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

zc::field::WeightModel parse_weights(const std::string& s) {
  if (s == "uniform") return zc::field::WeightModel::uniform_circle;
  if (s == "gaussian") return zc::field::WeightModel::gaussian;
  throw std::invalid_argument("unknown weight model '" + s + "'");
}

zc::spectrum::Model parse_model(const std::string& s, bool allow_rem) {
  if (s == "euler") return zc::spectrum::Model::euler;
  if (s == "disc") return zc::spectrum::Model::disc;
  if (allow_rem && s == "rem") return zc::spectrum::Model::rem;
  throw std::invalid_argument("unknown model '" + s + "'");
}

// ---------------------------------------------------------------------------
// verify checks

struct Check {
  std::string suite;
  std::string name;
  std::string kind;  // "identity" or "statistical"
  std::string cmp;   // "<=" or ">="
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

Check make_check(std::string suite, std::string name, std::string kind,
                 std::string cmp, double value, double bound) {
  Check c{std::move(suite), std::move(name), std::move(kind), std::move(cmp),
          value, bound, false};
  c.pass = (c.cmp == "<=") ? (value <= bound) : (value >= bound);
  return c;
}

double e1_oracle(double x) {
  return std::exp(-x) * zc::quad::integrate(
                            [x](double s) { return std::exp(-s) / (x + s); },
                            0.0, 45.0, 1e-15);
}

void verify_specfun(std::vector<Check>& checks) {
  using namespace zc::specfun;
  const std::string su = "specfun";

  double e1_err = 0.0;
  for (const double x : {1e-6, 1e-3, 0.1, 1.0, 5.0, 10.0, 50.0, 100.0})
    e1_err = std::max(e1_err, std::abs(expint_e1(x) - e1_oracle(x)));
  checks.push_back(make_check(su, "e1_max_abs_err", "identity", "<=", e1_err, 1e-12));

  double tel_err = 0.0;
  const std::pair<int, int> spans[] = {{0, 8}, {0, 40}, {3, 17}, {12, 40}};
  for (const double sigma : {0.75, 0.5 + std::ldexp(1.0, -8), 0.5 + std::ldexp(1.0, -20)}) {
    const double a = 2.0 * sigma - 1.0;
    for (const auto& [k1, k2] : spans) {
      zc::util::KahanAcc acc;
      for (int k = k1 + 1; k <= k2; ++k) acc.add(block_variance_v2(k, sigma));
      const double closed =
          0.5 * (expint_e1(a * std::ldexp(1.0, k1)) - expint_e1(a * std::ldexp(1.0, k2)));
      tel_err = std::max(tel_err, std::abs(acc.value() - closed));
    }
  }
  checks.push_back(make_check(su, "telescope_max_resid", "identity", "<=", tel_err, 1e-12));

  const double gam_ref[] = {1.7724538509055160, 1.0, 1.0, 2.0};
  const double gam_m[] = {0.5, 1.0, 2.0, 3.0};
  double gam_err = 0.0;
  for (int i = 0; i < 4; ++i)
    gam_err = std::max(gam_err, std::abs(lower_gamma(gam_m[i], 50.0) - gam_ref[i]));
  checks.push_back(make_check(su, "gamma_limit_max_err", "identity", "<=", gam_err, 1e-8));

  double rho_err = 0.0;
  const std::pair<int, double> rho_pts[] = {
      {2, 0.6}, {5, 0.51}, {9, 0.5 + std::ldexp(1.0, -10)}};
  for (const auto& [k, sigma] : rho_pts)
    rho_err = std::max(rho_err, std::abs(surrogate_block_covariance(k, sigma, 0.0) -
                                         block_variance_v2(k, sigma)));
  checks.push_back(make_check(su, "rho_zero_max_err", "identity", "<=", rho_err, 1e-10));

  auto rms = [](int k, double sigma) {
    double acc = 0.0;
    int n = 0;
    for (double d = 0.8; d <= 1.2001; d += 0.1) {
      const double v = surrogate_block_covariance(k, sigma, d);
      acc += v * v;
      ++n;
    }
    return std::sqrt(acc / n);
  };
  double ratio_max = 0.0;
  for (int k = 5; k <= 8; ++k)
    ratio_max = std::max(ratio_max, rms(k + 1, 0.51) / rms(k, 0.51));
  checks.push_back(make_check(su, "cos_decay_ratio_max", "identity", "<=", ratio_max, 0.6));
}

void verify_primes(std::vector<Check>& checks) {
  using namespace zc::primes;
  const std::string su = "primes";

  const bool sieve_ok = sieve_upto(20000) == trial_division_upto(20000);
  checks.push_back(make_check(su, "sieve_match", "identity", ">=", sieve_ok ? 1.0 : 0.0, 1.0));

  std::vector<std::uint32_t> flat;
  for (int k = 0; k <= kMaxBlock; ++k) {
    const auto& b = block(k);
    flat.insert(flat.end(), b.p.begin(), b.p.end());
  }
  const bool part_ok = flat == all_primes();
  checks.push_back(make_check(su, "block_partition", "identity", ">=", part_ok ? 1.0 : 0.0, 1.0));

  const double sigma = 0.5 + std::ldexp(1.0, -8);
  double resid[5] = {0, 0, 0, 0, 0};
  for (int k = 1; k <= 4; ++k) resid[k] = verify_pnt_block(k, sigma).abs_err;
  const bool dec_ok = resid[2] > resid[3] && resid[3] > resid[4];
  checks.push_back(make_check(su, "pnt_block_decrease", "identity", ">=", dec_ok ? 1.0 : 0.0, 1.0));

  const double a = 2.0 * sigma - 1.0;
  double cum[4] = {0, 0, 0, 0};
  for (int k1 = 1; k1 <= 3; ++k1) {
    const double closed =
        0.5 * (zc::specfun::expint_e1(a * std::ldexp(1.0, k1)) -
               zc::specfun::expint_e1(a * 16.0));
    cum[k1] = std::abs(0.5 * prime_power_sum(k1, 4, sigma) - closed);
  }
  const bool cum_ok = cum[1] > cum[2] && cum[2] > cum[3];
  checks.push_back(make_check(su, "pnt_cumulative_decrease", "identity", ">=", cum_ok ? 1.0 : 0.0, 1.0));

  const double v2_4 = zc::specfun::block_variance_v2(4, sigma);
  checks.push_back(make_check(su, "pnt_deepest_rel", "identity", "<=", resid[4] / v2_4, 0.01));

  const double cz = std::abs(prime_cos_sum(1, 2, 0.6, 0.0) - prime_power_sum(1, 2, 0.6));
  checks.push_back(make_check(su, "cos_sum_zero_match", "identity", "<=", cz, 0.0));
}

void verify_field(std::vector<Check>& checks, std::uint64_t seed) {
  using namespace zc::field;
  const std::string su = "field";

  const struct {
    std::uint64_t p;
    double sigma, lambda;
  } lap[] = {{3, 0.75, 1.0}, {11, 0.6, 0.5}, {101, 0.75, 2.0}};
  for (const auto& c : lap) {
    const auto rep = laplace_check(c.p, c.sigma, c.lambda, 3000, seed);
    std::ostringstream name;
    name << "laplace_z_p" << c.p;
    checks.push_back(make_check(su, name.str(), "statistical", "<=",
                                std::abs(rep.z_score), 3.0));
  }

  {
    std::vector<double> v2;
    for (int rep = 0; rep < 400; ++rep) {
      const auto b = sample_exact_block(2, 0.6, 17, seed, rep);
      v2.push_back(b.values[8] * b.values[8]);
    }
    const auto ms = zc::stats::mean_se(v2);
    const double target = 0.5 * zc::primes::prime_power_sum(1, 2, 0.6);
    checks.push_back(make_check(su, "exact_block2_var_z", "statistical", "<=",
                                std::abs((ms.mean - target) / ms.se), 3.0));
  }

  {
    std::vector<double> v2;
    for (int rep = 0; rep < 600; ++rep) {
      const auto b = sample_surrogate_block(5, 0.51, 32, seed, rep);
      v2.push_back(b.values[7] * b.values[7]);
    }
    const auto ms = zc::stats::mean_se(v2);
    const double target = zc::specfun::block_variance_v2(5, 0.51);
    checks.push_back(make_check(su, "surrogate_block5_var_z", "statistical", "<=",
                                std::abs((ms.mean - target) / ms.se), 3.0));
  }

  {
    // Hybrid boundary: empirical covariance of the deepest exact block against
    // the integral form the surrogate blocks use at the same scale.
    const double sigma = 0.52;
    const int m = 33;
    const int reps = 600;
    std::vector<std::vector<double>> draws(reps);
    for (int rep = 0; rep < reps; ++rep)
      draws[rep] = sample_exact_block(3, sigma, m, seed, rep).values;
    double max_diff = 0.0;
    double max_se = 0.0;
    for (const int lag : {0, 8, 16}) {
      std::vector<double> prod(reps);
      for (int rep = 0; rep < reps; ++rep) prod[rep] = draws[rep][0] * draws[rep][lag];
      const auto ms = zc::stats::mean_se(prod);
      const double delta = static_cast<double>(lag) / (m - 1);
      const double oracle = zc::specfun::surrogate_block_covariance(3, sigma, delta);
      max_diff = std::max(max_diff, std::abs(ms.mean - oracle));
      max_se = std::max(max_se, ms.se);
    }
    checks.push_back(make_check(su, "hybrid_boundary_max_diff", "statistical", "<=",
                                max_diff, std::max(3.0 * max_se, 0.03)));
  }
}

void verify_disc(std::vector<Check>& checks, std::uint64_t seed,
                 const GlobalOpts& g, bool write_reports) {
  using namespace zc::disc;
  const std::string su = "disc";

  {
    double pars_err = 0.0, tv_err = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const auto s = sample_disc_field(0.97, 2048, seed, rep);
      double sq = 0.0;
      for (const double v : s.values) sq += v * v;
      sq /= static_cast<double>(s.values.size());
      pars_err = std::max(pars_err, std::abs(sq - s.coeff_quadratic));
      zc::util::KahanAcc acc;
      for (int mm = 1; mm <= s.n_modes; ++mm)
        acc.add(std::pow(0.97, 2 * mm) / (2.0 * mm));
      tv_err = std::max(tv_err, std::abs(s.truncated_var - acc.value()));
    }
    checks.push_back(make_check(su, "parseval_max_err", "identity", "<=", pars_err, 1e-10));
    checks.push_back(make_check(su, "truncvar_max_err", "identity", "<=", tv_err, 1e-13));
  }

  {
    const double c1 = std::abs(disc_covariance({0.5, 0.0}, {-0.5, 0.0}) -
                               (-0.5 * std::log(1.25)));
    const double c2 = std::abs(disc_covariance({0.7, 0.0}, {0.7, 0.0}) -
                               0.5 * std::log(1.0 / (1.0 - 0.49)));
    checks.push_back(make_check(su, "cov_closed_form_err", "identity", "<=",
                                std::max(c1, c2), 1e-12));
  }

  {
    const double r = 1.0 - std::exp(-8.0);
    const double rel = std::abs(bp_ratio_var_closed_form(r) - 0.125) / 0.125;
    checks.push_back(make_check(su, "bp_var_deep_rel_err", "identity", "<=", rel, 0.02));
  }

  zc::report::Table cov_table;
  cov_table.columns = {"lag", "delta_theta", "empirical", "closed_form", "se", "z"};
  {
    const double r = 0.9;
    const std::size_t m = 512;
    const int reps = 400;
    std::vector<std::vector<double>> draws(reps);
    for (int rep = 0; rep < reps; ++rep)
      draws[rep] = sample_disc_field(r, m, seed, rep).values;
    double max_z = 0.0;
    for (const int lag : {0, 8, 64, 256}) {
      std::vector<double> prod(reps);
      for (int rep = 0; rep < reps; ++rep) prod[rep] = draws[rep][0] * draws[rep][lag];
      const auto ms = zc::stats::mean_se(prod);
      const double phi = 2.0 * M_PI * lag / static_cast<double>(m);
      const std::complex<double> z2 = std::polar(r, phi);
      const double closed = disc_covariance({r, 0.0}, z2);
      const double z = (ms.mean - closed) / ms.se;
      max_z = std::max(max_z, std::abs(z));
      cov_table.rows.push_back({fmt_double(lag), fmt_double(phi), fmt_double(ms.mean),
                                fmt_double(closed), fmt_double(ms.se), fmt_double(z)});
    }
    checks.push_back(make_check(su, "cov_max_z", "statistical", "<=", max_z, 3.0));
  }

  zc::report::Table mass_table;
  mass_table.columns = {"r", "beta", "replicas", "mean_mass", "se", "z"};
  {
    const double r = 1.0 - std::exp(-4.0);
    const int reps = 300;
    std::vector<double> masses(reps);
    for (int rep = 0; rep < reps; ++rep)
      masses[rep] = gmc_mass(sample_disc_field(r, 2048, seed, rep), 1.0);
    const auto ms = zc::stats::mean_se(masses);
    const double z = (ms.mean - 1.0) / ms.se;
    mass_table.rows.push_back({fmt_double(r), fmt_double(1.0), fmt_double(reps),
                               fmt_double(ms.mean), fmt_double(ms.se), fmt_double(z)});
    checks.push_back(make_check(su, "gmc_mean_z", "statistical", "<=", std::abs(z), 3.0));

    double small_dev = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
      const double mass = gmc_mass(sample_disc_field(r, 2048, seed, rep), 1e-3);
      small_dev = std::max(small_dev, std::abs(mass - 1.0));
    }
    checks.push_back(make_check(su, "smallbeta_mass_max_dev", "identity", "<=",
                                small_dev, 1e-2));
  }

  zc::report::Table max_table;
  max_table.columns = {"n", "replicas", "median_over_n", "frac_within_1_2"};
  {
    const struct {
      int n;
      std::size_t m;
      int reps;
    } rows[] = {{4, 4096, 300}, {6, 16384, 150}};
    double min_frac = 1.0;
    for (const auto& rw : rows) {
      const double r = 1.0 - std::exp(-rw.n);
      std::vector<double> maxima(rw.reps);
      for (int rep = 0; rep < rw.reps; ++rep)
        maxima[rep] = max_statistic(sample_disc_field(r, rw.m, seed, rep));
      std::sort(maxima.begin(), maxima.end());
      const double med = zc::stats::percentile_sorted(maxima, 0.5) / rw.n;
      int hits = 0;
      for (const double v : maxima)
        if (v / rw.n <= 1.2) ++hits;
      const double frac = static_cast<double>(hits) / rw.reps;
      min_frac = std::min(min_frac, frac);
      max_table.rows.push_back({fmt_double(rw.n), fmt_double(rw.reps),
                                fmt_double(med), fmt_double(frac)});
    }
    checks.push_back(make_check(su, "max_frac_within", "statistical", ">=", min_frac, 0.93));
  }

  if (write_reports) {
    fs::create_directories(g.out_dir);
    zc::report::write_text_file(join_path(g.out_dir, "disc_covariance." + g.format),
                                cov_table.render(g.format));
    zc::report::write_text_file(join_path(g.out_dir, "disc_mass." + g.format),
                                mass_table.render(g.format));
    zc::report::write_text_file(join_path(g.out_dir, "disc_max." + g.format),
                                max_table.render(g.format));
  }
}

void verify_spectrum(std::vector<Check>& checks, std::uint64_t seed, int workers) {
  using namespace zc::spectrum;
  const std::string su = "spectrum";

  {
    double f_err = 0.0;
    f_err = std::max(f_err, std::abs(theoretical_f({1.0, 0.0}) - 0.25));
    f_err = std::max(f_err, std::abs(theoretical_f({3.0, 0.0}) - 2.0));
    f_err = std::max(f_err, std::abs(theoretical_f({0.0, 2.0}) - 1.0));
    f_err = std::max(f_err, std::abs(theoretical_f({3.0, 4.0}) - 4.0));
    checks.push_back(make_check(su, "f_values_max_err", "identity", "<=", f_err, 1e-15));
  }

  {
    const std::vector<double> con(64, 1.7);
    const double li = log_integral(con, 2.0, true);
    const double err1 = std::abs(li - (2.0 * 1.7 + std::log(2.0 * M_PI)));
    const std::vector<double> zero(16, 0.4);
    const double err2 = std::abs(log_integral(zero, 0.0, false) - 0.0 -
                                 std::log(1.0));
    checks.push_back(make_check(su, "log_integral_const_err", "identity", "<=",
                                std::max(err1, err2), 1e-12));
  }

  {
    SpectrumOptions o1;
    o1.workers = 1;
    SpectrumOptions o3;
    o3.workers = std::max(3, workers);
    const std::vector<int> scales = {4, 5, 6};
    const auto e1 = estimate_spectrum(Model::disc, {1.0, 0.0}, scales, 10, seed, o1);
    const auto e3 = estimate_spectrum(Model::disc, {1.0, 0.0}, scales, 10, seed, o3);
    double diff = std::abs(e1.slope - e3.slope) + std::abs(e1.ci_halfwidth - e3.ci_halfwidth);
    for (std::size_t i = 0; i < e1.log_integrals.size(); ++i)
      for (std::size_t j = 0; j < e1.log_integrals[i].size(); ++j)
        diff = std::max(diff, std::abs(e1.log_integrals[i][j] - e3.log_integrals[i][j]));
    checks.push_back(make_check(su, "worker_invariance", "identity", "<=", diff, 0.0));
  }

  {
    double rem_err = 0.0;
    for (int rep = 0; rep < 3; ++rep) {
      const double lp = rem_log_partition(1 << 12, 1.5, seed, rep);
      const double fe = rem_free_energy(1 << 12, 1.5, seed, rep);
      rem_err = std::max(rem_err, std::abs(fe - lp / std::log(static_cast<double>(1 << 12))));
    }
    checks.push_back(make_check(su, "rem_free_energy_identity", "identity", "<=",
                                rem_err, 1e-15));
  }

  {
    double min_gap = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto s = zc::disc::sample_disc_field(0.95, 1024, seed, rep);
      double mean = 0.0;
      for (const double v : s.values) mean += v;
      mean /= static_cast<double>(s.values.size());
      for (const double beta : {0.5, 1.0, 2.0}) {
        const double li = log_integral(s.values, beta, true);
        min_gap = std::min(min_gap, li - (beta * mean + std::log(2.0 * M_PI)));
      }
    }
    checks.push_back(make_check(su, "jensen_min_gap", "identity", ">=", min_gap, -1e-10));
  }

  {
    std::vector<double> fes(20);
    for (int rep = 0; rep < 20; ++rep)
      fes[rep] = rem_free_energy(1ull << 16, 1.0, seed, rep);
    const auto ms = zc::stats::mean_se(fes);
    checks.push_back(make_check(su, "rem_mean_z", "statistical", "<=",
                                std::abs((ms.mean - 0.25) / ms.se), 3.0));
  }

  {
    SpectrumOptions opts;
    opts.workers = workers;
    const std::vector<int> scales = {4, 5, 6, 7, 8, 9};
    const auto est = estimate_spectrum(Model::disc, {1.0, 0.0}, scales, 12, seed, opts);
    checks.push_back(make_check(su, "disc_slope_band", "statistical", "<=",
                                std::abs(est.slope - 0.25), 0.15));
  }
}

void verify_inject(std::vector<Check>& checks, std::uint64_t seed) {
  using namespace zc::inject;
  const std::string su = "inject";

  {
    const double base = 0.25 * (zc::specfun::lower_gamma(2.0, 8.0) -
                                zc::specfun::lower_gamma(2.0, 0.25));
    double err = 0.0;
    for (const int j : {2, 5, 20, 100})
      err = std::max(err, std::abs(euler_stage_second_moment_surrogate(j) - base));
    checks.push_back(make_check(su, "euler_moment_scale_invariance", "identity", "<=",
                                err, 1e-12));
  }

  {
    const auto ser = bp_series_euler(12, seed, 0);
    double err = 0.0;
    for (int j = 2; j <= 12; ++j)
      err = std::max(err, std::abs(ser.second_moment[j - 1] -
                                   euler_stage_second_moment_surrogate(j)));
    checks.push_back(make_check(su, "euler_series_moment_match", "identity", "<=", err, 1e-15));
  }

  {
    const auto ser = bp_series_disc(8, seed, 0);
    double err = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double r = 1.0 - std::ldexp(1.0, -k);
      err = std::max(err, std::abs(ser.second_moment[k - 1] - 1.0 / ((1.0 + r) * (1.0 + r))));
    }
    checks.push_back(make_check(su, "disc_moment_closed_form", "identity", "<=", err, 1e-14));
    const double deep_rel =
        std::abs(0.5 * ser.second_moment[7] - 0.125) / 0.125;
    checks.push_back(make_check(su, "disc_deep_limit_rel_err", "identity", "<=",
                                deep_rel, 0.02));
  }

  {
    std::vector<double> y2(300);
    double target = 0.0;
    for (int rep = 0; rep < 300; ++rep) {
      const auto ser = bp_series_euler(3, seed, rep, 2);
      y2[rep] = ser.y_re[0] * ser.y_re[0] + ser.y_im[0] * ser.y_im[0];
      target = ser.second_moment[0];
    }
    const auto ms = zc::stats::mean_se(y2);
    checks.push_back(make_check(su, "euler_y1_var_z", "statistical", "<=",
                                std::abs((ms.mean - target) / ms.se), 3.0));
  }

  {
    std::vector<double> y2(400);
    for (int rep = 0; rep < 400; ++rep) {
      const auto ser = bp_series_disc(8, seed, rep);
      y2[rep] = ser.y_norm[7] * ser.y_norm[7];
    }
    const auto ms = zc::stats::mean_se(y2);
    checks.push_back(make_check(su, "disc_ynorm_var_z", "statistical", "<=",
                                std::abs((ms.mean - 1.0) / ms.se), 3.0));
  }

  {
    const int reps = 1500;
    std::vector<double> finals(reps);
    for (int rep = 0; rep < reps; ++rep)
      finals[rep] = bp_series_disc(20, seed, rep).running_max_norm.back();
    const auto rows = detect_blowup(finals, {0.5, 1.0, 2.0});
    double min_gap = 1e300;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      min_gap = std::min(min_gap, rows[i].fraction - rows[i + 1].fraction);
    checks.push_back(make_check(su, "exceed_decreasing", "statistical", ">=",
                                min_gap, 1e-12));
    checks.push_back(make_check(su, "exceed_tail_positive", "statistical", ">=",
                                rows.back().fraction, 1e-9));
  }
}

int report_checks(const std::vector<Check>& checks, const GlobalOpts& g,
                  const std::string& suite_label) {
  zc::report::Table t;
  t.columns = {"suite", "name", "kind", "cmp", "value", "bound", "pass"};
  int identity_fail = 0;
  int stat_fail = 0;
  int identity_total = 0;
  int stat_total = 0;
  for (const auto& c : checks) {
    t.rows.push_back({c.suite, c.name, c.kind, c.cmp, fmt_double(c.value),
                      fmt_double(c.bound), c.pass ? "pass" : "fail"});
    if (c.kind == "identity") {
      ++identity_total;
      if (!c.pass) ++identity_fail;
    } else {
      ++stat_total;
      if (!c.pass) ++stat_fail;
    }
    std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << std::left << std::setw(40)
              << (c.suite + "/" + c.name) << " " << c.kind << " value="
              << fmt_double(c.value) << " " << c.cmp << " " << fmt_double(c.bound)
              << "\n";
  }
  fs::create_directories(g.out_dir);
  const std::string path =
      join_path(g.out_dir, "verify_" + suite_label + "." + g.format);
  zc::report::write_text_file(path, t.render(g.format));

  // One statistical miss per run is within the multiple-testing allowance;
  // identity checks must all hold.
  const bool ok = identity_fail == 0 && stat_fail <= 1;
  std::cout << "RESULT: " << (ok ? "PASS" : "FAIL") << " (" << checks.size()
            << " checks: " << identity_total << " identity, " << stat_total
            << " statistical; identity failures " << identity_fail
            << ", statistical failures " << stat_fail << ", allowance 1)\n"
            << "report: " << path << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// subcommand runners

int run_field_sample(const GlobalOpts& g, int sigma_exp, std::size_t grid, int k0,
                     int tail_blocks, const std::string& weights, std::uint64_t replica,
                     const std::string& out) {
  if (!g.seed_set) {
    std::cerr << "error: --seed is required for field sample\n";
    return 2;
  }
  if (sigma_exp < 1 || sigma_exp > 60)
    throw std::invalid_argument("--sigma-exp must be in [1, 60]");
  const auto t0 = std::chrono::steady_clock::now();
  const double sigma = 0.5 + std::ldexp(1.0, -(sigma_exp + 1));
  const auto sample = zc::field::sample_field(sigma, grid, g.seed, replica, k0, -1,
                                              tail_blocks, parse_weights(weights));
  const auto hs = zc::field::h_grid(grid);

  zc::report::Table t;
  t.columns = {"h", "x"};
  for (std::size_t i = 0; i < hs.size(); ++i)
    t.rows.push_back({fmt_double(hs[i]), fmt_double(sample.values[i])});

  const std::string out_path = join_path(g.out_dir, out);
  ensure_parent_dir(out_path);
  zc::report::write_text_file(out_path, t.render(g.format));

  zc::config::RunConfig cfg;
  cfg.params = {{"command", "field sample"},
                {"sigma_exp", sigma_exp},
                {"sigma", sigma},
                {"grid", grid},
                {"k0", k0},
                {"k_top", sample.k_top},
                {"tail_blocks", tail_blocks},
                {"weights", weights},
                {"seed", g.seed},
                {"replica", replica},
                {"workers", g.workers},
                {"format", g.format},
                {"out", out}};
  const std::string sidecar = out_path + ".config.json";
  zc::report::write_text_file(sidecar, cfg.canonical() + "\n");
  const double wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  const std::string manifest =
      zc::config::write_manifest(cfg, out_path, wall_ms, {out_path, sidecar});
  std::cout << "wrote " << out_path << " (" << t.rows.size() << " rows), " << sidecar
            << ", " << manifest << "\n";
  return 0;
}

int run_disc_sample(const GlobalOpts& g, int n, std::size_t grid, double mode_tol,
                    std::uint64_t replica, const std::string& out) {
  if (!g.seed_set) {
    std::cerr << "error: --seed is required for disc sample\n";
    return 2;
  }
  if (n < 1 || n > 40) throw std::invalid_argument("--n must be in [1, 40]");
  const auto t0 = std::chrono::steady_clock::now();
  const double r = 1.0 - std::exp(-static_cast<double>(n));
  const auto sample = zc::disc::sample_disc_field(r, grid, g.seed, replica, mode_tol);

  json header = {{"r", r},
                 {"n", n},
                 {"grid", grid},
                 {"n_modes", sample.n_modes},
                 {"seed", g.seed},
                 {"replica", replica},
                 {"truncated_var", sample.truncated_var},
                 {"coeff_quadratic", sample.coeff_quadratic}};
  const std::string out_path = join_path(g.out_dir, out);
  ensure_parent_dir(out_path);
  {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + out_path);
    const std::string head = header.dump();
    os.write(head.data(), static_cast<std::streamsize>(head.size()));
    os.put('\n');
    os.write(reinterpret_cast<const char*>(sample.values.data()),
             static_cast<std::streamsize>(sample.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("short write to " + out_path);
  }

  zc::config::RunConfig cfg;
  cfg.params = {{"command", "disc sample"}, {"n", n},
                {"r", r},                   {"grid", grid},
                {"mode_tol", mode_tol},     {"seed", g.seed},
                {"replica", replica},       {"workers", g.workers},
                {"out", out}};
  const double wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  const std::string manifest =
      zc::config::write_manifest(cfg, out_path, wall_ms, {out_path});
  std::cout << "wrote " << out_path << " (header + " << sample.values.size()
            << " float64 values, " << sample.n_modes << " modes), " << manifest << "\n";
  return 0;
}

int run_primes_dump(int k) {
  const auto& b = zc::primes::block(k);
  for (const auto p : b.p) std::cout << p << "\n";
  return 0;
}

int run_primes_verify(const GlobalOpts& g, int sigma_exp, const std::string& out) {
  const double sigma = 0.5 + std::ldexp(1.0, -(sigma_exp + 1));
  zc::report::Table t;
  t.columns = {"k", "sigma", "exact", "estimate", "abs_err", "rel_err"};
  for (int k = 1; k <= zc::primes::kMaxBlock; ++k) {
    const auto rep = zc::primes::verify_pnt_block(k, sigma);
    t.rows.push_back({fmt_double(rep.k), fmt_double(rep.sigma), fmt_double(rep.exact_sum),
                      fmt_double(rep.integral_estimate), fmt_double(rep.abs_err),
                      fmt_double(rep.rel_err)});
  }
  const std::string body = t.render(g.format);
  if (out.empty()) {
    std::cout << body;
  } else {
    const std::string out_path = join_path(g.out_dir, out);
    ensure_parent_dir(out_path);
    zc::report::write_text_file(out_path, body);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int run_spectrum_run(const GlobalOpts& g, const std::string& model_s,
                     const std::string& betas_s, const std::string& scales_s,
                     int replicas, int k0, int tail_blocks, std::size_t grid_override,
                     double mode_tol, int bootstrap, const std::string& weights,
                     const std::string& out) {
  if (!g.seed_set) {
    std::cerr << "error: --seed is required for spectrum run\n";
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = parse_model(model_s, true);
  const auto betas = parse_betas(betas_s);
  const auto scales = parse_int_range(scales_s);

  zc::spectrum::SpectrumOptions opts;
  opts.k0 = k0;
  opts.tail_blocks = tail_blocks;
  opts.mode_tol = mode_tol;
  opts.grid_override = grid_override;
  opts.workers = g.workers;
  opts.bootstrap = bootstrap;
  opts.weights = parse_weights(weights);

  std::vector<zc::spectrum::SpectrumEstimate> ests;
  for (const auto beta : betas) {
    ests.push_back(
        zc::spectrum::estimate_spectrum(model, beta, scales, replicas, g.seed, opts));
    const auto& e = ests.back();
    std::cout << "model=" << zc::report::model_name(e.model)
              << " beta=" << fmt_double(beta.real()) << "+" << fmt_double(beta.imag())
              << "i slope=" << fmt_double(e.slope)
              << " ci_halfwidth=" << fmt_double(e.ci_halfwidth) << " predicted="
              << fmt_double(zc::spectrum::theoretical_f(beta)) << "\n";
    for (const auto& w : e.warnings) std::cerr << "warning: " << w << "\n";
  }

  const std::string out_path = join_path(g.out_dir, out);
  ensure_parent_dir(out_path);
  zc::report::write_text_file(out_path,
                              zc::report::spectrum_table(ests).render(g.format));
  const std::string summary_path = out_path + ".summary.json";
  zc::report::write_text_file(summary_path,
                              zc::report::spectrum_summary(ests).dump(2) + "\n");

  zc::config::RunConfig cfg;
  cfg.params = {{"command", "spectrum run"},
                {"model", model_s},
                {"betas", betas_s},
                {"scales", scales_s},
                {"replicas", replicas},
                {"k0", k0},
                {"tail_blocks", tail_blocks},
                {"grid_override", grid_override},
                {"mode_tol", mode_tol},
                {"bootstrap", bootstrap},
                {"weights", weights},
                {"seed", g.seed},
                {"workers", g.workers},
                {"format", g.format},
                {"out", out}};
  const double wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  const std::string manifest = zc::config::write_manifest(cfg, out_path, wall_ms,
                                                          {out_path, summary_path});
  std::cout << "wrote " << out_path << ", " << summary_path << ", " << manifest << "\n";
  return 0;
}

int run_spectrum_f(const std::string& beta_s) {
  const auto beta = parse_complex_token(beta_s);
  std::cout << fmt_double(zc::spectrum::theoretical_f(beta)) << "\n";
  return 0;
}

int run_inject_run(const GlobalOpts& g, const std::string& model_s,
                   const std::string& range_s, int replicas, int k0,
                   const std::string& weights, const std::string& out) {
  if (!g.seed_set) {
    std::cerr << "error: --seed is required for inject run\n";
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto model = parse_model(model_s, false);
  const auto ks = parse_int_range(range_s);
  const int k_lo = *std::min_element(ks.begin(), ks.end());
  const int k_hi = *std::max_element(ks.begin(), ks.end());
  if (k_lo < 1) throw std::invalid_argument("ladder stages start at 1");
  if (replicas < 1) throw std::invalid_argument("--replicas must be positive");

  const auto wm = parse_weights(weights);
  std::vector<zc::inject::BlowupSeries> series(replicas);
  zc::workers::run_indexed(static_cast<std::size_t>(replicas), g.workers,
                           [&](std::size_t rep) {
                             series[rep] =
                                 model == zc::spectrum::Model::euler
                                     ? zc::inject::bp_series_euler(k_hi, g.seed, rep,
                                                                   k0, wm)
                                     : zc::inject::bp_series_disc(k_hi, g.seed, rep);
                           });

  const std::string out_path = join_path(g.out_dir, out);
  ensure_parent_dir(out_path);
  zc::report::write_text_file(out_path,
                              zc::report::inject_table(series, k_lo).render(g.format));

  std::vector<double> finals(replicas);
  for (int rep = 0; rep < replicas; ++rep)
    finals[rep] = series[rep].running_max_norm.back();
  const auto rows = zc::inject::detect_blowup(finals, {1.0, 2.0, 3.0});
  json exc;
  exc["note"] = zc::inject::kBlowupReportNote;
  exc["model"] = model_s;
  exc["deepest_stage"] = k_hi;
  exc["rows"] = json::array();
  for (const auto& r : rows) {
    exc["rows"].push_back({{"threshold", r.threshold},
                           {"hits", r.hits},
                           {"total", r.total},
                           {"fraction", r.fraction},
                           {"wilson_lo", r.wilson_lo},
                           {"wilson_hi", r.wilson_hi}});
    std::cout << "threshold=" << fmt_double(r.threshold) << " fraction="
              << fmt_double(r.fraction) << " [" << fmt_double(r.wilson_lo) << ", "
              << fmt_double(r.wilson_hi) << "]\n";
  }
  const std::string exc_path = out_path + ".exceedance.json";
  zc::report::write_text_file(exc_path, exc.dump(2) + "\n");

  zc::config::RunConfig cfg;
  cfg.params = {{"command", "inject run"},
                {"model", model_s},
                {"k", range_s},
                {"replicas", replicas},
                {"k0", k0},
                {"weights", weights},
                {"seed", g.seed},
                {"workers", g.workers},
                {"format", g.format},
                {"out", out}};
  const double wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  const std::string manifest =
      zc::config::write_manifest(cfg, out_path, wall_ms, {out_path, exc_path});
  std::cout << "wrote " << out_path << ", " << exc_path << ", " << manifest << "\n";
  return 0;
}

int run_verify(const GlobalOpts& g, const std::string& suite) {
  static const std::vector<std::string> kStatSuites = {"field", "disc", "spectrum",
                                                       "inject", "all"};
  const bool needs_seed = std::find(kStatSuites.begin(), kStatSuites.end(), suite) !=
                          kStatSuites.end();
  if (needs_seed && !g.seed_set) {
    std::cerr << "error: --seed is required for verify " << suite << "\n";
    return 2;
  }
  std::vector<Check> checks;
  const auto run_one = [&](const std::string& name) {
    if (name == "specfun") verify_specfun(checks);
    else if (name == "primes") verify_primes(checks);
    else if (name == "field") verify_field(checks, g.seed);
    else if (name == "disc") verify_disc(checks, g.seed, g, true);
    else if (name == "spectrum") verify_spectrum(checks, g.seed, g.workers);
    else if (name == "inject") verify_inject(checks, g.seed);
    else throw std::invalid_argument("unknown verify suite '" + name + "'");
  };
  if (suite == "all") {
    for (const auto& name :
         {"specfun", "primes", "field", "disc", "spectrum", "inject"})
      run_one(name);
  } else {
    run_one(suite);
  }
  return report_checks(checks, g, suite);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random zeta field and disc chaos laboratory"};
  app.set_version_flag("--version", zc::kVersion);
  app.fallthrough();
  app.require_subcommand(0, 1);

  GlobalOpts g;
  auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed (required for sampling runs)");
  app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "directory for output artifacts");
  app.add_option("--format", g.format, "table format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::function<int()> action;

  // field sample
  auto* field_cmd = app.add_subcommand("field", "randomized Euler-product field");
  field_cmd->fallthrough();
  field_cmd->require_subcommand(1);
  {
    auto* sample = field_cmd->add_subcommand("sample", "sample one field realization");
    sample->fallthrough();
    auto se = std::make_shared<int>(8);
    auto grid = std::make_shared<std::size_t>(256);
    auto k0 = std::make_shared<int>(zc::primes::kMaxBlock);
    auto tail = std::make_shared<int>(3);
    auto weights = std::make_shared<std::string>("uniform");
    auto replica = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    sample->add_option("--sigma-exp", *se, "scale index n, sigma = 1/2 + 2^-(n+1)")
        ->required();
    sample->add_option("--grid", *grid, "number of h grid points")->required();
    sample->add_option("--k0", *k0, "deepest per-prime block");
    sample->add_option("--tail-blocks", *tail, "extra blocks past the scale cutoff");
    sample->add_option("--weights", *weights, "uniform|gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    sample->add_option("--replica", *replica, "replica index");
    sample->add_option("--out", *out, "output table path")->required();
    sample->callback([&, se, grid, k0, tail, weights, replica, out] {
      action = [=, &g] {
        return run_field_sample(g, *se, *grid, *k0, *tail, *weights, *replica, *out);
      };
    });
  }

  // disc sample / disc verify
  auto* disc_cmd = app.add_subcommand("disc", "holomorphic chaos on the disc");
  disc_cmd->fallthrough();
  disc_cmd->require_subcommand(1);
  {
    auto* sample = disc_cmd->add_subcommand("sample", "sample one boundary field");
    sample->fallthrough();
    auto n = std::make_shared<int>(8);
    auto grid = std::make_shared<std::size_t>(1 << 20);
    auto tol = std::make_shared<double>(1e-8);
    auto replica = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    sample->add_option("--n", *n, "scale index, r = 1 - exp(-n)")->required();
    sample->add_option("--grid", *grid, "theta grid size")->required();
    sample->add_option("--mode-tol", *tol, "mode truncation tolerance");
    sample->add_option("--replica", *replica, "replica index");
    sample->add_option("--out", *out, "output .bin path")->required();
    sample->callback([&, n, grid, tol, replica, out] {
      action = [=, &g] { return run_disc_sample(g, *n, *grid, *tol, *replica, *out); };
    });

    auto* dverify = disc_cmd->add_subcommand("verify", "disc self-checks with reports");
    dverify->fallthrough();
    dverify->callback([&] {
      action = [&g] {
        if (!g.seed_set) {
          std::cerr << "error: --seed is required for disc verify\n";
          return 2;
        }
        std::vector<Check> checks;
        verify_disc(checks, g.seed, g, true);
        return report_checks(checks, g, "disc");
      };
    });
  }

  // primes dump / primes verify
  auto* primes_cmd = app.add_subcommand("primes", "dyadic prime blocks");
  primes_cmd->fallthrough();
  primes_cmd->require_subcommand(1);
  {
    auto* dump = primes_cmd->add_subcommand("dump", "print one block of primes");
    dump->fallthrough();
    auto k = std::make_shared<int>(0);
    dump->add_option("--k", *k, "block index")->required();
    dump->callback([&, k] {
      action = [=] { return run_primes_dump(*k); };
    });

    auto* pverify = primes_cmd->add_subcommand("verify", "block sums vs integral estimates");
    pverify->fallthrough();
    auto se = std::make_shared<int>(7);
    auto out = std::make_shared<std::string>();
    pverify->add_option("--sigma-exp", *se, "scale index n, sigma = 1/2 + 2^-(n+1)");
    pverify->add_option("--out", *out, "write table here instead of stdout");
    pverify->callback([&, se, out] {
      action = [=, &g] { return run_primes_verify(g, *se, *out); };
    });
  }

  // spectrum run / spectrum f
  auto* spec_cmd = app.add_subcommand("spectrum", "integral means spectrum estimation");
  spec_cmd->fallthrough();
  spec_cmd->require_subcommand(1);
  {
    auto* run = spec_cmd->add_subcommand("run", "estimate spectrum slopes");
    run->fallthrough();
    auto model = std::make_shared<std::string>();
    auto betas = std::make_shared<std::string>();
    auto scales = std::make_shared<std::string>();
    auto replicas = std::make_shared<int>(0);
    auto k0 = std::make_shared<int>(4);
    auto tail = std::make_shared<int>(3);
    auto grid = std::make_shared<std::size_t>(0);
    auto tol = std::make_shared<double>(1e-8);
    auto boot = std::make_shared<int>(200);
    auto weights = std::make_shared<std::string>("uniform");
    auto out = std::make_shared<std::string>();
    run->add_option("--model", *model, "euler|disc|rem")->required();
    run->add_option("--betas", *betas, "comma list, complex as a+bi")->required();
    run->add_option("--scales", *scales, "range like 4..12 or comma list")->required();
    run->add_option("--replicas", *replicas, "replicas per scale")->required();
    run->add_option("--k0", *k0, "deepest per-prime block (euler model)");
    run->add_option("--tail-blocks", *tail, "extra blocks past the scale cutoff");
    run->add_option("--grid", *grid, "grid override (0 = automatic)");
    run->add_option("--mode-tol", *tol, "disc mode truncation tolerance");
    run->add_option("--bootstrap", *boot, "bootstrap resamples for the slope CI");
    run->add_option("--weights", *weights, "uniform|gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    run->add_option("--out", *out, "output table path")->required();
    run->callback([&, model, betas, scales, replicas, k0, tail, grid, tol, boot,
                   weights, out] {
      action = [=, &g] {
        return run_spectrum_run(g, *model, *betas, *scales, *replicas, *k0, *tail,
                                *grid, *tol, *boot, *weights, *out);
      };
    });

    auto* fcmd = spec_cmd->add_subcommand("f", "print the predicted spectrum value");
    fcmd->fallthrough();
    auto beta = std::make_shared<std::string>();
    fcmd->add_option("--beta", *beta, "complex beta, e.g. 1+2i")->required();
    fcmd->callback([&, beta] {
      action = [=] { return run_spectrum_f(*beta); };
    });
  }

  // inject run
  auto* inj_cmd = app.add_subcommand("inject", "branching ladder diagnostics");
  inj_cmd->fallthrough();
  inj_cmd->require_subcommand(1);
  {
    auto* run = inj_cmd->add_subcommand("run", "sample ladder increments");
    run->fallthrough();
    auto model = std::make_shared<std::string>();
    auto range = std::make_shared<std::string>();
    auto replicas = std::make_shared<int>(0);
    auto k0 = std::make_shared<int>(4);
    auto weights = std::make_shared<std::string>("uniform");
    auto out = std::make_shared<std::string>();
    run->add_option("--model", *model, "euler|disc")->required();
    run->add_option("--k", *range, "stage range like 1..20")->required();
    run->add_option("--replicas", *replicas, "independent ladders")->required();
    run->add_option("--k0", *k0, "deepest per-prime block (euler model)");
    run->add_option("--weights", *weights, "uniform|gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    run->add_option("--out", *out, "output table path")->required();
    run->callback([&, model, range, replicas, k0, weights, out] {
      action = [=, &g] {
        return run_inject_run(g, *model, *range, *replicas, *k0, *weights, *out);
      };
    });
  }

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a self-check suite");
  verify_cmd->fallthrough();
  {
    auto suite = std::make_shared<std::string>();
    verify_cmd
        ->add_option("suite", *suite,
                     "specfun|primes|field|disc|spectrum|inject|all")
        ->required()
        ->check(CLI::IsMember(
            {"specfun", "primes", "field", "disc", "spectrum", "inject", "all"}));
    verify_cmd->callback([&, suite] {
      action = [=, &g] { return run_verify(g, *suite); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  g.seed_set = seed_opt->count() > 0;

  if (!action) {
    std::cout << app.help() << "\n";
    return 2;
  }

  try {
    return action();
  } catch (const zc::primes::CapacityError& e) {
    std::cerr << "capacity error: " << e.what()
              << "\nhint: precomputed prime blocks stop at k = "
              << zc::primes::kMaxBlock
              << "; deeper blocks use the integral surrogate instead\n";
    return 3;
  } catch (const zc::spectrum::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

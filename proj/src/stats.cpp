#include "acsfa/stats.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace acsfa::stats {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  char* end = nullptr;
  value = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

void ResponseMatrix::validate() const {
  if (a() < 2) throw std::invalid_argument(fmt::format("need at least 2 treatments, got {}", a()));
  if (b() < 2) throw std::invalid_argument(fmt::format("need at least 2 blocks, got {}", b()));
  if (values.size() != a()) throw std::invalid_argument("row count does not match treatments");
  for (std::size_t i = 0; i < a(); ++i) {
    if (values[i].size() != b()) {
      throw std::invalid_argument(fmt::format("treatment '{}' has {} cells, expected {}",
                                              treatments[i], values[i].size(), b()));
    }
    for (double v : values[i]) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument(fmt::format("non-finite cell for '{}'", treatments[i]));
      }
    }
  }
}

std::vector<double> ResponseMatrix::row_means() const {
  std::vector<double> means;
  for (const auto& row : values) {
    means.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
  }
  return means;
}

ResponseMatrix read_response_matrix(std::istream& in) {
  ResponseMatrix m;
  std::string line;
  std::size_t number = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv(line);
    if (header) {
      if (fields.size() < 2) throw std::invalid_argument("response matrix header needs block labels");
      m.blocks.assign(fields.begin() + 1, fields.end());
      header = false;
      continue;
    }
    if (fields.size() != m.blocks.size() + 1) {
      throw std::invalid_argument(fmt::format("line {}: expected {} fields, got {}", number,
                                              m.blocks.size() + 1, fields.size()));
    }
    m.treatments.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_double(fields[j], v)) {
        throw std::invalid_argument(fmt::format("line {}: '{}' is not a number", number, fields[j]));
      }
      row.push_back(v);
    }
    m.values.push_back(std::move(row));
  }
  m.validate();
  return m;
}

ResponseMatrix load_response_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  return read_response_matrix(in);
}

void write_response_matrix(std::ostream& out, const ResponseMatrix& m) {
  out << "treatment";
  for (const auto& b : m.blocks) out << ',' << b;
  out << '\n';
  for (std::size_t i = 0; i < m.a(); ++i) {
    out << m.treatments[i];
    for (double v : m.values[i]) out << ',' << fmt::format("{}", v);
    out << '\n';
  }
}

std::map<std::string, double> load_optima(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::map<std::string, double> optima;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    double v = 0.0;
    if (fields.size() != 2 || !parse_double(fields[1], v)) {
      if (number == 1) continue;  // header
      throw std::invalid_argument(fmt::format("{}:{}: expected 'name,optimum'", path, number));
    }
    optima[fields[0]] = v;
  }
  return optima;
}

ResponseMatrix error_matrix(const ResponseMatrix& best,
                            const std::map<std::string, double>& optima) {
  ResponseMatrix out = best;
  for (std::size_t j = 0; j < best.b(); ++j) {
    const auto it = optima.find(best.blocks[j]);
    if (it == optima.end()) {
      throw std::invalid_argument(fmt::format("no optimum for block '{}'", best.blocks[j]));
    }
    for (std::size_t i = 0; i < best.a(); ++i) {
      const double e = best.values[i][j] - it->second;
      if (e < 0.0) {
        throw std::invalid_argument(fmt::format("'{}' on '{}' is below the optimum ({} < {})",
                                                best.treatments[i], best.blocks[j],
                                                best.values[i][j], it->second));
      }
      out.values[i][j] = e;
    }
  }
  return out;
}

double f_upper_tail(double f, double df1, double df2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  return boost::math::ibeta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

AnovaTable rcbd_anova(const ResponseMatrix& m) {
  m.validate();
  const double a = static_cast<double>(m.a());
  const double b = static_cast<double>(m.b());

  double grand = 0.0;
  for (const auto& row : m.values) grand += std::accumulate(row.begin(), row.end(), 0.0);
  grand /= a * b;

  const std::vector<double> row_mean = m.row_means();
  std::vector<double> col_mean(m.b(), 0.0);
  for (const auto& row : m.values)
    for (std::size_t j = 0; j < m.b(); ++j) col_mean[j] += row[j] / a;

  double ss_total = 0.0;
  for (const auto& row : m.values)
    for (double v : row) ss_total += (v - grand) * (v - grand);
  double ss_treat = 0.0;
  for (double r : row_mean) ss_treat += b * (r - grand) * (r - grand);
  double ss_block = 0.0;
  for (double c : col_mean) ss_block += a * (c - grand) * (c - grand);
  const double ss_error = std::max(0.0, ss_total - ss_treat - ss_block);

  AnovaTable t;
  t.treatment = {a - 1.0, ss_treat, ss_treat / (a - 1.0)};
  t.block = {b - 1.0, ss_block, ss_block / (b - 1.0)};
  const double df_error = (a - 1.0) * (b - 1.0);
  t.error = {df_error, ss_error, ss_error / df_error};
  t.total = {a * b - 1.0, ss_total, ss_total / (a * b - 1.0)};

  // Residual sums below this fraction of the total are rounding noise.
  const double tiny = 1e-12 * std::max(ss_total, 1.0);
  if (ss_total <= tiny) {
    t.degenerate = true;
    t.treatment_f = t.block_f = 0.0;
    t.treatment_p = t.block_p = 1.0;
    return t;
  }
  auto ratio = [&](double ms) {
    if (ss_error > tiny) return ms / t.error.ms;
    t.degenerate = true;
    return ms > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  t.treatment_f = ratio(t.treatment.ms);
  t.block_f = ratio(t.block.ms);
  t.treatment_p = f_upper_tail(t.treatment_f, t.treatment.df, df_error);
  t.block_p = f_upper_tail(t.block_f, t.block.df, df_error);
  t.s = std::sqrt(t.error.ms);
  t.r_sq = 1.0 - ss_error / ss_total;
  t.r_sq_adj = 1.0 - t.error.ms / t.total.ms;
  return t;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// P(range of k iid standard normals <= w).
double normal_range_cdf(double w, double k) {
  if (w <= 0.0) return 0.0;
  auto integrand = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    return inner <= 0.0 ? 0.0 : normal_pdf(z) * std::pow(inner, k - 1.0);
  };
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -9.0, 9.0 + w, 15, 1e-12);
  return std::clamp(k * value, 0.0, 1.0);
}

}  // namespace

double studentized_range_cdf(double q, double k, double df) {
  if (!(k >= 2.0)) throw std::invalid_argument("studentized range needs k >= 2");
  if (!(df > 0.0)) throw std::invalid_argument("studentized range needs df > 0");
  if (q <= 0.0) return 0.0;
  if (std::isinf(df) || df > 1e6) return normal_range_cdf(q, k);

  // s = sqrt(chi2_df / df) has density
  // 2 (df/2)^(df/2) / Gamma(df/2) s^(df-1) exp(-df s^2 / 2).
  const double half = df / 2.0;
  const double log_norm = std::log(2.0) + half * std::log(half) - std::lgamma(half);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density = log_norm + (df - 1.0) * std::log(s) - half * s * s;
    return std::exp(log_density) * normal_range_cdf(q * s, k);
  };
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-10);
  return std::clamp(value, 0.0, 1.0);
}

double studentized_range_quantile(double p, double k, double df) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0, 1)");
  auto f = [&](double q) { return studentized_range_cdf(q, k, df) - p; };
  double hi = 4.0;
  while (f(hi) < 0.0) hi *= 2.0;
  std::uintmax_t max_iter = 200;
  const auto [lo_q, hi_q] = boost::math::tools::toms748_solve(
      f, 0.0, hi, -p, f(hi), boost::math::tools::eps_tolerance<double>(40), max_iter);
  return 0.5 * (lo_q + hi_q);
}

TukeyGrouping tukey_hsd(const ResponseMatrix& m, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
  const AnovaTable anova = rcbd_anova(m);
  const double k = static_cast<double>(m.a());
  const double se = std::sqrt(anova.error.ms / static_cast<double>(m.b()));

  TukeyGrouping g;
  g.confidence = confidence;
  g.q_critical = studentized_range_quantile(confidence, k, anova.error.df);
  g.hsd = g.q_critical * se;

  const std::vector<double> means = m.row_means();
  std::vector<std::size_t> order(m.a());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) { return means[x] > means[y]; });
  for (std::size_t idx : order) {
    g.treatments.push_back(m.treatments[idx]);
    g.means.push_back(means[idx]);
  }

  const std::size_t n = g.means.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      TukeyPair pair;
      pair.first = i;
      pair.second = j;
      pair.difference = g.means[i] - g.means[j];
      pair.significant = pair.difference > g.hsd;
      if (se > 0.0) {
        pair.p_value = 1.0 - studentized_range_cdf(pair.difference / se, k, anova.error.df);
      } else {
        pair.p_value = pair.difference > 0.0 ? 0.0 : 1.0;
      }
      g.pairs.push_back(pair);
    }
  }

  // With equal group sizes a single HSD applies to every pair, so in mean
  // order each non-significant set is a contiguous run. Each maximal run
  // gets the next letter.
  g.letters.assign(n, "");
  std::size_t previous_end = 0;
  char letter = 'A';
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t end = i;
    while (end + 1 < n && g.means[i] - g.means[end + 1] <= g.hsd) ++end;
    if (i > 0 && end <= previous_end) continue;
    for (std::size_t t = i; t <= end; ++t) g.letters[t] += letter;
    letter = letter == 'Z' ? 'a' : static_cast<char>(letter + 1);
    previous_end = end;
  }
  return g;
}

void print_anova(std::ostream& out, const AnovaTable& t, const ResponseMatrix& m) {
  fmt::print(out, "Analysis of Variance (RCBD: {} treatments x {} blocks)\n", m.a(), m.b());
  fmt::print(out, "{:<10} {:>4} {:>16} {:>16} {:>9} {:>9}\n", "Source", "DF", "Adj SS", "Adj MS",
             "F-Value", "P-Value");
  fmt::print(out, "{:<10} {:>4} {:>16.6g} {:>16.6g} {:>9.2f} {:>9.3f}\n", "Treatment",
             t.treatment.df, t.treatment.ss, t.treatment.ms, t.treatment_f, t.treatment_p);
  fmt::print(out, "{:<10} {:>4} {:>16.6g} {:>16.6g} {:>9.2f} {:>9.3f}\n", "Block", t.block.df,
             t.block.ss, t.block.ms, t.block_f, t.block_p);
  fmt::print(out, "{:<10} {:>4} {:>16.6g} {:>16.6g}\n", "Error", t.error.df, t.error.ss, t.error.ms);
  fmt::print(out, "{:<10} {:>4} {:>16.6g}\n", "Total", t.total.df, t.total.ss);
  fmt::print(out, "S = {:.3f}  R-sq = {:.2f}%  R-sq(adj) = {:.2f}%\n", t.s, 100.0 * t.r_sq,
             100.0 * t.r_sq_adj);
  if (t.degenerate) fmt::print(out, "warning: zero error or total variance\n");
}

void print_tukey(std::ostream& out, const TukeyGrouping& g, std::size_t n_per_treatment) {
  fmt::print(out, "Tukey grouping at {:g}% confidence (q = {:.4f}, HSD = {:.4f})\n",
             100.0 * g.confidence, g.q_critical, g.hsd);
  fmt::print(out, "{:<12} {:>4} {:>14} {}\n", "Treatment", "N", "Mean", "Grouping");
  for (std::size_t i = 0; i < g.treatments.size(); ++i) {
    fmt::print(out, "{:<12} {:>4} {:>14.6g} {}\n", g.treatments[i], n_per_treatment, g.means[i],
               g.letters[i]);
  }
  fmt::print(out, "Pairwise differences:\n");
  for (const auto& p : g.pairs) {
    fmt::print(out, "  {} - {}: {:.4f} (adj p = {:.4f}){}\n", g.treatments[p.first],
               g.treatments[p.second], p.difference, p.p_value, p.significant ? " *" : "");
  }
}

}  // namespace acsfa::stats

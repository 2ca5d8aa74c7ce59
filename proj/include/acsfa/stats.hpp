// Randomized complete block ANOVA (algorithms as treatments, instances as
// blocks) and Tukey HSD letter grouping.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace acsfa::stats {

/// a x b table of responses: one row per treatment, one column per block.
struct ResponseMatrix {
  std::vector<std::string> treatments;
  std::vector<std::string> blocks;
  std::vector<std::vector<double>> values;  // values[treatment][block]

  std::size_t a() const noexcept { return treatments.size(); }
  std::size_t b() const noexcept { return blocks.size(); }
  /// Requires a >= 2, b >= 2 and a full, finite table.
  void validate() const;
  std::vector<double> row_means() const;
};

/// CSV layout: header `treatment,<block>,...`, then one row per treatment.
ResponseMatrix read_response_matrix(std::istream& in);
ResponseMatrix load_response_matrix(const std::string& path);
void write_response_matrix(std::ostream& out, const ResponseMatrix& m);

/// Lines of `name,optimum` (a header line is skipped if the second field is
/// not numeric).
std::map<std::string, double> load_optima(const std::string& path);

/// best - optimum per cell, matched by block label. Throws
/// std::invalid_argument if a block has no optimum or a cell falls below it.
ResponseMatrix error_matrix(const ResponseMatrix& best,
                            const std::map<std::string, double>& optima);

struct AnovaRow {
  double df = 0.0;
  double ss = 0.0;
  double ms = 0.0;
};

struct AnovaTable {
  AnovaRow treatment, block, error, total;
  double treatment_f = 0.0, treatment_p = 1.0;
  double block_f = 0.0, block_p = 1.0;
  double s = 0.0;  // sqrt(error MS)
  double r_sq = 0.0, r_sq_adj = 0.0;
  /// Set when total or error variance is zero; F is then 0 (no variance at
  /// all) or +inf (exact fit).
  bool degenerate = false;
};

AnovaTable rcbd_anova(const ResponseMatrix& m);

/// Upper tail of the F(df1, df2) distribution.
double f_upper_tail(double f, double df1, double df2);

/// P(Q <= q) for the studentized range of k means with df error degrees of
/// freedom, by numerical integration. df = +inf is accepted.
double studentized_range_cdf(double q, double k, double df);
double studentized_range_quantile(double p, double k, double df);

struct TukeyPair {
  std::size_t first = 0, second = 0;  // indices into TukeyGrouping::treatments
  double difference = 0.0;            // mean[first] - mean[second]
  double p_value = 1.0;
  bool significant = false;
};

struct TukeyGrouping {
  double confidence = 0.0;
  double q_critical = 0.0;
  double hsd = 0.0;  // minimum significant difference of means
  /// Sorted by mean, largest first.
  std::vector<std::string> treatments;
  std::vector<double> means;
  std::vector<std::string> letters;  // e.g. "A", "AB"
  std::vector<TukeyPair> pairs;
};

TukeyGrouping tukey_hsd(const ResponseMatrix& m, double confidence);

void print_anova(std::ostream& out, const AnovaTable& t, const ResponseMatrix& m);
void print_tukey(std::ostream& out, const TukeyGrouping& g, std::size_t n_per_treatment);

}  // namespace acsfa::stats

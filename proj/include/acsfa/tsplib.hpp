// Symmetric TSPLIB instances: parsing and integer edge costs.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acsfa::tsplib {

using City = std::size_t;
using Length = std::int64_t;

enum class Metric { Euc2d, Geo, Explicit };

std::string_view to_string(Metric metric);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Raised for malformed or unsupported TSPLIB input. `line()` is 1-based,
/// or 0 when the problem is not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An immutable symmetric TSP instance. Either coordinates (EUC_2D, GEO) or
/// an explicit weight matrix (EXPLICIT) is held; the full integer distance
/// matrix is materialised at construction so lookups are O(1).
class TspInstance {
 public:
  static TspInstance from_coords(std::string name, Metric metric,
                                 std::vector<Point> coords);
  static TspInstance from_weights(std::string name,
                                  std::vector<std::vector<Length>> weights);

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return n_; }
  Metric metric() const noexcept { return metric_; }
  const std::optional<std::vector<Point>>& coords() const noexcept {
    return coords_;
  }
  const std::optional<std::vector<std::vector<Length>>>& weights()
      const noexcept {
    return weights_;
  }

  /// Checked access; throws std::out_of_range on a bad index.
  Length distance(City i, City j) const;
  /// Unchecked access for inner loops.
  Length operator()(City i, City j) const noexcept { return dist_[i * n_ + j]; }

 private:
  TspInstance() = default;
  void build_matrix();

  std::string name_;
  std::size_t n_ = 0;
  Metric metric_ = Metric::Euc2d;
  std::optional<std::vector<Point>> coords_;
  std::optional<std::vector<std::vector<Length>>> weights_;
  std::vector<Length> dist_;
};

struct Tour {
  std::vector<City> order;
  Length length = 0;
};

/// Parses TSPLIB text. Unknown keywords are skipped; each one produces an
/// entry in `warnings` when it is non-null.
TspInstance parse_instance(std::string_view text,
                           std::vector<std::string>* warnings = nullptr);
TspInstance load_instance(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);

/// Serialises a coordinate instance back to TSPLIB text. Coordinates are
/// written with round-trip precision.
std::string to_tsplib(const TspInstance& inst);

bool is_permutation(std::span<const City> order, std::size_t n);

/// Cyclic length including the closing edge. Throws std::invalid_argument
/// if `order` is not a permutation of 0..n-1.
Length tour_length(const TspInstance& inst, std::span<const City> order);

Tour make_tour(const TspInstance& inst, std::vector<City> order);

/// Raw (unrounded) TSPLIB geographical distance helpers.
double geo_radians(double coordinate);
Length geo_distance(Point a, Point b);
Length euc2d_distance(Point a, Point b);

}  // namespace acsfa::tsplib

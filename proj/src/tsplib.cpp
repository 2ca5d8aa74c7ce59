#include "acsfa/tsplib.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace acsfa::tsplib {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Euc2d:
      return "EUC_2D";
    case Metric::Geo:
      return "GEO";
    case Metric::Explicit:
      return "EXPLICIT";
  }
  return "?";
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message
                                   : fmt::format("line {}: {}", line, message)),
      line_(line) {}

// TSPLIB reference constants; PI is deliberately the truncated value the
// library's own distance code uses.
constexpr double kGeoPi = 3.141592;
constexpr double kEarthRadius = 6378.388;

double geo_radians(double coordinate) {
  const double degrees = std::trunc(coordinate);
  const double minutes = coordinate - degrees;
  return kGeoPi * (degrees + 5.0 * minutes / 3.0) / 180.0;
}

Length geo_distance(Point a, Point b) {
  const double lat_a = geo_radians(a.x), lon_a = geo_radians(a.y);
  const double lat_b = geo_radians(b.x), lon_b = geo_radians(b.y);
  const double q1 = std::cos(lon_a - lon_b);
  const double q2 = std::cos(lat_a - lat_b);
  const double q3 = std::cos(lat_a + lat_b);
  const double arg = std::clamp(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3),
                                -1.0, 1.0);
  return static_cast<Length>(kEarthRadius * std::acos(arg) + 1.0);
}

Length euc2d_distance(Point a, Point b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return static_cast<Length>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

TspInstance TspInstance::from_coords(std::string name, Metric metric,
                                     std::vector<Point> coords) {
  if (metric == Metric::Explicit) {
    throw std::invalid_argument("EXPLICIT instances need a weight matrix");
  }
  if (coords.size() < 3) {
    throw std::invalid_argument(
        fmt::format("instance needs at least 3 cities, got {}", coords.size()));
  }
  TspInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = coords.size();
  inst.metric_ = metric;
  inst.coords_ = std::move(coords);
  inst.build_matrix();
  return inst;
}

TspInstance TspInstance::from_weights(std::string name,
                                      std::vector<std::vector<Length>> weights) {
  const std::size_t n = weights.size();
  if (n < 3) {
    throw std::invalid_argument(
        fmt::format("instance needs at least 3 cities, got {}", n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i].size() != n) {
      throw std::invalid_argument(fmt::format("weight row {} has {} entries, expected {}",
                                              i, weights[i].size(), n));
    }
    if (weights[i][i] != 0) {
      throw std::invalid_argument(fmt::format("non-zero diagonal at {}", i));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (weights[i][j] < 0) {
        throw std::invalid_argument(fmt::format("negative weight at ({}, {})", i, j));
      }
      if (weights[i][j] != weights[j][i]) {
        throw std::invalid_argument(
            fmt::format("asymmetric weight at ({}, {})", i, j));
      }
    }
  }
  TspInstance inst;
  inst.name_ = std::move(name);
  inst.n_ = n;
  inst.metric_ = Metric::Explicit;
  inst.weights_ = std::move(weights);
  inst.build_matrix();
  return inst;
}

void TspInstance::build_matrix() {
  dist_.assign(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      Length d = 0;
      switch (metric_) {
        case Metric::Euc2d:
          d = euc2d_distance((*coords_)[i], (*coords_)[j]);
          break;
        case Metric::Geo:
          d = geo_distance((*coords_)[i], (*coords_)[j]);
          break;
        case Metric::Explicit:
          d = (*weights_)[i][j];
          break;
      }
      dist_[i * n_ + j] = d;
      dist_[j * n_ + i] = d;
    }
  }
}

Length TspInstance::distance(City i, City j) const {
  if (i >= n_ || j >= n_) {
    throw std::out_of_range(
        fmt::format("city index ({}, {}) out of range for n = {}", i, j, n_));
  }
  return dist_[i * n_ + j];
}

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool starts_keyword(std::string_view s) {
  s = trim(s);
  return !s.empty() && std::isalpha(static_cast<unsigned char>(s.front()));
}

template <typename T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, fmt::format("expected a number, got '{}'", token));
  }
  return value;
}

enum class WeightFormat { FullMatrix, UpperRow, LowerDiagRow };

}  // namespace

TspInstance parse_instance(std::string_view text,
                           std::vector<std::string>* warnings) {
  std::vector<Line> lines;
  {
    std::size_t number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = text.find('\n', pos);
      const std::size_t stop = end == std::string_view::npos ? text.size() : end;
      lines.push_back({number++, text.substr(pos, stop - pos)});
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }

  std::string name;
  std::optional<std::size_t> dimension;
  std::optional<Metric> metric;
  std::size_t metric_line = 0;
  std::optional<WeightFormat> format;
  std::vector<Point> coords;
  std::vector<std::size_t> coord_ids;
  std::vector<Length> raw_weights;
  std::size_t weights_line = 0;
  bool have_coords = false, have_weights = false;

  auto require_dimension = [&](std::size_t line) {
    if (!dimension) throw ParseError(line, "data section before DIMENSION");
    return *dimension;
  };

  std::size_t k = 0;
  while (k < lines.size()) {
    const Line& line = lines[k];
    const std::string_view body = trim(line.text);
    if (body.empty()) {
      ++k;
      continue;
    }
    const std::size_t colon = body.find(':');
    const std::string key =
        upper(trim(colon == std::string_view::npos ? body : body.substr(0, colon)));
    const std::string_view value =
        colon == std::string_view::npos ? std::string_view{} : trim(body.substr(colon + 1));

    if (key == "EOF") break;

    if (key == "NODE_COORD_SECTION") {
      const std::size_t n = require_dimension(line.number);
      have_coords = true;
      ++k;
      while (k < lines.size() && !starts_keyword(lines[k].text)) {
        const auto toks = tokens(lines[k].text);
        if (toks.empty()) {
          ++k;
          continue;
        }
        if (toks.size() != 3) {
          throw ParseError(lines[k].number,
                           fmt::format("expected 'id x y', got {} fields", toks.size()));
        }
        if (coords.size() == n) {
          throw ParseError(lines[k].number,
                           fmt::format("more than DIMENSION = {} coordinates", n));
        }
        coord_ids.push_back(parse_number<std::size_t>(toks[0], lines[k].number));
        coords.push_back({parse_number<double>(toks[1], lines[k].number),
                          parse_number<double>(toks[2], lines[k].number)});
        ++k;
      }
      if (coords.size() != n) {
        const std::size_t at = k < lines.size() ? lines[k].number : lines.back().number;
        throw ParseError(at, fmt::format("DIMENSION is {} but {} coordinates were given",
                                         n, coords.size()));
      }
      continue;
    }

    if (key == "EDGE_WEIGHT_SECTION") {
      require_dimension(line.number);
      have_weights = true;
      weights_line = line.number;
      ++k;
      while (k < lines.size() && !starts_keyword(lines[k].text)) {
        for (auto tok : tokens(lines[k].text)) {
          raw_weights.push_back(parse_number<Length>(tok, lines[k].number));
        }
        ++k;
      }
      continue;
    }

    if (key == "DISPLAY_DATA_SECTION") {
      if (warnings) warnings->push_back(fmt::format("line {}: skipping DISPLAY_DATA_SECTION", line.number));
      ++k;
      while (k < lines.size() && !starts_keyword(lines[k].text)) ++k;
      continue;
    }

    if (colon == std::string_view::npos) {
      throw ParseError(line.number, fmt::format("malformed header line '{}'", body));
    }

    if (key == "NAME") {
      name = std::string(value);
      if (name.size() > 4 && upper(std::string_view(name).substr(name.size() - 4)) == ".TSP") {
        name.resize(name.size() - 4);
      }
    } else if (key == "TYPE") {
      const std::string type = upper(value);
      if (type != "TSP") {
        throw ParseError(line.number, fmt::format("unsupported problem TYPE '{}'", value));
      }
    } else if (key == "DIMENSION") {
      dimension = parse_number<std::size_t>(value, line.number);
      if (*dimension < 3) {
        throw ParseError(line.number, fmt::format("DIMENSION must be at least 3, got {}", *dimension));
      }
    } else if (key == "EDGE_WEIGHT_TYPE") {
      const std::string type = upper(value);
      metric_line = line.number;
      if (type == "EUC_2D") {
        metric = Metric::Euc2d;
      } else if (type == "GEO") {
        metric = Metric::Geo;
      } else if (type == "EXPLICIT") {
        metric = Metric::Explicit;
      } else {
        throw ParseError(line.number, fmt::format("unsupported EDGE_WEIGHT_TYPE '{}'", value));
      }
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      const std::string f = upper(value);
      if (f == "FULL_MATRIX") {
        format = WeightFormat::FullMatrix;
      } else if (f == "UPPER_ROW") {
        format = WeightFormat::UpperRow;
      } else if (f == "LOWER_DIAG_ROW") {
        format = WeightFormat::LowerDiagRow;
      } else if (f != "FUNCTION") {
        throw ParseError(line.number, fmt::format("unsupported EDGE_WEIGHT_FORMAT '{}'", value));
      }
    } else if (key == "COMMENT" || key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
      // informational only
    } else if (warnings) {
      warnings->push_back(fmt::format("line {}: ignoring keyword '{}'", line.number, key));
    }
    ++k;
  }

  if (!dimension) throw ParseError(0, "missing DIMENSION");
  if (!metric) throw ParseError(0, "missing EDGE_WEIGHT_TYPE");
  const std::size_t n = *dimension;

  if (*metric != Metric::Explicit) {
    if (!have_coords) throw ParseError(metric_line, "missing NODE_COORD_SECTION");
    // Reorder by node id so files listing nodes out of order still work.
    std::vector<Point> ordered(n);
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t id = coord_ids[i];
      if (id < 1 || id > n || seen[id - 1]) {
        throw ParseError(0, fmt::format("invalid or duplicate node id {}", id));
      }
      seen[id - 1] = true;
      ordered[id - 1] = coords[i];
    }
    return TspInstance::from_coords(std::move(name), *metric, std::move(ordered));
  }

  if (!have_weights) throw ParseError(metric_line, "EXPLICIT instance without EDGE_WEIGHT_SECTION");
  if (!format) throw ParseError(metric_line, "EXPLICIT instance without EDGE_WEIGHT_FORMAT");
  std::size_t expected = 0;
  switch (*format) {
    case WeightFormat::FullMatrix:
      expected = n * n;
      break;
    case WeightFormat::UpperRow:
      expected = n * (n - 1) / 2;
      break;
    case WeightFormat::LowerDiagRow:
      expected = n * (n + 1) / 2;
      break;
  }
  if (raw_weights.size() != expected) {
    throw ParseError(weights_line,
                     fmt::format("EDGE_WEIGHT_SECTION holds {} values, DIMENSION {} needs {}",
                                 raw_weights.size(), n, expected));
  }
  std::vector<std::vector<Length>> w(n, std::vector<Length>(n, 0));
  std::size_t idx = 0;
  switch (*format) {
    case WeightFormat::FullMatrix:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = raw_weights[idx++];
      break;
    case WeightFormat::UpperRow:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w[i][j] = w[j][i] = raw_weights[idx++];
      break;
    case WeightFormat::LowerDiagRow:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) w[i][j] = w[j][i] = raw_weights[idx++];
      break;
  }
  try {
    return TspInstance::from_weights(std::move(name), std::move(w));
  } catch (const std::invalid_argument& e) {
    throw ParseError(weights_line, e.what());
  }
}

TspInstance load_instance(const std::filesystem::path& path,
                          std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str(), warnings);
}

std::string to_tsplib(const TspInstance& inst) {
  std::string out;
  out += fmt::format("NAME: {}\nTYPE: TSP\nDIMENSION: {}\nEDGE_WEIGHT_TYPE: {}\n",
                     inst.name(), inst.dimension(), to_string(inst.metric()));
  if (inst.coords()) {
    out += "NODE_COORD_SECTION\n";
    const auto& pts = *inst.coords();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out += fmt::format("{} {} {}\n", i + 1, pts[i].x, pts[i].y);
    }
  } else {
    out += "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n";
    for (const auto& row : *inst.weights()) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        out += fmt::format("{}{}", j ? " " : "", row[j]);
      }
      out += '\n';
    }
  }
  out += "EOF\n";
  return out;
}

bool is_permutation(std::span<const City> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (City c : order) {
    if (c >= n || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

Length tour_length(const TspInstance& inst, std::span<const City> order) {
  const std::size_t n = inst.dimension();
  if (!is_permutation(order, n)) {
    throw std::invalid_argument(fmt::format("tour is not a permutation of 0..{}", n - 1));
  }
  Length total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    total += inst(order[k], order[(k + 1) % n]);
  }
  return total;
}

Tour make_tour(const TspInstance& inst, std::vector<City> order) {
  const Length length = tour_length(inst, order);
  return Tour{std::move(order), length};
}

}  // namespace acsfa::tsplib

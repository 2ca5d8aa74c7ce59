#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "acsfa/tsplib.hpp"
#include "support.hpp"

using namespace acsfa::tsplib;
using testing::kDataDir;
using testing::kTestDataDir;

std::vector<City> testing::read_opt_tour(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line) && line.find("TOUR_SECTION") == std::string::npos) {
  }
  std::vector<City> order;
  long id = 0;
  while (in >> id && id != -1) order.push_back(static_cast<City>(id - 1));
  return order;
}

namespace {

const char* kTriangle = R"(NAME: tri
TYPE: TSP
COMMENT: three cities
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
)";

}  // namespace

TEST_CASE("parse a small EUC_2D instance") {
  const auto inst = parse_instance(kTriangle);
  CHECK(inst.name() == "tri");
  CHECK(inst.dimension() == 3);
  CHECK(inst.metric() == Metric::Euc2d);
  CHECK(inst(0, 1) == 3);
  CHECK(inst(0, 2) == 4);
  CHECK(inst(1, 2) == 5);
  CHECK(tour_length(inst, std::vector<City>{0, 1, 2}) == 12);
}

TEST_CASE("euclidean distance rounds to nearest integer") {
  CHECK(euc2d_distance({0, 0}, {3, 4}) == 5);
  CHECK(euc2d_distance({0, 0}, {1, 1}) == 1);
  CHECK(euc2d_distance({0, 0}, {1.5, 2}) == 3);  // 2.5 rounds up
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-500, 500);
  for (int k = 0; k < 1000; ++k) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double exact = std::hypot(a.x - b.x, a.y - b.y);
    CHECK(std::abs(static_cast<double>(euc2d_distance(a, b)) - exact) <= 0.5 + 1e-9);
  }
}

TEST_CASE("geographical distances") {
  // DDD.MM encoding: 38.24 is 38 degrees 24 minutes.
  CHECK(geo_radians(38.24) == doctest::Approx(0.6702062933333335).epsilon(1e-12));
  CHECK(geo_distance({38.24, 20.42}, {38.24, 20.42}) == 1);  // the formula adds 1
  const auto inst = load_instance(kDataDir / "ulysses16.tsp");
  CHECK(inst.name() == "ulysses16");
  CHECK(inst.metric() == Metric::Geo);
  CHECK(inst(0, 0) == 0);
  CHECK(inst(0, 1) == 509);
  CHECK(inst(1, 0) == 509);
}

TEST_CASE("known optimal tours") {
  SUBCASE("gr666 (GEO)") {
    const auto inst = load_instance(kTestDataDir / "gr666.tsp");
    REQUIRE(inst.dimension() == 666);
    CHECK(tour_length(inst, testing::read_opt_tour(kTestDataDir / "gr666.opt.tour")) == 294358);
  }
  SUBCASE("pcb442 (EUC_2D)") {
    const auto inst = load_instance(kTestDataDir / "pcb442.tsp");
    REQUIRE(inst.dimension() == 442);
    CHECK(tour_length(inst, testing::read_opt_tour(kTestDataDir / "pcb442.opt.tour")) == 50778);
  }
  SUBCASE("gr17 explicit lower-diagonal matrix") {
    const auto inst = load_instance(kTestDataDir / "gr17.tsp");
    CHECK(inst.metric() == Metric::Explicit);
    CHECK(inst.dimension() == 17);
    CHECK(inst(0, 1) == 633);
    CHECK(inst(1, 0) == 633);
    CHECK(inst(16, 16) == 0);
  }
}

TEST_CASE("explicit matrix formats agree") {
  const std::string head = "NAME: m\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\n";
  const auto full = parse_instance(head + "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n"
                                          "0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0\nEOF\n");
  const auto upper = parse_instance(head + "EDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n"
                                           "1 2 3\n4 5\n6\nEOF\n");
  const auto lower = parse_instance(head + "EDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\n"
                                           "EDGE_WEIGHT_SECTION\n0\n1 0\n2 4 0\n3 5 6 0\nEOF\n");
  for (City i = 0; i < 4; ++i)
    for (City j = 0; j < 4; ++j) {
      CHECK(full(i, j) == upper(i, j));
      CHECK(full(i, j) == lower(i, j));
    }
}

TEST_CASE("tour length is invariant under rotation and reversal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 40;
    const auto inst = testing::random_euc(n, rng);
    auto order = testing::random_order(n, rng);
    const Length base = tour_length(inst, order);
    CHECK(base == testing::cycle_length(inst, order));
    std::ranges::rotate(order, order.begin() + static_cast<long>(static_cast<std::size_t>(trial) % n));
    CHECK(tour_length(inst, order) == base);
    std::ranges::reverse(order);
    CHECK(tour_length(inst, order) == base);
  }
}

TEST_CASE("serialise and reparse preserves distances") {
  std::mt19937_64 rng(3);
  for (auto metric : {Metric::Euc2d, Metric::Geo}) {
    auto pts = testing::random_points(25, rng, 80.0);
    const auto inst = TspInstance::from_coords("rt", metric, pts);
    const auto back = parse_instance(to_tsplib(inst));
    REQUIRE(back.dimension() == inst.dimension());
    CHECK(back.metric() == metric);
    for (City i = 0; i < 25; ++i)
      for (City j = 0; j < 25; ++j) CHECK(back(i, j) == inst(i, j));
  }
}

TEST_CASE("node ids may appear out of order") {
  const auto inst = parse_instance(
      "NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"
      "NODE_COORD_SECTION\n3 0 4\n1 0 0\n2 3 0\nEOF\n");
  CHECK(inst(0, 1) == 3);
  CHECK(inst(0, 2) == 4);
}

TEST_CASE("unknown keywords and display data produce warnings") {
  std::vector<std::string> warnings;
  const auto inst = parse_instance(
      "NAME: w\nTYPE: TSP\nFOO: bar\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
      "EDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n"
      "1 2\n3\nDISPLAY_DATA_SECTION\n1 0 0\n2 1 1\n3 2 2\nEOF\n",
      &warnings);
  CHECK(inst(1, 2) == 3);
  CHECK(warnings.size() >= 2);
}

TEST_CASE("malformed input is rejected") {
  SUBCASE("fewer coordinates than the dimension") {
    const std::string text =
        "NAME: bad\nTYPE: TSP\nDIMENSION: 5\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
        "1 0 0\n2 1 0\n3 1 1\n4 0 1\nEOF\n";
    try {
      parse_instance(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  }
  SUBCASE("non-numeric coordinate") {
    CHECK_THROWS_AS(parse_instance("NAME: b\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\n"
                                   "NODE_COORD_SECTION\n1 0 0\n2 x 0\n3 1 1\nEOF\n"),
                    ParseError);
  }
  SUBCASE("asymmetric problem type") {
    CHECK_THROWS_AS(parse_instance("NAME: b\nTYPE: ATSP\nDIMENSION: 3\n"), ParseError);
  }
  SUBCASE("unsupported weight type") {
    CHECK_THROWS_AS(parse_instance("NAME: b\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: ATT\n"
                                   "NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 1 1\nEOF\n"),
                    ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS(load_instance(kTestDataDir / "does_not_exist.tsp"));
  }
}

TEST_CASE("construction and tour validation errors") {
  CHECK_THROWS_AS(TspInstance::from_coords("two", Metric::Euc2d, {{0, 0}, {1, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TspInstance::from_weights("asym", {{0, 1, 2}, {2, 0, 1}, {2, 1, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TspInstance::from_weights("neg", {{0, -1, 2}, {-1, 0, 1}, {2, 1, 0}}),
                  std::invalid_argument);
  const auto inst = parse_instance(kTriangle);
  CHECK_THROWS_AS(inst.distance(0, 3), std::out_of_range);
  CHECK_THROWS_AS(tour_length(inst, std::vector<City>{0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(tour_length(inst, std::vector<City>{0, 1}), std::invalid_argument);
  CHECK(is_permutation(std::vector<City>{2, 0, 1}, 3));
  CHECK_FALSE(is_permutation(std::vector<City>{2, 0, 3}, 3));
}

#include <gtest/gtest.h>

#include <sstream>

#include "hods/io.hpp"

namespace {

TEST(PointsIo, HexRoundTripIsBitExact) {
  const auto d = hods::interlaced_niederreiter(2, 12, 6);
  for (const auto& p : {hods::net_points(d), hods::propagation_point_set(d, 37)}) {
    std::stringstream ss;
    hods::write_points(ss, p, hods::PointFormat::csv_hex);
    const hods::PointSet back = hods::read_points_hex(ss);
    EXPECT_EQ(back, p);
  }
}

TEST(PointsIo, DecimalHeaderAndRows) {
  hods::PointSet p(2, 2, hods::Provenance::net);
  p.push_back(std::vector<std::uint64_t>{1, 3});
  std::ostringstream os;
  hods::write_points(os, p, hods::PointFormat::csv_decimal);
  EXPECT_EQ(os.str(), "x1,x2\n0.25,0.75\n");
}

TEST(PointsIo, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(hods::read_points_hex(empty), hods::InvalidInput);
  std::istringstream no_prefix("x1_num,x1_w\n5,3\n");
  EXPECT_THROW(hods::read_points_hex(no_prefix), hods::InvalidInput);
  EXPECT_THROW(hods::parse_point_format("xml"), hods::InvalidInput);
}

TEST(MatrixIo, RoundTrip) {
  const auto g = hods::interlaced_niederreiter(2, 6, 3);
  std::stringstream ss;
  hods::write_matrix_set(ss, g);
  const auto back = hods::read_matrix_set(ss);
  EXPECT_EQ(back.matrices, g.matrices);
}

}  // namespace

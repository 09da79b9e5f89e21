// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "qmimo/sysgrid.hpp"
#include "support.hpp"

namespace qmimo {
namespace {

GridParams lte() {
  GridParams p;
  p.samples_per_symbol = 1024;
  p.occupied_subcarriers = 300;
  p.subcarrier_spacing_hz = 15e3;
  return p;
}

TEST(SysGrid, LteDimensions) {
  const SystemGrid g = derive_grid(lte());
  EXPECT_DOUBLE_EQ(g.sample_rate(), 15.36e6);
  EXPECT_DOUBLE_EQ(g.bandwidth(), 4.5e6);
  EXPECT_NEAR(g.osr(), 3.413, 1e-3);
  EXPECT_EQ(g.occupied.size(), 300u);
  EXPECT_EQ(g.guard.front(), 0);
  EXPECT_FALSE(g.is_occupied(0));
}

TEST(SysGrid, TinySets) {
  const SystemGrid g = test::small_grid(4, 2, 1, 1, 1, 1, 1.0);
  EXPECT_EQ(g.occupied, (std::vector<int>{1, 3}));
  EXPECT_EQ(g.guard, (std::vector<int>{0, 2}));
}

TEST(SysGrid, SetsPartitionBins) {
  const SystemGrid g = derive_grid(lte());
  std::set<int> all(g.occupied.begin(), g.occupied.end());
  for (int k : g.guard) EXPECT_TRUE(all.insert(k).second) << k;
  EXPECT_EQ(static_cast<int>(all.size()), g.N);
  for (int k : g.occupied) EXPECT_LE(std::abs(signed_bin(k, g.N)), g.S / 2);
}

TEST(SysGrid, RejectsBadDimensions) {
  auto with = [](auto edit) {
    GridParams p = lte();
    edit(p);
    return p;
  };
  EXPECT_THROW(derive_grid(with([](GridParams& p) { p.occupied_subcarriers = 1024; })), ConfigError);
  EXPECT_THROW(derive_grid(with([](GridParams& p) { p.occupied_subcarriers = 301; })), ConfigError);
  EXPECT_THROW(derive_grid(with([](GridParams& p) { p.antennas = 0; })), ConfigError);
  EXPECT_THROW(derive_grid(with([](GridParams& p) { p.subcarrier_spacing_hz = -1.0; })), ConfigError);
  EXPECT_THROW(derive_grid(with([](GridParams& p) { p.users = 65; })), ConfigError);
}

TEST(SignedBin, Examples) {
  EXPECT_EQ(signed_bin(0, 1024), 0);
  EXPECT_EQ(signed_bin(1023, 1024), -1);
  EXPECT_EQ(signed_bin(512, 1024), -512);
  EXPECT_THROW(signed_bin(1024, 1024), std::out_of_range);
  EXPECT_THROW(signed_bin(-1, 1024), std::out_of_range);
}

TEST(SignedBin, IsBijection) {
  for (int N : {2, 8, 64, 1024}) {
    std::set<int> seen;
    for (int k = 0; k < N; ++k) {
      const int p = signed_bin(k, N);
      EXPECT_GE(p, -N / 2);
      EXPECT_LT(p, N / 2);
      EXPECT_EQ(wrap_bin(p, N), k);
      seen.insert(p);
    }
    EXPECT_EQ(static_cast<int>(seen.size()), N);
  }
}

TEST(SysGrid, AdjacentChannelsAtLteSize) {
  const SystemGrid g = derive_grid(lte());
  const AdjacentChannels adj = adjacent_channels(g);
  ASSERT_EQ(adj.lower.size(), 301u);
  ASSERT_EQ(adj.upper.size(), 301u);
  EXPECT_EQ(adj.lower.front(), 541);
  EXPECT_EQ(adj.lower.back(), 841);
  EXPECT_EQ(adj.upper.front(), 183);
  EXPECT_EQ(adj.upper.back(), 483);
}

TEST(SysGrid, InbandIncludesDc) {
  const SystemGrid g = derive_grid(lte());
  const auto in = inband_with_dc(g);
  EXPECT_EQ(in.size(), 301u);
  EXPECT_NE(std::find(in.begin(), in.end(), 0), in.end());
}

}  // namespace
}  // namespace qmimo

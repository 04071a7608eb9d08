#include <gtest/gtest.h>

#include <set>

#include "potts/partition.hpp"
#include "support.hpp"

using namespace potts;

namespace {
std::string labels(const SetPartition& p) {
  std::string s;
  for (char c : p.labels()) s += static_cast<char>('0' + c);
  return s;
}
}  // namespace

TEST(Partition, Singletons) {
  EXPECT_EQ(labels(singleton_partition({1, 2, 3})), "012");
  EXPECT_EQ(singleton_partition({}).size(), 0u);
  EXPECT_EQ(labels(singleton_partition({7})), "0");
}

TEST(Partition, Join) {
  const auto p = singleton_partition({1, 2, 3});
  const auto j = join_vertices(p, 1, 2);
  EXPECT_EQ(labels(j), "001");
  EXPECT_EQ(join_vertices(j, 1, 2), j);
  EXPECT_EQ(labels(join_vertices(j, 1, 3)), "000");
  EXPECT_EQ(labels(join_vertices(p, 3, 2)), "011");
  EXPECT_THROW(join_vertices(p, 1, 9), InputError);
}

TEST(Partition, Canonical) {
  const auto a = SetPartition::from_blocks({{3}, {1, 2}});
  const auto b = SetPartition::from_blocks({{2, 1}, {3}});
  EXPECT_EQ(a, b);
  EXPECT_EQ(labels(a), "001");
  EXPECT_EQ(to_string(a), "{{1,2},{3}}");
  EXPECT_TRUE(is_restricted_growth(std::string{0, 1, 0, 2}));
  EXPECT_FALSE(is_restricted_growth(std::string{0, 2}));
  EXPECT_FALSE(is_restricted_growth(std::string{1}));
}

TEST(Partition, Delete) {
  auto r = delete_vertex(SetPartition({1, 2}, std::string{0, 1}), 1);
  EXPECT_TRUE(r.was_singleton);
  EXPECT_EQ(r.partition.scope(), std::vector<Vertex>{2});
  EXPECT_EQ(labels(r.partition), "0");

  r = delete_vertex(SetPartition({1, 2}, std::string{0, 0}), 1);
  EXPECT_FALSE(r.was_singleton);
  EXPECT_EQ(labels(r.partition), "0");

  r = delete_vertex(singleton_partition({5}), 5);
  EXPECT_TRUE(r.was_singleton);
  EXPECT_EQ(r.partition.size(), 0u);

  // Deleting relabels so that the result is canonical again.
  r = delete_vertex(SetPartition({1, 2, 3}, std::string{0, 1, 0}), 1);
  EXPECT_EQ(labels(r.partition), "01");
}

TEST(Partition, Insert) {
  const auto p = insert_singleton(SetPartition({2, 4}, std::string{0, 0}), 3);
  EXPECT_EQ(p.scope(), (std::vector<Vertex>{2, 3, 4}));
  EXPECT_EQ(labels(p), "010");
  EXPECT_THROW(insert_singleton(p, 3), InputError);
}

TEST(Partition, LatticeJoin) {
  const auto p = SetPartition::from_blocks({{3, 4}, {5}});
  EXPECT_EQ(lattice_join(p, singleton_partition({3, 4, 5})), p);
  EXPECT_EQ(to_string(lattice_join(p, SetPartition::from_blocks({{3}, {4, 5}}))), "{{3,4,5}}");
  const auto a = SetPartition::from_blocks({{1, 2}, {3, 4}});
  const auto b = SetPartition::from_blocks({{2, 3}});
  EXPECT_EQ(to_string(lattice_join(a, b)), "{{1,2,3,4}}");
  EXPECT_EQ(lattice_join(a, b), lattice_join(b, a));
  // Disjoint scopes just sit side by side.
  EXPECT_EQ(to_string(lattice_join(SetPartition::from_blocks({{1, 2}}), singleton_partition({3}))), "{{1,2},{3}}");
}

TEST(Partition, CountsAgainstEnumeration) {
  EXPECT_EQ(count_states(3, true), 5);
  EXPECT_EQ(count_states(3, false), 5);
  EXPECT_EQ(count_states(5, true), 42);
  EXPECT_EQ(count_states(5, false), 52);
  for (int n = 0; n <= 9; ++n) {
    EXPECT_EQ(catalan(static_cast<unsigned>(n)), testkit::count_noncrossing_partitions(n)) << n;
    EXPECT_EQ(bell(static_cast<unsigned>(n)), testkit::count_all_partitions(n)) << n;
  }
}

TEST(Partition, EnumerationIsCompleteAndCanonical) {
  for (std::size_t n = 0; n <= 7; ++n) {
    std::set<PartitionKey> seen;
    for_each_partition(n, [&](const PartitionKey& k) {
      EXPECT_TRUE(is_restricted_growth(k));
      seen.insert(k);
    });
    EXPECT_EQ(BigInt(seen.size()), bell(static_cast<unsigned>(n)));
  }
}

#include <gtest/gtest.h>

#include <atomic>

#include "chargedrop/energy.hpp"
#include "chargedrop/parallel.hpp"

using namespace chargedrop;

TEST(Parallel, VisitsEveryIndexOnce) {
  set_thread_count(3);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(0, hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  set_thread_count(1);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  const auto g = sphere::SphereGrid::create(8);
  const auto f = sphere::SphereField::from_function(g, [](const sphere::Vec3& x) { return 0.1 * x.x() * x.z(); });
  energy::ModelParams p;
  p.charge = 1.0;
  energy::CapacityDiscretization d;
  d.panels = 512;
  set_thread_count(1);
  const auto a = energy::evaluate(f, 1.0, p, d);
  set_thread_count(4);
  const auto b = energy::evaluate(f, 1.0, p, d);
  set_thread_count(1);
  EXPECT_EQ(a.capacity, b.capacity);
  EXPECT_EQ(a.total_penalized, b.total_penalized);
}

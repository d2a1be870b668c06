#include <gtest/gtest.h>

#include "example_types.hpp"
#include "sessub/sync_checker.hpp"

namespace sessub {
namespace {

using namespace sessub::testing;

CheckResult sync(const std::string& sub, const std::string& sup, SyncMode mode = SyncMode::Tree) {
  return check_sync(build_lts(parse(sub)), build_lts(parse(sup)), mode);
}

TEST(Sync, HospitalClientSubtype) {
  const CheckResult r = sync(kHospitalClient2, kHospitalClient);
  EXPECT_EQ(r.verdict, Verdict::True);
  const SimGraph& g = r.graph;
  ASSERT_EQ(g.nodes().size(), 4u);
  EXPECT_EQ(g.node(0).lhs, 1u);
  EXPECT_EQ(std::get<StateId>(g.node(0).rhs), 1u);
  EXPECT_EQ(g.count_edges(EdgeStyle::Solid), 3u);
  EXPECT_EQ(g.count_edges(EdgeStyle::Dashed), 2u);
  EXPECT_TRUE(g.failure_nodes().empty());
  for (const auto& e : g.edges()) {
    if (e.style == EdgeStyle::Dashed) {
      EXPECT_EQ(e.to, g.root());
      EXPECT_TRUE(g.is_ancestor(e.to, e.from));
    }
  }
  ASSERT_TRUE(g.edges().front().action);
  EXPECT_EQ(to_string(*g.edges().front().action), "!nd");
}

TEST(Sync, RenamedLabelFails) {
  const CheckResult r = sync(kHospitalClient2Bad, kHospitalClient);
  EXPECT_EQ(r.verdict, Verdict::False);
  ASSERT_EQ(r.graph.failure_nodes().size(), 1u);
  const SimNode& bad = r.graph.node(r.graph.failure_nodes().front());
  EXPECT_EQ(bad.reason, FailureReason::InputContravariance);
  EXPECT_EQ(r.failure_node, bad.id);
}

TEST(Sync, SupertypeSendsMore) {
  const CheckResult r = sync(kHospitalClient, kHospitalClient2);
  EXPECT_EQ(r.verdict, Verdict::False);
  EXPECT_EQ(r.failure_node, r.graph.root());
  EXPECT_EQ(r.graph.node(0).reason, FailureReason::OutputCovariance);
}

TEST(Sync, Reflexive) {
  for (const auto& t : {kHospitalServer, kHospitalClient, kHospitalClient3, kSatelliteControl, kSendLoop,
                        std::string("end")}) {
    EXPECT_EQ(sync(t, t).verdict, Verdict::True) << t;
    EXPECT_EQ(sync(t, t, SyncMode::Memo).verdict, Verdict::True) << t;
  }
}

TEST(Sync, FailureReasons) {
  EXPECT_EQ(sync("+{a;end}", "&{a;end}").graph.node(0).reason, FailureReason::PolarityMismatch);
  EXPECT_EQ(sync("&{a;end}", "+{a;end}").graph.node(0).reason, FailureReason::PolarityMismatch);
  EXPECT_EQ(sync("end", "+{a;end}").graph.node(0).reason, FailureReason::OneSidedTermination);
  EXPECT_EQ(sync("+{a;end}", "end").graph.node(0).reason, FailureReason::OneSidedTermination);
  EXPECT_EQ(sync("&{a;end}", "&{a;end, b;end}").graph.node(0).reason, FailureReason::InputContravariance);
}

TEST(Sync, EndEnd) {
  const CheckResult r = sync("end", "end");
  EXPECT_EQ(r.verdict, Verdict::True);
  EXPECT_EQ(r.graph.node(0).kind, NodeKind::Success);
}

TEST(Sync, TreeModeKeepsExploringAfterFailure) {
  // Both branches fail; the tree shows both.
  const CheckResult r = sync("&{a;+{x;end}, b;+{y;end}}", "&{a;end, b;end}");
  EXPECT_EQ(r.verdict, Verdict::False);
  EXPECT_EQ(r.graph.failure_nodes().size(), 2u);
}

TEST(Sync, MemoVisitsEachPairOnce) {
  const CheckResult r = sync(kHospitalClient2, kHospitalClient, SyncMode::Memo);
  EXPECT_EQ(r.verdict, Verdict::True);
  EXPECT_EQ(r.graph.nodes().size(), 2u);
  EXPECT_EQ(r.graph.count_edges(EdgeStyle::Dashed), 0u);
  EXPECT_EQ(r.graph.meta.algorithm, "sync (kozen)");
}

TEST(Sync, ModesAgreeOnExamples) {
  const std::vector<std::pair<std::string, std::string>> pairs{
      {kHospitalClient2, kHospitalClient}, {kHospitalClient2Bad, kHospitalClient},
      {kHospitalClient, kHospitalClient2}, {kHospitalClient3, kHospitalClient},
      {kSatelliteControl2, kSatelliteControl}};
  for (const auto& [a, b] : pairs) {
    EXPECT_EQ(sync(a, b).verdict, sync(a, b, SyncMode::Memo).verdict) << a << " <= " << b;
  }
}

TEST(Sync, Metadata) {
  const CheckResult r = sync(kHospitalClient2, kHospitalClient);
  EXPECT_EQ(r.graph.meta.algorithm, "sync (gayhole)");
  EXPECT_EQ(r.graph.meta.verdict, Verdict::True);
  EXPECT_EQ(r.graph.meta.steps, r.expanded);
  EXPECT_GE(r.graph.meta.elapsed_ms, 0.0);
}

}  // namespace
}  // namespace sessub

#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support.hpp"

namespace pal {
namespace {

using testing::fluent;
using testing::initial;
using testing::num;
using testing::step;
using testing::sym;

class NarrativeTest : public ::testing::Test {
 protected:
  NarrativeTest() : loaded_(testing::load(testing::kBlocksDecls)), engine_(loaded_.program) {}

  const Signature& sig() const { return loaded_.sig(); }

  std::vector<ActionAssignment> steps(std::initializer_list<const char*> list) const {
    std::vector<ActionAssignment> out;
    for (const char* s : list) out.push_back(*s ? step(sig(), s) : ActionAssignment{});
    return out;
  }

  std::string rendered(const PerformOutcome& o) const {
    std::ostringstream os;
    for (const auto& r : o.records) render_record(os, sig(), r);
    return os.str();
  }

  testing::Loaded loaded_;
  WellFoundedSemantics engine_;
};

TEST_F(NarrativeTest, InitiallyBuildsSituationZero) {
  Narrative n;
  EXPECT_FALSE(n.initialized());
  EXPECT_FALSE(n.initialize(initial(sig(), testing::kBlocksInit)));
  ASSERT_TRUE(n.initialized());
  EXPECT_EQ(n.last(), 0u);
  const State& s0 = n.current();
  // No rule is evaluated at situation 0: nothing is pertinent.
  EXPECT_TRUE(s0.pertinent.empty());
  EXPECT_TRUE(s0.actions.empty());
  for (int b = 1; b <= 4; ++b) {
    EXPECT_EQ(s0.values[fluent(sig(), "loc(" + std::to_string(b) + ")")], sym("table"));
    EXPECT_EQ(s0.values[fluent(sig(), "free(" + std::to_string(b) + ")")], sym("true"));
  }
}

TEST_F(NarrativeTest, InitiallyMustAssignEveryFluentOnce) {
  EXPECT_THROW(initial(sig(), "loc(B):=table"), SemanticError);
  EXPECT_THROW(initial(sig(), "loc(B):=table,free(B),not free(1)"), SemanticError);
  EXPECT_THROW(initial(sig(), "loc(B):=7,free(B)"), SemanticError);
  // Repeating the same value is harmless.
  EXPECT_NO_THROW(initial(sig(), "loc(B):=table,free(B),free(1)"));
}

TEST_F(NarrativeTest, PerformIsIncremental) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  auto first = n.perform(engine_, steps({"carry(1):=2"}));
  EXPECT_FALSE(first.failure);
  EXPECT_EQ(rendered(first), "1)\ncarry(1):=2\nloc(1):=2\nfree(2):=false\n");
  auto more = n.perform(engine_, steps({"carry(1):=table", "carry(2):=3", "carry(1):=2"}));
  EXPECT_FALSE(more.failure);
  EXPECT_EQ(rendered(more),
            "2)\ncarry(1):=table\nloc(1):=table\nfree(2):=true\n"
            "3)\ncarry(2):=3\nloc(2):=3\nfree(3):=false\n"
            "4)\ncarry(1):=2\nloc(1):=2\nfree(2):=false\n");
  EXPECT_EQ(n.last(), 4u);
  EXPECT_EQ(n.state_at(2).values[fluent(sig(), "loc(1)")], sym("table"));
}

TEST_F(NarrativeTest, ConcurrentAndEmptySteps) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  auto o = n.perform(engine_, steps({"carry(1):=2,carry(3):=4", "carry(1):=3", ""}));
  EXPECT_FALSE(o.failure);
  EXPECT_EQ(rendered(o),
            "1)\ncarry(1):=2\ncarry(3):=4\nloc(1):=2\nloc(3):=4\nfree(2):=false\nfree(4):=false\n"
            "2)\ncarry(1):=3\nloc(1):=3\nfree(2):=true\nfree(3):=false\n"
            "3)\n");
  // The empty step changes nothing.
  EXPECT_EQ(n.state_at(3).values, n.state_at(2).values);
}

TEST_F(NarrativeTest, ResumeReplacesTheNarrative) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  n.perform(engine_, steps({"carry(1):=2", "carry(3):=4"}));
  EXPECT_EQ(n.last(), 2u);
  EXPECT_TRUE(n.initialize(initial(sig(), testing::kBlocksInit)));
  EXPECT_EQ(n.resumed(), 1);
  EXPECT_EQ(n.last(), 0u);
  EXPECT_THROW(n.state_at(1), SemanticError);
  EXPECT_NO_THROW(n.state_at(0));
}

TEST_F(NarrativeTest, PerformStopsAtTheFirstFailure) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  // Step 2 carries block 3 onto block 2, which block 1 now occupies.
  auto o = n.perform(engine_, steps({"carry(1):=2", "carry(3):=2", "carry(4):=1"}));
  ASSERT_TRUE(o.failure);
  EXPECT_EQ(o.failure->situation, 2u);
  EXPECT_TRUE(std::holds_alternative<RejectedConstraint>(o.failure->result));
  EXPECT_EQ(o.records.size(), 1u);
  EXPECT_EQ(n.last(), 1u);
}

TEST_F(NarrativeTest, CarryingABlockThatIsNotFreeIsRejected) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  n.perform(engine_, steps({"carry(1):=2"}));
  auto o = n.perform(engine_, steps({"carry(2):=3"}));
  ASSERT_TRUE(o.failure);
  const auto& rc = std::get<RejectedConstraint>(o.failure->result);
  EXPECT_EQ(to_string(loaded_.program->rules[rc.rule], sig()), "false :- pert(carry(2)), prev(free(2))=false.");
}

TEST_F(NarrativeTest, ReplayIsDeterministic) {
  const auto seq = steps({"carry(1):=2,carry(3):=4", "carry(1):=3", "", "carry(2):=1"});
  Narrative a;
  Narrative b;
  a.initialize(initial(sig(), testing::kBlocksInit));
  b.initialize(initial(sig(), testing::kBlocksInit));
  const auto oa = a.perform(engine_, seq);
  const auto ob = b.perform(engine_, seq);
  EXPECT_EQ(rendered(oa), rendered(ob));
  ASSERT_EQ(a.last(), b.last());
  for (std::size_t k = 0; k <= a.last(); ++k) EXPECT_EQ(a.state_at(k), b.state_at(k));
}

TEST_F(NarrativeTest, DeadlineStopsLongSequences) {
  Narrative n;
  n.initialize(initial(sig(), testing::kBlocksInit));
  const Deadline expired(std::chrono::milliseconds(0));
  std::this_thread::sleep_for(std::chrono::milliseconds(2));
  EXPECT_THROW(n.perform(engine_, steps({"carry(1):=2"}), expired), TimeoutError);
}

TEST(NarrativeValues, IntegerFluents) {
  const auto loaded = testing::load(testing::corpus("counter"));
  const Signature& sig = loaded.sig();
  WellFoundedSemantics engine(loaded.program);
  Narrative n;
  n.initialize(initial(sig, "c(N) := 0"));
  auto o = n.perform(engine, {step(sig, "push")});
  ASSERT_FALSE(o.failure);
  EXPECT_EQ(n.current().pertinent.size(), 1000u);
  EXPECT_EQ(n.current().values[fluent(sig, "c(1000)")], num(1));
}

}  // namespace
}  // namespace pal

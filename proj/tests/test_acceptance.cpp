#include <gtest/gtest.h>

#include <cmath>

#include "holo/acceptance.hpp"
#include "holo/pathsynth.hpp"

using namespace holo;

TEST(Acceptance, RegistryIsComplete) {
  const auto& infos = acceptance_criteria();
  ASSERT_EQ(infos.size(), 10u);
  for (std::size_t k = 0; k < infos.size(); ++k) EXPECT_EQ(infos[k].number, static_cast<int>(k + 1));
  EXPECT_THROW(run_criterion("no-such-criterion", {}), std::invalid_argument);
}

TEST(Acceptance, AreaLawPasses) {
  const auto r = run_criterion("2", {});
  EXPECT_TRUE(r.passed) << r.summary;
  EXPECT_EQ(r.id, "area-law");
  EXPECT_NE(format_line(r).find("[PASS]"), std::string::npos);
}

TEST(Acceptance, HolonomyDetectsTamperedEta) {
  AcceptanceOptions honest;
  EXPECT_TRUE(run_criterion("holonomy", honest).passed);
  AcceptanceOptions tampered;
  tampered.eta = [](double chi) { return 1.01 * eta_of_chi(chi); };
  const auto r = run_criterion("holonomy", tampered);
  EXPECT_FALSE(r.passed) << r.summary;
  EXPECT_NE(format_line(r).find("[FAIL]"), std::string::npos);
}

// The optimizer headers must not expose anything from the experiment side.
// This translation unit sees only them; the sentinels below would clash
// with any oracle, state or behavior type that leaked in.

#include "bellopt/baselines.hpp"
#include "bellopt/snm.hpp"

#include <gtest/gtest.h>

namespace bellopt {
struct BehaviorTable {
  int sentinel = 1;
};
namespace oracle {
struct BellOracle {
  int sentinel = 2;
};
struct OracleConfig {
  int sentinel = 3;
};
int apply_response(int) { return 4; }
}  // namespace oracle
namespace quantum {
struct DensityMatrix {
  int sentinel = 5;
};
}  // namespace quantum
namespace bell {
struct Chsh {
  int sentinel = 6;
};
}  // namespace bell
}  // namespace bellopt

#ifdef EIGEN_WORLD_VERSION
#error "optimizer headers pull in the linear-algebra backend of the simulator"
#endif

TEST(Opacity, OptimizerSeesOnlyACostCallback) {
  EXPECT_EQ(bellopt::BehaviorTable{}.sentinel, 1);
  EXPECT_EQ(bellopt::oracle::BellOracle{}.sentinel, 2);
  EXPECT_EQ(bellopt::quantum::DensityMatrix{}.sentinel, 5);
  EXPECT_EQ(bellopt::bell::Chsh{}.sentinel, 6);
  // The only channel into the optimizer: knobs in, scalar out.
  static_assert(std::is_same_v<bellopt::snm::CostFunction,
                               std::function<double(std::span<const double>)>>);
  const auto t = bellopt::snm::minimize([](std::span<const double> x) { return x[0] * x[0]; },
                                        bellopt::snm::Box::uniform(1, -1.0, 1.0), {});
  EXPECT_LT(t.best_cost, 1e-12);
}

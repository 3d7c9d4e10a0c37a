#ifndef GSNCOP_REPLICATION_HPP
#define GSNCOP_REPLICATION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gsncop/policy.hpp"
#include "gsncop/sim_designs.hpp"

namespace gsncop {

/// Per-parameter summary over replications: Mean, Bias, SD (replication
/// standard deviation), SE (average reported standard error), RMSE.
struct SummaryRow {
    std::string name;
    double truth = 0.0;
    double mean = 0.0;
    double bias = 0.0;
    double sd = 0.0;
    double se = 0.0;
    double rmse = 0.0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    int replications = 0;
    int sample_size = 0;
    int failures = 0;  ///< replications dropped for non-finite fits
};

/// Replication studies.  Replication r uses RandomStream(seed, r) so results
/// are independent of the execution order; `threads` only controls wall time.
SummaryTable replicate_mgsn(const GsnParams& truth, int m, int reps,
                            std::uint64_t seed, const SeriesPolicy& policy,
                            int threads);
SummaryTable replicate_gsn_copula(const GsnParams& truth, int m, int reps,
                                  std::uint64_t seed, const SeriesPolicy& policy,
                                  int threads);
SummaryTable replicate_gamma_glm(const GammaGlmDesign& design, int m, int reps,
                                 std::uint64_t seed, const SeriesPolicy& policy,
                                 int threads);
SummaryTable replicate_ordinal(const OrdinalProbitDesign& design, int m,
                               int reps, std::uint64_t seed,
                               const SeriesPolicy& policy, int threads);

/// Index-deterministic parallel loop used by the replication studies.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

} // namespace gsncop

#endif
